#pragma once

#include <string>
#include <vector>

#include "core/graph.hpp"
#include "core/optimize.hpp"

namespace netres {

/// {"n", "edges": [[i, j], ...] (1-based), "weights", optional "vertex_ids"
/// (1-based ids in the source graph)}.
[[nodiscard]] std::string graph_to_json(const WeightedGraph& g, const std::vector<int>& vertex_ids = {});

/// Decision variables, objective trajectory, residuals and start log.
[[nodiscard]] std::string to_json(const OptResult& r, const std::vector<Edge>& edges = {});

}  // namespace netres
