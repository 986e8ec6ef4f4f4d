#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/types.hpp"

namespace netres {

/// Undirected edge between 0-based vertices, stored with u < v.
struct Edge {
    int u = 0;
    int v = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Stiffness offset and damping multiplier of the second-order dynamics
/// x'' + 2*gamma*K x' + K x = f e^{i nu t} with K = L + epsilon*I.
struct DynamicsParams {
    double epsilon = 10.0;
    double gamma = 1e-6;

    void validate() const;
};

/// Weighted undirected graph with a canonical edge order.
///
/// Edges are kept lexicographically sorted on (u, v); the weight vector
/// follows that order everywhere (objectives, gradients, projections).
/// Vertices are 0-based in memory and 1-based in every text format.
class WeightedGraph {
public:
    /// Single isolated vertex.
    WeightedGraph() : n_(1) {}

    /// Validates and canonicalizes. Edge endpoints may be given in either
    /// order; self-loops, duplicates, out-of-range ids and non-positive
    /// weights are rejected.
    static WeightedGraph from_edges(int n, std::vector<Edge> edges, std::vector<double> weights);

    [[nodiscard]] int vertex_count() const noexcept { return n_; }
    [[nodiscard]] int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
    [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
    [[nodiscard]] const Vector& weights() const noexcept { return weights_; }
    [[nodiscard]] double total_weight() const { return weights_.sum(); }

    /// Same topology, new weights (length m, all > 0).
    [[nodiscard]] WeightedGraph with_weights(const Vector& w) const;

    [[nodiscard]] bool is_connected() const;
    [[nodiscard]] bool is_complete() const;

private:
    int n_;
    std::vector<Edge> edges_;
    Vector weights_;
};

/// Laplacian of a topology under a nonnegative weight vector. Used directly
/// for auxiliary graphs whose weights may sit at zero.
[[nodiscard]] Matrix laplacian(int n, std::span<const Edge> edges, const Vector& weights);
[[nodiscard]] Matrix laplacian(const WeightedGraph& g);
/// K = L + epsilon*I.
[[nodiscard]] Matrix stiffness(const WeightedGraph& g, const DynamicsParams& p);

/// All n(n-1)/2 pairs in canonical order.
[[nodiscard]] std::vector<Edge> complete_edges(int n);

/// Random complete graph; weights uniform on [1 - wp, 1 + wp].
[[nodiscard]] WeightedGraph gen_rcg(int n, double weight_perturbation, std::uint64_t seed);
/// Random incomplete graph with exactly edge_count distinct edges chosen by
/// shuffling all candidate pairs. Connectivity is not guaranteed.
[[nodiscard]] WeightedGraph gen_rig(int n, int edge_count, double weight_perturbation,
                                    std::uint64_t seed);

/// Parses "i j [w]" lines with 1-based ids. '#' starts a comment line; the
/// comment "# vertices N" fixes the vertex count (otherwise the largest id).
[[nodiscard]] WeightedGraph load_edge_list(std::string_view text);
[[nodiscard]] WeightedGraph load_edge_list_file(const std::string& path);
/// Inverse of load_edge_list; weights printed with 17 significant digits.
[[nodiscard]] std::string to_edge_list(const WeightedGraph& g);

struct EgoGraph {
    WeightedGraph graph;
    /// new_to_old[k] is the original 0-based id of new vertex k.
    std::vector<int> new_to_old;
    /// old_to_new[v] is the new id of original vertex v, or -1.
    std::vector<int> old_to_new;
};

/// Induced subgraph on every vertex within `radius` hops of `center`
/// (0-based). Vertices keep their relative order.
[[nodiscard]] EgoGraph ego_subgraph(const WeightedGraph& g, int center, int radius);

/// Hop distance from `source`; unreachable vertices get -1.
[[nodiscard]] std::vector<int> bfs_distances(const WeightedGraph& g, int source);

}  // namespace netres
