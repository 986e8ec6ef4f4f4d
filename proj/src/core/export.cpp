#include "core/export.hpp"

#include <json.hpp>

namespace netres {

namespace {

using nlohmann::json;

json edge_array(const std::vector<Edge>& edges) {
    json a = json::array();
    for (const auto& e : edges) {
        a.push_back({e.u + 1, e.v + 1});
    }
    return a;
}

json vector_array(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// NaN is not representable in JSON.
json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

std::string graph_to_json(const WeightedGraph& g, const std::vector<int>& vertex_ids) {
    json j;
    j["n"] = g.vertex_count();
    j["edges"] = edge_array(g.edges());
    j["weights"] = vector_array(g.weights());
    if (!vertex_ids.empty()) {
        json ids = json::array();
        for (int v : vertex_ids) {
            ids.push_back(v + 1);
        }
        j["vertex_ids"] = std::move(ids);
    }
    return j.dump(2);
}

std::string to_json(const OptResult& r, const std::vector<Edge>& edges) {
    json j;
    j["problem"] = r.ago ? "ago" : "ngo";
    j["w_star"] = vector_array(r.w_star);
    if (!edges.empty()) {
        j["edges"] = edge_array(edges);
    }
    if (r.ago) {
        j["c_star"] = r.c_star;
        j["J_main"] = r.j_main;
    }
    j["J0"] = r.j0;
    j["J_star"] = r.j_star;
    j["percent_decrease"] = r.percent_decrease;
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["stop_reason"] = r.stop_reason;
    j["gradient"] = r.gradient;
    j["trajectory"] = r.iterates;
    j["constraint_residuals"] = {
        {"equality", r.residuals.equality}, {"bound", r.residuals.bound}, {"budget", r.residuals.budget}};
    json starts = json::array();
    for (const auto& s : r.starts) {
        starts.push_back({{"J0", number_or_null(s.j0)},
                          {"J_star", number_or_null(s.j_star)},
                          {"iterations", s.iterations},
                          {"converged", s.converged},
                          {"stop_reason", s.stop_reason}});
    }
    j["starts"] = std::move(starts);
    return j.dump(2);
}

}  // namespace netres
