#include "core/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace netres {

void DynamicsParams::validate() const {
    require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon must be > 0");
    require(std::isfinite(gamma) && gamma > 0.0, "gamma must be > 0");
}

WeightedGraph WeightedGraph::from_edges(int n, std::vector<Edge> edges, std::vector<double> weights) {
    require(n >= 1, "graph needs at least one vertex");
    require(edges.size() == weights.size(), "edge and weight counts differ");

    std::vector<std::size_t> order(edges.size());
    for (std::size_t l = 0; l < edges.size(); ++l) {
        Edge& e = edges[l];
        require(e.u >= 0 && e.u < n && e.v >= 0 && e.v < n,
                "edge (" + std::to_string(e.u + 1) + "," + std::to_string(e.v + 1) + ") out of range");
        require(e.u != e.v, "self-loop at vertex " + std::to_string(e.u + 1));
        require(std::isfinite(weights[l]) && weights[l] > 0.0, "edge weights must be > 0");
        if (e.u > e.v) {
            std::swap(e.u, e.v);
        }
        order[l] = l;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return edges[a] < edges[b]; });

    WeightedGraph g;
    g.n_ = n;
    g.edges_.reserve(edges.size());
    g.weights_.resize(static_cast<Eigen::Index>(edges.size()));
    for (std::size_t k = 0; k < order.size(); ++k) {
        const Edge& e = edges[order[k]];
        if (!g.edges_.empty() && g.edges_.back() == e) {
            fail(Errc::invalid_argument,
                 "duplicate edge (" + std::to_string(e.u + 1) + "," + std::to_string(e.v + 1) + ")");
        }
        g.edges_.push_back(e);
        g.weights_[static_cast<Eigen::Index>(k)] = weights[order[k]];
    }
    return g;
}

WeightedGraph WeightedGraph::with_weights(const Vector& w) const {
    require(w.size() == edge_count(), "weight vector length must equal the edge count");
    for (Eigen::Index l = 0; l < w.size(); ++l) {
        require(std::isfinite(w[l]) && w[l] > 0.0, "edge weights must be > 0");
    }
    WeightedGraph g = *this;
    g.weights_ = w;
    return g;
}

bool WeightedGraph::is_connected() const {
    const auto dist = bfs_distances(*this, 0);
    return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

bool WeightedGraph::is_complete() const {
    return static_cast<long long>(edges_.size()) == static_cast<long long>(n_) * (n_ - 1) / 2;
}

Matrix laplacian(int n, std::span<const Edge> edges, const Vector& weights) {
    require(static_cast<Eigen::Index>(edges.size()) == weights.size(), "edge and weight counts differ");
    Matrix lap = Matrix::Zero(n, n);
    for (std::size_t l = 0; l < edges.size(); ++l) {
        const auto [u, v] = edges[l];
        const double w = weights[static_cast<Eigen::Index>(l)];
        lap(u, v) -= w;
        lap(v, u) -= w;
        lap(u, u) += w;
        lap(v, v) += w;
    }
    return lap;
}

Matrix laplacian(const WeightedGraph& g) { return laplacian(g.vertex_count(), g.edges(), g.weights()); }

Matrix stiffness(const WeightedGraph& g, const DynamicsParams& p) {
    require(p.epsilon > 0.0, "epsilon must be > 0");
    Matrix k = laplacian(g);
    k.diagonal().array() += p.epsilon;
    return k;
}

std::vector<Edge> complete_edges(int n) {
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(std::max(n - 1, 0)) / 2);
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            edges.push_back({u, v});
        }
    }
    return edges;
}

namespace {

std::vector<double> sample_weights(std::size_t count, double wp, Rng& rng) {
    require(wp >= 0.0 && wp < 1.0, "weight perturbation must lie in [0, 1)");
    std::vector<double> w(count);
    for (auto& x : w) {
        x = (1.0 - wp) + 2.0 * wp * rng.uniform();
    }
    return w;
}

}  // namespace

WeightedGraph gen_rcg(int n, double weight_perturbation, std::uint64_t seed) {
    require(n >= 2, "random complete graph needs n >= 2");
    Rng rng(seed, 0x52434721);
    auto edges = complete_edges(n);
    auto w = sample_weights(edges.size(), weight_perturbation, rng);
    return WeightedGraph::from_edges(n, std::move(edges), std::move(w));
}

WeightedGraph gen_rig(int n, int edge_count, double weight_perturbation, std::uint64_t seed) {
    require(n >= 2, "random incomplete graph needs n >= 2");
    const long long max_edges = static_cast<long long>(n) * (n - 1) / 2;
    require(edge_count >= 0 && edge_count <= max_edges,
            "edge count must lie in [0, n(n-1)/2] = [0, " + std::to_string(max_edges) + "]");
    Rng rng(seed, 0x52494721);
    auto pairs = complete_edges(n);
    for (std::size_t i = pairs.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(pairs[i - 1], pairs[j]);
    }
    pairs.resize(static_cast<std::size_t>(edge_count));
    auto w = sample_weights(pairs.size(), weight_perturbation, rng);
    return WeightedGraph::from_edges(n, std::move(pairs), std::move(w));
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') {
            ++j;
        }
        if (j > i) {
            out.push_back(s.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    fail(Errc::parse_error, "line " + std::to_string(line) + ": " + what);
}

long long parse_int(std::string_view tok, std::size_t line) {
    long long value = 0;
    const auto* end = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(tok.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        parse_fail(line, "expected an integer vertex id, got '" + std::string(tok) + "'");
    }
    return value;
}

double parse_double(std::string_view tok, std::size_t line) {
    // strtod accepts forms from_chars rejects on older toolchains (e.g. "+1").
    const std::string s(tok);
    char* end = nullptr;
    const double value = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty()) {
        parse_fail(line, "expected a weight, got '" + s + "'");
    }
    return value;
}

}  // namespace

WeightedGraph load_edge_list(std::string_view text) {
    std::vector<Edge> edges;
    std::vector<double> weights;
    long long declared_n = -1;
    long long max_id = 0;
    std::vector<std::size_t> line_of;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const auto line = trim(raw);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            const auto toks = split_ws(line.substr(1));
            if (toks.size() == 2 && toks[0] == "vertices") {
                declared_n = parse_int(toks[1], line_no);
                if (declared_n < 1) {
                    parse_fail(line_no, "vertex count must be >= 1");
                }
            }
            continue;
        }
        const auto toks = split_ws(line);
        if (toks.size() < 2 || toks.size() > 3) {
            parse_fail(line_no, "expected 'i j [w]'");
        }
        const long long i = parse_int(toks[0], line_no);
        const long long j = parse_int(toks[1], line_no);
        const double w = toks.size() == 3 ? parse_double(toks[2], line_no) : 1.0;
        if (i < 1 || j < 1 || i > (1LL << 30) || j > (1LL << 30)) {
            parse_fail(line_no, "vertex ids are 1-based");
        }
        if (i == j) {
            parse_fail(line_no, "self-loop at vertex " + std::to_string(i));
        }
        if (!(std::isfinite(w) && w > 0.0)) {
            parse_fail(line_no, "edge weight must be > 0");
        }
        max_id = std::max({max_id, i, j});
        edges.push_back({static_cast<int>(std::min(i, j) - 1), static_cast<int>(std::max(i, j) - 1)});
        weights.push_back(w);
        line_of.push_back(line_no);
    }

    if (declared_n >= 0 && max_id > declared_n) {
        fail(Errc::parse_error, "vertex id " + std::to_string(max_id) + " exceeds declared count " +
                                    std::to_string(declared_n));
    }
    const long long n = declared_n >= 0 ? declared_n : max_id;
    if (n < 1) {
        fail(Errc::parse_error, "edge list declares no vertices");
    }

    // Report duplicates with the offending line rather than the generic
    // canonicalization error.
    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return edges[a] < edges[b]; });
    for (std::size_t k = 1; k < order.size(); ++k) {
        if (edges[order[k]] == edges[order[k - 1]]) {
            const Edge& e = edges[order[k]];
            parse_fail(line_of[order[k]], "duplicate edge (" + std::to_string(e.u + 1) + "," +
                                              std::to_string(e.v + 1) + ")");
        }
    }
    return WeightedGraph::from_edges(static_cast<int>(n), std::move(edges), std::move(weights));
}

WeightedGraph load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        fail(Errc::io, "cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_edge_list(ss.str());
}

std::string to_edge_list(const WeightedGraph& g) {
    std::string out = "# vertices " + std::to_string(g.vertex_count()) + "\n";
    char buf[64];
    for (int l = 0; l < g.edge_count(); ++l) {
        const auto& e = g.edges()[static_cast<std::size_t>(l)];
        std::snprintf(buf, sizeof buf, "%d %d %.17g\n", e.u + 1, e.v + 1, g.weights()[l]);
        out += buf;
    }
    return out;
}

std::vector<int> bfs_distances(const WeightedGraph& g, int source) {
    const int n = g.vertex_count();
    require(source >= 0 && source < n, "vertex out of range");
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (const auto& e : g.edges()) {
        adj[static_cast<std::size_t>(e.u)].push_back(e.v);
        adj[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    std::queue<int> q;
    dist[static_cast<std::size_t>(source)] = 0;
    q.push(source);
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int v : adj[static_cast<std::size_t>(u)]) {
            if (dist[static_cast<std::size_t>(v)] < 0) {
                dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                q.push(v);
            }
        }
    }
    return dist;
}

EgoGraph ego_subgraph(const WeightedGraph& g, int center, int radius) {
    require(center >= 0 && center < g.vertex_count(), "ego center out of range");
    require(radius >= 0, "ego radius must be >= 0");
    const auto dist = bfs_distances(g, center);

    EgoGraph ego;
    ego.old_to_new.assign(dist.size(), -1);
    for (std::size_t v = 0; v < dist.size(); ++v) {
        if (dist[v] >= 0 && dist[v] <= radius) {
            ego.old_to_new[v] = static_cast<int>(ego.new_to_old.size());
            ego.new_to_old.push_back(static_cast<int>(v));
        }
    }
    std::vector<Edge> edges;
    std::vector<double> w;
    for (int l = 0; l < g.edge_count(); ++l) {
        const auto& e = g.edges()[static_cast<std::size_t>(l)];
        const int a = ego.old_to_new[static_cast<std::size_t>(e.u)];
        const int b = ego.old_to_new[static_cast<std::size_t>(e.v)];
        if (a >= 0 && b >= 0) {
            edges.push_back({a, b});
            w.push_back(g.weights()[l]);
        }
    }
    ego.graph = WeightedGraph::from_edges(static_cast<int>(ego.new_to_old.size()), std::move(edges), std::move(w));
    return ego;
}

}  // namespace netres
