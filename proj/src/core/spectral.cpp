#include "core/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/error.hpp"

namespace netres {

namespace {

double off_diagonal_norm2(const Matrix& a) {
    double s = 0.0;
    const auto n = a.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < j; ++i) {
            s += 2.0 * a(i, j) * a(i, j);
        }
    }
    return s;
}

}  // namespace

EigenDecomposition sym_eig(const Matrix& m, const JacobiOptions& opts) {
    require(m.rows() == m.cols(), "sym_eig needs a square matrix");
    const auto n = m.rows();
    require(m.allFinite(), "sym_eig input has non-finite entries");
    const double scale = m.cwiseAbs().maxCoeff();
    if (n > 0 && scale > 0.0) {
        const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
        require(asym <= 1e-10 * scale, "sym_eig input is not symmetric");
    }

    Matrix a = 0.5 * (m + m.transpose());
    Matrix v = opts.compute_vectors ? Matrix::Identity(n, n) : Matrix();
    const double target2 = std::pow(opts.relative_tolerance * a.norm(), 2);

    int sweep = 0;
    for (; sweep < opts.max_sweeps; ++sweep) {
        if (off_diagonal_norm2(a) <= target2) {
            break;
        }
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                const double app = a(p, p);
                const double aqq = a(q, q);
                // Skip rotations that can no longer change the diagonal.
                if (std::abs(apq) < 1e-18 * (std::abs(app) + std::abs(aqq)) && sweep > 3) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (Eigen::Index k = 0; k < n; ++k) {
                    if (k == p || k == q) {
                        continue;
                    }
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    const double nkp = c * akp - s * akq;
                    const double nkq = s * akp + c * akq;
                    a(k, p) = nkp;
                    a(p, k) = nkp;
                    a(k, q) = nkq;
                    a(q, k) = nkq;
                }
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = a(q, p) = 0.0;

                if (opts.compute_vectors) {
                    auto vp = v.col(p);
                    auto vq = v.col(q);
                    for (Eigen::Index k = 0; k < n; ++k) {
                        const double x = vp[k];
                        const double y = vq[k];
                        vp[k] = c * x - s * y;
                        vq[k] = s * x + c * y;
                    }
                }
            }
        }
    }
    if (sweep == opts.max_sweeps && off_diagonal_norm2(a) > target2) {
        fail(Errc::not_converged, "Jacobi eigensolver hit the sweep cap of " + std::to_string(opts.max_sweeps));
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) < a(j, j); });

    EigenDecomposition out;
    out.sweeps = sweep;
    out.values.resize(n);
    if (opts.compute_vectors) {
        out.vectors.resize(n, n);
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto src = order[static_cast<std::size_t>(k)];
        out.values[k] = a(src, src);
        if (opts.compute_vectors) {
            out.vectors.col(k) = v.col(src);
        }
    }
    return out;
}

Vector natural_frequencies(int n, std::span<const Edge> edges, const Vector& w, double epsilon) {
    require(epsilon > 0.0, "epsilon must be > 0");
    JacobiOptions opts;
    opts.compute_vectors = false;
    const auto eig = sym_eig(laplacian(n, edges, w), opts);
    Vector omega(n);
    for (int k = 0; k < n; ++k) {
        const double x = eig.values[k] + epsilon;
        if (!(x > 0.0)) {
            fail(Errc::numerical, "stiffness eigenvalue is not positive");
        }
        omega[k] = std::sqrt(x);
    }
    return omega;
}

Vector natural_frequencies(const WeightedGraph& g, const DynamicsParams& p) {
    return natural_frequencies(g.vertex_count(), g.edges(), g.weights(), p.epsilon);
}

SpectrumReport spectrum_histogram(const Vector& values, int bin_count) {
    require(values.size() > 0, "spectrum_histogram needs at least one value");
    require(bin_count >= 1, "bin_count must be >= 1");

    SpectrumReport r;
    r.min = values.minCoeff();
    r.max = values.maxCoeff();
    r.mean = values.mean();
    r.variance = (values.array() - r.mean).square().mean();

    double lo = r.min;
    double hi = r.max;
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / bin_count;
    r.bin_edges.resize(static_cast<std::size_t>(bin_count) + 1);
    for (int b = 0; b <= bin_count; ++b) {
        r.bin_edges[static_cast<std::size_t>(b)] = b == bin_count ? hi : lo + b * width;
    }
    r.counts.assign(static_cast<std::size_t>(bin_count), 0);
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        auto b = static_cast<int>(std::floor((values[i] - lo) / width));
        b = std::clamp(b, 0, bin_count - 1);
        ++r.counts[static_cast<std::size_t>(b)];
    }
    return r;
}

std::string to_csv(const SpectrumReport& report) {
    std::string out = "bin_left,bin_right,count\n";
    char buf[128];
    for (std::size_t b = 0; b < report.counts.size(); ++b) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d\n", report.bin_edges[b], report.bin_edges[b + 1],
                      report.counts[b]);
        out += buf;
    }
    return out;
}

}  // namespace netres
