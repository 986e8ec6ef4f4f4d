#pragma once

#include <string>
#include <vector>

#include "core/graph.hpp"
#include "core/types.hpp"

namespace netres {

/// Ascending eigenvalues; column k of `vectors` pairs with values[k].
struct EigenDecomposition {
    Vector values;
    Matrix vectors;
    int sweeps = 0;
};

struct JacobiOptions {
    double relative_tolerance = 1e-12;
    int max_sweeps = 100;
    bool compute_vectors = true;
};

/// Cyclic Jacobi eigensolver for dense symmetric matrices. Converged when
/// the off-diagonal Frobenius norm drops to tolerance * ||M||_F. Throws
/// Errc::invalid_argument on asymmetric input and Errc::not_converged when
/// the sweep cap is hit.
[[nodiscard]] EigenDecomposition sym_eig(const Matrix& m, const JacobiOptions& opts = {});

/// omega_k = sqrt(lambda_k(L) + epsilon), ascending.
[[nodiscard]] Vector natural_frequencies(const WeightedGraph& g, const DynamicsParams& p);
/// Same, for a raw topology/weight pair (aux graphs may carry zero weights).
[[nodiscard]] Vector natural_frequencies(int n, std::span<const Edge> edges, const Vector& w,
                                         double epsilon);

struct SpectrumReport {
    std::vector<double> bin_edges;  // bin_count + 1 entries
    std::vector<int> counts;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double variance = 0.0;  // population variance
};

/// Equal-width bins over [min, max], last bin right-inclusive.
[[nodiscard]] SpectrumReport spectrum_histogram(const Vector& values, int bin_count);
/// CSV with header bin_left,bin_right,count.
[[nodiscard]] std::string to_csv(const SpectrumReport& report);

}  // namespace netres
