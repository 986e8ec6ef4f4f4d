#pragma once

#include <cstdint>

namespace netres {

/// Counter-based generator: the i-th output of a stream is a SplitMix64
/// finalizer applied to key + i * golden. Streams derived with split() are
/// independent, which lets Monte Carlo batches run in any order and still
/// reduce to the same bits.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    /// Independent child stream keyed on (this stream, index).
    [[nodiscard]] Rng split(std::uint64_t index) const;

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on the open interval (0, 1).
    double uniform_open();
    /// Standard normal via Box-Muller; the second variate is cached.
    double normal();
    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound);

    [[nodiscard]] std::uint64_t key() const noexcept { return key_; }
    [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace netres
