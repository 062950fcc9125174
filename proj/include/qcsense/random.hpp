#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace qcsense {

/// Seeded generator whose output is identical on every conforming platform.
///
/// The engine is std::mt19937_64 (its output sequence is fixed by the
/// standard); all derived variates are computed here rather than through the
/// implementation-defined std:: distributions.
class Rng {
public:
    static constexpr std::string_view algorithm = "mt19937_64+qcsense-variates/1";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Unbiased integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);
    /// Standard normal (Marsaglia polar method).
    double normal();

    /// k distinct indices from [0, n), drawn uniformly without replacement,
    /// returned in draw order.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

private:
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 mixing of (seed, stream): independent seeds for replicate or
/// partition `stream` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace qcsense
