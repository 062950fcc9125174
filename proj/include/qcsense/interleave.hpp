#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>

#include "qcsense/dowker.hpp"
#include "qcsense/ingest.hpp"

namespace qcsense {

inline constexpr std::size_t kMaxInterleaveSensors = 4;

/// Smallest grid shift eps with Dow(A)(t) in Dow(B)(t + eps) and
/// Dow(B)(t) in Dow(A)(t + eps) for every t in [0,1]^m (shifted grades
/// clamped to 1). The defining infimum lies in (numerator - 1, numerator] / denominator.
struct InterleaveResult {
    double distance = 0.0;
    long long numerator = 0;
    long long denominator = 1;  ///< lcm(n_A, n_B)
    std::size_t m = 0;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    int skeleton = 0;
    /// Binding constraint: simplex and generator column (in the side named by
    /// `from_a`) that forces the reported shift. Empty when distance is 0.
    Simplex witness_simplex = 0;
    std::size_t witness_column = 0;
    bool from_a = true;
    std::size_t checks = 0;  ///< (simplex, generator) pairs verified
};

/// `skeleton` bounds the simplex dimension checked (negative = m - 1).
/// Throws std::invalid_argument on a sensor-count mismatch or m > 4.
InterleaveResult interleaving_distance(const OrderTable& a, const OrderTable& b, int skeleton = -1);

}  // namespace qcsense
