#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcsense/ingest.hpp"
#include "qcsense/persistence.hpp"

namespace qcsense {

/// Maximal persistence lengths L_0..L_{d_up} of a data matrix, with the
/// per-column l_max records they are taken over.
struct LkProfile {
    std::size_t m = 0;
    std::size_t n = 0;
    int d_up = 0;
    std::vector<double> L;
    std::vector<long long> L_numerators;      ///< L[k] * n, exact
    std::vector<MaxLengths> per_column;       ///< empty unless requested
};

struct LkOptions {
    bool keep_per_column = false;
    unsigned threads = 1;  ///< 0 = hardware concurrency
};

/// Default homology cap: min(m - 2, 6), and 0 for m < 2.
int default_d_up(std::size_t m);

/// Skeleton dimension needed for correct homology up to d_up: min(d_up + 1, m - 1).
int skeleton_dimension(int d_up, std::size_t m);

LkProfile compute_Lk(const OrderTable& table, int d_up, const LkOptions& options = {});
inline LkProfile compute_Lk(const DataMatrix& matrix, int d_up, const LkOptions& options = {}) {
    return compute_Lk(OrderTable(matrix), d_up, options);
}

/// Dimension lower bound with the conditions under which it was obtained.
struct DimensionEstimate {
    int value = 0;
    bool no_signal = false;   ///< no index qualified; value is 0
    bool saturated = false;   ///< index d_up qualified; the true bound may exceed d_up + 1

    std::vector<std::string> flags() const;
};

/// 1 + max{k <= d_up : L[k] > epsilon}.
DimensionEstimate d_hat_low(std::span<const double> L, double epsilon);
inline DimensionEstimate d_hat_low(const LkProfile& profile, double epsilon) {
    return d_hat_low(profile.L, epsilon);
}

/// Quartiles by linear interpolation at positions (N - 1) * {0.25, 0.5, 0.75}
/// of the sorted sample, whiskers at Q1 - 1.5 IQR and Q3 + 1.5 IQR.
struct BoxplotStats {
    double q1 = 0, q2 = 0, q3 = 0;
    double iqr = 0;
    double lower_whisker = 0, upper_whisker = 0;
    std::vector<double> outliers;  ///< values strictly outside the whiskers, ascending
};

/// Linear-interpolation quantile of an ascending-sorted, nonempty sample.
double quantile_sorted(std::span<const double> sorted, double p);
BoxplotStats boxplot(std::span<const double> values);

enum class SubsampleMode { points, functions };

struct SubsampleSummary {
    SubsampleMode mode = SubsampleMode::points;
    std::size_t size = 0;          ///< n_s or m_s
    std::size_t replicates = 0;
    int d_up = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<double>> replicate_L;  ///< replicate x k
    std::vector<BoxplotStats> per_k;
};

struct SubsampleOptions {
    unsigned threads = 1;
    /// Called after each finished replicate with the number finished so far.
    void (*progress)(std::size_t done, std::size_t total) = nullptr;
};

/// Replicates draw n_s columns without replacement, re-rank the submatrix and
/// compute L_k on it.
SubsampleSummary subsample_points(const DataMatrix& matrix, std::size_t n_s, std::size_t reps, int d_up,
                                  std::uint64_t seed, const SubsampleOptions& options = {});

/// Replicates draw m_s rows without replacement; ranks carry over unchanged.
SubsampleSummary subsample_functions(const DataMatrix& matrix, std::size_t m_s, std::size_t reps, int d_up,
                                     std::uint64_t seed, const SubsampleOptions& options = {});

/// Quartile rule: accept L_k > 0 iff Q1 of the k-th boxplot is above 0;
/// returns 1 + the largest accepted k.
DimensionEstimate decide_dimension(std::span<const BoxplotStats> per_k);

}  // namespace qcsense
