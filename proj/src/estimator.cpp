#include "qcsense/estimator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "qcsense/dowker.hpp"
#include "qcsense/parallel.hpp"
#include "qcsense/random.hpp"

namespace qcsense {

int default_d_up(std::size_t m) {
    if (m < 2) return 0;
    return static_cast<int>(std::min<std::size_t>(m - 2, 6));
}

int skeleton_dimension(int d_up, std::size_t m) {
    if (m == 0) return 0;
    return std::min(d_up + 1, static_cast<int>(m) - 1);
}

LkProfile compute_Lk(const OrderTable& table, int d_up, const LkOptions& options) {
    if (d_up < 0) throw std::invalid_argument("d_up must be nonnegative");
    if (table.rows() > kMaxVertices) {
        throw CapacityError("row count " + std::to_string(table.rows()) + " exceeds the bitmask capacity of " +
                            std::to_string(kMaxVertices));
    }
    const std::size_t n = table.cols();
    const SkeletonIndex skeleton(table.rows(), skeleton_dimension(d_up, table.rows()));

    std::vector<MaxLengths> per_column(n);
    parallel_for(n, options.threads, [&](std::size_t a) {
        per_column[a] = max_lengths(persistence_intervals(ray_filtration(table, a, skeleton), d_up));
    });

    LkProfile profile;
    profile.m = table.rows();
    profile.n = n;
    profile.d_up = d_up;
    profile.L_numerators.assign(d_up + 1, 0);
    for (const auto& ml : per_column) {
        for (int k = 0; k <= d_up; ++k) {
            profile.L_numerators[k] = std::max(profile.L_numerators[k], ml.numerators[k]);
        }
    }
    profile.L.resize(d_up + 1);
    for (int k = 0; k <= d_up; ++k) {
        profile.L[k] = static_cast<double>(profile.L_numerators[k]) / static_cast<double>(n);
    }
    if (options.keep_per_column) profile.per_column = std::move(per_column);
    return profile;
}

std::vector<std::string> DimensionEstimate::flags() const {
    std::vector<std::string> out;
    if (no_signal) out.emplace_back("no-signal");
    if (saturated) out.emplace_back("d_up-saturated");
    return out;
}

DimensionEstimate d_hat_low(std::span<const double> L, double epsilon) {
    if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
    DimensionEstimate est;
    for (std::size_t k = 0; k < L.size(); ++k) {
        if (L[k] > epsilon) est.value = static_cast<int>(k) + 1;
    }
    est.no_signal = est.value == 0;
    est.saturated = !L.empty() && L.back() > epsilon;
    return est;
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    // exact when both neighbours agree, so repeated zeros stay exactly zero
    if (sorted[lo] == sorted[hi]) return sorted[lo];
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BoxplotStats boxplot(std::span<const double> values) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    BoxplotStats s;
    s.q1 = quantile_sorted(sorted, 0.25);
    s.q2 = quantile_sorted(sorted, 0.5);
    s.q3 = quantile_sorted(sorted, 0.75);
    s.iqr = s.q3 - s.q1;
    s.lower_whisker = s.q1 - 1.5 * s.iqr;
    s.upper_whisker = s.q3 + 1.5 * s.iqr;
    for (double v : sorted) {
        if (v < s.lower_whisker || v > s.upper_whisker) s.outliers.push_back(v);
    }
    return s;
}

namespace {

template <class Replicate>
SubsampleSummary run_replicates(SubsampleMode mode, std::size_t size, std::size_t reps, int d_up,
                                std::uint64_t seed, const SubsampleOptions& options, Replicate&& replicate) {
    if (reps == 0) throw std::invalid_argument("replicate count must be positive");
    SubsampleSummary out;
    out.mode = mode;
    out.size = size;
    out.replicates = reps;
    out.d_up = d_up;
    out.seed = seed;
    out.replicate_L.resize(reps);
    std::atomic<std::size_t> done{0};
    parallel_for(reps, options.threads, [&](std::size_t r) {
        Rng rng(derive_seed(seed, r));
        out.replicate_L[r] = replicate(rng).L;
        std::size_t finished = ++done;
        if (options.progress) options.progress(finished, reps);
    });
    out.per_k.resize(d_up + 1);
    std::vector<double> column(reps);
    for (int k = 0; k <= d_up; ++k) {
        for (std::size_t r = 0; r < reps; ++r) column[r] = out.replicate_L[r][k];
        out.per_k[k] = boxplot(column);
    }
    return out;
}

}  // namespace

SubsampleSummary subsample_points(const DataMatrix& matrix, std::size_t n_s, std::size_t reps, int d_up,
                                  std::uint64_t seed, const SubsampleOptions& options) {
    if (n_s == 0 || n_s > matrix.cols()) {
        throw std::out_of_range("point subsample size must lie in [1, " + std::to_string(matrix.cols()) + "]");
    }
    return run_replicates(SubsampleMode::points, n_s, reps, d_up, seed, options, [&](Rng& rng) {
        auto columns = rng.sample_without_replacement(matrix.cols(), n_s);
        std::sort(columns.begin(), columns.end());
        return compute_Lk(OrderTable(matrix.select_columns(columns)), d_up);
    });
}

SubsampleSummary subsample_functions(const DataMatrix& matrix, std::size_t m_s, std::size_t reps, int d_up,
                                     std::uint64_t seed, const SubsampleOptions& options) {
    if (m_s == 0 || m_s > matrix.rows()) {
        throw std::out_of_range("function subsample size must lie in [1, " + std::to_string(matrix.rows()) + "]");
    }
    const OrderTable table(matrix);
    return run_replicates(SubsampleMode::functions, m_s, reps, d_up, seed, options, [&](Rng& rng) {
        auto rows = rng.sample_without_replacement(matrix.rows(), m_s);
        std::sort(rows.begin(), rows.end());
        return compute_Lk(table.select_rows(rows), d_up);
    });
}

DimensionEstimate decide_dimension(std::span<const BoxplotStats> per_k) {
    DimensionEstimate est;
    for (std::size_t k = 0; k < per_k.size(); ++k) {
        if (per_k[k].q1 > 0) est.value = static_cast<int>(k) + 1;
    }
    est.no_signal = est.value == 0;
    est.saturated = !per_k.empty() && per_k.back().q1 > 0;
    return est;
}

}  // namespace qcsense
