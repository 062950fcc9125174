// Runs every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>

#include "oracles.hpp"
#include "qcsense/central.hpp"
#include "qcsense/estimator.hpp"
#include "qcsense/geometry.hpp"
#include "qcsense/interleave.hpp"

using namespace qcsense;
using Clock = std::chrono::steady_clock;

namespace {

const std::uint64_t kSeeds[] = {1, 2, 3, 4, 5};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& criterion) {
    const auto start = Clock::now();
    const Outcome o = criterion();
    const double elapsed = seconds_since(start);
    std::printf("%s  %2d  %-44s %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), elapsed);
    std::fflush(stdout);
    failures += !o.pass;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome order_sequences_fixture() {
    const auto start = Clock::now();
    const OrderTable t(DataMatrix::from_rows({{8.23, 4.19, 2.56, 3.96}, {4.78, 2.88, 5.76, 13.43}}));
    const double ms = seconds_since(start) * 1e3;
    // 1-based (3,4,2,1) and (2,1,3,4)
    const std::vector<std::size_t> s0{2, 3, 1, 0}, s1{1, 0, 2, 3};
    const bool ok = std::equal(s0.begin(), s0.end(), t.sequence(0).begin()) &&
                    std::equal(s1.begin(), s1.end(), t.sequence(1).begin());
    return {ok && ms < 1.0, fmt("sequences %s, %.3f ms", ok ? "exact" : "wrong", ms)};
}

Outcome persistence_oracle() {
    const auto start = Clock::now();
    int mismatches = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::size_t m = 1 + seed % 6;
        const long long end = 1 + static_cast<long long>(seed % 5);
        const auto F = oracle::random_filtration(m, end, seed);
        const auto D = persistence_intervals(F, 4);
        for (long long g = 0; g <= end; ++g) {
            const auto K = F.complex_at(g);
            const auto expected = oracle::betti_numbers({K.faces().begin(), K.faces().end()}, 4);
            for (int k = 0; k <= 4; ++k) mismatches += D.betti(k, g) != expected[k];
        }
    }
    const double s = seconds_since(start);
    return {mismatches == 0 && s < 30.0, fmt("%d Betti mismatches over 200 filtrations", mismatches)};
}

Outcome quadratic_d3_reproduction() {
    int passed = 0;
    std::string per_seed;
    for (std::uint64_t seed : kSeeds) {
        const auto spec = random_quadratic_pair(3, 10, derive_seed(seed, 0));
        const auto sample = sample_pair(spec, 350, derive_seed(seed, 1));
        SubsampleOptions opts;
        opts.threads = 0;
        const auto summary = subsample_points(sample.matrix, 200, 100, default_d_up(10), seed, opts);
        const auto verdict = decide_dimension(summary.per_k);
        const bool ok = summary.per_k[2].q1 > 0 && summary.per_k[3].q1 == 0 && verdict.value == 3;
        passed += ok;
        per_seed += fmt(" %d(Q1L2=%.3f,Q1L3=%.3f)", verdict.value, summary.per_k[2].q1, summary.per_k[3].q1);
    }
    return {passed >= 4, fmt("%d/5 seeds; verdicts%s", passed, per_seed.c_str())};
}

Outcome uniform_matrix_positive_up_to_m_minus_2() {
    int passed = 0;
    std::string per_seed;
    for (std::uint64_t seed : kSeeds) {
        LkOptions opts;
        opts.threads = 0;
        const auto P = compute_Lk(oracle::random_matrix(5, 300, seed), 5, opts);
        bool ok = P.L[4] < 0.05;
        for (int k = 0; k <= 3; ++k) ok = ok && P.L[k] > 0.05;
        passed += ok;
        per_seed += fmt(" (L3=%.3f,L4=%.3f)", P.L[3], P.L[4]);
    }
    return {passed >= 4, fmt("%d/5 seeds;%s", passed, per_seed.c_str())};
}

Outcome central_cross_oracle() {
    int passed = 0;
    std::string per_seed;
    for (std::uint64_t seed : kSeeds) {
        // redraw until the directions positively span the plane
        RegularPairSpec spec;
        for (std::uint64_t attempt = 0;; ++attempt) {
            spec = random_linear_pair(2, 4, derive_seed(seed, attempt));
            if (cone_classify(spec.directions) == ConeClass::full) break;
        }
        const auto sample = sample_pair(spec, 2000, derive_seed(seed, 100));
        const double sampled = discretized_central_region(sample.matrix).fraction;
        const auto mc = mc_measure(
            spec, [&](const Point& x) { return cent0_membership(spec, x).member; }, 100000, derive_seed(seed, 101), 0);
        const double gap = std::abs(sampled - mc.fraction);
        passed += gap < 0.05;
        per_seed += fmt(" %.4f", gap);
    }
    return {passed >= 4, fmt("%d/5 seeds; gaps%s", passed, per_seed.c_str())};
}

Outcome interleaving_trend() {
    const auto spec = random_quadratic_pair(2, 2, 2024);
    int decreased = 0;
    double mean_small = 0, mean_large = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const OrderTable ref(sample_pair(spec, 800, derive_seed(trial, 0)).matrix);
        const OrderTable small(sample_pair(spec, 50, derive_seed(trial, 1)).matrix);
        const OrderTable large(sample_pair(spec, 400, derive_seed(trial, 2)).matrix);
        const double d_small = interleaving_distance(small, ref).distance;
        const double d_large = interleaving_distance(large, ref).distance;
        decreased += d_large < d_small;
        mean_small += d_small / 100;
        mean_large += d_large / 100;
    }
    return {decreased >= 80, fmt("%d/100 trials; mean distance %.4f (n=50) -> %.4f (n=400)", decreased, mean_small,
                                 mean_large)};
}

Outcome realized_functions() {
    Rng rng(17);
    int built = 0, order_failures = 0, convexity_violations = 0;
    while (built < 100) {
        const int d = 1 + static_cast<int>(rng.below(3));
        const std::size_t n = 2 + rng.below(6);
        std::vector<Point> P;
        for (std::size_t k = 0; k < n; ++k) P.push_back(sample_ball_point(d, rng));
        const auto s = rng.sample_without_replacement(n, n);
        if (!check_sequence_realizable(P, s)) continue;
        ++built;
        const auto f = realize_function(P, s);
        for (std::size_t k = 1; k < n; ++k) order_failures += !(f(P[s[k - 1]]) < f(P[s[k]]));
        for (int pair = 0; pair < 1000; ++pair) {
            const Point u = 1.5 * sample_ball_point(d, rng), v = 1.5 * sample_ball_point(d, rng);
            convexity_violations += f(0.5 * (u + v)) > 0.5 * (f(u) + f(v)) + 1e-9;
        }
    }
    return {order_failures == 0 && convexity_violations == 0,
            fmt("100 functions; %d ordering failures, %d convexity violations", order_failures, convexity_violations)};
}

// For each i, some ordering of the remaining points followed by (p, i) is realizable.
bool realizes_all_endings(const std::vector<Point>& P, std::size_t p) {
    for (std::size_t i = 0; i < P.size(); ++i) {
        if (i == p) continue;
        std::vector<std::size_t> rest;
        for (std::size_t k = 0; k < P.size(); ++k)
            if (k != i && k != p) rest.push_back(k);
        bool found = false;
        do {
            std::vector<std::size_t> s = rest;
            s.push_back(p);
            s.push_back(i);
            found = check_sequence_realizable(P, s);
        } while (!found && std::next_permutation(rest.begin(), rest.end()));
        if (!found) return false;
    }
    return true;
}

Outcome barycenter_configuration() {
    const auto P = simplex_barycenter_configuration(5);
    const bool spatial = realizes_all_endings(P, 4);
    Rng rng(55);
    int planar_hits = 0;
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<Point> Q;
        for (int k = 0; k < 4; ++k) Q.push_back(sample_ball_point(2, rng));
        std::vector<double> w(4);
        for (auto& x : w) x = 0.05 + rng.uniform();
        const double total = std::accumulate(w.begin(), w.end(), 0.0);
        Point inner = Point::Zero(2);
        for (int k = 0; k < 4; ++k) inner += (w[k] / total) * Q[k];
        Q.push_back(inner);
        planar_hits += realizes_all_endings(Q, 4);
    }
    return {spatial && planar_hits == 0,
            fmt("R^3 configuration %s; %d/500 planar clouds realize all endings", spatial ? "realizable" : "NOT realizable",
                planar_hits)};
}

Outcome invariance_suite() {
    Rng rng(90);
    int broken = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const std::size_t m = 2 + seed % 4, n = 15 + seed % 20;
        const auto M = oracle::random_matrix(m, n, 4000 + seed);
        const OrderTable t(M);
        const auto L = compute_Lk(M, 2).L_numerators;
        const auto C = discretized_central_region(M).members;

        std::vector<double> warped(M.values().begin(), M.values().end());
        for (std::size_t i = 0; i < m; ++i) {
            const double a = 0.5 + rng.uniform(), b = rng.uniform(-3, 3);
            for (std::size_t k = 0; k < n; ++k) {
                double& x = warped[i * n + k];
                x = (i % 2 == 0) ? a * std::exp(x) + b : a * x * x * x + x + b;
            }
        }
        const DataMatrix W(m, n, warped);
        broken += !(OrderTable(W) == t);
        broken += compute_Lk(W, 2).L_numerators != L;
        broken += discretized_central_region(W).members != C;

        const auto perm = rng.sample_without_replacement(n, n);
        const auto Mp = M.select_columns(perm);
        const OrderTable tp(Mp);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < n; ++k) broken += perm[tp.sequence(i)[k]] != t.sequence(i)[k];
        broken += compute_Lk(Mp, 2).L_numerators != L;
        std::vector<std::size_t> mapped;
        for (std::size_t k : discretized_central_region(Mp).members) mapped.push_back(perm[k]);
        std::sort(mapped.begin(), mapped.end());
        broken += mapped != C;
    }
    return {broken == 0, fmt("50 matrices; %d broken invariances", broken)};
}

Outcome linear_runtime() {
    auto median_time = [](std::size_t n) {
        const auto M = oracle::random_matrix(10, n, 31 + n);
        std::vector<double> times;
        for (int r = 0; r < 7; ++r) {
            const auto start = Clock::now();
            compute_Lk(M, 3);
            times.push_back(seconds_since(start));
        }
        std::sort(times.begin(), times.end());
        return times[times.size() / 2];
    };
    const double t200 = median_time(200), t400 = median_time(400);
    const double ratio = t400 / t200;
    return {ratio >= 1.5 && ratio <= 3.0, fmt("t(200)=%.4fs t(400)=%.4fs ratio %.2f", t200, t400, ratio)};
}

}  // namespace

int main() {
    report(1, "order sequences of the 2x4 reference matrix", order_sequences_fixture);
    report(2, "persistence vs boundary-rank Betti numbers", persistence_oracle);
    report(3, "quadratic d=3 pair estimated at dimension 3", quadratic_d3_reproduction);
    report(4, "uniform matrix: L_k > 0.05 exactly for k<=m-2", uniform_matrix_positive_up_to_m_minus_2);
    report(5, "sampled central fraction vs Monte Carlo", central_cross_oracle);
    report(6, "interleaving distance shrinks with n", interleaving_trend);
    report(7, "realized functions: ordering and convexity", realized_functions);
    report(8, "simplex+barycenter sequences and planar bar", barycenter_configuration);
    report(9, "monotone and permutation invariance", invariance_suite);
    report(10, "compute_Lk runtime linear in n", linear_runtime);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
