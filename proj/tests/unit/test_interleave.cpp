#include <doctest.h>

#include <numeric>

#include "oracles.hpp"
#include "qcsense/interleave.hpp"

using namespace qcsense;

namespace {

// Smallest k such that Dow(A)(j/L) sits in Dow(B)(min(j + k, L)/L) and vice
// versa for every j in {0..L}^m, checked simplex by simplex from the
// definition. Grade j/L on a side with n columns admits column b on vertex i
// iff rank(i, b) * (L / n) <= j_i.
long long oracle_distance_numerator(const OrderTable& A, const OrderTable& B) {
    const std::size_t m = A.rows();
    const long long L = std::lcm<long long>(A.cols(), B.cols());
    auto member = [&](const OrderTable& t, Simplex s, const std::vector<long long>& j) {
        const long long scale = L / static_cast<long long>(t.cols());
        for (std::size_t b = 0; b < t.cols(); ++b) {
            bool ok = true;
            for (std::size_t i = 0; i < m && ok; ++i)
                if (s >> i & 1) ok = t.rank(i, b) * scale <= j[i];
            if (ok) return true;
        }
        return false;
    };
    auto holds = [&](long long k) {
        std::vector<long long> j(m, 0);
        while (true) {
            std::vector<long long> shifted(m);
            for (std::size_t i = 0; i < m; ++i) shifted[i] = std::min(j[i] + k, L);
            for (Simplex s : oracle::all_simplices(m, static_cast<int>(m))) {
                if (member(A, s, j) && !member(B, s, shifted)) return false;
                if (member(B, s, j) && !member(A, s, shifted)) return false;
            }
            std::size_t i = 0;
            while (i < m && j[i] == L) j[i++] = 0;
            if (i == m) return true;
            ++j[i];
        }
    };
    long long k = 0;
    while (!holds(k)) ++k;
    return k;
}

OrderTable random_table(std::size_t m, std::size_t n, std::uint64_t seed) {
    return OrderTable(oracle::random_matrix(m, n, seed));
}

}  // namespace

TEST_CASE("identical tables are at distance zero") {
    const auto A = random_table(3, 12, 1);
    const auto r = interleaving_distance(A, A);
    CHECK(r.distance == 0.0);
    CHECK(r.numerator == 0);
    CHECK(r.denominator == 12);
}

TEST_CASE("one sensor, coarse and fine grids of the same order") {
    const auto A = OrderTable::from_ranks(1, 2, {1, 2});
    const auto B = OrderTable::from_ranks(1, 4, {1, 2, 3, 4});
    const auto r = interleaving_distance(A, B);
    CHECK(r.denominator == 4);
    CHECK(r.distance <= 0.25);
    CHECK(r.numerator == oracle_distance_numerator(A, B));
}

TEST_CASE("property: distance equals the exhaustive grid oracle") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const std::size_t m = 1 + seed % 3;
        const std::size_t na = 1 + seed % 5, nb = 1 + (seed * 3) % 6;
        const auto A = random_table(m, na, 10 + seed), B = random_table(m, nb, 500 + seed);
        const auto r = interleaving_distance(A, B);
        CHECK(r.numerator == oracle_distance_numerator(A, B));
        CHECK(r.denominator == std::lcm<long long>(na, nb));
        CHECK(r.distance == doctest::Approx(static_cast<double>(r.numerator) / r.denominator));
        CHECK(r.distance <= 1.0);
    }
}

TEST_CASE("property: symmetry, triangle inequality and rank invariance") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const std::size_t m = 1 + seed % 4;
        const auto M = oracle::random_matrix(m, 5 + seed % 4, 900 + seed);
        const auto A = OrderTable(M);
        const auto B = random_table(m, 3 + seed % 5, 2000 + seed);
        const auto C = random_table(m, 4 + seed % 3, 3000 + seed);
        const double ab = interleaving_distance(A, B).distance;
        CHECK(ab == interleaving_distance(B, A).distance);
        CHECK(interleaving_distance(A, C).distance <= ab + interleaving_distance(B, C).distance + 1e-12);

        std::vector<double> warped(M.values().begin(), M.values().end());
        for (auto& x : warped) x = std::exp(x) * 5.0 - 2.0;
        CHECK(interleaving_distance(A, OrderTable(DataMatrix(M.rows(), M.cols(), warped))).distance == 0.0);
    }
}

TEST_CASE("interleaving preconditions") {
    CHECK_THROWS_AS(interleaving_distance(random_table(2, 4, 1), random_table(3, 4, 2)), std::invalid_argument);
    CHECK_THROWS_AS(interleaving_distance(random_table(5, 4, 1), random_table(5, 4, 2)), std::invalid_argument);
}
