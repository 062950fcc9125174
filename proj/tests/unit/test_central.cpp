#include <doctest.h>

#include "oracles.hpp"
#include "qcsense/central.hpp"

using namespace qcsense;

namespace {

std::vector<std::size_t> oracle_members(const DataMatrix& M) {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < M.cols(); ++a) {
        bool empty = true;
        for (std::size_t b = 0; b < M.cols() && empty; ++b) {
            bool below_everywhere = true;
            for (std::size_t i = 0; i < M.rows(); ++i) below_everywhere = below_everywhere && M(i, b) < M(i, a);
            if (below_everywhere) empty = false;
        }
        if (empty) out.push_back(a);
    }
    return out;
}

}  // namespace

TEST_CASE("central region of the reference matrix") {
    const auto r = discretized_central_region(
        DataMatrix::from_rows({{8.23, 4.19, 2.56, 3.96}, {4.78, 2.88, 5.76, 13.43}}));
    CHECK(r.members == std::vector<std::size_t>{1, 2});
    CHECK(r.fraction == 0.5);
}

TEST_CASE("central region corner cases") {
    SUBCASE("single row keeps only the minimum") {
        const auto r = discretized_central_region(DataMatrix::from_rows({{3.0, 1.0, 2.0, 5.0}}));
        CHECK(r.members == std::vector<std::size_t>{1});
        CHECK(r.fraction == 0.25);
    }
    SUBCASE("opposite rows make every column central") {
        const auto r = discretized_central_region(DataMatrix::from_rows({{1.0, 2.0, 3.0}, {-1.0, -2.0, -3.0}}));
        CHECK(r.fraction == 1.0);
    }
}

TEST_CASE("completeness verdicts") {
    const auto M = DataMatrix::from_rows({{1.0, 2.0, 3.0}, {-1.0, -2.0, -3.0}});
    CHECK(completeness_test(M, 0.05).verdict == Completeness::complete_evidence);
    const auto single = DataMatrix::from_rows({{1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0,
                                                11.0, 12.0, 13.0, 14.0, 15.0, 16.0, 17.0, 18.0, 19.0, 20.0,
                                                21.0}});
    const auto r = completeness_test(single, 0.05);
    CHECK(r.central.fraction < 0.05);
    CHECK(r.verdict == Completeness::no_evidence);
    CHECK(to_string(r.verdict) == "no-evidence");
    CHECK_THROWS_AS(completeness_test(M, 0.0), std::invalid_argument);
}

TEST_CASE("property: members match the pairwise oracle and always include row minima") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const std::size_t m = 1 + seed % 5, n = 1 + (seed * 13) % 150;
        const auto M = oracle::random_matrix(m, n, seed);
        const auto r = discretized_central_region(M);
        CHECK(r.members == oracle_members(M));
        for (std::size_t i = 0; i < m; ++i) {
            const auto row = M.row(i);
            const auto argmin = static_cast<std::size_t>(std::min_element(row.begin(), row.end()) - row.begin());
            CHECK(std::binary_search(r.members.begin(), r.members.end(), argmin));
        }
    }
}

TEST_CASE("property: invariance and monotonicity") {
    Rng rng(12);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const std::size_t m = 2 + seed % 4, n = 20 + seed;
        const auto M = oracle::random_matrix(m, n, 100 + seed);
        const auto base = discretized_central_region(M);

        std::vector<double> warped(M.values().begin(), M.values().end());
        for (auto& x : warped) x = std::log(x + 1.0);
        CHECK(discretized_central_region(DataMatrix(m, n, warped)).members == base.members);

        const auto perm = rng.sample_without_replacement(n, n);
        const auto permuted = discretized_central_region(M.select_columns(perm));
        std::vector<std::size_t> mapped;
        for (std::size_t k : permuted.members) mapped.push_back(perm[k]);
        std::sort(mapped.begin(), mapped.end());
        CHECK(mapped == base.members);

        // fewer rows: larger intersections, so fewer members
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i + 1 < m; ++i) rows.push_back(i);
        const auto fewer = discretized_central_region(M.select_rows(rows));
        CHECK(std::includes(base.members.begin(), base.members.end(), fewer.members.begin(), fewer.members.end()));
    }
}
