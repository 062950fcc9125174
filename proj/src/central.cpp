#include "qcsense/central.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>

namespace qcsense {

CentralReport discretized_central_region(const DataMatrix& matrix) {
    const std::size_t m = matrix.rows(), n = matrix.cols(), words = (n + 63) / 64;
    CentralReport report;
    report.n = n;
    std::vector<std::uint64_t> common(words);
    for (std::size_t a = 0; a < n; ++a) {
        // seed with the row whose strict-below set is smallest, then filter
        std::size_t seed_row = 0, seed_size = n + 1;
        for (std::size_t i = 0; i < m && seed_size > 0; ++i) {
            std::size_t below = 0;
            for (double v : matrix.row(i)) below += v < matrix(i, a);
            if (below < seed_size) {
                seed_size = below;
                seed_row = i;
            }
        }
        bool empty = seed_size == 0;
        if (!empty) {
            std::fill(common.begin(), common.end(), 0);
            auto row = matrix.row(seed_row);
            for (std::size_t b = 0; b < n; ++b) {
                if (row[b] < row[a]) common[b / 64] |= std::uint64_t{1} << (b % 64);
            }
            for (std::size_t i = 0; i < m && !empty; ++i) {
                if (i == seed_row) continue;
                const double pivot = matrix(i, a);
                bool any = false;
                for (std::size_t w = 0; w < words; ++w) {
                    for (std::uint64_t bits = common[w]; bits; bits &= bits - 1) {
                        const std::size_t b = w * 64 + std::countr_zero(bits);
                        if (!(matrix(i, b) < pivot)) common[w] &= ~(std::uint64_t{1} << (b % 64));
                    }
                    any = any || common[w] != 0;
                }
                empty = !any;
            }
        }
        if (empty) report.members.push_back(a);
    }
    report.fraction = static_cast<double>(report.members.size()) / static_cast<double>(n);
    return report;
}

std::string_view to_string(Completeness verdict) {
    return verdict == Completeness::complete_evidence ? "complete-evidence" : "no-evidence";
}

CompletenessResult completeness_test(const DataMatrix& matrix, double threshold) {
    if (!(threshold > 0)) throw std::invalid_argument("completeness threshold must be positive");
    CompletenessResult result;
    result.threshold = threshold;
    result.central = discretized_central_region(matrix);
    result.verdict = result.central.fraction > threshold ? Completeness::complete_evidence : Completeness::no_evidence;
    return result;
}

}  // namespace qcsense
