#include "qcsense/exact_lp.hpp"

#include <gmpxx.h>

#include <stdexcept>

namespace qcsense {

bool nonnegative_solution_exists(const std::vector<std::vector<double>>& A, const std::vector<double>& b) {
    const std::size_t rows = A.size();
    if (b.size() != rows) throw std::invalid_argument("right-hand side length must equal row count");
    if (rows == 0) return true;
    const std::size_t cols = A.front().size();
    for (const auto& row : A) {
        if (row.size() != cols) throw std::invalid_argument("constraint rows must have equal length");
    }

    // Tableau [A | I | b] with one artificial per row; last row holds the
    // reduced costs of the phase-one objective (sum of artificials).
    const std::size_t width = cols + rows + 1, rhs = width - 1;
    std::vector<std::vector<mpq_class>> t(rows + 1, std::vector<mpq_class>(width, 0));
    std::vector<std::size_t> basis(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const bool flip = b[r] < 0;
        for (std::size_t c = 0; c < cols; ++c) {
            t[r][c] = mpq_class(A[r][c]);
            if (flip) t[r][c] = -t[r][c];
        }
        t[r][cols + r] = 1;
        t[r][rhs] = flip ? mpq_class(-b[r]) : mpq_class(b[r]);
        basis[r] = cols + r;
    }
    for (std::size_t c = 0; c < width; ++c) {
        if (c >= cols && c < cols + rows) continue;
        for (std::size_t r = 0; r < rows; ++r) t[rows][c] -= t[r][c];
    }

    while (true) {
        // Bland: lowest-index column with negative reduced cost enters
        std::size_t enter = width;
        for (std::size_t c = 0; c + 1 < width; ++c) {
            if (sgn(t[rows][c]) < 0) {
                enter = c;
                break;
            }
        }
        if (enter == width) break;

        std::size_t leave = rows;
        mpq_class best;
        for (std::size_t r = 0; r < rows; ++r) {
            if (sgn(t[r][enter]) <= 0) continue;
            mpq_class ratio = t[r][rhs] / t[r][enter];
            if (leave == rows || ratio < best || (ratio == best && basis[r] < basis[leave])) {
                leave = r;
                best = ratio;
            }
        }
        // the phase-one objective is bounded below by 0, so a pivot row exists
        if (leave == rows) throw std::logic_error("unbounded phase-one simplex");

        const mpq_class pivot = t[leave][enter];
        for (auto& x : t[leave]) x /= pivot;
        for (std::size_t r = 0; r <= rows; ++r) {
            if (r == leave || sgn(t[r][enter]) == 0) continue;
            const mpq_class factor = t[r][enter];
            for (std::size_t c = 0; c < width; ++c) t[r][c] -= factor * t[leave][c];
        }
        basis[leave] = enter;
    }
    return sgn(t[rows][rhs]) == 0;
}

int exact_rank(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return 0;
    const std::size_t cols = rows.front().size();
    std::vector<std::vector<mpq_class>> a(rows.size(), std::vector<mpq_class>(cols));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw std::invalid_argument("rows must have equal length");
        for (std::size_t c = 0; c < cols; ++c) a[r][c] = mpq_class(rows[r][c]);
    }
    int rank = 0;
    for (std::size_t c = 0; c < cols && static_cast<std::size_t>(rank) < a.size(); ++c) {
        std::size_t pivot = static_cast<std::size_t>(rank);
        while (pivot < a.size() && sgn(a[pivot][c]) == 0) ++pivot;
        if (pivot == a.size()) continue;
        std::swap(a[pivot], a[rank]);
        for (std::size_t r = rank + 1; r < a.size(); ++r) {
            if (sgn(a[r][c]) == 0) continue;
            const mpq_class factor = a[r][c] / a[rank][c];
            for (std::size_t k = c; k < cols; ++k) a[r][k] -= factor * a[rank][k];
        }
        ++rank;
    }
    return rank;
}

}  // namespace qcsense
