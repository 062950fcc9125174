#pragma once

#include <vector>

namespace qcsense {

/// Decides exactly whether {x >= 0 : A x = b} is nonempty.
///
/// The double inputs are converted to rationals without rounding and the
/// phase-one simplex method runs in exact arithmetic with Bland's rule, so
/// the answer is exact for the given floating-point data.
bool nonnegative_solution_exists(const std::vector<std::vector<double>>& A, const std::vector<double>& b);

/// Exact rank of the matrix whose rows are given (rational Gaussian elimination).
int exact_rank(const std::vector<std::vector<double>>& rows);

}  // namespace qcsense
