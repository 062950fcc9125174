#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "qcsense/ingest.hpp"

namespace qcsense {

/// Columns a whose strict-below sets {b : M_ib < M_ia} have empty
/// intersection over all rows.
struct CentralReport {
    std::vector<std::size_t> members;  ///< ascending, 0-based column indices
    std::size_t n = 0;
    double fraction = 0.0;
};

CentralReport discretized_central_region(const DataMatrix& matrix);

enum class Completeness { complete_evidence, no_evidence };

std::string_view to_string(Completeness verdict);

struct CompletenessResult {
    Completeness verdict = Completeness::no_evidence;
    double threshold = 0.0;
    CentralReport central;
};

/// Default threshold on the central fraction. It is a convention; the
/// fraction itself is always reported.
inline constexpr double kDefaultCompletenessThreshold = 0.05;

/// complete_evidence iff the central fraction exceeds `threshold` (> 0).
CompletenessResult completeness_test(const DataMatrix& matrix, double threshold = kDefaultCompletenessThreshold);

}  // namespace qcsense
