#pragma once

#include <json.hpp>

#include <iosfwd>

#include "qcsense/central.hpp"
#include "qcsense/estimator.hpp"
#include "qcsense/geometry.hpp"
#include "qcsense/interleave.hpp"

namespace qcsense {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;
inline constexpr const char* kToolVersion = "0.1.0";

Json to_json(const LkProfile& profile);
Json to_json(const DimensionEstimate& estimate);
Json to_json(const BoxplotStats& stats);
Json to_json(const SubsampleSummary& summary);
Json to_json(const CentralReport& report);
Json to_json(const CompletenessResult& result);
Json to_json(const InterleaveResult& result);

/// Full-precision spec serialization; doubles round-trip exactly.
Json to_json(const RegularPairSpec& spec);
RegularPairSpec spec_from_json(const Json& j);

/// Header "replicate,L0,...,L{d_up}", one line per replicate.
void write_replicates_csv(std::ostream& out, const SubsampleSummary& summary);
/// One line per point, coordinates separated by commas.
void write_cloud_csv(std::ostream& out, const PointCloud& cloud);

}  // namespace qcsense
