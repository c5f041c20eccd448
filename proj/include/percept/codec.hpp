#pragma once

// JSON encodings shared by the CLI, the HTTP service and the session log.
// Perception means and bounds are rendered with 2 decimal places; filter
// endpoints keep full decimal precision so a filter survives a round trip.

#include <stdexcept>

#include <json.hpp>

#include "percept/dataset.hpp"
#include "percept/query.hpp"
#include "percept/session.hpp"
#include "percept/sus.hpp"

namespace percept {

using Json = nlohmann::json;

/// A JSON document had the wrong shape for the type being decoded.
class DecodeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Json to_json(const VideoRecord& video);
Json to_json(const PerceptionProfile& profile);
Json to_json(const CategoryCounts& counts);
Json to_json(const DatasetStats& stats);

/// {"created_at", "videos": [...], "profiles": [...]}
Json export_dataset(const Dataset& dataset);

Json to_json(const MetricRange& range);
Json to_json(const QueryFilter& filter);
Json to_json(const MetricBounds& bounds);
Json to_json(const ResultItem& item);
Json to_json(const ResultList& results);

/// Reads the canonical filter encoding. Missing fields take their default
/// values; unknown keys are ignored. Throws DecodeError on wrong types,
/// unknown enum names, or ranges that violate 1 <= lo <= hi <= 7.
QueryFilter filter_from_json(const Json& j);

Json to_json(const SessionEvent& event);
SessionEvent event_from_json(const Json& j);

Json to_json(const SessionMetrics& metrics);
Json to_json(const FieldSummary& summary);
Json to_json(const StudySummary& summary);

Json to_json(const SusResponse& response);
SusResponse sus_from_json(const Json& j);

/// Rounds to 2 decimals, as used for every rendered mean.
double render_mean(const Rational& value);

/// ISO-8601 UTC with second precision.
std::string format_timestamp(std::chrono::system_clock::time_point t);

}  // namespace percept
