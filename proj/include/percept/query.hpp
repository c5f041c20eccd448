#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "percept/dataset.hpp"
#include "percept/rational.hpp"

namespace percept {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline const Rational kScaleMin{kLikertMin};
inline const Rational kScaleMax{kLikertMax};

/// Slider resolution: 0.1 on [1.0, 7.0].
inline constexpr std::int64_t kSliderStepsPerUnit = 10;

enum class Handle { left, right };

enum class SpokenFilter { any, spoken_only, non_spoken_only };

std::string_view to_string(SpokenFilter s);
std::optional<SpokenFilter> parse_spoken_filter(std::string_view text);

/// Closed interval [lo, hi] with 1 <= lo <= hi <= 7.
struct MetricRange {
  Rational lo = kScaleMin;
  Rational hi = kScaleMax;

  static MetricRange full() { return {}; }

  bool valid() const { return kScaleMin <= lo && lo <= hi && hi <= kScaleMax; }
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }

  friend bool operator==(const MetricRange&, const MetricRange&) = default;
};

/// State of the perception filter panel.
struct QueryFilter {
  std::optional<Application> application;
  SpokenFilter spoken = SpokenFilter::any;
  std::array<MetricRange, kMetricCount> ranges{};

  MetricRange& range(Metric m) { return ranges[index_of(m)]; }
  const MetricRange& range(Metric m) const { return ranges[index_of(m)]; }

  friend bool operator==(const QueryFilter&, const QueryFilter&) = default;
};

/// The video content section used by the content-based baseline: only the
/// application, spoken and tingles controls.
struct ContentFilter {
  std::optional<Application> application;
  SpokenFilter spoken = SpokenFilter::any;
  MetricRange tingles{};
};

struct MetricBounds {
  std::array<MetricExtent, kMetricCount> extents;
  std::int64_t video_count = 0;

  const MetricExtent& extent(Metric m) const { return extents[index_of(m)]; }

  friend bool operator==(const MetricBounds&, const MetricBounds&) = default;
};

struct ResultItem {
  std::string video_id;
  std::string title;
  Category category = Category::A;
  bool spoken = true;
  PerceptionProfile profile;
};

struct ResultList {
  std::vector<ResultItem> items;
  std::size_t total_matches = 0;

  std::vector<std::string> ids() const;
};

/// Throws DomainError if any range is outside [1, 7] or inverted.
void validate(const QueryFilter& filter);
void validate(const ContentFilter& filter);

QueryFilter default_filter();

/// Every profiled video satisfying the application, spoken and range
/// predicates, in canonical order (descending tingles mean, then ascending
/// video_id).
ResultList execute_query(const Dataset& dataset, const QueryFilter& filter);

/// Per-metric min/max of means over the videos carrying `application`.
/// Returns nullopt when no video carries it.
std::optional<MetricBounds> application_bounds(const Dataset& dataset, Application application);

/// Sets every range to the bounds' (min, max); application and spoken pass
/// through.
QueryFilter clamp_filter_to_bounds(QueryFilter filter, const MetricBounds& bounds);

/// Widens bounds to the slider grid: min rounded down, max rounded up.
MetricBounds round_outward(const MetricBounds& bounds, std::int64_t steps_per_unit = kSliderStepsPerUnit);

/// Two-handle collision rule. If the handles would cross, the moving handle
/// stops at the other one. Throws DomainError for values outside [1, 7].
MetricRange normalize_range(const Rational& lo, const Rational& hi, Handle moving);

/// Lower-cased whitespace tokens, duplicates removed, first occurrence order.
std::vector<std::string> tokenize_query(std::string_view query);

/// Keyword-only baseline: OR of case-insensitive title substrings, ranked by
/// number of matching tokens then canonical order. Empty query returns the
/// whole profiled corpus.
ResultList keyword_search(const Dataset& dataset, std::string_view query);

/// Keyword baseline intersected with the content-section predicates.
ResultList content_search(const Dataset& dataset, std::string_view query,
                          const ContentFilter& content_filter);

}  // namespace percept
