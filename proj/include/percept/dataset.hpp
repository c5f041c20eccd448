#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "percept/rational.hpp"

namespace percept {

// ---------------------------------------------------------------------------
// Closed vocabularies
// ---------------------------------------------------------------------------

/// Video category: A and B are spoken (high / low interactivity), C and D are
/// non-spoken (one or a few contents / multiple contents).
enum class Category { A, B, C, D };

enum class Application { sleep, relaxation, concentration, companionship, attention };

/// The five Likert-scored perception metrics, in annotation column order.
enum class Metric { tingles, excitement, calmness, sadness, stress };

inline constexpr std::size_t kMetricCount = 5;
inline constexpr std::size_t kApplicationCount = 5;

inline constexpr std::array<Metric, kMetricCount> kMetrics = {
    Metric::tingles, Metric::excitement, Metric::calmness, Metric::sadness, Metric::stress};

inline constexpr std::array<Application, kApplicationCount> kApplications = {
    Application::sleep, Application::relaxation, Application::concentration,
    Application::companionship, Application::attention};

inline constexpr int kLikertMin = 1;
inline constexpr int kLikertMax = 7;

constexpr std::size_t index_of(Metric m) { return static_cast<std::size_t>(m); }
constexpr std::size_t index_of(Application a) { return static_cast<std::size_t>(a); }

constexpr bool is_spoken(Category c) { return c == Category::A || c == Category::B; }

std::string_view to_string(Category c);
std::string_view to_string(Application a);
std::string_view to_string(Metric m);

/// Case-insensitive single letter A-D.
std::optional<Category> parse_category(std::string_view text);
std::optional<Application> parse_application(std::string_view text);
std::optional<Metric> parse_metric(std::string_view text);

/// Small value set over the five applications.
class ApplicationSet {
 public:
  constexpr ApplicationSet() = default;
  constexpr ApplicationSet(std::initializer_list<Application> apps) {
    for (auto a : apps) insert(a);
  }

  constexpr bool contains(Application a) const { return (bits_ >> index_of(a)) & 1u; }
  constexpr void insert(Application a) { bits_ |= 1u << index_of(a); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(__builtin_popcount(bits_)); }

  ApplicationSet& operator|=(ApplicationSet other) {
    bits_ |= other.bits_;
    return *this;
  }
  friend constexpr bool operator==(ApplicationSet, ApplicationSet) = default;

  /// Members in enum order.
  std::vector<Application> members() const;

 private:
  std::uint8_t bits_ = 0;
};

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

struct VideoRecord {
  std::string video_id;
  std::string title;
  std::string url;
  Category category = Category::A;
  std::int64_t duration_seconds = 0;
  bool spoken = true;  // derived from category

  friend bool operator==(const VideoRecord&, const VideoRecord&) = default;
};

/// One annotator's answers for one video: five Likert scores plus the
/// multi-choice application selection.
struct AnnotationRecord {
  std::string annotator_id;
  std::string video_id;
  std::array<int, kMetricCount> scores{};
  ApplicationSet applications;

  int score(Metric m) const { return scores[index_of(m)]; }

  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

struct PerceptionProfile {
  std::string video_id;
  std::array<Rational, kMetricCount> means;
  ApplicationSet applications;
  std::int64_t annotator_count = 0;

  const Rational& mean(Metric m) const { return means[index_of(m)]; }

  friend bool operator==(const PerceptionProfile&, const PerceptionProfile&) = default;
};

struct CategoryCounts {
  std::int64_t count_a = 0;
  std::int64_t count_b = 0;
  std::int64_t count_c = 0;
  std::int64_t count_d = 0;
  std::int64_t total = 0;

  friend bool operator==(const CategoryCounts&, const CategoryCounts&) = default;
};

struct MetricExtent {
  Rational min;
  Rational max;

  friend bool operator==(const MetricExtent&, const MetricExtent&) = default;
};

struct DatasetStats {
  CategoryCounts counts;
  std::int64_t spoken = 0;
  std::int64_t non_spoken = 0;
  std::array<MetricExtent, kMetricCount> extents;
};

/// Immutable aggregate of a manifest and its annotations. Only videos with at
/// least one annotation receive a profile; the rest are listed in
/// unannotated().
class Dataset {
 public:
  using Clock = std::chrono::system_clock;

  Dataset() = default;
  Dataset(std::map<std::string, VideoRecord> videos,
          std::map<std::string, PerceptionProfile> profiles,
          std::vector<std::string> unannotated, Clock::time_point created_at);

  const std::map<std::string, VideoRecord>& videos() const { return videos_; }
  const std::map<std::string, PerceptionProfile>& profiles() const { return profiles_; }
  const std::vector<std::string>& unannotated() const { return unannotated_; }
  Clock::time_point created_at() const { return created_at_; }

  const VideoRecord* find_video(std::string_view id) const;
  const PerceptionProfile* find_profile(std::string_view id) const;

 private:
  std::map<std::string, VideoRecord> videos_;
  std::map<std::string, PerceptionProfile> profiles_;
  std::vector<std::string> unannotated_;
  Clock::time_point created_at_{};
};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Diagnostic {
  std::size_t line = 0;  // 0 when not tied to a line
  std::string field;
  std::string message;
};

std::string to_string(const Diagnostic& d);

/// Raised by the parsers and by aggregation. Carries every problem found, not
/// just the first.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

class EmptyDatasetError : public std::runtime_error {
 public:
  EmptyDatasetError() : std::runtime_error("dataset has no profiled videos") {}
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

inline constexpr std::string_view kManifestHeader = "video_id,title,url,category,duration_seconds";
inline constexpr std::string_view kAnnotationHeader =
    "annotator_id,video_id,tingles,excitement,calmness,sadness,stress,applications";

std::vector<VideoRecord> parse_video_manifest(std::string_view text);
std::vector<AnnotationRecord> parse_annotations(std::string_view text);

std::string serialize_manifest(std::span<const VideoRecord> videos);
std::string serialize_annotations(std::span<const AnnotationRecord> annotations);

/// Per-metric arithmetic mean and union of applications for every video that
/// has annotations. Throws ValidationError if an annotation names a video not
/// in the manifest.
Dataset aggregate_profiles(std::span<const VideoRecord> videos,
                           std::span<const AnnotationRecord> annotations,
                           Dataset::Clock::time_point created_at = Dataset::Clock::now());

CategoryCounts count_categories(std::span<const VideoRecord> videos);

/// Category counts over all videos plus per-metric min/max over profiles.
/// Throws EmptyDatasetError when there are no profiles.
DatasetStats dataset_stats(const Dataset& dataset);

/// Reads a whole file; throws std::runtime_error naming the path on failure.
std::string read_file(const std::string& path);

}  // namespace percept
