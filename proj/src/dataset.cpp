#include "percept/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "csv.hpp"

namespace percept {
namespace {

constexpr std::array<std::string_view, kApplicationCount> kApplicationNames = {
    "sleep", "relaxation", "concentration", "companionship", "attention"};
constexpr std::array<std::string_view, kMetricCount> kMetricNames = {
    "tingles", "excitement", "calmness", "sadness", "stress"};

bool is_token(std::string_view s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isspace(c) || c == ',' || c == '"' || c == '|';
  });
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Shared header/row driver. Calls on_row(line_number, fields, diagnostics)
// for each data row with the right field count.
template <typename OnRow>
void for_each_row(std::string_view text, std::string_view header, std::size_t columns,
                  std::vector<Diagnostic>& diags, OnRow on_row) {
  auto lines = csv::split_lines(text);
  if (lines.empty()) {
    diags.push_back({0, "header", "missing header row, expected '" + std::string(header) + "'"});
    return;
  }
  if (trim(lines.front().text) != header) {
    diags.push_back({lines.front().number, "header",
                     "expected '" + std::string(header) + "', got '" +
                         std::string(lines.front().text) + "'"});
    return;
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    auto fields = csv::split_row(line.text);
    if (!fields) {
      diags.push_back({line.number, "row", "malformed quoting"});
      continue;
    }
    if (fields->size() != columns) {
      diags.push_back({line.number, "row",
                       "expected " + std::to_string(columns) + " fields, got " +
                           std::to_string(fields->size())});
      continue;
    }
    on_row(line.number, *fields);
  }
}

}  // namespace

std::string_view to_string(Category c) {
  switch (c) {
    case Category::A: return "A";
    case Category::B: return "B";
    case Category::C: return "C";
    case Category::D: return "D";
  }
  return "?";
}

std::string_view to_string(Application a) { return kApplicationNames[index_of(a)]; }
std::string_view to_string(Metric m) { return kMetricNames[index_of(m)]; }

std::optional<Category> parse_category(std::string_view text) {
  if (text.size() != 1) return std::nullopt;
  switch (std::toupper(static_cast<unsigned char>(text[0]))) {
    case 'A': return Category::A;
    case 'B': return Category::B;
    case 'C': return Category::C;
    case 'D': return Category::D;
    default: return std::nullopt;
  }
}

std::optional<Application> parse_application(std::string_view text) {
  for (auto a : kApplications) {
    if (kApplicationNames[index_of(a)] == text) return a;
  }
  return std::nullopt;
}

std::optional<Metric> parse_metric(std::string_view text) {
  for (auto m : kMetrics) {
    if (kMetricNames[index_of(m)] == text) return m;
  }
  return std::nullopt;
}

std::vector<Application> ApplicationSet::members() const {
  std::vector<Application> out;
  for (auto a : kApplications) {
    if (contains(a)) out.push_back(a);
  }
  return out;
}

Dataset::Dataset(std::map<std::string, VideoRecord> videos,
                 std::map<std::string, PerceptionProfile> profiles,
                 std::vector<std::string> unannotated, Clock::time_point created_at)
    : videos_(std::move(videos)),
      profiles_(std::move(profiles)),
      unannotated_(std::move(unannotated)),
      created_at_(created_at) {}

const VideoRecord* Dataset::find_video(std::string_view id) const {
  auto it = videos_.find(std::string(id));
  return it == videos_.end() ? nullptr : &it->second;
}

const PerceptionProfile* Dataset::find_profile(std::string_view id) const {
  auto it = profiles_.find(std::string(id));
  return it == profiles_.end() ? nullptr : &it->second;
}

std::string to_string(const Diagnostic& d) {
  std::string out;
  if (d.line > 0) out += "line " + std::to_string(d.line) + ": ";
  if (!d.field.empty()) out += "field '" + d.field + "': ";
  out += d.message;
  return out;
}

namespace {
std::string join_diagnostics(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) {
    if (!out.empty()) out += "; ";
    out += to_string(d);
  }
  return out;
}
}  // namespace

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::vector<VideoRecord> parse_video_manifest(std::string_view text) {
  std::vector<Diagnostic> diags;
  std::vector<VideoRecord> out;
  std::set<std::string, std::less<>> seen;

  for_each_row(text, kManifestHeader, 5, diags,
               [&](std::size_t line, const std::vector<std::string>& f) {
                 std::size_t before = diags.size();
                 VideoRecord v;
                 v.video_id = std::string(trim(f[0]));
                 v.title = f[1];
                 v.url = std::string(trim(f[2]));
                 if (!is_token(v.video_id)) {
                   diags.push_back({line, "video_id", "must be a non-empty token"});
                 } else if (!seen.insert(v.video_id).second) {
                   diags.push_back({line, "video_id", "duplicate video_id '" + v.video_id + "'"});
                 }
                 if (auto c = parse_category(trim(f[3]))) {
                   v.category = *c;
                   v.spoken = is_spoken(*c);
                 } else {
                   diags.push_back({line, "category", "unknown category '" + f[3] + "', expected A-D"});
                 }
                 auto dur = parse_int(trim(f[4]));
                 if (!dur) {
                   diags.push_back({line, "duration_seconds", "not an integer: '" + f[4] + "'"});
                 } else if (*dur <= 0) {
                   diags.push_back({line, "duration_seconds", "must be positive, got " + f[4]});
                 } else {
                   v.duration_seconds = *dur;
                 }
                 if (diags.size() == before) out.push_back(std::move(v));
               });

  if (!diags.empty()) throw ValidationError(std::move(diags));
  return out;
}

std::vector<AnnotationRecord> parse_annotations(std::string_view text) {
  std::vector<Diagnostic> diags;
  std::vector<AnnotationRecord> out;
  std::set<std::pair<std::string, std::string>> seen;

  for_each_row(text, kAnnotationHeader, 8, diags,
               [&](std::size_t line, const std::vector<std::string>& f) {
                 std::size_t before = diags.size();
                 AnnotationRecord r;
                 r.annotator_id = std::string(trim(f[0]));
                 r.video_id = std::string(trim(f[1]));
                 if (!is_token(r.annotator_id)) {
                   diags.push_back({line, "annotator_id", "must be a non-empty token"});
                 }
                 if (!is_token(r.video_id)) {
                   diags.push_back({line, "video_id", "must be a non-empty token"});
                 }
                 for (auto m : kMetrics) {
                   const std::string& raw = f[2 + index_of(m)];
                   auto v = parse_int(trim(raw));
                   std::string field(to_string(m));
                   if (!v) {
                     diags.push_back({line, field, "not an integer: '" + raw + "'"});
                   } else if (*v < kLikertMin || *v > kLikertMax) {
                     diags.push_back({line, field, "score " + raw + " outside Likert range [1, 7]"});
                   } else {
                     r.scores[index_of(m)] = static_cast<int>(*v);
                   }
                 }
                 std::string_view apps = trim(f[7]);
                 while (!apps.empty()) {
                   auto bar = apps.find('|');
                   std::string_view name = trim(apps.substr(0, bar));
                   apps = bar == std::string_view::npos ? std::string_view{} : apps.substr(bar + 1);
                   auto a = parse_application(name);
                   if (!a) {
                     diags.push_back({line, "applications",
                                      "unknown application '" + std::string(name) + "'"});
                   } else if (r.applications.contains(*a)) {
                     diags.push_back({line, "applications",
                                      "duplicate application '" + std::string(name) + "'"});
                   } else {
                     r.applications.insert(*a);
                   }
                   if (bar != std::string_view::npos && apps.empty()) {
                     diags.push_back({line, "applications", "trailing '|' separator"});
                   }
                 }
                 if (diags.size() == before &&
                     !seen.emplace(r.annotator_id, r.video_id).second) {
                   diags.push_back({line, "annotator_id",
                                    "duplicate annotation by '" + r.annotator_id + "' for '" +
                                        r.video_id + "'"});
                 }
                 if (diags.size() == before) out.push_back(std::move(r));
               });

  if (!diags.empty()) throw ValidationError(std::move(diags));
  return out;
}

std::string serialize_manifest(std::span<const VideoRecord> videos) {
  std::string out(kManifestHeader);
  out += '\n';
  for (const auto& v : videos) {
    out += v.video_id;
    out += ',';
    out += csv::escape_field(v.title);
    out += ',';
    out += csv::escape_field(v.url);
    out += ',';
    out += to_string(v.category);
    out += ',';
    out += std::to_string(v.duration_seconds);
    out += '\n';
  }
  return out;
}

std::string serialize_annotations(std::span<const AnnotationRecord> annotations) {
  std::string out(kAnnotationHeader);
  out += '\n';
  for (const auto& r : annotations) {
    out += r.annotator_id;
    out += ',';
    out += r.video_id;
    for (int s : r.scores) {
      out += ',';
      out += std::to_string(s);
    }
    out += ',';
    bool first = true;
    for (auto a : r.applications.members()) {
      if (!first) out += '|';
      out += to_string(a);
      first = false;
    }
    out += '\n';
  }
  return out;
}

Dataset aggregate_profiles(std::span<const VideoRecord> videos,
                           std::span<const AnnotationRecord> annotations,
                           Dataset::Clock::time_point created_at) {
  std::map<std::string, VideoRecord> by_id;
  for (const auto& v : videos) by_id.emplace(v.video_id, v);

  struct Accumulator {
    std::array<std::int64_t, kMetricCount> sums{};
    ApplicationSet applications;
    std::int64_t count = 0;
  };
  std::map<std::string, Accumulator> acc;
  std::vector<Diagnostic> diags;

  for (const auto& r : annotations) {
    if (!by_id.contains(r.video_id)) {
      diags.push_back({0, "video_id",
                       "annotation by '" + r.annotator_id + "' references unknown video '" +
                           r.video_id + "'"});
      continue;
    }
    auto& a = acc[r.video_id];
    for (auto m : kMetrics) a.sums[index_of(m)] += r.score(m);
    a.applications |= r.applications;
    ++a.count;
  }
  if (!diags.empty()) throw ValidationError(std::move(diags));

  std::map<std::string, PerceptionProfile> profiles;
  std::vector<std::string> unannotated;
  for (const auto& v : videos) {
    auto it = acc.find(v.video_id);
    if (it == acc.end()) {
      unannotated.push_back(v.video_id);
      continue;
    }
    PerceptionProfile p;
    p.video_id = v.video_id;
    for (auto m : kMetrics) p.means[index_of(m)] = Rational(it->second.sums[index_of(m)], it->second.count);
    p.applications = it->second.applications;
    p.annotator_count = it->second.count;
    profiles.emplace(v.video_id, std::move(p));
  }
  return Dataset(std::move(by_id), std::move(profiles), std::move(unannotated), created_at);
}

CategoryCounts count_categories(std::span<const VideoRecord> videos) {
  CategoryCounts c;
  for (const auto& v : videos) {
    switch (v.category) {
      case Category::A: ++c.count_a; break;
      case Category::B: ++c.count_b; break;
      case Category::C: ++c.count_c; break;
      case Category::D: ++c.count_d; break;
    }
  }
  c.total = c.count_a + c.count_b + c.count_c + c.count_d;
  return c;
}

DatasetStats dataset_stats(const Dataset& dataset) {
  if (dataset.profiles().empty()) throw EmptyDatasetError();
  std::vector<VideoRecord> all;
  all.reserve(dataset.videos().size());
  for (const auto& [_, v] : dataset.videos()) all.push_back(v);

  DatasetStats s;
  s.counts = count_categories(all);
  s.spoken = s.counts.count_a + s.counts.count_b;
  s.non_spoken = s.counts.count_c + s.counts.count_d;

  bool first = true;
  for (const auto& [_, p] : dataset.profiles()) {
    for (auto m : kMetrics) {
      auto& e = s.extents[index_of(m)];
      const auto& v = p.mean(m);
      if (first) {
        e = {v, v};
      } else {
        e.min = std::min(e.min, v);
        e.max = std::max(e.max, v);
      }
    }
    first = false;
  }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace percept
