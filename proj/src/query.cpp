#include "percept/query.hpp"

#include <algorithm>
#include <cctype>

namespace percept {
namespace {

bool canonical_before(const PerceptionProfile& a, const PerceptionProfile& b) {
  const auto& ta = a.mean(Metric::tingles);
  const auto& tb = b.mean(Metric::tingles);
  if (ta != tb) return ta > tb;
  return a.video_id < b.video_id;
}

bool spoken_matches(SpokenFilter f, bool spoken) {
  switch (f) {
    case SpokenFilter::any: return true;
    case SpokenFilter::spoken_only: return spoken;
    case SpokenFilter::non_spoken_only: return !spoken;
  }
  return false;
}

bool matches(const VideoRecord& v, const PerceptionProfile& p, const QueryFilter& f) {
  if (f.application && !p.applications.contains(*f.application)) return false;
  if (!spoken_matches(f.spoken, v.spoken)) return false;
  for (auto m : kMetrics) {
    if (!f.range(m).contains(p.mean(m))) return false;
  }
  return true;
}

bool matches(const VideoRecord& v, const PerceptionProfile& p, const ContentFilter& f) {
  if (f.application && !p.applications.contains(*f.application)) return false;
  if (!spoken_matches(f.spoken, v.spoken)) return false;
  return f.tingles.contains(p.mean(Metric::tingles));
}

ResultItem make_item(const VideoRecord& v, const PerceptionProfile& p) {
  return {v.video_id, v.title, v.category, v.spoken, p};
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::size_t count_token_hits(const std::vector<std::string>& tokens, const std::string& title_lower) {
  std::size_t hits = 0;
  for (const auto& t : tokens) {
    if (title_lower.find(t) != std::string::npos) ++hits;
  }
  return hits;
}

// Keyword match and ranking shared by both baselines. `accept` filters
// candidates before ranking.
template <typename Accept>
ResultList ranked_keyword_match(const Dataset& dataset, std::string_view query, Accept accept) {
  auto tokens = tokenize_query(query);
  struct Scored {
    std::size_t hits;
    const VideoRecord* video;
    const PerceptionProfile* profile;
  };
  std::vector<Scored> scored;
  for (const auto& [id, p] : dataset.profiles()) {
    const auto& v = dataset.videos().at(id);
    if (!accept(v, p)) continue;
    std::size_t hits = 0;
    if (!tokens.empty()) {
      hits = count_token_hits(tokens, lower(v.title));
      if (hits == 0) continue;
    }
    scored.push_back({hits, &v, &p});
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.hits != b.hits) return a.hits > b.hits;
    return canonical_before(*a.profile, *b.profile);
  });
  ResultList out;
  out.items.reserve(scored.size());
  for (const auto& s : scored) out.items.push_back(make_item(*s.video, *s.profile));
  out.total_matches = out.items.size();
  return out;
}

void check_in_scale(const Rational& v, std::string_view what) {
  if (v < kScaleMin || v > kScaleMax) {
    throw DomainError(std::string(what) + " value " + v.to_fixed(2) + " outside [1.0, 7.0]");
  }
}

void check_range(const MetricRange& r, std::string_view metric) {
  check_in_scale(r.lo, metric);
  check_in_scale(r.hi, metric);
  if (r.lo > r.hi) {
    throw DomainError(std::string(metric) + " range inverted: lo " + r.lo.to_fixed(2) + " > hi " +
                      r.hi.to_fixed(2));
  }
}

}  // namespace

std::string_view to_string(SpokenFilter s) {
  switch (s) {
    case SpokenFilter::any: return "any";
    case SpokenFilter::spoken_only: return "spoken_only";
    case SpokenFilter::non_spoken_only: return "non_spoken_only";
  }
  return "?";
}

std::optional<SpokenFilter> parse_spoken_filter(std::string_view text) {
  if (text == "any") return SpokenFilter::any;
  if (text == "spoken_only") return SpokenFilter::spoken_only;
  if (text == "non_spoken_only") return SpokenFilter::non_spoken_only;
  return std::nullopt;
}

std::vector<std::string> ResultList::ids() const {
  std::vector<std::string> out;
  out.reserve(items.size());
  for (const auto& i : items) out.push_back(i.video_id);
  return out;
}

void validate(const QueryFilter& filter) {
  for (auto m : kMetrics) check_range(filter.range(m), to_string(m));
}

void validate(const ContentFilter& filter) { check_range(filter.tingles, "tingles"); }

QueryFilter default_filter() { return QueryFilter{}; }

ResultList execute_query(const Dataset& dataset, const QueryFilter& filter) {
  std::vector<const PerceptionProfile*> hits;
  for (const auto& [id, p] : dataset.profiles()) {
    if (matches(dataset.videos().at(id), p, filter)) hits.push_back(&p);
  }
  std::sort(hits.begin(), hits.end(),
            [](const PerceptionProfile* a, const PerceptionProfile* b) { return canonical_before(*a, *b); });
  ResultList out;
  out.items.reserve(hits.size());
  for (const auto* p : hits) out.items.push_back(make_item(dataset.videos().at(p->video_id), *p));
  out.total_matches = out.items.size();
  return out;
}

std::optional<MetricBounds> application_bounds(const Dataset& dataset, Application application) {
  MetricBounds b;
  for (const auto& [_, p] : dataset.profiles()) {
    if (!p.applications.contains(application)) continue;
    for (auto m : kMetrics) {
      auto& e = b.extents[index_of(m)];
      const auto& v = p.mean(m);
      if (b.video_count == 0) {
        e = {v, v};
      } else {
        e.min = std::min(e.min, v);
        e.max = std::max(e.max, v);
      }
    }
    ++b.video_count;
  }
  if (b.video_count == 0) return std::nullopt;
  return b;
}

QueryFilter clamp_filter_to_bounds(QueryFilter filter, const MetricBounds& bounds) {
  for (auto m : kMetrics) {
    const auto& e = bounds.extent(m);
    filter.range(m) = {e.min, e.max};
  }
  return filter;
}

MetricBounds round_outward(const MetricBounds& bounds, std::int64_t steps_per_unit) {
  MetricBounds out = bounds;
  for (auto& e : out.extents) {
    e.min = std::max(kScaleMin, e.min.floor_to(steps_per_unit));
    e.max = std::min(kScaleMax, e.max.ceil_to(steps_per_unit));
  }
  return out;
}

MetricRange normalize_range(const Rational& lo, const Rational& hi, Handle moving) {
  check_in_scale(lo, "lo");
  check_in_scale(hi, "hi");
  if (lo <= hi) return {lo, hi};
  return moving == Handle::left ? MetricRange{hi, hi} : MetricRange{lo, lo};
}

std::vector<std::string> tokenize_query(std::string_view query) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < query.size()) {
    while (i < query.size() && std::isspace(static_cast<unsigned char>(query[i]))) ++i;
    std::size_t start = i;
    while (i < query.size() && !std::isspace(static_cast<unsigned char>(query[i]))) ++i;
    if (i > start) {
      auto t = lower(query.substr(start, i - start));
      if (std::find(tokens.begin(), tokens.end(), t) == tokens.end()) tokens.push_back(std::move(t));
    }
  }
  return tokens;
}

ResultList keyword_search(const Dataset& dataset, std::string_view query) {
  return ranked_keyword_match(dataset, query, [](const VideoRecord&, const PerceptionProfile&) { return true; });
}

ResultList content_search(const Dataset& dataset, std::string_view query,
                          const ContentFilter& content_filter) {
  return ranked_keyword_match(dataset, query,
                              [&](const VideoRecord& v, const PerceptionProfile& p) {
                                return matches(v, p, content_filter);
                              });
}

}  // namespace percept
