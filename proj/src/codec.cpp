#include "percept/codec.hpp"

#include <ctime>

namespace percept {
namespace {

const Json& require(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw DecodeError(std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const Json& j, const char* key) {
  const auto& v = require(j, key);
  if (!v.is_string()) throw DecodeError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::optional<std::string> optional_string(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw DecodeError(std::string("field '") + key + "' must be a string or null");
  return it->get<std::string>();
}

Rational decode_bound(const Json& j, const std::string& where) {
  if (!j.is_number()) throw DecodeError("'" + where + "' must be a number");
  try {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    return Rational::from_double(j.get<double>());
  } catch (const std::exception&) {
    throw DecodeError("'" + where + "' is not a representable number");
  }
}

Json encode_bound(const Rational& r) { return r.to_double(); }

Json application_list(const ApplicationSet& apps) {
  Json out = Json::array();
  for (auto a : apps.members()) out.push_back(std::string(to_string(a)));
  return out;
}

}  // namespace

double render_mean(const Rational& value) { return value.rounded(2); }

std::string format_timestamp(std::chrono::system_clock::time_point t) {
  std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json to_json(const VideoRecord& v) {
  return {{"video_id", v.video_id},
          {"title", v.title},
          {"url", v.url},
          {"category", std::string(to_string(v.category))},
          {"duration_seconds", v.duration_seconds},
          {"spoken", v.spoken}};
}

Json to_json(const PerceptionProfile& p) {
  Json j = {{"video_id", p.video_id}};
  for (auto m : kMetrics) j[std::string(to_string(m)) + "_mean"] = render_mean(p.mean(m));
  j["applications"] = application_list(p.applications);
  j["annotator_count"] = p.annotator_count;
  return j;
}

Json to_json(const CategoryCounts& c) {
  return {{"count_a", c.count_a}, {"count_b", c.count_b}, {"count_c", c.count_c},
          {"count_d", c.count_d}, {"total", c.total}};
}

Json to_json(const DatasetStats& s) {
  Json j = {{"counts", to_json(s.counts)}, {"spoken", s.spoken}, {"non_spoken", s.non_spoken}};
  Json extents = Json::object();
  for (auto m : kMetrics) {
    const auto& e = s.extents[index_of(m)];
    extents[std::string(to_string(m))] = {{"min", render_mean(e.min)}, {"max", render_mean(e.max)}};
  }
  j["extents"] = std::move(extents);
  return j;
}

Json export_dataset(const Dataset& dataset) {
  Json videos = Json::array();
  for (const auto& [_, v] : dataset.videos()) videos.push_back(to_json(v));
  Json profiles = Json::array();
  for (const auto& [_, p] : dataset.profiles()) profiles.push_back(to_json(p));
  return {{"created_at", format_timestamp(dataset.created_at())},
          {"videos", std::move(videos)},
          {"profiles", std::move(profiles)}};
}

Json to_json(const MetricRange& r) { return {{"lo", encode_bound(r.lo)}, {"hi", encode_bound(r.hi)}}; }

Json to_json(const QueryFilter& f) {
  Json j;
  j["application"] = f.application ? Json(std::string(to_string(*f.application))) : Json(nullptr);
  j["spoken"] = std::string(to_string(f.spoken));
  for (auto m : kMetrics) j[std::string(to_string(m))] = to_json(f.range(m));
  return j;
}

QueryFilter filter_from_json(const Json& j) {
  if (!j.is_object()) throw DecodeError("filter must be a JSON object");
  QueryFilter f = default_filter();
  if (auto app = optional_string(j, "application")) {
    auto parsed = parse_application(*app);
    if (!parsed) throw DecodeError("unknown application '" + *app + "'");
    f.application = parsed;
  }
  if (auto spoken = optional_string(j, "spoken")) {
    auto parsed = parse_spoken_filter(*spoken);
    if (!parsed) throw DecodeError("unknown spoken value '" + *spoken + "'");
    f.spoken = *parsed;
  }
  for (auto m : kMetrics) {
    std::string name(to_string(m));
    auto it = j.find(name);
    if (it == j.end() || it->is_null()) continue;
    if (!it->is_object()) throw DecodeError("'" + name + "' must be an object with lo and hi");
    auto& r = f.range(m);
    if (auto lo = it->find("lo"); lo != it->end()) r.lo = decode_bound(*lo, name + ".lo");
    if (auto hi = it->find("hi"); hi != it->end()) r.hi = decode_bound(*hi, name + ".hi");
  }
  try {
    validate(f);
  } catch (const DomainError& e) {
    throw DecodeError(e.what());
  }
  return f;
}

Json to_json(const MetricBounds& b) {
  Json j = {{"video_count", b.video_count}};
  for (auto m : kMetrics) {
    const auto& e = b.extent(m);
    j[std::string(to_string(m))] = {{"min", render_mean(e.min)}, {"max", render_mean(e.max)}};
  }
  return j;
}

Json to_json(const ResultItem& item) {
  return {{"video_id", item.video_id},
          {"title", item.title},
          {"category", std::string(to_string(item.category))},
          {"spoken", item.spoken},
          {"profile", to_json(item.profile)}};
}

Json to_json(const ResultList& results) {
  Json items = Json::array();
  for (const auto& i : results.items) items.push_back(to_json(i));
  return {{"total_matches", results.total_matches}, {"results", std::move(items)}};
}

Json to_json(const SessionEvent& e) {
  Json j = {{"session_id", e.session_id},
            {"timestamp_ms", e.timestamp_ms},
            {"kind", std::string(to_string(e.kind))}};
  if (e.video_id) j["video_id"] = *e.video_id;
  if (e.interface_mode) j["interface_mode"] = std::string(to_string(*e.interface_mode));
  return j;
}

SessionEvent event_from_json(const Json& j) {
  if (!j.is_object()) throw DecodeError("event must be a JSON object");
  SessionEvent e;
  e.session_id = require_string(j, "session_id");
  const auto& ts = require(j, "timestamp_ms");
  if (!ts.is_number_integer()) throw DecodeError("field 'timestamp_ms' must be an integer");
  if (ts.is_number_unsigned() && ts.get<std::uint64_t>() > std::uint64_t(INT64_MAX)) {
    throw DecodeError("field 'timestamp_ms' out of range");
  }
  e.timestamp_ms = ts.get<std::int64_t>();
  auto kind = require_string(j, "kind");
  auto parsed_kind = parse_event_kind(kind);
  if (!parsed_kind) throw DecodeError("unknown event kind '" + kind + "'");
  e.kind = *parsed_kind;
  e.video_id = optional_string(j, "video_id");
  if (auto mode = optional_string(j, "interface_mode")) {
    auto parsed = parse_interface_mode(*mode);
    if (!parsed) throw DecodeError("unknown interface_mode '" + *mode + "'");
    e.interface_mode = parsed;
  }
  try {
    validate_fields(e);
  } catch (const SessionError& err) {
    throw DecodeError(err.what());
  }
  return e;
}

Json to_json(const SessionMetrics& m) {
  Json j;
  j["session_id"] = m.session_id;
  j["interface_mode"] = m.interface_mode ? Json(std::string(to_string(*m.interface_mode))) : Json(nullptr);
  j["time_to_first_satisfactory_ms"] =
      m.time_to_first_satisfactory_ms ? Json(*m.time_to_first_satisfactory_ms) : Json(nullptr);
  j["satisfactory_intervals_ms"] = m.satisfactory_intervals_ms;
  j["videos_viewed"] = m.videos_viewed;
  j["videos_satisfactory"] = m.videos_satisfactory;
  j["satisfaction_ratio"] = m.satisfaction_ratio ? Json(m.satisfaction_ratio->to_double()) : Json(nullptr);
  return j;
}

Json to_json(const FieldSummary& s) {
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  return {{"count", s.count}, {"excluded", s.excluded}, {"mean", opt(s.mean)},
          {"min", opt(s.min)},  {"max", opt(s.max)}};
}

Json to_json(const StudySummary& s) {
  return {{"mode", std::string(to_string(s.mode))},
          {"session_count", s.session_count},
          {"time_to_first_satisfactory_ms", to_json(s.time_to_first_satisfactory_ms)},
          {"satisfactory_interval_ms", to_json(s.satisfactory_interval_ms)},
          {"videos_viewed", to_json(s.videos_viewed)},
          {"videos_satisfactory", to_json(s.videos_satisfactory)},
          {"satisfaction_ratio", to_json(s.satisfaction_ratio)}};
}

Json to_json(const SusResponse& r) {
  return {{"participant_id", r.participant_id}, {"items", r.items}};
}

SusResponse sus_from_json(const Json& j) {
  if (!j.is_object()) throw DecodeError("SUS response must be a JSON object");
  auto id = require_string(j, "participant_id");
  const auto& items = require(j, "items");
  if (!items.is_array()) throw DecodeError("field 'items' must be an array");
  std::vector<int> values;
  for (const auto& v : items) {
    if (!v.is_number_integer()) throw DecodeError("SUS items must be integers");
    auto x = v.get<std::int64_t>();
    if (x < INT32_MIN || x > INT32_MAX) throw DecodeError("SUS item out of range");
    values.push_back(static_cast<int>(x));
  }
  try {
    return make_sus_response(std::move(id), values);
  } catch (const SusError& e) {
    throw DecodeError(e.what());
  }
}

}  // namespace percept
