#include "service_cases.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

namespace percept::testing {

namespace {

ApiRequest get(std::string path, std::map<std::string, std::string> params = {}) {
  return {"GET", std::move(path), std::move(params), ""};
}

ApiRequest post(std::string path, std::string body) { return {"POST", std::move(path), {}, std::move(body)}; }

std::string check_profile(const Json& p) {
  if (!p.is_object() || !p["video_id"].is_string()) return "profile without video_id";
  for (auto m : kMetrics) {
    const auto& v = p[std::string(to_string(m)) + "_mean"];
    if (!v.is_number()) return "profile missing " + std::string(to_string(m)) + "_mean";
    if (v.get<double>() < 1.0 || v.get<double>() > 7.0) return "mean outside [1, 7]";
  }
  if (!p["applications"].is_array()) return "applications not an array";
  if (!p["annotator_count"].is_number_integer()) return "annotator_count not an integer";
  return {};
}

std::string check_results(const Json& j) {
  if (!j["total_matches"].is_number_integer()) return "total_matches missing";
  if (!j["results"].is_array()) return "results not an array";
  std::set<std::string> seen;
  double last = 8.0;
  for (const auto& item : j["results"]) {
    for (const char* k : {"video_id", "title", "category"}) {
      if (!item[k].is_string()) return std::string("result missing ") + k;
    }
    if (!item["spoken"].is_boolean()) return "result spoken not boolean";
    if (auto e = check_profile(item["profile"]); !e.empty()) return e;
    if (!seen.insert(item["video_id"].get<std::string>()).second) return "duplicate result";
    if (j.value("mode", "perceptual") == "perceptual") {
      double t = item["profile"]["tingles_mean"].get<double>();
      if (t > last) return "results not in canonical order";
      last = t;
    }
  }
  return {};
}

std::string check_extents(const Json& j) {
  for (auto m : kMetrics) {
    const auto& e = j[std::string(to_string(m))];
    if (!e.is_object() || !e["min"].is_number() || !e["max"].is_number()) return "extent missing";
    if (e["min"].get<double>() > e["max"].get<double>()) return "extent min > max";
  }
  return {};
}

std::string check_summary_field(const Json& f) {
  if (!f.is_object() || !f["count"].is_number_integer() || !f["excluded"].is_number_integer()) {
    return "summary field missing counts";
  }
  for (const char* k : {"mean", "min", "max"}) {
    if (!f[k].is_null() && !f[k].is_number()) return std::string("summary ") + k + " not a number";
  }
  return {};
}

}  // namespace

std::shared_ptr<const Dataset> small_fixture_dataset() {
  auto videos = parse_video_manifest(read_file(PERCEPT_FIXTURE_DIR "/small_manifest.csv"));
  auto anns = parse_annotations(read_file(PERCEPT_FIXTURE_DIR "/small_annotations.csv"));
  return std::make_shared<const Dataset>(
      aggregate_profiles(videos, anns, std::chrono::system_clock::time_point{}));
}

std::vector<GoldenCase> golden_sequence() {
  return {
      {"videos_default", get("/videos")},
      {"videos_page2", get("/videos", {{"offset", "5"}, {"limit", "10"}})},
      {"stats", get("/stats")},
      {"query_default", post("/query", "{}")},
      {"query_perceptual", post("/query", R"({"mode": "perceptual", "application": "relaxation",
          "spoken": "non_spoken_only", "calmness": {"lo": 5.0, "hi": 7.0}})")},
      {"query_paged", post("/query", R"({"offset": 1, "limit": 2})")},
      {"query_ui1", post("/query", R"({"mode": "ui1", "keyword": "slime tapping", "calmness": {"lo": 7, "hi": 7}})")},
      {"query_ui2", post("/query", R"({"mode": "ui2", "keyword": "", "application": "relaxation",
          "tingles": {"lo": 5, "hi": 7}, "calmness": {"lo": 7, "hi": 7}})")},
      {"query_malformed", post("/query", R"({"stress": {"lo": 0}})")},
      {"bounds_sleep", get("/bounds", {{"application", "sleep"}})},
      {"bounds_none", get("/bounds", {{"application", "companionship"}})},
      {"events_query", post("/events", R"({"session_id":"s2","timestamp_ms":0,"kind":"query_issued","interface_mode":"perceptual"})")},
      {"events_open_v1", post("/events", R"({"session_id":"s2","timestamp_ms":5000,"kind":"video_opened","video_id":"v1"})")},
      {"events_close_v1", post("/events", R"({"session_id":"s2","timestamp_ms":20000,"kind":"video_closed","video_id":"v1"})")},
      {"events_open_v2", post("/events", R"({"session_id":"s2","timestamp_ms":25000,"kind":"video_opened","video_id":"v2"})")},
      {"events_mark_v2", post("/events", R"({"session_id":"s2","timestamp_ms":40000,"kind":"marked_satisfactory","video_id":"v2"})")},
      {"events_duplicate", post("/events", R"({"session_id":"s2","timestamp_ms":40000,"kind":"marked_satisfactory","video_id":"v2"})")},
      {"events_open_v3", post("/events", R"({"session_id":"s2","timestamp_ms":60000,"kind":"video_opened","video_id":"v3"})")},
      {"events_mark_v3", post("/events", R"({"session_id":"s2","timestamp_ms":90000,"kind":"marked_satisfactory","video_id":"v3"})")},
      {"events_regression", post("/events", R"({"session_id":"s2","timestamp_ms":100,"kind":"video_opened","video_id":"v9"})")},
      {"events_not_open", post("/events", R"({"session_id":"s3","timestamp_ms":1,"kind":"marked_satisfactory","video_id":"v9"})")},
      {"events_malformed", post("/events", R"({"session_id":"s3","timestamp_ms":"soon","kind":"query_issued"})")},
      {"metrics_s2", get("/metrics", {{"session_id", "s2"}})},
      {"metrics_unknown", get("/metrics", {{"session_id", "nope"}})},
      {"metrics_summary_perceptual", get("/metrics/summary", {{"mode", "perceptual"}})},
      {"metrics_summary_empty", get("/metrics/summary", {{"mode", "ui1"}})},
      {"sus_stored", post("/sus", R"({"participant_id":"u1","items":[4,2,4,2,4,2,4,2,4,2]})")},
      {"sus_second", post("/sus", R"({"participant_id":"u6","items":[4,2,4,4,4,2,4,2,3,2]})")},
      {"sus_malformed", post("/sus", R"({"participant_id":"u1","items":[4,2,4]})")},
      {"not_found", get("/nope")},
      {"wrong_method", get("/query")},
  };
}

std::vector<ApiRequest> malformed_requests() {
  return {
      get("/videos", {{"limit", "abc"}}),
      get("/videos", {{"offset", "-1"}}),
      get("/videos", {{"limit", "0"}}),
      post("/query", "{not json"),
      post("/query", "[1,2]"),
      post("/query", R"({"mode": "ui3"})"),
      post("/query", R"({"tingles": {"lo": 6, "hi": 2}})"),
      post("/query", R"({"tingles": {"lo": 0.5}})"),
      post("/query", R"({"application": "gaming"})"),
      post("/query", R"({"keyword": 5, "mode": "ui1"})"),
      post("/query", R"({"limit": -3})"),
      get("/bounds"),
      get("/bounds", {{"application", "gaming"}}),
      post("/events", "garbage"),
      post("/events", R"({"session_id":"s3","kind":"query_issued"})"),
      post("/events", R"({"session_id":"s3","timestamp_ms":1,"kind":"query_issued"})"),
      post("/events", R"({"session_id":"s3","timestamp_ms":1,"kind":"teleported"})"),
      get("/metrics"),
      get("/metrics/summary"),
      get("/metrics/summary", {{"mode", "bogus"}}),
      post("/sus", ""),
      post("/sus", R"({"participant_id":"u1","items":[4,2,4,2,4,2,4,2,4,6]})"),
      post("/sus", R"({"items":[4,2,4,2,4,2,4,2,4,2]})"),
  };
}

std::vector<ApiRequest> read_requests() {
  return {
      post("/query", R"({"application":"sleep","tingles":{"lo":2,"hi":5}})"),
      post("/query", R"({"mode":"ui1","keyword":"slime rain"})"),
      post("/query", R"({"mode":"ui2","keyword":"slime","spoken":"non_spoken_only"})"),
      get("/bounds", {{"application", "relaxation"}}),
      get("/bounds", {{"application", "sleep"}}),
      get("/bounds", {{"application", "companionship"}}),
  };
}

std::string schema_violation(const ApiRequest& request, const ApiResponse& r) {
  const Json& b = r.body;
  if (!b.is_object()) return "body is not an object";
  if (r.status != 200) {
    if (!b.contains("error") || !b["error"]["code"].is_string() || !b["error"]["message"].is_string()) {
      return "error response without {error: {code, message}}";
    }
    if (request.path == "/bounds" && r.status == 404 && !b["reset"].is_object()) return "no reset filter";
    return {};
  }
  const std::string& p = request.path;
  if (p == "/videos") {
    if (!b["total"].is_number_integer() || !b["videos"].is_array()) return "videos page shape";
    for (const auto& v : b["videos"]) {
      for (const char* k : {"video_id", "title", "url", "category"}) {
        if (!v[k].is_string()) return std::string("video missing ") + k;
      }
      if (!v["profile"].is_null()) {
        if (auto e = check_profile(v["profile"]); !e.empty()) return e;
      }
    }
    return {};
  }
  if (p == "/query") return check_results(b);
  if (p == "/bounds") {
    if (!b["video_count"].is_number_integer() || !b["application"].is_string()) return "bounds header";
    if (auto e = check_extents(b); !e.empty()) return e;
    if (auto e = check_extents(b["slider"]); !e.empty()) return "slider " + e;
    for (auto m : kMetrics) {
      const auto& e = b[std::string(to_string(m))];
      const auto& s = b["slider"][std::string(to_string(m))];
      if (s["min"].get<double>() > e["min"].get<double>() || s["max"].get<double>() < e["max"].get<double>()) {
        return "slider does not contain bounds";
      }
    }
    return {};
  }
  if (p == "/stats") {
    if (!b["counts"]["total"].is_number_integer() || !b["spoken"].is_number_integer()) return "stats counts";
    return check_extents(b["extents"]);
  }
  if (p == "/events") {
    if (b["status"] != "appended" && b["status"] != "duplicate") return "event status";
    return {};
  }
  if (p == "/metrics") {
    if (!b["session_id"].is_string()) return "metrics session_id";
    for (const char* k : {"videos_viewed", "videos_satisfactory"}) {
      if (!b[k].is_number_integer()) return std::string("metrics ") + k;
    }
    if (!b["satisfactory_intervals_ms"].is_array()) return "metrics intervals";
    return {};
  }
  if (p == "/metrics/summary") {
    if (!b["session_count"].is_number_integer()) return "summary session_count";
    for (const char* k : {"time_to_first_satisfactory_ms", "satisfactory_interval_ms", "videos_viewed",
                          "videos_satisfactory", "satisfaction_ratio"}) {
      if (auto e = check_summary_field(b[k]); !e.empty()) return e;
    }
    return {};
  }
  if (p == "/sus") {
    if (!b["score"].is_number() || !b["mean_score"].is_number()) return "sus score";
    return {};
  }
  return "unexpected 200 for " + p;
}

std::string golden_mismatch(const std::string& name, const ApiResponse& response) {
  Json actual = {{"status", response.status}, {"body", response.body}};
  std::string path = std::string(PERCEPT_GOLDEN_DIR) + "/" + name + ".json";
  if (std::getenv("PERCEPT_UPDATE_GOLDEN")) {
    std::ofstream(path) << actual.dump(2) << '\n';
    return {};
  }
  if (!std::filesystem::exists(path)) return "missing golden file " + path;
  Json expected = Json::parse(read_file(path));
  if (expected != actual) return name + ": expected " + expected.dump() + ", got " + actual.dump();
  return {};
}

}  // namespace percept::testing
