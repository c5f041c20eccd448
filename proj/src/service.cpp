#include "percept/service.hpp"

#include <charconv>
#include <filesystem>

#include <httplib.h>

namespace percept {
namespace {

ApiResponse ok(Json body) { return {200, std::move(body)}; }

ApiResponse fail(int status, std::string_view code, std::string_view message) {
  return {status, error_body(code, message)};
}

std::optional<std::int64_t> parse_non_negative(const std::string& s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || v < 0) return std::nullopt;
  return v;
}

// Reads an optional non-negative integer from a query parameter or JSON
// field. Throws DecodeError when present but malformed.
std::optional<std::int64_t> param_int(const ApiRequest& r, const char* name) {
  auto it = r.params.find(name);
  if (it == r.params.end()) return std::nullopt;
  auto v = parse_non_negative(it->second);
  if (!v) throw DecodeError(std::string("parameter '") + name + "' must be a non-negative integer");
  return v;
}

std::optional<std::int64_t> json_int(const Json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
    throw DecodeError(std::string("field '") + name + "' must be a non-negative integer");
  }
  return it->get<std::int64_t>();
}

Json parse_body(const std::string& body) {
  try {
    return Json::parse(body);
  } catch (const Json::parse_error&) {
    throw DecodeError("request body is not valid JSON");
  }
}

void apply_page(ResultList& results, std::int64_t offset, std::optional<std::int64_t> limit) {
  auto& items = results.items;
  auto begin = std::min<std::size_t>(static_cast<std::size_t>(offset), items.size());
  auto end = limit ? std::min<std::size_t>(begin + static_cast<std::size_t>(*limit), items.size()) : items.size();
  items = std::vector<ResultItem>(items.begin() + static_cast<std::ptrdiff_t>(begin),
                                  items.begin() + static_cast<std::ptrdiff_t>(end));
}

std::optional<InterfaceMode> parse_mode_param(std::string_view text) {
  if (text == "ui1") return InterfaceMode::ui1_keyword;
  if (text == "ui2") return InterfaceMode::ui2_content;
  return parse_interface_mode(text);
}

int status_for(SessionError::Code c) {
  switch (c) {
    case SessionError::Code::invalid_event: return 400;
    case SessionError::Code::timestamp_regression:
    case SessionError::Code::video_not_open: return 409;
    case SessionError::Code::unknown_session:
    case SessionError::Code::no_sessions: return 404;
  }
  return 500;
}

}  // namespace

Json error_body(std::string_view code, std::string_view message) {
  return {{"error", {{"code", std::string(code)}, {"message", std::string(message)}}}};
}

void ServiceConfig::validate() const {
  if (manifest_path.empty()) throw std::invalid_argument("manifest path must be set");
  if (annotations_path.empty()) throw std::invalid_argument("annotations path must be set");
  if (session_log_path.empty()) throw std::invalid_argument("session log path must be set");
  if (page_size_default < 1) throw std::invalid_argument("page size must be >= 1");
  parse_listen_address(listen_address);
}

ListenAddress parse_listen_address(const std::string& address) {
  auto colon = address.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    throw std::invalid_argument("listen address '" + address + "' must be host:port");
  }
  ListenAddress out;
  out.host = address.substr(0, colon);
  auto port_text = address.substr(colon + 1);
  auto port = parse_non_negative(port_text);
  if (!port || *port > 65535) throw std::invalid_argument("invalid port in '" + address + "'");
  out.port = static_cast<int>(*port);
  return out;
}

RetrievalApi::RetrievalApi(std::shared_ptr<const Dataset> dataset, std::int64_t page_size_default)
    : dataset_(std::move(dataset)), page_size_default_(page_size_default) {}

void RetrievalApi::set_sus_sink(std::function<void(const SusResponse&)> sink) {
  std::lock_guard lock(sus_mu_);
  sus_sink_ = std::move(sink);
}

std::vector<SusResponse> RetrievalApi::sus_responses() const {
  std::lock_guard lock(sus_mu_);
  return sus_;
}

ApiResponse RetrievalApi::handle(const ApiRequest& r) {
  struct Route {
    const char* method;
    const char* path;
    ApiResponse (RetrievalApi::*fn)(const ApiRequest&);
  };
  static constexpr Route kRoutes[] = {
      {"GET", "/videos", &RetrievalApi::get_videos},
      {"POST", "/query", &RetrievalApi::post_query},
      {"GET", "/bounds", &RetrievalApi::get_bounds},
      {"GET", "/stats", &RetrievalApi::get_stats},
      {"POST", "/events", &RetrievalApi::post_events},
      {"GET", "/metrics", &RetrievalApi::get_metrics},
      {"GET", "/metrics/summary", &RetrievalApi::get_metrics_summary},
      {"POST", "/sus", &RetrievalApi::post_sus},
  };

  bool path_known = false;
  for (const auto& route : kRoutes) {
    if (r.path != route.path) continue;
    path_known = true;
    if (r.method != route.method) continue;
    try {
      return (this->*route.fn)(r);
    } catch (const DecodeError& e) {
      return fail(400, "bad_request", e.what());
    } catch (const SessionError& e) {
      return fail(status_for(e.code()), to_string(e.code()), e.what());
    } catch (const std::exception& e) {
      return fail(500, "internal_error", e.what());
    }
  }
  if (path_known) return fail(405, "method_not_allowed", r.method + " not supported on " + r.path);
  return fail(404, "not_found", "no endpoint " + r.path);
}

ApiResponse RetrievalApi::get_videos(const ApiRequest& r) {
  auto offset = param_int(r, "offset").value_or(0);
  auto limit = param_int(r, "limit").value_or(page_size_default_);
  if (limit < 1) throw DecodeError("parameter 'limit' must be >= 1");

  const auto& videos = dataset_->videos();
  Json items = Json::array();
  std::int64_t index = 0;
  for (const auto& [id, v] : videos) {
    if (index++ < offset) continue;
    if (static_cast<std::int64_t>(items.size()) >= limit) break;
    Json item = to_json(v);
    const auto* p = dataset_->find_profile(id);
    item["profile"] = p ? to_json(*p) : Json(nullptr);
    items.push_back(std::move(item));
  }
  return ok({{"total", videos.size()}, {"offset", offset}, {"limit", limit}, {"videos", std::move(items)}});
}

ApiResponse RetrievalApi::post_query(const ApiRequest& r) {
  Json body = parse_body(r.body);
  if (!body.is_object()) throw DecodeError("request body must be a JSON object");

  std::string mode = "perceptual";
  if (auto it = body.find("mode"); it != body.end() && !it->is_null()) {
    if (!it->is_string()) throw DecodeError("field 'mode' must be a string");
    mode = it->get<std::string>();
  }
  std::string keyword;
  if (auto it = body.find("keyword"); it != body.end() && !it->is_null()) {
    if (!it->is_string()) throw DecodeError("field 'keyword' must be a string");
    keyword = it->get<std::string>();
  }
  auto offset = json_int(body, "offset").value_or(0);
  auto limit = json_int(body, "limit");
  QueryFilter filter = filter_from_json(body);

  ResultList results;
  if (mode == "perceptual") {
    results = execute_query(*dataset_, filter);
  } else if (mode == "ui1") {
    results = keyword_search(*dataset_, keyword);
  } else if (mode == "ui2") {
    results = content_search(*dataset_, keyword,
                             ContentFilter{filter.application, filter.spoken, filter.range(Metric::tingles)});
  } else {
    throw DecodeError("unknown mode '" + mode + "', expected perceptual, ui1 or ui2");
  }
  apply_page(results, offset, limit);
  Json out = to_json(results);
  out["mode"] = mode;
  return ok(std::move(out));
}

ApiResponse RetrievalApi::get_bounds(const ApiRequest& r) {
  auto it = r.params.find("application");
  if (it == r.params.end()) throw DecodeError("parameter 'application' is required");
  auto app = parse_application(it->second);
  if (!app) throw DecodeError("unknown application '" + it->second + "'");

  auto bounds = application_bounds(*dataset_, *app);
  if (!bounds) {
    Json body = error_body("no_videos_for_application",
                           "no videos carry application '" + it->second + "'");
    body["application"] = it->second;
    body["reset"] = to_json(default_filter());
    return {404, std::move(body)};
  }
  Json out = to_json(*bounds);
  out["application"] = it->second;
  Json slider = Json::object();
  auto rounded = round_outward(*bounds);
  for (auto m : kMetrics) {
    const auto& e = rounded.extent(m);
    slider[std::string(to_string(m))] = {{"min", e.min.to_double()}, {"max", e.max.to_double()}};
  }
  out["slider"] = std::move(slider);
  return ok(std::move(out));
}

ApiResponse RetrievalApi::get_stats(const ApiRequest&) {
  if (dataset_->profiles().empty()) return fail(404, "empty_dataset", "dataset has no profiled videos");
  Json out = to_json(dataset_stats(*dataset_));
  out["unannotated"] = dataset_->unannotated();
  return ok(std::move(out));
}

ApiResponse RetrievalApi::post_events(const ApiRequest& r) {
  SessionEvent event = event_from_json(parse_body(r.body));
  auto result = log_.append(event);
  return ok({{"status", result == SessionLog::AppendResult::appended ? "appended" : "duplicate"},
             {"session_id", event.session_id}});
}

ApiResponse RetrievalApi::get_metrics(const ApiRequest& r) {
  auto it = r.params.find("session_id");
  if (it == r.params.end() || it->second.empty()) throw DecodeError("parameter 'session_id' is required");
  return ok(to_json(compute_session_metrics(log_, it->second)));
}

ApiResponse RetrievalApi::get_metrics_summary(const ApiRequest& r) {
  auto it = r.params.find("mode");
  if (it == r.params.end()) throw DecodeError("parameter 'mode' is required");
  auto mode = parse_mode_param(it->second);
  if (!mode) throw DecodeError("unknown mode '" + it->second + "'");
  return ok(to_json(aggregate_study(log_, *mode)));
}

void RetrievalApi::restore_sus(std::vector<SusResponse> responses) {
  std::lock_guard lock(sus_mu_);
  sus_.insert(sus_.end(), responses.begin(), responses.end());
}

ApiResponse RetrievalApi::post_sus(const ApiRequest& r) {
  SusResponse response = sus_from_json(parse_body(r.body));
  double score = sus_score(response);
  std::lock_guard lock(sus_mu_);
  if (sus_sink_) sus_sink_(response);
  sus_.push_back(response);
  return ok({{"participant_id", response.participant_id},
             {"score", score},
             {"stored", true},
             {"response_count", sus_.size()},
             {"mean_score", sus_mean(sus_)}});
}

// ---------------------------------------------------------------------------

RetrievalService::RetrievalService(ServiceConfig config) : config_(std::move(config)) {
  config_.validate();
  auto videos = parse_video_manifest(read_file(config_.manifest_path));
  auto annotations = parse_annotations(read_file(config_.annotations_path));
  auto dataset = std::make_shared<const Dataset>(aggregate_profiles(videos, annotations));
  api_ = std::make_unique<RetrievalApi>(std::move(dataset), config_.page_size_default);

  namespace fs = std::filesystem;
  if (fs::exists(config_.session_log_path)) {
    for (const auto& e : parse_session_log(read_file(config_.session_log_path))) {
      api_->session_log().append(e);
    }
  }
  log_out_.open(config_.session_log_path, std::ios::app);
  if (!log_out_) throw std::runtime_error("cannot open session log '" + config_.session_log_path + "'");
  api_->session_log().set_sink([this](const SessionEvent& e) {
    log_out_ << serialize_event_line(e) << '\n';
    log_out_.flush();
    if (!log_out_) throw std::runtime_error("session log write failed");
  });

  if (!config_.sus_path.empty()) {
    bool fresh = !fs::exists(config_.sus_path) || fs::file_size(config_.sus_path) == 0;
    if (!fresh) api_->restore_sus(parse_sus_csv(read_file(config_.sus_path)));
    sus_out_.open(config_.sus_path, std::ios::app);
    if (!sus_out_) throw std::runtime_error("cannot open SUS file '" + config_.sus_path + "'");
    if (fresh) sus_out_ << kSusHeader << '\n' << std::flush;
    api_->set_sus_sink([this](const SusResponse& r) {
      auto text = serialize_sus_csv(std::span(&r, 1));
      sus_out_ << text.substr(text.find('\n') + 1);
      sus_out_.flush();
      if (!sus_out_) throw std::runtime_error("SUS file write failed");
    });
  }
}

RetrievalService::~RetrievalService() { stop(); }

void RetrievalService::bind() {
  server_ = std::make_unique<httplib::Server>();
  auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest r{req.method, req.path, {}, req.body};
    for (const auto& [k, v] : req.params) r.params.emplace(k, v);
    auto out = api_->handle(r);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  };
  server_->Get(".*", dispatch);
  server_->Post(".*", dispatch);

  auto addr = parse_listen_address(config_.listen_address);
  if (addr.port == 0) {
    port_ = server_->bind_to_any_port(addr.host);
    if (port_ < 0) throw std::runtime_error("cannot bind " + config_.listen_address);
  } else {
    if (!server_->bind_to_port(addr.host, addr.port)) {
      throw std::runtime_error("cannot bind " + config_.listen_address);
    }
    port_ = addr.port;
  }
}

int RetrievalService::start() {
  bind();
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void RetrievalService::run() {
  bind();
  server_->listen_after_bind();
}

void RetrievalService::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace percept
