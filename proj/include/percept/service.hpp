#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "percept/codec.hpp"
#include "percept/dataset.hpp"
#include "percept/session.hpp"
#include "percept/sus.hpp"

namespace httplib {
class Server;
}

namespace percept {

struct ServiceConfig {
  std::string manifest_path;
  std::string annotations_path;
  std::string session_log_path;
  std::string sus_path;  // optional; SUS responses are kept in memory only when empty
  std::string listen_address = "127.0.0.1:8080";
  std::int64_t page_size_default = 200;

  /// Throws std::invalid_argument describing the first bad field.
  void validate() const;
};

struct ListenAddress {
  std::string host;
  int port = 0;
};

/// Splits "host:port". Throws std::invalid_argument on malformed input.
ListenAddress parse_listen_address(const std::string& address);

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> params;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  Json body;
};

/// Transport-independent endpoint implementation. Safe for concurrent
/// handle() calls: the dataset is immutable and the session log and SUS store
/// serialise their own writes.
class RetrievalApi {
 public:
  RetrievalApi(std::shared_ptr<const Dataset> dataset, std::int64_t page_size_default);

  ApiResponse handle(const ApiRequest& request);

  SessionLog& session_log() { return log_; }
  const Dataset& dataset() const { return *dataset_; }

  /// Called with each accepted SUS response before it is stored.
  void set_sus_sink(std::function<void(const SusResponse&)> sink);
  std::vector<SusResponse> sus_responses() const;
  /// Adds previously persisted responses without calling the sink.
  void restore_sus(std::vector<SusResponse> responses);

 private:
  ApiResponse get_videos(const ApiRequest& r);
  ApiResponse post_query(const ApiRequest& r);
  ApiResponse get_bounds(const ApiRequest& r);
  ApiResponse get_stats(const ApiRequest& r);
  ApiResponse post_events(const ApiRequest& r);
  ApiResponse get_metrics(const ApiRequest& r);
  ApiResponse get_metrics_summary(const ApiRequest& r);
  ApiResponse post_sus(const ApiRequest& r);

  std::shared_ptr<const Dataset> dataset_;
  std::int64_t page_size_default_;
  SessionLog log_;

  mutable std::mutex sus_mu_;
  std::vector<SusResponse> sus_;
  std::function<void(const SusResponse&)> sus_sink_;
};

/// {"error": {"code": ..., "message": ...}}
Json error_body(std::string_view code, std::string_view message);

/// Loads the dataset from the configured files, replays any existing session
/// log, and wires synchronous persistence of new events and SUS responses.
/// Throws ValidationError / std::runtime_error on startup failure.
class RetrievalService {
 public:
  explicit RetrievalService(ServiceConfig config);
  ~RetrievalService();

  RetrievalService(const RetrievalService&) = delete;
  RetrievalService& operator=(const RetrievalService&) = delete;

  RetrievalApi& api() { return *api_; }
  const ServiceConfig& config() const { return config_; }

  /// Binds and serves in a background thread. Port 0 picks a free port.
  /// Returns the bound port; throws std::runtime_error if binding fails.
  int start();
  /// Binds and serves on the calling thread until stop().
  void run();
  void stop();

 private:
  void bind();

  ServiceConfig config_;
  std::unique_ptr<RetrievalApi> api_;
  std::unique_ptr<httplib::Server> server_;
  std::ofstream log_out_;
  std::ofstream sus_out_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace percept
