#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "percept/rational.hpp"

namespace percept {

enum class EventKind { query_issued, video_opened, video_closed, marked_satisfactory };

enum class InterfaceMode { ui1_keyword, ui2_content, perceptual };

inline constexpr std::array<InterfaceMode, 3> kInterfaceModes = {
    InterfaceMode::ui1_keyword, InterfaceMode::ui2_content, InterfaceMode::perceptual};

std::string_view to_string(EventKind k);
std::string_view to_string(InterfaceMode m);
std::optional<EventKind> parse_event_kind(std::string_view text);
std::optional<InterfaceMode> parse_interface_mode(std::string_view text);

/// One entry of a retrieval session. Timestamps are client-reported
/// milliseconds since the session epoch.
struct SessionEvent {
  std::string session_id;
  std::int64_t timestamp_ms = 0;
  EventKind kind = EventKind::query_issued;
  std::optional<std::string> video_id;
  std::optional<InterfaceMode> interface_mode;

  friend bool operator==(const SessionEvent&, const SessionEvent&) = default;
};

class SessionError : public std::runtime_error {
 public:
  enum class Code {
    invalid_event,         // missing/ill-typed fields
    timestamp_regression,  // earlier than the session's last event
    video_not_open,        // close or mark for a video that is not open
    unknown_session,
    no_sessions,           // aggregate over a mode with no sessions
  };

  SessionError(Code code, const std::string& message) : std::runtime_error(message), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

std::string_view to_string(SessionError::Code c);

/// Throws SessionError(invalid_event) if required fields are missing.
void validate_fields(const SessionEvent& event);

/// Append-only, thread-safe event log with per-session ordering checks.
///
/// An event whose (session_id, timestamp_ms, kind, video_id) tuple was already
/// accepted is absorbed as a duplicate. An optional sink runs under the log
/// lock after validation and before the event is committed; if the sink
/// throws, the event is not recorded.
class SessionLog {
 public:
  enum class AppendResult { appended, duplicate };
  using Sink = std::function<void(const SessionEvent&)>;

  SessionLog() = default;
  SessionLog(const SessionLog& other);
  SessionLog& operator=(const SessionLog& other);

  void set_sink(Sink sink);

  AppendResult append(const SessionEvent& event);

  /// Events for one session in append order; empty if unknown.
  std::vector<SessionEvent> events(std::string_view session_id) const;
  /// Every accepted event in global append order.
  std::vector<SessionEvent> all_events() const;
  std::vector<std::string> session_ids() const;
  bool has_session(std::string_view session_id) const;
  std::size_t size() const;

 private:
  using Key = std::tuple<std::int64_t, EventKind, std::string>;
  struct SessionState {
    std::int64_t last_timestamp = 0;
    std::set<std::string, std::less<>> open_videos;
    std::set<Key> seen;
  };

  mutable std::mutex mu_;
  std::map<std::string, SessionState, std::less<>> sessions_;
  std::vector<SessionEvent> events_;
  Sink sink_;
};

struct SessionMetrics {
  std::string session_id;
  std::optional<InterfaceMode> interface_mode;
  std::optional<std::int64_t> time_to_first_satisfactory_ms;
  std::vector<std::int64_t> satisfactory_intervals_ms;
  std::int64_t videos_viewed = 0;
  std::int64_t videos_satisfactory = 0;
  std::optional<Rational> satisfaction_ratio;  // absent when nothing was viewed

  friend bool operator==(const SessionMetrics&, const SessionMetrics&) = default;
};

/// Derives the study quantities for one session from its events. Throws
/// SessionError(unknown_session) if the session has no events.
SessionMetrics compute_session_metrics(std::span<const SessionEvent> events, std::string_view session_id);
SessionMetrics compute_session_metrics(const SessionLog& log, std::string_view session_id);

struct FieldSummary {
  std::int64_t count = 0;     // observations contributing
  std::int64_t excluded = 0;  // sessions lacking the quantity
  std::optional<double> mean;
  std::optional<double> min;
  std::optional<double> max;
};

struct StudySummary {
  InterfaceMode mode = InterfaceMode::perceptual;
  std::int64_t session_count = 0;
  FieldSummary time_to_first_satisfactory_ms;
  FieldSummary satisfactory_interval_ms;  // pooled over all intervals
  FieldSummary videos_viewed;
  FieldSummary videos_satisfactory;
  FieldSummary satisfaction_ratio;
};

/// Summarises every session whose interface mode is `mode`. Throws
/// SessionError(no_sessions) if there are none.
StudySummary aggregate_study(const SessionLog& log, InterfaceMode mode);
StudySummary aggregate_study(std::span<const SessionMetrics> sessions, InterfaceMode mode);

/// Newline-delimited JSON, one event per line.
std::string serialize_event_line(const SessionEvent& event);
std::vector<SessionEvent> parse_session_log(std::string_view text);

/// Replays events through a fresh log, enforcing every ordering rule.
SessionLog replay(std::span<const SessionEvent> events);

}  // namespace percept
