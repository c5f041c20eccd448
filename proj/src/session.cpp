#include "percept/session.hpp"

#include <algorithm>
#include <limits>

#include "csv.hpp"
#include "percept/codec.hpp"

namespace percept {
namespace {

bool needs_video(EventKind k) { return k != EventKind::query_issued; }

std::string describe(const SessionEvent& e) {
  std::string out = std::string(to_string(e.kind)) + "@" + std::to_string(e.timestamp_ms);
  if (e.video_id) out += " (" + *e.video_id + ")";
  return out;
}

FieldSummary summarize(const std::vector<double>& values, std::int64_t excluded) {
  FieldSummary s;
  s.count = static_cast<std::int64_t>(values.size());
  s.excluded = excluded;
  if (values.empty()) return s;
  double total = 0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(values.size());
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  return s;
}

}  // namespace

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::query_issued: return "query_issued";
    case EventKind::video_opened: return "video_opened";
    case EventKind::video_closed: return "video_closed";
    case EventKind::marked_satisfactory: return "marked_satisfactory";
  }
  return "?";
}

std::string_view to_string(InterfaceMode m) {
  switch (m) {
    case InterfaceMode::ui1_keyword: return "ui1_keyword";
    case InterfaceMode::ui2_content: return "ui2_content";
    case InterfaceMode::perceptual: return "perceptual";
  }
  return "?";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
  for (auto k : {EventKind::query_issued, EventKind::video_opened, EventKind::video_closed,
                 EventKind::marked_satisfactory}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::optional<InterfaceMode> parse_interface_mode(std::string_view text) {
  for (auto m : kInterfaceModes) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

std::string_view to_string(SessionError::Code c) {
  switch (c) {
    case SessionError::Code::invalid_event: return "invalid_event";
    case SessionError::Code::timestamp_regression: return "timestamp_regression";
    case SessionError::Code::video_not_open: return "video_not_open";
    case SessionError::Code::unknown_session: return "unknown_session";
    case SessionError::Code::no_sessions: return "no_sessions";
  }
  return "?";
}

void validate_fields(const SessionEvent& e) {
  using Code = SessionError::Code;
  if (e.session_id.empty()) throw SessionError(Code::invalid_event, "session_id must be non-empty");
  if (e.timestamp_ms < 0) throw SessionError(Code::invalid_event, "timestamp_ms must be non-negative");
  if (needs_video(e.kind) && (!e.video_id || e.video_id->empty())) {
    throw SessionError(Code::invalid_event, std::string(to_string(e.kind)) + " requires video_id");
  }
  if (e.kind == EventKind::query_issued && !e.interface_mode) {
    throw SessionError(Code::invalid_event, "query_issued requires interface_mode");
  }
}

SessionLog::SessionLog(const SessionLog& other) {
  std::lock_guard lock(other.mu_);
  sessions_ = other.sessions_;
  events_ = other.events_;
}

SessionLog& SessionLog::operator=(const SessionLog& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mu_, other.mu_);
  sessions_ = other.sessions_;
  events_ = other.events_;
  return *this;
}

void SessionLog::set_sink(Sink sink) {
  std::lock_guard lock(mu_);
  sink_ = std::move(sink);
}

SessionLog::AppendResult SessionLog::append(const SessionEvent& event) {
  using Code = SessionError::Code;
  validate_fields(event);

  std::lock_guard lock(mu_);
  auto it = sessions_.find(event.session_id);
  SessionState next = it == sessions_.end() ? SessionState{} : it->second;
  bool fresh = it == sessions_.end();

  Key key{event.timestamp_ms, event.kind, event.video_id.value_or("")};
  if (next.seen.contains(key)) return AppendResult::duplicate;

  if (!fresh && event.timestamp_ms < next.last_timestamp) {
    throw SessionError(Code::timestamp_regression,
                       "session '" + event.session_id + "': " + describe(event) +
                           " is earlier than the previous event at " +
                           std::to_string(next.last_timestamp));
  }
  switch (event.kind) {
    case EventKind::query_issued:
      break;
    case EventKind::video_opened:
      next.open_videos.insert(*event.video_id);
      break;
    case EventKind::video_closed:
      if (next.open_videos.erase(*event.video_id) == 0) {
        throw SessionError(Code::video_not_open, "session '" + event.session_id + "': " +
                                                     describe(event) + " closes a video that is not open");
      }
      break;
    case EventKind::marked_satisfactory:
      if (!next.open_videos.contains(*event.video_id)) {
        throw SessionError(Code::video_not_open, "session '" + event.session_id + "': " +
                                                     describe(event) + " marks a video that is not open");
      }
      break;
  }
  next.last_timestamp = event.timestamp_ms;
  next.seen.insert(std::move(key));

  if (sink_) sink_(event);

  if (fresh) sessions_.emplace(event.session_id, std::move(next));
  else it->second = std::move(next);
  events_.push_back(event);
  return AppendResult::appended;
}

std::vector<SessionEvent> SessionLog::events(std::string_view session_id) const {
  std::lock_guard lock(mu_);
  std::vector<SessionEvent> out;
  for (const auto& e : events_) {
    if (e.session_id == session_id) out.push_back(e);
  }
  return out;
}

std::vector<SessionEvent> SessionLog::all_events() const {
  std::lock_guard lock(mu_);
  return events_;
}

std::vector<std::string> SessionLog::session_ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

bool SessionLog::has_session(std::string_view session_id) const {
  std::lock_guard lock(mu_);
  return sessions_.find(session_id) != sessions_.end();
}

std::size_t SessionLog::size() const {
  std::lock_guard lock(mu_);
  return events_.size();
}

SessionMetrics compute_session_metrics(std::span<const SessionEvent> events, std::string_view session_id) {
  SessionMetrics m;
  m.session_id = std::string(session_id);

  std::optional<std::int64_t> first_query;
  std::set<std::string, std::less<>> viewed;
  std::set<std::string, std::less<>> satisfied;
  std::vector<std::int64_t> marks;  // first mark of each distinct video
  bool any = false;

  for (const auto& e : events) {
    if (e.session_id != session_id) continue;
    any = true;
    switch (e.kind) {
      case EventKind::query_issued:
        if (!first_query) {
          first_query = e.timestamp_ms;
          m.interface_mode = e.interface_mode;
        }
        break;
      case EventKind::video_opened:
        viewed.insert(*e.video_id);
        break;
      case EventKind::video_closed:
        break;
      case EventKind::marked_satisfactory:
        if (satisfied.insert(*e.video_id).second) marks.push_back(e.timestamp_ms);
        break;
    }
    // Anchored at the first query seen before the first mark, else at the
    // session epoch.
    if (marks.size() == 1 && !m.time_to_first_satisfactory_ms) {
      m.time_to_first_satisfactory_ms = marks.front() - first_query.value_or(0);
    }
  }
  if (!any) {
    throw SessionError(SessionError::Code::unknown_session,
                       "unknown session '" + std::string(session_id) + "'");
  }

  for (std::size_t i = 1; i < marks.size(); ++i) m.satisfactory_intervals_ms.push_back(marks[i] - marks[i - 1]);
  m.videos_viewed = static_cast<std::int64_t>(viewed.size());
  m.videos_satisfactory = static_cast<std::int64_t>(satisfied.size());
  if (m.videos_viewed > 0) m.satisfaction_ratio = Rational(m.videos_satisfactory, m.videos_viewed);
  return m;
}

SessionMetrics compute_session_metrics(const SessionLog& log, std::string_view session_id) {
  auto events = log.events(session_id);
  return compute_session_metrics(events, session_id);
}

StudySummary aggregate_study(std::span<const SessionMetrics> sessions, InterfaceMode mode) {
  StudySummary s;
  s.mode = mode;
  std::vector<double> ttf, intervals, viewed, satisfactory, ratio;
  std::int64_t ttf_missing = 0, interval_missing = 0, ratio_missing = 0;

  for (const auto& m : sessions) {
    if (m.interface_mode != mode) continue;
    ++s.session_count;
    if (m.time_to_first_satisfactory_ms) ttf.push_back(static_cast<double>(*m.time_to_first_satisfactory_ms));
    else ++ttf_missing;
    if (m.satisfactory_intervals_ms.empty()) ++interval_missing;
    for (auto v : m.satisfactory_intervals_ms) intervals.push_back(static_cast<double>(v));
    viewed.push_back(static_cast<double>(m.videos_viewed));
    satisfactory.push_back(static_cast<double>(m.videos_satisfactory));
    if (m.satisfaction_ratio) ratio.push_back(m.satisfaction_ratio->to_double());
    else ++ratio_missing;
  }
  if (s.session_count == 0) {
    throw SessionError(SessionError::Code::no_sessions,
                       "no sessions for mode '" + std::string(to_string(mode)) + "'");
  }
  s.time_to_first_satisfactory_ms = summarize(ttf, ttf_missing);
  s.satisfactory_interval_ms = summarize(intervals, interval_missing);
  s.videos_viewed = summarize(viewed, 0);
  s.videos_satisfactory = summarize(satisfactory, 0);
  s.satisfaction_ratio = summarize(ratio, ratio_missing);
  return s;
}

StudySummary aggregate_study(const SessionLog& log, InterfaceMode mode) {
  auto events = log.all_events();
  std::vector<SessionMetrics> metrics;
  for (const auto& id : log.session_ids()) metrics.push_back(compute_session_metrics(events, id));
  return aggregate_study(metrics, mode);
}

std::string serialize_event_line(const SessionEvent& event) { return to_json(event).dump(); }

std::vector<SessionEvent> parse_session_log(std::string_view text) {
  std::vector<SessionEvent> out;
  for (const auto& line : csv::split_lines(text)) {
    auto where = "line " + std::to_string(line.number) + ": ";
    Json j;
    try {
      j = Json::parse(line.text);
    } catch (const Json::parse_error& e) {
      throw DecodeError(where + "invalid JSON");
    }
    try {
      out.push_back(event_from_json(j));
    } catch (const DecodeError& e) {
      throw DecodeError(where + e.what());
    }
  }
  return out;
}

SessionLog replay(std::span<const SessionEvent> events) {
  SessionLog log;
  for (const auto& e : events) log.append(e);
  return log;
}

}  // namespace percept
