// percept: command-line front end for the perceptual retrieval service.
//
//   percept validate --manifest M --annotations A
//   percept ingest   --manifest M --annotations A [--out dataset.json|-]
//   percept serve    --manifest M --annotations A --log events.ndjson [--listen host:port]
//   percept report   [--log events.ndjson] [--sus sus.csv]
//
// Every path flag also reads a PERCEPT_* environment variable.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "percept/codec.hpp"
#include "percept/dataset.hpp"
#include "percept/service.hpp"
#include "percept/session.hpp"
#include "percept/sus.hpp"

namespace {

using namespace percept;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUsage = 2;

void print_diagnostics(const char* file, const ValidationError& e) {
  for (const auto& d : e.diagnostics()) std::cerr << file << ": " << to_string(d) << '\n';
}

struct Loaded {
  std::vector<VideoRecord> videos;
  std::vector<AnnotationRecord> annotations;
};

// Parses both inputs, reporting every diagnostic from both files. Returns
// nullopt if anything failed.
std::optional<Loaded> load_inputs(const std::string& manifest, const std::string& annotations) {
  Loaded out;
  bool failed = false;
  try {
    out.videos = parse_video_manifest(read_file(manifest));
  } catch (const ValidationError& e) {
    print_diagnostics(manifest.c_str(), e);
    failed = true;
  }
  try {
    out.annotations = parse_annotations(read_file(annotations));
  } catch (const ValidationError& e) {
    print_diagnostics(annotations.c_str(), e);
    failed = true;
  }
  if (failed) return std::nullopt;
  return out;
}

void print_warnings(const Dataset& ds) {
  for (const auto& id : ds.unannotated()) {
    std::cerr << "warning: video '" << id << "' has no annotations and is excluded from queries\n";
  }
}

void print_counts(std::ostream& out, const CategoryCounts& c) {
  out << "videos: " << c.total << " (A " << c.count_a << ", B " << c.count_b << ", C " << c.count_c
      << ", D " << c.count_d << ")\n"
      << "spoken: " << (c.count_a + c.count_b) << ", non-spoken: " << (c.count_c + c.count_d) << '\n';
}

int cmd_validate(const std::string& manifest, const std::string& annotations) {
  auto loaded = load_inputs(manifest, annotations);
  if (!loaded) return kExitInvalid;
  try {
    auto ds = aggregate_profiles(loaded->videos, loaded->annotations);
    print_warnings(ds);
  } catch (const ValidationError& e) {
    print_diagnostics(annotations.c_str(), e);
    return kExitInvalid;
  }
  std::cout << "OK, " << loaded->videos.size() << " videos\n";
  return kExitOk;
}

int cmd_ingest(const std::string& manifest, const std::string& annotations, const std::string& out_path) {
  auto loaded = load_inputs(manifest, annotations);
  if (!loaded) return kExitInvalid;
  Dataset ds;
  try {
    ds = aggregate_profiles(loaded->videos, loaded->annotations);
  } catch (const ValidationError& e) {
    print_diagnostics(annotations.c_str(), e);
    return kExitInvalid;
  }
  print_warnings(ds);

  std::ostream& summary = out_path == "-" ? std::cerr : std::cout;
  print_counts(summary, count_categories(loaded->videos));
  summary << "profiled: " << ds.profiles().size() << '\n';

  auto doc = export_dataset(ds).dump(2);
  if (out_path == "-") {
    std::cout << doc << '\n';
  } else if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!(out << doc << '\n')) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return kExitInvalid;
    }
    summary << "wrote " << out_path << '\n';
  }
  return kExitOk;
}

percept::RetrievalService* g_service = nullptr;

void on_signal(int) {
  if (g_service) g_service->stop();
}

int cmd_serve(const ServiceConfig& config) {
  try {
    RetrievalService service(config);
    print_warnings(service.api().dataset());
    g_service = &service;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "serving " << service.api().dataset().videos().size() << " videos on "
              << config.listen_address << '\n';
    service.run();
    g_service = nullptr;
  } catch (const ValidationError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << "error: " << to_string(d) << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitOk;
}

std::string fmt_opt(const std::optional<double>& v, const char* spec = "%.1f") {
  if (!v) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, *v);
  return buf;
}

std::string fmt_intervals(const std::vector<std::int64_t>& xs) {
  if (xs.empty()) return "-";
  std::string out;
  for (auto x : xs) {
    if (!out.empty()) out += ' ';
    out += std::to_string(x);
  }
  return out;
}

void print_session_table(const std::vector<SessionMetrics>& sessions) {
  std::printf("%-16s %-12s %14s %-20s %7s %13s %-12s\n", "session", "mode", "first_sat_ms", "intervals_ms",
              "viewed", "satisfactory", "ratio");
  for (const auto& m : sessions) {
    std::string ratio = "-";
    if (m.satisfaction_ratio) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s (%.3f)", to_string(*m.satisfaction_ratio).c_str(),
                    m.satisfaction_ratio->to_double());
      ratio = buf;
    }
    std::printf("%-16s %-12s %14s %-20s %7lld %13lld %-12s\n", m.session_id.c_str(),
                m.interface_mode ? std::string(to_string(*m.interface_mode)).c_str() : "-",
                m.time_to_first_satisfactory_ms ? std::to_string(*m.time_to_first_satisfactory_ms).c_str() : "-",
                fmt_intervals(m.satisfactory_intervals_ms).c_str(), static_cast<long long>(m.videos_viewed),
                static_cast<long long>(m.videos_satisfactory), ratio.c_str());
  }
}

void print_summary_row(const char* name, const FieldSummary& f, const char* spec) {
  std::printf("  %-30s n=%-4lld excluded=%-4lld mean=%-10s min=%-10s max=%-10s\n", name,
              static_cast<long long>(f.count), static_cast<long long>(f.excluded), fmt_opt(f.mean, spec).c_str(),
              fmt_opt(f.min, spec).c_str(), fmt_opt(f.max, spec).c_str());
}

int cmd_report(const std::string& log_path, const std::string& sus_path) {
  if (log_path.empty() && sus_path.empty()) {
    std::cerr << "error: report needs --log and/or --sus\n";
    return kExitUsage;
  }
  try {
    if (!log_path.empty()) {
      auto events = parse_session_log(read_file(log_path));
      auto log = replay(events);
      std::vector<SessionMetrics> sessions;
      for (const auto& id : log.session_ids()) sessions.push_back(compute_session_metrics(events, id));
      print_session_table(sessions);
      for (auto mode : kInterfaceModes) {
        StudySummary s;
        try {
          s = aggregate_study(sessions, mode);
        } catch (const SessionError&) {
          continue;
        }
        std::printf("\nmode %s: %lld session(s)\n", std::string(to_string(mode)).c_str(),
                    static_cast<long long>(s.session_count));
        print_summary_row("time_to_first_satisfactory_ms", s.time_to_first_satisfactory_ms, "%.1f");
        print_summary_row("satisfactory_interval_ms", s.satisfactory_interval_ms, "%.1f");
        print_summary_row("videos_viewed", s.videos_viewed, "%.2f");
        print_summary_row("videos_satisfactory", s.videos_satisfactory, "%.2f");
        print_summary_row("satisfaction_ratio", s.satisfaction_ratio, "%.3f");
      }
    }
    if (!sus_path.empty()) {
      auto responses = parse_sus_csv(read_file(sus_path));
      if (!log_path.empty()) std::printf("\n");
      std::printf("%-16s %6s\n", "participant", "sus");
      for (const auto& r : responses) std::printf("%-16s %6.1f\n", r.participant_id.c_str(), sus_score(r));
      if (!responses.empty()) {
        std::printf("SUS mean over %zu response(s): %.2f\n", responses.size(), sus_mean(responses));
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perceptual video retrieval: dataset ingestion, query service and study reports"};
  app.require_subcommand(1);

  ServiceConfig config;
  std::string out_path;

  auto add_inputs = [&](CLI::App* cmd) {
    cmd->add_option("--manifest", config.manifest_path, "Video manifest (CSV)")
        ->envname("PERCEPT_MANIFEST")
        ->required();
    cmd->add_option("--annotations", config.annotations_path, "Annotation file (CSV)")
        ->envname("PERCEPT_ANNOTATIONS")
        ->required();
  };

  auto* validate = app.add_subcommand("validate", "Parse and cross-check the input files");
  add_inputs(validate);

  auto* ingest = app.add_subcommand("ingest", "Aggregate profiles and export the dataset");
  add_inputs(ingest);
  ingest->add_option("--out", out_path, "Write the dataset export here ('-' for stdout)");

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  add_inputs(serve);
  serve->add_option("--log", config.session_log_path, "Append-only session event log (NDJSON)")
      ->envname("PERCEPT_LOG")
      ->required();
  serve->add_option("--sus", config.sus_path, "SUS response file (CSV)")->envname("PERCEPT_SUS");
  serve->add_option("--listen", config.listen_address, "host:port")
      ->envname("PERCEPT_LISTEN")
      ->capture_default_str();
  serve->add_option("--page-size", config.page_size_default, "Default page size for /videos")
      ->envname("PERCEPT_PAGE_SIZE")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::string report_log, report_sus;
  auto* report = app.add_subcommand("report", "Session metrics and SUS summary from log files");
  report->add_option("--log", report_log, "Session event log (NDJSON)")->envname("PERCEPT_LOG");
  report->add_option("--sus", report_sus, "SUS response file (CSV)")->envname("PERCEPT_SUS");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  if (*validate) return cmd_validate(config.manifest_path, config.annotations_path);
  if (*ingest) return cmd_ingest(config.manifest_path, config.annotations_path, out_path);
  if (*serve) return cmd_serve(config);
  if (*report) return cmd_report(report_log, report_sus);
  return kExitUsage;
}
