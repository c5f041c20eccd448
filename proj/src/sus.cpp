#include "percept/sus.hpp"

#include <charconv>

#include "csv.hpp"

namespace percept {
namespace {

void check_item(int value, std::size_t index) {
  if (value < 1 || value > 5) {
    throw SusError("item i" + std::to_string(index + 1) + " = " + std::to_string(value) +
                   " outside [1, 5]");
  }
}

}  // namespace

SusResponse make_sus_response(std::string participant_id, std::span<const int> items) {
  if (participant_id.empty()) throw SusError("participant_id must be non-empty");
  if (items.size() != kSusItemCount) {
    throw SusError("expected 10 items, got " + std::to_string(items.size()));
  }
  SusResponse r{std::move(participant_id), {}};
  for (std::size_t i = 0; i < kSusItemCount; ++i) {
    check_item(items[i], i);
    r.items[i] = items[i];
  }
  return r;
}

double sus_score(const SusResponse& response) {
  int raw = 0;
  for (std::size_t i = 0; i < kSusItemCount; ++i) {
    int v = response.items[i];
    check_item(v, i);
    // items are 1-based: index 0 is item 1 (odd)
    raw += (i % 2 == 0) ? (v - 1) : (5 - v);
  }
  return raw * 2.5;
}

double sus_mean(std::span<const SusResponse> responses) {
  if (responses.empty()) throw SusError("no SUS responses");
  double total = 0;
  for (const auto& r : responses) total += sus_score(r);
  return total / static_cast<double>(responses.size());
}

std::vector<SusResponse> parse_sus_csv(std::string_view text) {
  auto lines = csv::split_lines(text);
  if (lines.empty() || lines.front().text != kSusHeader) {
    throw SusError("expected header '" + std::string(kSusHeader) + "'");
  }
  std::vector<SusResponse> out;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& line = lines[li];
    auto where = "line " + std::to_string(line.number) + ": ";
    auto fields = csv::split_row(line.text);
    if (!fields || fields->size() != kSusItemCount + 1) {
      throw SusError(where + "expected 11 fields");
    }
    std::vector<int> items;
    for (std::size_t i = 1; i < fields->size(); ++i) {
      const auto& f = (*fields)[i];
      int v = 0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw SusError(where + "item i" + std::to_string(i) + " not an integer: '" + f + "'");
      }
      items.push_back(v);
    }
    try {
      out.push_back(make_sus_response((*fields)[0], items));
    } catch (const SusError& e) {
      throw SusError(where + e.what());
    }
  }
  return out;
}

std::string serialize_sus_csv(std::span<const SusResponse> responses) {
  std::string out(kSusHeader);
  out += '\n';
  for (const auto& r : responses) {
    out += csv::escape_field(r.participant_id);
    for (int v : r.items) {
      out += ',';
      out += std::to_string(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace percept
