#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace percept {

inline constexpr std::size_t kSusItemCount = 10;
inline constexpr std::string_view kSusHeader = "participant_id,i1,i2,i3,i4,i5,i6,i7,i8,i9,i10";

class SusError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Answers to the standard 10-item System Usability Scale, items 1..10 in
/// order. Odd items are positively phrased, even items negatively.
struct SusResponse {
  std::string participant_id;
  std::array<int, kSusItemCount> items{};

  friend bool operator==(const SusResponse&, const SusResponse&) = default;
};

/// Builds a response from an arbitrary-length item list, rejecting a wrong
/// count or any item outside [1, 5].
SusResponse make_sus_response(std::string participant_id, std::span<const int> items);

/// Standard scoring: odd items contribute (item - 1), even items (5 - item),
/// sum times 2.5. Result in [0, 100].
double sus_score(const SusResponse& response);

/// Mean score; throws SusError on an empty input.
double sus_mean(std::span<const SusResponse> responses);

std::vector<SusResponse> parse_sus_csv(std::string_view text);
std::string serialize_sus_csv(std::span<const SusResponse> responses);

}  // namespace percept
