#include <doctest.h>

#include <random>

#include "percept/dataset.hpp"
#include "percept/sus.hpp"

using namespace percept;

namespace {
SusResponse resp(std::array<int, 10> items) { return {"p", items}; }
}  // namespace

TEST_CASE("SUS boundary responses") {
  CHECK(sus_score(resp({5, 1, 5, 1, 5, 1, 5, 1, 5, 1})) == 100.0);
  CHECK(sus_score(resp({3, 3, 3, 3, 3, 3, 3, 3, 3, 3})) == 50.0);
  CHECK(sus_score(resp({1, 5, 1, 5, 1, 5, 1, 5, 1, 5})) == 0.0);
}

TEST_CASE("SUS six-response fixture averages 72.08") {
  auto responses = parse_sus_csv(read_file(PERCEPT_FIXTURE_DIR "/sus_six.csv"));
  REQUIRE(responses.size() == 6);
  std::vector<double> scores;
  for (const auto& r : responses) scores.push_back(sus_score(r));
  CHECK(scores == std::vector<double>{75, 75, 75, 70, 70, 67.5});
  CHECK(std::abs(sus_mean(responses) - 72.08) <= 0.01);
}

TEST_CASE("SUS validation") {
  std::vector<int> nine(9, 3);
  CHECK_THROWS_AS(make_sus_response("p", nine), SusError);
  std::vector<int> bad(10, 3);
  bad[4] = 6;
  CHECK_THROWS_WITH_AS(make_sus_response("p", bad), doctest::Contains("i5"), SusError);
  bad[4] = 0;
  CHECK_THROWS_AS(make_sus_response("p", bad), SusError);
  CHECK_THROWS_AS(sus_mean({}), SusError);
  CHECK_THROWS_AS(parse_sus_csv("participant_id,i1\n"), SusError);
  CHECK_THROWS_WITH_AS(parse_sus_csv(std::string(kSusHeader) + "\nu1,1,2,3,4,5,1,2,3,4,x\n"),
                       doctest::Contains("line 2"), SusError);
}

TEST_CASE("SUS properties") {
  std::mt19937_64 rng(55);
  std::uniform_int_distribution<int> item(1, 5), which(0, 9);
  std::vector<SusResponse> all;
  for (int trial = 0; trial < 2000; ++trial) {
    SusResponse r{"p" + std::to_string(trial), {}};
    for (auto& v : r.items) v = item(rng);
    double s = sus_score(r);
    CHECK(s >= 0.0);
    CHECK(s <= 100.0);
    int i = which(rng);
    if (r.items[static_cast<std::size_t>(i)] < 5) {
      auto up = r;
      ++up.items[static_cast<std::size_t>(i)];
      if (i % 2 == 0) CHECK(sus_score(up) >= s);  // odd-numbered item
      else CHECK(sus_score(up) <= s);
    }
    all.push_back(r);
  }
  CHECK(parse_sus_csv(serialize_sus_csv(all)) == all);
}
