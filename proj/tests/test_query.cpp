#include <doctest.h>

#include <random>
#include <set>

#include "oracle.hpp"
#include "percept/query.hpp"

using namespace percept;

namespace {

Dataset load_small() {
  auto videos = parse_video_manifest(read_file(PERCEPT_FIXTURE_DIR "/small_manifest.csv"));
  auto anns = parse_annotations(read_file(PERCEPT_FIXTURE_DIR "/small_annotations.csv"));
  return aggregate_profiles(videos, anns);
}

// First five fixture videos: f1..f5.
Dataset load_five() {
  auto videos = parse_video_manifest(read_file(PERCEPT_FIXTURE_DIR "/small_manifest.csv"));
  auto anns = parse_annotations(read_file(PERCEPT_FIXTURE_DIR "/small_annotations.csv"));
  videos.resize(5);
  std::erase_if(anns, [](const AnnotationRecord& r) { return r.video_id == "f6" || r.video_id == "f7"; });
  return aggregate_profiles(videos, anns);
}

std::set<std::string> id_set(const ResultList& r) {
  auto ids = r.ids();
  return {ids.begin(), ids.end()};
}

Rational tenths(int t) { return Rational(t, 10); }

}  // namespace

TEST_CASE("default filter") {
  auto f = default_filter();
  CHECK_FALSE(f.application);
  CHECK(f.spoken == SpokenFilter::any);
  for (auto m : kMetrics) CHECK(f.range(m) == MetricRange{Rational(1), Rational(7)});

  auto ds = load_small();
  auto r = execute_query(ds, f);
  CHECK(r.total_matches == ds.profiles().size());
  CHECK(id_set(r) == std::set<std::string>{"f1", "f2", "f3", "f4", "f5", "f6"});

  Dataset empty = aggregate_profiles({}, {});
  auto none = execute_query(empty, f);
  CHECK(none.items.empty());
  CHECK(none.total_matches == 0);
}

TEST_CASE("execute_query on the hand-built fixture") {
  auto ds = load_five();
  REQUIRE(ds.profiles().size() == 5);
  auto f = default_filter();
  f.spoken = SpokenFilter::non_spoken_only;
  f.application = Application::relaxation;
  f.range(Metric::calmness) = {Rational(5), Rational(7)};
  auto r = execute_query(ds, f);
  // f1: C, relaxation, calm 6. f2: D, relaxation, calm 5.5 (two annotators).
  // f3 fails on calmness, f4 on spoken, f5 on application.
  CHECK(r.ids() == std::vector<std::string>{"f1", "f2"});
}

TEST_CASE("canonical order is descending tingles then ascending id") {
  auto ds = load_small();
  auto r = execute_query(ds, default_filter());
  // tingles: f4 7, f1 6, f2 4.5, f6 4, f3 3, f5 2
  CHECK(r.ids() == std::vector<std::string>{"f4", "f1", "f2", "f6", "f3", "f5"});

  auto videos = parse_video_manifest(std::string(kManifestHeader) + "\nb,t,u,A,1\na,t,u,A,1\nc,t,u,A,1\n");
  auto anns = parse_annotations(std::string(kAnnotationHeader) + "\np,b,4,1,1,1,1,\np,a,4,1,1,1,1,\np,c,5,1,1,1,1,\n");
  CHECK(execute_query(aggregate_profiles(videos, anns), default_filter()).ids() ==
        std::vector<std::string>{"c", "a", "b"});
}

TEST_CASE("range endpoints are inclusive and exact") {
  auto ds = load_small();
  auto f = default_filter();
  f.range(Metric::calmness) = {Rational(11, 2), Rational(11, 2)};
  CHECK(execute_query(ds, f).ids() == std::vector<std::string>{"f2"});
  f.range(Metric::calmness) = {tenths(56), Rational(7)};
  CHECK(id_set(execute_query(ds, f)) == std::set<std::string>{"f1", "f4", "f6"});
}

TEST_CASE("execute_query matches the brute-force scan") {
  std::mt19937_64 rng(424242);
  for (int trial = 0; trial < 300; ++trial) {
    auto corpus = testing::random_corpus(rng, std::uniform_int_distribution<int>(0, 60)(rng), 0, 3);
    auto ds = aggregate_profiles(corpus.videos, corpus.annotations);
    for (int q = 0; q < 3; ++q) {
      auto raw = testing::random_filter(rng);
      auto result = execute_query(ds, raw.to_filter());
      CHECK(id_set(result) == testing::oracle_filter(corpus, raw));
      CHECK(result.total_matches == result.items.size());
      CHECK(execute_query(ds, raw.to_filter()).ids() == result.ids());
    }
  }
}

TEST_CASE("application bounds") {
  SUBCASE("fixture sleep calmness bounds") {
    auto ds = load_small();
    auto b = application_bounds(ds, Application::sleep);
    REQUIRE(b);
    // sleep videos: f2 (5.5), f5 (2), f6 (6)
    CHECK(b->video_count == 3);
    CHECK(b->extent(Metric::calmness) == MetricExtent{Rational(2), Rational(6)});
    CHECK(b->extent(Metric::tingles) == MetricExtent{Rational(2), Rational(9, 2)});
  }

  SUBCASE("singleton application") {
    auto ds = load_small();
    auto b = application_bounds(ds, Application::attention);
    REQUIRE(b);
    CHECK(b->video_count == 1);
    const auto* p = ds.find_profile("f4");
    for (auto m : kMetrics) CHECK(b->extent(m) == MetricExtent{p->mean(m), p->mean(m)});
  }

  SUBCASE("absent application gives the no-videos signal") {
    CHECK_FALSE(application_bounds(load_small(), Application::companionship));
  }

  SUBCASE("fuzz against brute-force min/max") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
      auto corpus = testing::random_corpus(rng, std::uniform_int_distribution<int>(0, 40)(rng), 0, 3);
      auto ds = aggregate_profiles(corpus.videos, corpus.annotations);
      for (int a = 0; a < 5; ++a) {
        auto got = application_bounds(ds, kApplications[static_cast<std::size_t>(a)]);
        auto want = testing::oracle_bounds(corpus, a);
        REQUIRE(got.has_value() == want.has_value());
        if (!got) continue;
        for (auto m : kMetrics) {
          CHECK(testing::same_value(got->extent(m).min, (*want)[index_of(m)].first));
          CHECK(testing::same_value(got->extent(m).max, (*want)[index_of(m)].second));
        }
      }
    }
  }
}

TEST_CASE("clamp_filter_to_bounds") {
  SUBCASE("full-range bounds") {
    MetricBounds b;
    for (auto& e : b.extents) e = {Rational(1), Rational(7)};
    b.video_count = 1;
    auto f = default_filter();
    f.range(Metric::stress) = {Rational(2), Rational(3)};
    auto out = clamp_filter_to_bounds(f, b);
    for (auto m : kMetrics) CHECK(out.range(m) == MetricRange::full());
  }

  SUBCASE("direct substitution, application and spoken pass through") {
    MetricBounds b;
    for (auto& e : b.extents) e = {Rational(1), Rational(7)};
    b.extents[index_of(Metric::tingles)] = {Rational(2), Rational(6)};
    auto f = default_filter();
    f.application = Application::sleep;
    f.spoken = SpokenFilter::spoken_only;
    f.range(Metric::tingles) = {Rational(3), Rational(4)};
    auto out = clamp_filter_to_bounds(f, b);
    CHECK(out.range(Metric::tingles) == MetricRange{Rational(2), Rational(6)});
    CHECK(out.application == Application::sleep);
    CHECK(out.spoken == SpokenFilter::spoken_only);
  }

  SUBCASE("clamp then query returns the whole application subset") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 100; ++trial) {
      auto corpus = testing::random_corpus(rng, 30, 1, 3);
      auto ds = aggregate_profiles(corpus.videos, corpus.annotations);
      for (auto app : kApplications) {
        auto b = application_bounds(ds, app);
        if (!b) continue;
        auto f = default_filter();
        f.application = app;
        auto r = execute_query(ds, clamp_filter_to_bounds(f, *b));
        testing::RawFilter only_app;
        only_app.application = static_cast<int>(index_of(app));
        CHECK(id_set(r) == testing::oracle_filter(corpus, only_app));
        CHECK(r.total_matches == static_cast<std::size_t>(b->video_count));
      }
    }
  }
}

TEST_CASE("outward rounding to the slider grid") {
  MetricBounds b;
  for (auto& e : b.extents) e = {Rational(13, 3), Rational(14, 3)};
  b.extents[0] = {Rational(9, 2), Rational(9, 2)};
  b.extents[1] = {Rational(1), Rational(7)};
  auto r = round_outward(b);
  CHECK(r.extents[0] == MetricExtent{tenths(45), tenths(45)});
  CHECK(r.extents[1] == MetricExtent{Rational(1), Rational(7)});
  CHECK(r.extents[2] == MetricExtent{tenths(43), tenths(47)});
}

TEST_CASE("normalize_range collision rule") {
  CHECK(normalize_range(Rational(2), Rational(5), Handle::left) == MetricRange{Rational(2), Rational(5)});
  CHECK(normalize_range(Rational(5), Rational(5), Handle::left) == MetricRange{Rational(5), Rational(5)});
  // left handle pushed one step past the right one stops at it
  CHECK(normalize_range(tenths(51), Rational(5), Handle::left) == MetricRange{Rational(5), Rational(5)});
  CHECK(normalize_range(Rational(6), Rational(4), Handle::right) == MetricRange{Rational(6), Rational(6)});
  CHECK_THROWS_AS(normalize_range(tenths(9), Rational(5), Handle::left), DomainError);
  CHECK_THROWS_AS(normalize_range(Rational(2), tenths(71), Handle::right), DomainError);

  for (int lo = 10; lo <= 70; ++lo) {
    for (int hi = 10; hi <= 70; ++hi) {
      for (auto h : {Handle::left, Handle::right}) {
        auto r = normalize_range(tenths(lo), tenths(hi), h);
        CHECK(r.lo <= r.hi);
        CHECK(r.valid());
        // the stationary handle never moves
        if (h == Handle::left) CHECK(r.hi == tenths(hi));
        else CHECK(r.lo == tenths(lo));
      }
    }
  }
}

TEST_CASE("monotonicity under widening") {
  std::mt19937_64 rng(8080);
  std::uniform_int_distribution<int> pick(0, 7);
  for (int trial = 0; trial < 200; ++trial) {
    auto corpus = testing::random_corpus(rng, 40, 0, 3);
    auto ds = aggregate_profiles(corpus.videos, corpus.annotations);
    auto narrow = testing::random_filter(rng);
    auto wide = narrow;
    switch (pick(rng)) {
      case 0: wide.application = -1; break;
      case 1: wide.spoken = 0; break;
      default: {
        auto i = static_cast<std::size_t>(pick(rng) % 5);
        wide.lo_tenths[i] = std::uniform_int_distribution<int>(10, wide.lo_tenths[i])(rng);
        wide.hi_tenths[i] = std::uniform_int_distribution<int>(wide.hi_tenths[i], 70)(rng);
      }
    }
    auto before = id_set(execute_query(ds, narrow.to_filter()));
    auto after = id_set(execute_query(ds, wide.to_filter()));
    CHECK(std::includes(after.begin(), after.end(), before.begin(), before.end()));
  }
}

TEST_CASE("filter validation") {
  auto f = default_filter();
  CHECK_NOTHROW(validate(f));
  f.range(Metric::sadness) = {Rational(5), Rational(4)};
  CHECK_THROWS_AS(validate(f), DomainError);
  f.range(Metric::sadness) = {Rational(0), Rational(4)};
  CHECK_THROWS_AS(validate(f), DomainError);
  CHECK_THROWS_AS(validate(ContentFilter{std::nullopt, SpokenFilter::any, {Rational(3), Rational(8)}}), DomainError);
}

TEST_CASE("keyword search") {
  auto ds = load_small();

  SUBCASE("empty query returns the corpus in canonical order") {
    CHECK(keyword_search(ds, "").ids() == execute_query(ds, default_filter()).ids());
    CHECK(keyword_search(ds, "   ").total_matches == 6);
  }

  SUBCASE("more matching tokens rank first") {
    auto r = keyword_search(ds, "slime tapping");
    CHECK(r.ids() == std::vector<std::string>{"f1", "f3"});
  }

  SUBCASE("case-insensitive substring") {
    CHECK(keyword_search(ds, "SOAP").ids() == std::vector<std::string>{"f2"});
    CHECK(keyword_search(ds, "\"click\"").ids() == std::vector<std::string>{"f6"});
    CHECK(keyword_search(ds, "rain slime").ids() == std::vector<std::string>{"f1", "f3", "f5"});
  }

  SUBCASE("unannotated videos never appear") { CHECK(keyword_search(ds, "microphone").items.empty()); }

  SUBCASE("no match") { CHECK(keyword_search(ds, "gaming").items.empty()); }

  SUBCASE("tokenizer lowercases and dedupes") {
    CHECK(tokenize_query("  Slime\tslime TAPPING ") == std::vector<std::string>{"slime", "tapping"});
  }

  SUBCASE("fuzz against brute force") {
    std::mt19937_64 rng(606);
    for (int trial = 0; trial < 200; ++trial) {
      auto corpus = testing::random_corpus(rng, 30, 0, 2);
      auto ds2 = aggregate_profiles(corpus.videos, corpus.annotations);
      auto q = testing::random_query(rng);
      CHECK(id_set(keyword_search(ds2, q)) == testing::oracle_keyword(corpus, q));
    }
  }
}

TEST_CASE("content search") {
  auto ds = load_small();
  CHECK(content_search(ds, "", ContentFilter{}).ids() == keyword_search(ds, "").ids());

  ContentFilter cf;
  cf.application = Application::relaxation;
  cf.tingles = {Rational(5), Rational(7)};
  CHECK(content_search(ds, "", cf).ids() == std::vector<std::string>{"f4", "f1"});
  cf.spoken = SpokenFilter::non_spoken_only;
  CHECK(content_search(ds, "slime", cf).ids() == std::vector<std::string>{"f1"});

  SUBCASE("perceptual ranges are not consulted") {
    ContentFilter any;
    auto r = content_search(ds, "", any);
    CHECK(r.total_matches == 6);
  }

  SUBCASE("equals keyword match intersected with content predicates") {
    std::mt19937_64 rng(909);
    for (int trial = 0; trial < 200; ++trial) {
      auto corpus = testing::random_corpus(rng, 30, 0, 3);
      auto ds2 = aggregate_profiles(corpus.videos, corpus.annotations);
      auto q = testing::random_query(rng);
      auto raw = testing::random_filter(rng);
      for (std::size_t i = 1; i < kMetricCount; ++i) {
        raw.lo_tenths[i] = 10;
        raw.hi_tenths[i] = 70;
      }
      auto f = raw.to_filter();
      auto got = id_set(content_search(ds2, q, {f.application, f.spoken, f.range(Metric::tingles)}));
      auto kw = testing::oracle_keyword(corpus, q);
      auto pred = testing::oracle_filter(corpus, raw);
      std::set<std::string> want;
      std::set_intersection(kw.begin(), kw.end(), pred.begin(), pred.end(), std::inserter(want, want.end()));
      CHECK(got == want);
    }
  }
}
