#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stormtrace/authors.hpp"

using namespace stormtrace;

namespace {

const Timestamp t0 = parse_timestamp("2015-03-01T00:00:00Z");

// Disjoint one-day windows so that a post's slot is simply its day.
std::vector<TimeWindow> daily(int n) {
  std::vector<TimeWindow> out;
  for (int i = 0; i < n; ++i)
    out.push_back({i, t0 + whole_days(i), t0 + whole_days(i) + std::chrono::seconds(seconds_per_day - 1)});
  return out;
}

Post post(const std::string& id, const std::string& author, int day, std::set<std::string> refs = {}) {
  Post p;
  p.id = id;
  p.author = author;
  p.published_at = t0 + whole_days(day);
  p.refs = std::move(refs);
  return p;
}

KeyPost kp(const std::string& url, double repr) { return {url, 0, 0, repr, true, std::nullopt}; }

const std::string target = "http://target.com";

}  // namespace

TEST(AggregatedInfluence, SumsPerAuthorAndSkipsUnknownAuthors) {
  auto corpus = Corpus::from_posts({post("http://a.com/1", "@A", 0), post("http://a.com/2", "@A", 0),
                                    post("http://b.com/1", "@B", 0), post("http://c.com/1", "@C", 0)});
  auto out = aggregated_influence({kp("http://a.com/1", 4.83), kp("http://a.com/2", 2.10), kp("http://b.com/1", 3.0),
                                   kp("http://c.com/1", 3.0), kp("http://outside.com", 9.0)},
                                  corpus);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].author, "@A");
  EXPECT_DOUBLE_EQ(out[0].aggregated, 6.93);
  EXPECT_EQ(out[0].key_post_urls, (std::vector<std::string>{"http://a.com/1", "http://a.com/2"}));
  EXPECT_EQ(out[1].author, "@B");  // tie broken by author
  EXPECT_EQ(out[2].author, "@C");
  EXPECT_TRUE(aggregated_influence({}, corpus).empty());
}

TEST(AggregatedInfluence, RepeatedElectionCountsOnceAtBestScore) {
  auto corpus = Corpus::from_posts({post("http://a.com/1", "@A", 0)});
  auto out = aggregated_influence({kp("http://a.com/1", 1.0), kp("http://a.com/1", 2.5)}, corpus);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].aggregated, 2.5);
}

TEST(BuildAccum, DistinctAuthorsOnly) {
  // A@0, B@0, A@1, C@2
  auto corpus = Corpus::from_posts({post("http://p.com/1", "@A", 0, {target}), post("http://p.com/2", "@B", 0, {target}),
                                    post("http://p.com/3", "@A", 1, {target}),
                                    post("http://p.com/4", "@C", 2, {target})});
  EXPECT_EQ(build_accum(corpus, daily(3), target).per_window, (std::vector<int>{2, 2, 3}));
  EXPECT_EQ(build_accum(corpus, daily(3), "http://never.com").per_window, (std::vector<int>{0, 0, 0}));

  auto single = Corpus::from_posts({post("http://p.com/1", "@A", 1, {target})});
  EXPECT_EQ(build_accum(single, daily(3), target).per_window, (std::vector<int>{0, 1, 1}));
}

TEST(BuildAccum, MonotoneAndCountsEachAuthorOnceOnRandomSequences) {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const int windows = 1 + static_cast<int>(rng() % 8);
    std::vector<ReferenceEvent> events;
    std::set<std::string> authors;
    const int n = static_cast<int>(rng() % 25);
    for (int i = 0; i < n; ++i) {
      std::string author = "@" + std::to_string(rng() % 5);
      authors.insert(author);
      events.push_back({author, target, static_cast<int>(rng() % static_cast<unsigned>(windows)), "src"});
    }
    std::vector<const ReferenceEvent*> ptrs;
    for (const auto& e : events) ptrs.push_back(&e);
    auto series = detail::accumulate(target, ptrs, static_cast<std::size_t>(windows));
    ASSERT_EQ(series.per_window.size(), static_cast<std::size_t>(windows));
    for (std::size_t i = 1; i < series.per_window.size(); ++i)
      EXPECT_LE(series.per_window[i - 1], series.per_window[i]);
    EXPECT_EQ(series.per_window.back(), static_cast<int>(authors.size()));

    // repeating an author's existing reference never moves the series
    if (!events.empty()) {
      auto repeat = events.front();
      repeat.window_index = std::max(repeat.window_index, static_cast<int>(rng() % static_cast<unsigned>(windows)));
      auto more = ptrs;
      more.push_back(&repeat);
      EXPECT_EQ(detail::accumulate(target, more, static_cast<std::size_t>(windows)).per_window, series.per_window);
    }
  }
}

TEST(ReferenceScore, HandOracle) {
  AccumSeries s{target, {2, 5, 7}};
  EXPECT_NEAR(reference_score({"@A", target, 0, "x"}, s), 4.25, 1e-12);
  EXPECT_EQ(reference_score({"@A", target, 2, "x"}, s), 0.0);
  EXPECT_EQ(reference_score({"@A", target, 0, "x"}, AccumSeries{target, {3, 3, 3, 3}}), 0.0);
}

TEST(ReferenceScore, LaterBurstCountsLess) {
  // one adoption burst of 4 authors, at growing distance from the event
  double previous = 1e300;
  for (int gap = 1; gap < 6; ++gap) {
    std::vector<int> per_window(static_cast<std::size_t>(gap) + 1, 1);
    per_window.back() = 5;
    double score = reference_score({"@A", target, 0, "x"}, AccumSeries{target, per_window});
    EXPECT_LT(score, previous);
    EXPECT_GT(score, 0.0);
    previous = score;
  }
}

TEST(AuthorBoostScores, SingleEventAndAverage) {
  // two authors on day 0, three more on day 1, two more on day 2: [2, 5, 7]
  std::vector<Post> posts{post("http://p.com/a", "@A", 0, {target}), post("http://p.com/z", "@Z", 0, {target})};
  for (int i = 0; i < 3; ++i)
    posts.push_back(post("http://p.com/d1-" + std::to_string(i), "@d1-" + std::to_string(i), 1, {target}));
  for (int i = 0; i < 2; ++i)
    posts.push_back(post("http://p.com/d2-" + std::to_string(i), "@d2-" + std::to_string(i), 2, {target}));
  auto corpus = Corpus::from_posts(posts);
  auto windows = daily(3);
  ASSERT_EQ(build_accum(corpus, windows, target).per_window, (std::vector<int>{2, 5, 7}));

  auto results = author_boost_scores(corpus, windows);
  const BoostResult* a = nullptr;
  for (const auto& r : results)
    if (r.author == "@A") a = &r;
  ASSERT_NE(a, nullptr);
  EXPECT_NEAR(a->boost, 4.25, 1e-12);
  EXPECT_EQ(a->event_count, 1);
  EXPECT_NEAR(a->average(), 4.25, 1e-12);
  EXPECT_EQ(results.front().boost, 4.25);
}

TEST(AuthorBoostScores, TwoEventsAveraged) {
  // @A's first ref sees the series [2,5,7]; the second (final window) scores 0
  std::vector<Post> posts{post("http://p.com/a", "@A", 0, {target}), post("http://p.com/z", "@Z", 0, {target}),
                          post("http://p.com/a2", "@A", 2, {"http://other.com"})};
  for (int i = 0; i < 3; ++i) posts.push_back(post("http://p.com/d1-" + std::to_string(i), "@d1-" + std::to_string(i), 1, {target}));
  for (int i = 0; i < 2; ++i) posts.push_back(post("http://p.com/d2-" + std::to_string(i), "@d2-" + std::to_string(i), 2, {target}));
  auto results = author_boost_scores(Corpus::from_posts(posts), daily(3));
  for (const auto& r : results) {
    if (r.author != "@A") continue;
    EXPECT_NEAR(r.boost, 4.25, 1e-12);
    EXPECT_EQ(r.event_count, 2);
    EXPECT_NEAR(r.average(), 2.125, 1e-12);
    return;
  }
  FAIL() << "@A missing";
}

TEST(AuthorBoostScores, NoReferencesNoResults) {
  auto corpus = Corpus::from_posts({post("http://p.com/1", "@A", 0), post("http://p.com/2", "@B", 1)});
  EXPECT_TRUE(author_boost_scores(corpus, daily(2)).empty());
}

TEST(AuthorBoostScores, MatchesBruteForceReEnumeration) {
  std::mt19937 rng(55);
  for (int trial = 0; trial < 60; ++trial) {
    const int nwin = 1 + static_cast<int>(rng() % 6);
    const int nposts = 1 + static_cast<int>(rng() % 20);
    std::vector<Post> posts;
    for (int i = 0; i < nposts; ++i) {
      std::set<std::string> refs;
      for (int r = 0; r < 3; ++r)
        if (rng() % 2) refs.insert("http://t.com/" + std::to_string(rng() % 4));
      if (rng() % 3 == 0) refs.insert("http://p.com/" + std::to_string(rng() % static_cast<unsigned>(nposts)));
      posts.push_back(post("http://p.com/" + std::to_string(i), "@" + std::to_string(rng() % 4),
                           static_cast<int>(rng() % static_cast<unsigned>(nwin)), refs));
    }
    auto corpus = Corpus::from_posts(posts);
    // overlapping windows exercise the earliest-window rule
    auto windows = make_windows(corpus, {2, 1});
    auto got = author_boost_scores(corpus, windows);
    auto want = oracle::boosts(corpus, windows);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      const auto& [boost, count] = want.at(got[i].author);
      EXPECT_NEAR(got[i].boost, boost, 1e-9);
      EXPECT_EQ(got[i].event_count, count);
      EXPECT_GE(got[i].boost, 0.0);
      if (i > 0) {
        EXPECT_GE(got[i - 1].boost, got[i].boost);
      }
    }
  }
}

TEST(ElectBoostAuthors, ThetaRule) {
  std::vector<BoostResult> rs{{"A", 4.0, 1}, {"B", 4.0, 2}, {"C", 0.5, 1}};
  auto names = [](const std::vector<BoostResult>& v) {
    std::vector<std::string> out;
    for (const auto& r : v) out.push_back(r.author);
    return out;
  };
  EXPECT_EQ(names(elect_boost_authors(rs, 0.5)), (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(names(elect_boost_authors(rs, 1.0)), (std::vector<std::string>{"A"}));
  std::vector<BoostResult> tied{{"A", 2.0, 1}, {"B", 4.0, 2}};
  EXPECT_EQ(names(elect_boost_authors(tied, 1.0)), (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(names(elect_boost_authors({{"solo", 0.0, 3}}, 0.8)), (std::vector<std::string>{"solo"}));
  EXPECT_TRUE(elect_boost_authors({}, 0.8).empty());
  EXPECT_THROW(elect_boost_authors(rs, 1.5), error);
}
