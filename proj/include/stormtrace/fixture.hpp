#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stormtrace/time.hpp"
#include "stormtrace/topics.hpp"

namespace stormtrace {

// Synthetic corpora with planted discussion themes, used by the acceptance
// suite and the `gen-fixture` command.

enum class FixtureKind {
  /// 30 posts over two weeks: three themes, in-corpus cross references,
  /// shared external sources and url variants that normalize together.
  standard,
  /// 16 posts in three days: two themes of eight posts; six posts of the
  /// first theme cite the same url, which no other post cites.
  viral,
};

inline constexpr std::string_view viral_url = "http://viral.example.com/storm";

namespace detail {

struct Theme {
  std::string_view name;
  std::array<std::string_view, 14> words;
  std::array<std::string_view, 2> sources;
};

inline constexpr std::array<Theme, 3> fixture_themes{{
    {"outage",
     {"network", "outage", "router", "connection", "broadband", "signal", "offline", "modem", "technician",
      "disruption", "cable", "bandwidth", "latency", "fiber"},
     {"HTTP://News.Example.com/outage-report?utm_source=twitter#top", "https://status.example.net/incidents/42"}},
    {"billing",
     {"invoice", "billing", "charge", "payment", "refund", "contract", "tariff", "overcharged", "fee", "subscription",
      "discount", "money", "statement", "balance"},
     {"http://consumer.example.org/billing-complaints/", "https://forum.example.com/thread?id=981&utm_medium=rss"}},
    {"handset",
     {"smartphone", "battery", "screen", "camera", "launch", "handset", "android", "firmware", "display", "charger",
      "keyboard", "processor", "memory", "speaker"},
     {"https://reviews.example.com:443/handset/x9", "http://gadgets.example.io/launch-event"}},
}};

inline constexpr std::array<std::string_view, 8> fixture_authors{
    "@alice", "@bob", "@carol", "@dave", "@erin", "@frank", "@grace", "@heidi"};

inline constexpr std::array<std::string_view, 6> filler_words{"the", "and", "is", "a", "of", "today"};

inline std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(n));
}

inline std::string theme_text(std::mt19937_64& rng, const Theme& theme, int length) {
  std::string text;
  for (int i = 0; i < length; ++i) {
    if (!text.empty()) text += ' ';
    if (unit_uniform(rng) < 0.2) text += filler_words[pick(rng, filler_words.size())];
    else text += theme.words[pick(rng, theme.words.size())];
  }
  return text;
}

inline std::string post_url(int n) { return "https://blog.example.org/posts/" + std::to_string(n); }

inline Timestamp fixture_epoch() { return parse_timestamp("2015-03-01T08:00:00Z"); }

inline std::vector<nlohmann::json> standard_fixture(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  constexpr int posts = 30;
  const auto span = whole_days(14).count();

  std::vector<std::int64_t> offsets;
  for (int i = 0; i < posts; ++i) offsets.push_back(static_cast<std::int64_t>(unit_uniform(rng) * span));
  std::sort(offsets.begin(), offsets.end());

  std::vector<nlohmann::json> out;
  std::array<std::vector<int>, fixture_themes.size()> earlier;
  for (int i = 0; i < posts; ++i) {
    const auto theme_index = pick(rng, fixture_themes.size());
    const auto& theme = fixture_themes[theme_index];
    auto refs = nlohmann::json::array();
    if (unit_uniform(rng) < 0.7) refs.push_back(theme.sources[0]);
    if (unit_uniform(rng) < 0.35) refs.push_back(theme.sources[1]);
    auto& prior = earlier[theme_index];
    if (!prior.empty() && unit_uniform(rng) < 0.6) refs.push_back(post_url(prior[pick(rng, prior.size())]));
    if (unit_uniform(rng) < 0.1) {
      const auto& other = fixture_themes[(theme_index + 1) % fixture_themes.size()];
      refs.push_back(other.sources[0]);
    }
    std::string text = theme_text(rng, theme, 18 + static_cast<int>(pick(rng, 10)));
    if (!refs.empty() && unit_uniform(rng) < 0.5) text += " see " + refs[0].get<std::string>();

    Timestamp at = fixture_epoch() + std::chrono::seconds(offsets[static_cast<std::size_t>(i)]);
    out.push_back({{"id", post_url(i)},
                   {"content", text},
                   {"author", fixture_authors[pick(rng, fixture_authors.size())]},
                   {"date", format_timestamp(at)},
                   {"refs", std::move(refs)}});
    prior.push_back(i);
  }
  return out;
}

inline std::vector<nlohmann::json> viral_fixture(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<nlohmann::json> out;
  const std::array<std::string_view, 2> second_theme_refs{"http://news.example.net/b1", "http://news.example.net/b2"};
  for (int i = 0; i < 16; ++i) {
    const bool first_theme = i % 2 == 0;
    const int slot = i / 2;  // position within its theme, 0..7
    const auto& theme = fixture_themes[first_theme ? 0 : 1];
    auto refs = nlohmann::json::array();
    if (first_theme) refs.push_back(slot < 6 ? std::string(viral_url) : std::string("http://blog.example.com/a-other"));
    else refs.push_back(std::string(second_theme_refs[slot < 3 ? 0 : 1]));

    Timestamp at = fixture_epoch() + std::chrono::minutes(i * 240 + static_cast<int>(pick(rng, 60)));
    out.push_back({{"id", post_url(100 + i)},
                   {"content", theme_text(rng, theme, 30)},
                   {"author", fixture_authors[static_cast<std::size_t>(i) % fixture_authors.size()]},
                   {"date", format_timestamp(at)},
                   {"refs", std::move(refs)}});
  }
  return out;
}

}  // namespace detail

inline std::vector<nlohmann::json> generate_fixture(std::uint64_t seed, FixtureKind kind = FixtureKind::standard) {
  return kind == FixtureKind::standard ? detail::standard_fixture(seed) : detail::viral_fixture(seed);
}

inline void write_fixture(std::ostream& out, const std::vector<nlohmann::json>& records) {
  for (const auto& r : records) out << r.dump() << '\n';
}

}  // namespace stormtrace
