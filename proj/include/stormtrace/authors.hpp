#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "stormtrace/affinity.hpp"
#include "stormtrace/corpus.hpp"
#include "stormtrace/error.hpp"
#include "stormtrace/windowing.hpp"

namespace stormtrace {

struct AuthorInfluence {
  std::string author;
  double aggregated = 0.0;
  std::vector<std::string> key_post_urls;
};

/// Sum of key-post scores per author, highest first (ties by author).
///
/// A url elected in several windows or topics counts once, with its best
/// score. Key posts outside the corpus have no known author and are skipped.
inline std::vector<AuthorInfluence> aggregated_influence(const std::vector<KeyPost>& key_posts, const Corpus& corpus) {
  std::map<std::string, double> best;
  for (const auto& kp : key_posts) {
    if (!corpus.contains(kp.url)) continue;
    auto [it, fresh] = best.try_emplace(kp.url, kp.repr);
    if (!fresh) it->second = std::max(it->second, kp.repr);
  }

  std::map<std::string, AuthorInfluence> by_author;
  for (const auto& [url, repr] : best) {
    const auto& author = corpus.find(url)->author;
    auto& rec = by_author[author];
    rec.author = author;
    rec.aggregated += repr;
    rec.key_post_urls.push_back(url);
  }

  std::vector<AuthorInfluence> out;
  for (auto& [author, rec] : by_author) out.push_back(std::move(rec));
  std::stable_sort(out.begin(), out.end(), [](const AuthorInfluence& a, const AuthorInfluence& b) {
    return a.aggregated > b.aggregated;
  });
  return out;
}

/// One post referencing one url. `window_index` is the earliest window
/// containing the referencing post.
struct ReferenceEvent {
  std::string author;
  std::string target_url;
  int window_index = 0;
  std::string source_id;
};

/// per_window[i]: distinct authors that referenced `post_url` in windows
/// 0..i.
struct AccumSeries {
  std::string post_url;
  std::vector<int> per_window;
};

/// Every (post, referenced url) pair of the corpus, in corpus order.
inline std::vector<ReferenceEvent> reference_events(const Corpus& corpus, const std::vector<TimeWindow>& windows) {
  std::vector<ReferenceEvent> out;
  for (const auto& p : corpus.posts()) {
    if (p.refs.empty()) continue;
    auto slot = earliest_window(windows, p.published_at);
    if (!slot) throw error(errc::invalid_argument, "post '" + p.id + "' lies outside every window");
    for (const auto& url : p.refs) out.push_back({p.author, url, *slot, p.id});
  }
  return out;
}

namespace detail {

inline AccumSeries accumulate(const std::string& url, const std::vector<const ReferenceEvent*>& events,
                              std::size_t window_count) {
  // first slot in which each author referenced the url
  std::map<std::string, int> first_slot;
  for (const auto* ev : events) {
    auto [it, fresh] = first_slot.try_emplace(ev->author, ev->window_index);
    if (!fresh) it->second = std::min(it->second, ev->window_index);
  }
  std::vector<int> fresh_authors(window_count, 0);
  for (const auto& [author, slot] : first_slot) ++fresh_authors[static_cast<std::size_t>(slot)];

  AccumSeries series{url, std::vector<int>(window_count, 0)};
  int running = 0;
  for (std::size_t i = 0; i < window_count; ++i) {
    running += fresh_authors[i];
    series.per_window[i] = running;
  }
  return series;
}

}  // namespace detail

inline AccumSeries build_accum(const Corpus& corpus, const std::vector<TimeWindow>& windows, const std::string& url) {
  auto events = reference_events(corpus, windows);
  std::vector<const ReferenceEvent*> matching;
  for (const auto& ev : events)
    if (ev.target_url == url) matching.push_back(&ev);
  return detail::accumulate(url, matching, windows.size());
}

/// Growth of distinct referencing authors after the event, each later
/// window weighted by the inverse square of its distance from the event.
inline double reference_score(const ReferenceEvent& ev, const AccumSeries& series) {
  const auto n = static_cast<int>(series.per_window.size());
  if (ev.window_index < 0 || ev.window_index >= n) return 0.0;
  const int base = series.per_window[static_cast<std::size_t>(ev.window_index)];
  double score = 0.0;
  for (int i = ev.window_index + 1; i < n; ++i) {
    const double gap = i - ev.window_index;
    score += (series.per_window[static_cast<std::size_t>(i)] - base) / (gap * gap);
  }
  return score;
}

struct BoostResult {
  std::string author;
  double boost = 0.0;
  int event_count = 0;

  double average() const noexcept { return event_count > 0 ? boost / event_count : 0.0; }
};

/// Total reference score per referencing author, highest first (ties by
/// author).
inline std::vector<BoostResult> author_boost_scores(const Corpus& corpus, const std::vector<TimeWindow>& windows) {
  auto events = reference_events(corpus, windows);

  std::map<std::string, std::vector<const ReferenceEvent*>> by_target;
  for (const auto& ev : events) by_target[ev.target_url].push_back(&ev);
  std::map<std::string, AccumSeries> series;
  for (const auto& [url, evs] : by_target) series.emplace(url, detail::accumulate(url, evs, windows.size()));

  std::map<std::string, BoostResult> by_author;
  for (const auto& ev : events) {
    auto& r = by_author[ev.author];
    r.author = ev.author;
    r.boost += reference_score(ev, series.at(ev.target_url));
    ++r.event_count;
  }

  std::vector<BoostResult> out;
  for (auto& [author, r] : by_author) out.push_back(std::move(r));
  std::stable_sort(out.begin(), out.end(), [](const BoostResult& a, const BoostResult& b) { return a.boost > b.boost; });
  return out;
}

/// Authors whose average boost reaches `theta` times the best average.
inline std::vector<BoostResult> elect_boost_authors(const std::vector<BoostResult>& results, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw error(errc::invalid_argument, "theta must lie in (0, 1]");
  if (results.empty()) return {};
  double best = results.front().average();
  for (const auto& r : results) best = std::max(best, r.average());
  std::vector<BoostResult> out;
  for (const auto& r : results)
    if (r.average() >= theta * best) out.push_back(r);
  return out;
}

}  // namespace stormtrace
