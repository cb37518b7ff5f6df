#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stormtrace/corpus.hpp"
#include "stormtrace/error.hpp"
#include "stormtrace/topics.hpp"

namespace stormtrace {

/// Affinity of one referenced url to one topic of one window.
struct AffinityRecord {
  std::string url;
  int window_index = 0;
  int topic = 0;
  int tf = 0;
  double idf = 0.0;
  double repr = 0.0;
  bool in_corpus = false;

  friend bool operator==(const AffinityRecord&, const AffinityRecord&) = default;
};

struct KeyPost {
  std::string url;
  int window_index = 0;
  int topic = 0;
  double repr = 0.0;
  bool in_corpus = false;
  std::optional<std::string> author;

  friend bool operator==(const KeyPost&, const KeyPost&) = default;
};

/// Number of posts assigned to `t` that reference `url`.
inline int url_frequency(const std::string& url, int t, const TopicModel& m, const std::vector<Post>& window_posts) {
  if (t < 0 || t >= m.k) throw error(errc::topic_out_of_range, "topic " + std::to_string(t));
  int count = 0;
  for (const auto& p : window_posts)
    if (m.topic_of(p.id) == t && p.references(url)) ++count;
  return count;
}

/// ln(k / number of topics holding at least one post that references `url`).
inline double inverse_topic_frequency(const std::string& url, const TopicModel& m,
                                      const std::vector<Post>& window_posts) {
  std::set<int> topics;
  for (const auto& p : window_posts) {
    int t = m.topic_of(p.id);
    if (t >= 0 && p.references(url)) topics.insert(t);
  }
  if (topics.empty()) throw error(errc::not_referenced, "'" + url + "' is not referenced in this window");
  return std::log(static_cast<double>(m.k) / static_cast<double>(topics.size()));
}

/// One record per (url, topic) with tf > 0, sorted by topic then url. Posts
/// without a topic assignment (no tokens) contribute nothing.
inline std::vector<AffinityRecord> compute_affinities(const TopicModel& m, const std::vector<Post>& window_posts,
                                                      const Corpus& corpus) {
  // url -> per-topic citing-post counts
  std::map<std::string, std::map<int, int>> counts;
  for (const auto& p : window_posts) {
    int t = m.topic_of(p.id);
    if (t < 0) continue;
    for (const auto& url : p.refs) ++counts[url][t];
  }

  std::vector<AffinityRecord> out;
  for (const auto& [url, per_topic] : counts) {
    const double idf = std::log(static_cast<double>(m.k) / static_cast<double>(per_topic.size()));
    const bool in_corpus = corpus.contains(url);
    for (const auto& [topic, tf] : per_topic)
      out.push_back({url, m.window_index, topic, tf, idf, tf * idf, in_corpus});
  }
  std::sort(out.begin(), out.end(), [](const AffinityRecord& a, const AffinityRecord& b) {
    return a.topic != b.topic ? a.topic < b.topic : a.url < b.url;
  });
  return out;
}

struct ElectionRule {
  enum class Mode { top, percent };
  Mode mode = Mode::top;
  /// Records to keep in top mode; ties with the last kept score are kept too.
  int top_x = 1;
  /// Fraction of the topic's maximum score required in percent mode.
  double theta = 1.0;

  void validate() const {
    if (top_x < 1) throw error(errc::invalid_argument, "top-x must be at least 1");
    if (!(theta > 0.0 && theta <= 1.0)) throw error(errc::invalid_argument, "theta must lie in (0, 1]");
  }
};

/// Key posts of topic `t`, best first (url ascending among equal scores).
///
/// A topic whose candidates all carry the same score elects nothing: no
/// reference stands out. Records with a zero score are never elected.
inline std::vector<KeyPost> elect_key_posts(const std::vector<AffinityRecord>& records, int t,
                                            const ElectionRule& rule = {}) {
  rule.validate();
  std::vector<const AffinityRecord*> ranked;
  for (const auto& r : records)
    if (r.topic == t) ranked.push_back(&r);
  if (ranked.empty()) return {};

  std::sort(ranked.begin(), ranked.end(), [](const AffinityRecord* a, const AffinityRecord* b) {
    return a->repr != b->repr ? a->repr > b->repr : a->url < b->url;
  });
  if (ranked.size() >= 2 && ranked.front()->repr == ranked.back()->repr) return {};

  double cutoff;
  if (rule.mode == ElectionRule::Mode::top) {
    auto last = std::min<std::size_t>(static_cast<std::size_t>(rule.top_x), ranked.size()) - 1;
    cutoff = ranked[last]->repr;
  } else {
    cutoff = rule.theta * ranked.front()->repr;
  }

  std::vector<KeyPost> out;
  for (const auto* r : ranked) {
    if (r->repr < cutoff || !(r->repr > 0.0)) break;
    out.push_back({r->url, r->window_index, r->topic, r->repr, r->in_corpus, std::nullopt});
  }
  return out;
}

}  // namespace stormtrace
