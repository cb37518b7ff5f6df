#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "stormtrace/corpus.hpp"
#include "stormtrace/error.hpp"
#include "stormtrace/time.hpp"

namespace stormtrace {

/// Window size and step, in whole days.
struct WindowSpec {
  int gamma_days = 7;
  int delta_days = 1;

  void validate() const {
    if (gamma_days < 1) throw error(errc::invalid_argument, "gamma must be at least 1 day");
    if (delta_days < 1) throw error(errc::invalid_argument, "delta must be at least 1 day");
    if (delta_days > gamma_days) throw error(errc::invalid_argument, "delta must not exceed gamma");
  }
};

/// Closed interval [start, end]; both bounds belong to the window.
struct TimeWindow {
  int index = 0;
  Timestamp start{};
  Timestamp end{};

  bool contains(Timestamp t) const noexcept { return start <= t && t <= end; }

  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

/// Windows of `gamma` days starting at `first_at + i * delta`. When the last
/// regular window ends before the newest post, one more window anchored at
/// the corpus end is appended so every post is covered.
inline std::vector<TimeWindow> make_windows(const Corpus& c, const WindowSpec& spec) {
  spec.validate();
  if (c.empty()) throw error(errc::empty_corpus, "cannot window an empty corpus");

  const auto gamma = whole_days(spec.gamma_days);
  const auto delta = whole_days(spec.delta_days);
  std::vector<TimeWindow> out;
  if (c.span() <= gamma) {
    out.push_back({0, c.first_at(), c.first_at() + gamma});
    return out;
  }
  const auto regular = (c.span() - gamma) / delta + 1;
  out.reserve(static_cast<std::size_t>(regular) + 1);
  for (std::int64_t i = 0; i < regular; ++i) {
    auto start = c.first_at() + i * delta;
    out.push_back({static_cast<int>(i), start, start + gamma});
  }
  if (out.back().end < c.last_at())
    out.push_back({static_cast<int>(out.size()), c.last_at() - gamma, c.last_at()});
  return out;
}

/// Posts with `w.start <= published_at <= w.end`, in chronological order.
inline std::vector<Post> posts_in_window(const Corpus& c, const TimeWindow& w) {
  const auto& posts = c.posts();
  auto lo = std::lower_bound(posts.begin(), posts.end(), w.start,
                             [](const Post& p, Timestamp t) { return p.published_at < t; });
  auto hi = std::upper_bound(lo, posts.end(), w.end,
                             [](Timestamp t, const Post& p) { return t < p.published_at; });
  return {lo, hi};
}

/// Index of the earliest window containing `t`, if any.
inline std::optional<int> earliest_window(const std::vector<TimeWindow>& windows, Timestamp t) {
  for (const auto& w : windows)
    if (w.contains(t)) return w.index;
  return std::nullopt;
}

}  // namespace stormtrace
