#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "stormtrace/error.hpp"
#include "stormtrace/time.hpp"
#include "stormtrace/url.hpp"

namespace stormtrace {

/// One corpus record. `id` and every element of `refs` are canonical URLs;
/// `refs` never contains `id`.
struct Post {
  std::string id;
  std::string content;
  std::string author;
  Timestamp published_at{};
  std::set<std::string> refs;

  bool references(const std::string& url) const { return refs.contains(url); }

  friend bool operator==(const Post&, const Post&) = default;
};

/// Orders posts by publication time, then id.
inline bool chronological(const Post& a, const Post& b) {
  if (a.published_at != b.published_at) return a.published_at < b.published_at;
  return a.id < b.id;
}

class Corpus {
 public:
  Corpus() = default;

  /// Builds a corpus from already canonical posts. Posts sharing an id are
  /// merged: the earliest publication wins (first seen on equal dates) and
  /// refs are unioned.
  static Corpus from_posts(std::vector<Post> posts) {
    Corpus c;
    std::map<std::string, std::size_t> slot;
    for (auto& p : posts) {
      p.refs.erase(p.id);
      auto [it, fresh] = slot.try_emplace(p.id, c.posts_.size());
      if (fresh) {
        c.posts_.push_back(std::move(p));
        continue;
      }
      Post& kept = c.posts_[it->second];
      std::set<std::string> refs = std::move(kept.refs);
      refs.insert(p.refs.begin(), p.refs.end());
      if (p.published_at < kept.published_at) kept = std::move(p);
      kept.refs = std::move(refs);
    }
    std::sort(c.posts_.begin(), c.posts_.end(), chronological);
    for (std::size_t i = 0; i < c.posts_.size(); ++i) c.index_.emplace(c.posts_[i].id, i);
    if (!c.posts_.empty()) {
      c.first_at_ = c.posts_.front().published_at;
      c.last_at_ = c.posts_.back().published_at;
    }
    return c;
  }

  const std::vector<Post>& posts() const noexcept { return posts_; }
  std::size_t size() const noexcept { return posts_.size(); }
  bool empty() const noexcept { return posts_.empty(); }

  Timestamp first_at() const noexcept { return first_at_; }
  Timestamp last_at() const noexcept { return last_at_; }
  std::chrono::seconds span() const noexcept { return last_at_ - first_at_; }
  double span_days() const noexcept {
    return static_cast<double>(span().count()) / static_cast<double>(seconds_per_day);
  }

  bool contains(const std::string& url) const { return index_.contains(url); }

  const Post* find(const std::string& url) const {
    auto it = index_.find(url);
    return it == index_.end() ? nullptr : &posts_[it->second];
  }

  friend bool operator==(const Corpus& a, const Corpus& b) { return a.posts_ == b.posts_; }

 private:
  std::vector<Post> posts_;
  std::map<std::string, std::size_t> index_;
  Timestamp first_at_{};
  Timestamp last_at_{};
};

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& record, const char* name) {
  auto it = record.find(name);
  if (it == record.end() || it->is_null()) throw error(errc::missing_field, std::string("record lacks '") + name + "'");
  return *it;
}

inline std::string require_string(const nlohmann::json& record, const char* name) {
  const auto& v = require_field(record, name);
  if (!v.is_string()) throw error(errc::missing_field, std::string("'") + name + "' is not a string");
  return v.get<std::string>();
}

}  // namespace detail

/// Parses one input record and canonicalizes its urls.
inline Post parse_post(std::string_view line, const RedirectMap& redirects) {
  nlohmann::json record;
  try {
    record = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw error(errc::malformed_record, e.what());
  }
  if (!record.is_object()) throw error(errc::malformed_record, "record is not a JSON object");

  Post p;
  auto raw_id = detail::require_string(record, "id");
  p.content = detail::require_string(record, "content");
  p.author = detail::require_string(record, "author");
  auto date = detail::require_string(record, "date");
  const auto& refs = detail::require_field(record, "refs");
  if (!refs.is_array()) throw error(errc::missing_field, "'refs' is not an array");

  p.published_at = parse_timestamp(date);
  p.id = resolve_redirects(raw_id, redirects);
  for (const auto& r : refs) {
    if (!r.is_string()) throw error(errc::missing_field, "'refs' holds a non-string element");
    p.refs.insert(resolve_redirects(r.get<std::string>(), redirects));
  }
  p.refs.erase(p.id);
  return p;
}

/// Reads line-delimited JSON records. Blank lines are ignored; any error is
/// re-raised carrying its 1-based line number.
inline Corpus read_corpus(std::istream& in, const RedirectMap& redirects = {}) {
  std::vector<Post> posts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      posts.push_back(parse_post(line, redirects));
    } catch (const error& e) {
      throw e.at_line(lineno);
    }
  }
  return Corpus::from_posts(std::move(posts));
}

inline Corpus load_corpus(const std::string& path, const RedirectMap& redirects = {}) {
  std::ifstream in(path);
  if (!in) throw error(errc::io_error, "cannot open corpus '" + path + "'");
  return read_corpus(in, redirects);
}

inline nlohmann::json to_json(const Post& p) {
  return nlohmann::json{{"id", p.id},
                        {"content", p.content},
                        {"author", p.author},
                        {"date", format_timestamp(p.published_at)},
                        {"refs", p.refs}};
}

/// Writes the corpus back in the input schema, one record per line, in
/// chronological order. Reading the output yields an equal corpus.
inline void write_corpus(std::ostream& out, const Corpus& c) {
  for (const auto& p : c.posts()) out << to_json(p).dump() << '\n';
}

}  // namespace stormtrace
