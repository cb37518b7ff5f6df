#pragma once

#include <fstream>
#include <initializer_list>
#include <istream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "stormtrace/corpus.hpp"
#include "stormtrace/error.hpp"
#include "stormtrace/porter.hpp"
#include "stormtrace/smart_stopwords.hpp"

namespace stormtrace {

class StopwordList {
 public:
  StopwordList() = default;
  StopwordList(std::initializer_list<std::string_view> words) {
    for (auto w : words) add(w);
  }

  /// The bundled SMART English list.
  static StopwordList english() {
    StopwordList list;
    for (auto w : smart_stopwords) list.add(w);
    return list;
  }

  /// One word per line, `#` comments and blank lines ignored.
  static StopwordList read(std::istream& in) {
    StopwordList list;
    std::string line;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      auto last = line.find_last_not_of(" \t\r");
      list.add(std::string_view(line).substr(first, last - first + 1));
    }
    return list;
  }

  static StopwordList load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::io_error, "cannot open stopword file '" + path + "'");
    return read(in);
  }

  void add(std::string_view word) { words_.insert(detail::lowered(word)); }
  bool contains(std::string_view word) const { return words_.contains(std::string(word)); }
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::set<std::string> words_;
};

namespace detail {

inline bool looks_like_url(std::string_view token) {
  if (token.find("://") != std::string_view::npos) return true;
  return token.size() > 4 && lowered(token.substr(0, 4)) == "www.";
}

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace detail

/// Lowercase ASCII letters separated by single spaces. Embedded URLs are
/// dropped; digits, punctuation, control and non-ASCII bytes act as
/// separators.
inline std::string clean(std::string_view content) {
  std::string out;
  out.reserve(content.size());
  bool pending_space = false;
  std::size_t i = 0;
  while (i < content.size()) {
    while (i < content.size() && detail::is_space(content[i])) ++i;
    std::size_t start = i;
    while (i < content.size() && !detail::is_space(content[i])) ++i;
    auto token = content.substr(start, i - start);
    if (token.empty() || detail::looks_like_url(token)) continue;
    pending_space = !out.empty();
    for (char c : token) {
      char lc = detail::ascii_lower(c);
      if (lc >= 'a' && lc <= 'z') {
        if (pending_space) out += ' ';
        pending_space = false;
        out += lc;
      } else {
        pending_space = !out.empty();
      }
    }
  }
  return out;
}

struct TokenizedPost {
  std::string post_id;
  std::vector<std::string> tokens;

  std::size_t token_count() const noexcept { return tokens.size(); }
};

/// Stopwords are removed before stemming; a stem that collides with a
/// stopword is dropped as well.
inline TokenizedPost tokenize_post(const Post& p, const StopwordList& stops) {
  TokenizedPost out{p.id, {}};
  std::string text = clean(p.content);
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto space = text.find(' ', pos);
    if (space == std::string::npos) space = text.size();
    std::string_view word(text.data() + pos, space - pos);
    pos = space + 1;
    if (stops.contains(word)) continue;
    auto s = stem(word);
    if (stops.contains(s)) continue;
    out.tokens.push_back(std::move(s));
  }
  return out;
}

}  // namespace stormtrace
