#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "stormtrace/error.hpp"

namespace stormtrace {

namespace detail {

inline char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

inline std::string lowered(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = ascii_lower(c);
  return out;
}

inline bool is_hex(char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; }

// Characters that would break the line-, comma- or quote-delimited output
// formats are percent-encoded; existing escapes get uppercase hex digits.
inline std::string canonical_escapes(std::string_view s) {
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto c = static_cast<unsigned char>(s[i]);
    if (c == '%' && i + 2 < s.size() && is_hex(s[i + 1]) && is_hex(s[i + 2])) {
      out += '%';
      out += static_cast<char>(std::toupper(static_cast<unsigned char>(s[i + 1])));
      out += static_cast<char>(std::toupper(static_cast<unsigned char>(s[i + 2])));
      i += 2;
    } else if (c <= 0x20 || c == 0x7F || c == ',' || c == '"') {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xF];
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

inline bool is_tracking_param(std::string_view param) {
  auto key = param.substr(0, param.find('='));
  return lowered(key).starts_with("utm_");
}

}  // namespace detail

/// Canonical form of an absolute URL.
///
/// Lowercases scheme and host, drops the fragment and default ports,
/// renders an empty or root path as nothing, and removes `utm_*` query
/// parameters. Every other query parameter is kept in its original order.
/// The result is a fixed point: `normalize_url(normalize_url(u)) ==
/// normalize_url(u)`.
inline std::string normalize_url(std::string_view raw) {
  auto fail = [&](const char* why) {
    return error(errc::malformed_url, std::string(why) + ": '" + std::string(raw) + "'");
  };

  // Leading/trailing whitespace is never significant.
  while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.front()))) raw.remove_prefix(1);
  while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back()))) raw.remove_suffix(1);
  if (raw.empty()) throw fail("empty url");

  auto sep = raw.find("://");
  if (sep == std::string_view::npos || sep == 0) throw fail("missing scheme");
  auto scheme = detail::lowered(raw.substr(0, sep));
  if (!std::isalpha(static_cast<unsigned char>(scheme[0]))) throw fail("bad scheme");
  for (char c : scheme)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') throw fail("bad scheme");

  auto rest = raw.substr(sep + 3);
  if (auto hash = rest.find('#'); hash != std::string_view::npos) rest = rest.substr(0, hash);

  auto auth_end = rest.find_first_of("/?");
  auto authority = rest.substr(0, auth_end);
  auto tail = auth_end == std::string_view::npos ? std::string_view{} : rest.substr(auth_end);

  std::string userinfo;
  if (auto at = authority.rfind('@'); at != std::string_view::npos) {
    userinfo = std::string(authority.substr(0, at + 1));
    authority = authority.substr(at + 1);
  }

  std::string_view host = authority;
  std::string_view port;
  if (!authority.empty() && authority.front() == '[') {
    auto close = authority.find(']');
    if (close == std::string_view::npos) throw fail("unterminated IPv6 literal");
    host = authority.substr(0, close + 1);
    auto after = authority.substr(close + 1);
    if (!after.empty()) {
      if (after.front() != ':') throw fail("garbage after IPv6 literal");
      port = after.substr(1);
    }
  } else if (auto colon = authority.rfind(':'); colon != std::string_view::npos) {
    host = authority.substr(0, colon);
    port = authority.substr(colon + 1);
  }
  if (host.empty()) throw fail("missing host");
  for (char c : port)
    if (c < '0' || c > '9') throw fail("non-numeric port");
  while (port.size() > 1 && port.front() == '0') port.remove_prefix(1);
  if ((scheme == "http" && port == "80") || (scheme == "https" && port == "443")) port = {};

  std::string_view path = tail;
  std::string_view query;
  bool has_query = false;
  if (auto q = tail.find('?'); q != std::string_view::npos) {
    path = tail.substr(0, q);
    query = tail.substr(q + 1);
    has_query = true;
  }
  if (path == "/") path = {};

  std::string kept_query;
  if (has_query) {
    std::size_t start = 0;
    while (start <= query.size()) {
      auto amp = query.find('&', start);
      auto param = query.substr(start, amp == std::string_view::npos ? std::string_view::npos : amp - start);
      if (!param.empty() && !detail::is_tracking_param(param)) {
        if (!kept_query.empty()) kept_query += '&';
        kept_query += param;
      }
      if (amp == std::string_view::npos) break;
      start = amp + 1;
    }
  }

  std::string out = scheme;
  out += "://";
  out += detail::canonical_escapes(userinfo);
  out += detail::canonical_escapes(detail::lowered(host));
  if (!port.empty()) {
    out += ':';
    out += port;
  }
  out += detail::canonical_escapes(path);
  if (!kept_query.empty()) {
    out += '?';
    out += detail::canonical_escapes(kept_query);
  }
  return out;
}

/// Offline stand-in for following HTTP redirects: source URL to destination
/// URL, both stored canonical.
struct RedirectMap {
  std::map<std::string, std::string> entries;

  void add(std::string_view source, std::string_view destination) {
    entries.insert_or_assign(normalize_url(source), normalize_url(destination));
  }

  bool empty() const noexcept { return entries.empty(); }
};

inline constexpr int max_redirect_hops = 10;

/// Follows `map` from `url` until no entry matches or the hop limit is hit.
inline std::string resolve_redirects(std::string_view url, const RedirectMap& map) {
  std::string current = normalize_url(url);
  std::set<std::string> seen{current};
  for (int hop = 0; hop < max_redirect_hops; ++hop) {
    auto it = map.entries.find(current);
    if (it == map.entries.end()) break;
    std::string next = normalize_url(it->second);
    if (!seen.insert(next).second) throw error(errc::redirect_cycle, "cycle through '" + next + "'");
    current = std::move(next);
  }
  return current;
}

/// Reads `source<TAB>destination` lines; blank lines and `#` comments are
/// skipped.
inline RedirectMap read_redirect_map(std::istream& in) {
  RedirectMap map;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto tab = line.find('\t', first);
    if (tab == std::string::npos)
      throw error(errc::malformed_record, "redirect entry without a tab separator", lineno);
    try {
      map.add(std::string_view(line).substr(first, tab - first), std::string_view(line).substr(tab + 1));
    } catch (const error& e) {
      throw e.at_line(lineno);
    }
  }
  return map;
}

inline RedirectMap load_redirect_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::io_error, "cannot open redirect map '" + path + "'");
  return read_redirect_map(in);
}

}  // namespace stormtrace
