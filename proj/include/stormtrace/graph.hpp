#pragma once

#include <algorithm>
#include <cstdio>
#include <deque>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stormtrace/affinity.hpp"
#include "stormtrace/corpus.hpp"
#include "stormtrace/error.hpp"
#include "stormtrace/json_format.hpp"
#include "stormtrace/url.hpp"

namespace stormtrace {

struct GraphNode {
  std::string url;
  /// Largest score among the node's elections.
  double repr = 0.0;
  bool in_corpus = false;
  std::optional<std::string> author;
  /// Every (window, topic) pair in which the url was elected.
  std::set<std::pair<int, int>> memberships;

  friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

/// Citation graph over key posts; an edge runs from the citing post to the
/// cited one.
struct KeyPostGraph {
  std::map<std::string, GraphNode> nodes;
  std::set<std::pair<std::string, std::string>> edges;

  double node_size(const std::string& url) const { return nodes.at(url).repr; }

  std::size_t out_degree(const std::string& url) const {
    auto it = edges.lower_bound({url, std::string{}});
    std::size_t n = 0;
    for (; it != edges.end() && it->first == url; ++it) ++n;
    return n;
  }
};

/// Nodes are the distinct elected urls; `b -> a` exists when key post `b`
/// is a corpus post referencing key post `a`.
inline KeyPostGraph build_graph(const std::vector<KeyPost>& key_posts, const Corpus& corpus,
                                const RedirectMap& redirects = {}) {
  KeyPostGraph g;
  for (const auto& kp : key_posts) {
    auto [it, fresh] = g.nodes.try_emplace(kp.url);
    GraphNode& node = it->second;
    if (fresh) {
      node.url = kp.url;
      node.repr = kp.repr;
      node.in_corpus = corpus.contains(kp.url);
      if (const Post* p = corpus.find(kp.url)) node.author = p->author;
    } else {
      node.repr = std::max(node.repr, kp.repr);
    }
    node.memberships.emplace(kp.window_index, kp.topic);
  }

  for (const auto& [url, node] : g.nodes) {
    const Post* citing = corpus.find(url);
    if (citing == nullptr) continue;
    for (const auto& ref : citing->refs) {
      auto target = redirects.empty() ? ref : resolve_redirects(ref, redirects);
      if (target != url && g.nodes.contains(target)) g.edges.emplace(url, target);
    }
  }
  return g;
}

/// Weakly connected components, largest first, then by smallest url.
inline std::vector<std::set<std::string>> connected_components(const KeyPostGraph& g) {
  std::map<std::string, std::vector<std::string>> adjacent;
  for (const auto& [from, to] : g.edges) {
    adjacent[from].push_back(to);
    adjacent[to].push_back(from);
  }

  std::vector<std::set<std::string>> out;
  std::set<std::string> visited;
  for (const auto& [url, node] : g.nodes) {
    if (visited.contains(url)) continue;
    std::set<std::string> component;
    std::deque<std::string> frontier{url};
    visited.insert(url);
    while (!frontier.empty()) {
      auto current = std::move(frontier.front());
      frontier.pop_front();
      if (auto it = adjacent.find(current); it != adjacent.end()) {
        for (const auto& next : it->second)
          if (visited.insert(next).second) frontier.push_back(next);
      }
      component.insert(std::move(current));
    }
    out.push_back(std::move(component));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() > b.size() : *a.begin() < *b.begin();
  });
  return out;
}

enum class GraphFormat { dot, edge_json };

namespace detail {

inline std::string dot_quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace detail

/// Graphviz digraph; node width scales linearly with repr, the largest
/// node getting width 2.0.
inline void write_dot(std::ostream& out, const KeyPostGraph& g) {
  double max_repr = 0.0;
  for (const auto& [url, node] : g.nodes) max_repr = std::max(max_repr, node.repr);

  out << "digraph keyposts {\n";
  for (const auto& [url, node] : g.nodes) {
    double width = max_repr > 0.0 ? 2.0 * node.repr / max_repr : 0.0;
    out << "  " << detail::dot_quoted(url) << " [label=" << detail::dot_quoted(url)
        << ", width=" << format_fixed(width) << "];\n";
  }
  for (const auto& [from, to] : g.edges)
    out << "  " << detail::dot_quoted(from) << " -> " << detail::dot_quoted(to) << ";\n";
  out << "}\n";
}

inline nlohmann::json graph_to_json(const KeyPostGraph& g) {
  auto nodes = nlohmann::json::array();
  for (const auto& [url, node] : g.nodes) {
    auto windows = nlohmann::json::array();
    auto topics = nlohmann::json::array();
    for (const auto& [w, t] : node.memberships) {
      windows.push_back(w);
      topics.push_back(t);
    }
    nodes.push_back({{"url", url},
                     {"repr", node.repr},
                     {"windows", std::move(windows)},
                     {"topics", std::move(topics)},
                     {"in_corpus", node.in_corpus}});
  }
  auto edges = nlohmann::json::array();
  for (const auto& [from, to] : g.edges) edges.push_back({{"from", from}, {"to", to}});
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

/// Inverse of `graph_to_json`. Scores come back at the written precision
/// and authors are not part of the format.
inline KeyPostGraph graph_from_json(const nlohmann::json& j) {
  KeyPostGraph g;
  try {
    for (const auto& n : j.at("nodes")) {
      GraphNode node;
      node.url = n.at("url").get<std::string>();
      node.repr = n.at("repr").get<double>();
      node.in_corpus = n.at("in_corpus").get<bool>();
      const auto& windows = n.at("windows");
      const auto& topics = n.at("topics");
      if (windows.size() != topics.size()) throw error(errc::malformed_record, "windows/topics length mismatch");
      for (std::size_t i = 0; i < windows.size(); ++i)
        node.memberships.emplace(windows[i].get<int>(), topics[i].get<int>());
      g.nodes.emplace(node.url, std::move(node));
    }
    for (const auto& e : j.at("edges")) g.edges.emplace(e.at("from").get<std::string>(), e.at("to").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw error(errc::malformed_record, e.what());
  }
  return g;
}

inline void export_graph(const KeyPostGraph& g, GraphFormat format, const std::string& path) {
  std::ostringstream body;
  if (format == GraphFormat::dot) write_dot(body, g);
  else write_json(body, graph_to_json(g));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error(errc::io_error, "cannot write '" + path + "'");
  out << body.str();
  if (!out) throw error(errc::io_error, "write to '" + path + "' failed");
}

}  // namespace stormtrace
