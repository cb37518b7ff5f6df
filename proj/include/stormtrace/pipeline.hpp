#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "stormtrace/affinity.hpp"
#include "stormtrace/authors.hpp"
#include "stormtrace/corpus.hpp"
#include "stormtrace/error.hpp"
#include "stormtrace/graph.hpp"
#include "stormtrace/json_format.hpp"
#include "stormtrace/textprep.hpp"
#include "stormtrace/topics.hpp"
#include "stormtrace/url.hpp"
#include "stormtrace/windowing.hpp"

namespace stormtrace {

struct PipelineConfig {
  std::string input_path;
  std::optional<std::string> redirect_map_path;
  std::optional<std::string> stopwords_path;
  WindowSpec window;
  int k = 10;
  std::uint64_t seed = 42;
  int lda_iters = 500;
  int lda_burnin = 100;
  ElectionRule election;
  double boost_theta = 0.8;
  std::string out_dir = "out";
  /// Worker threads for the per-window stage; 0 picks the hardware count.
  unsigned threads = 0;

  LdaParams lda_params(std::uint64_t window_seed) const {
    auto p = LdaParams::defaults(k, window_seed);
    p.iterations = lda_iters;
    p.burn_in = lda_burnin;
    return p;
  }

  void validate() const {
    window.validate();
    lda_params(seed).validate();
    election.validate();
    if (!(boost_theta > 0.0 && boost_theta <= 1.0))
      throw error(errc::invalid_argument, "boost theta must lie in (0, 1]");
  }
};

/// Stage label plus the underlying error, for diagnostics.
class stage_error : public std::runtime_error {
 public:
  stage_error(std::string stage, const error& cause)
      : std::runtime_error(stage + ": " + cause.what()), stage_(std::move(stage)), cause_(cause) {}

  const std::string& stage() const noexcept { return stage_; }
  const error& cause() const noexcept { return cause_; }

 private:
  std::string stage_;
  error cause_;
};

struct WindowSummary {
  TimeWindow window;
  int post_count = 0;
  /// Posts with at least one token after preprocessing.
  int document_count = 0;
  /// No documents, so no topics were fitted.
  bool skipped = false;
  bool degenerate_k = false;
  std::vector<int> topic_sizes;
  std::vector<AffinityRecord> records;
  std::vector<KeyPost> key_posts;
};

struct BoostEntry {
  BoostResult result;
  bool elected = false;
};

struct Analysis {
  Corpus corpus;
  std::vector<TimeWindow> windows;
  std::vector<WindowSummary> summaries;
  std::vector<KeyPost> key_posts;
  std::vector<AuthorInfluence> key_authors;
  std::vector<BoostEntry> boost_authors;
  KeyPostGraph graph;
  std::vector<std::set<std::string>> components;
  std::vector<std::string> warnings;
};

struct RunReport {
  Analysis analysis;
  /// Wall-clock milliseconds per stage, in execution order.
  std::vector<std::pair<std::string, double>> timings;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class StageClock {
 public:
  explicit StageClock(std::vector<std::pair<std::string, double>>* sink) : sink_(sink) {}

  void lap(std::string name) {
    auto now = std::chrono::steady_clock::now();
    if (sink_) sink_->emplace_back(std::move(name), std::chrono::duration<double, std::milli>(now - last_).count());
    last_ = now;
  }

 private:
  std::vector<std::pair<std::string, double>>* sink_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

template <class Fn>
decltype(auto) in_stage(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const error& e) {
    throw stage_error(stage, e);
  }
}

inline bool ranks_before(const KeyPost& a, const KeyPost& b) {
  if (a.window_index != b.window_index) return a.window_index < b.window_index;
  if (a.topic != b.topic) return a.topic < b.topic;
  if (a.repr != b.repr) return a.repr > b.repr;
  return a.url < b.url;
}

}  // namespace detail

/// Seed of the LDA chain for one window, derived from the run seed.
inline std::uint64_t window_seed(std::uint64_t seed, int window_index) {
  return detail::splitmix64(seed ^ detail::splitmix64(static_cast<std::uint64_t>(window_index)));
}

/// Topic detection and key-post election for one window.
inline WindowSummary analyze_window(const Corpus& corpus, const TimeWindow& w,
                                    const std::map<std::string, TokenizedPost>& tokens, const PipelineConfig& cfg) {
  WindowSummary s;
  s.window = w;
  auto posts = posts_in_window(corpus, w);
  s.post_count = static_cast<int>(posts.size());

  std::vector<TokenizedPost> docs;
  for (const auto& p : posts) {
    const auto& tp = tokens.at(p.id);
    if (tp.token_count() > 0) docs.push_back(tp);
  }
  s.document_count = static_cast<int>(docs.size());
  if (docs.empty()) {
    s.skipped = true;
    return s;
  }

  TopicModel model = fit_lda(docs, cfg.lda_params(window_seed(cfg.seed, w.index)));
  model.window_index = w.index;
  s.degenerate_k = model.degenerate_k;
  s.topic_sizes.assign(static_cast<std::size_t>(model.k), 0);
  for (const auto& [id, t] : model.assignment) ++s.topic_sizes[static_cast<std::size_t>(t)];

  s.records = compute_affinities(model, posts, corpus);
  for (int t = 0; t < model.k; ++t) {
    for (auto& kp : elect_key_posts(s.records, t, cfg.election)) {
      if (const Post* p = corpus.find(kp.url)) kp.author = p->author;
      s.key_posts.push_back(std::move(kp));
    }
  }
  return s;
}

/// Runs every stage after ingest on an already loaded corpus.
inline Analysis analyze(Corpus corpus, const StopwordList& stops, const PipelineConfig& cfg,
                        std::vector<std::pair<std::string, double>>* timings = nullptr) {
  cfg.validate();
  detail::StageClock clock(timings);
  Analysis a;
  a.corpus = std::move(corpus);

  std::map<std::string, TokenizedPost> tokens;
  for (const auto& p : a.corpus.posts()) tokens.emplace(p.id, tokenize_post(p, stops));
  clock.lap("textprep");

  a.windows = detail::in_stage("windowing", [&] { return make_windows(a.corpus, cfg.window); });
  clock.lap("windowing");

  a.summaries.resize(a.windows.size());
  unsigned workers = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(a.windows.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(a.windows.size());
  auto work = [&] {
    for (std::size_t i = next++; i < a.windows.size(); i = next++) {
      try {
        a.summaries[i] = analyze_window(a.corpus, a.windows[i], tokens, cfg);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  for (auto& f : failures) {
    if (!f) continue;
    try {
      std::rethrow_exception(f);
    } catch (const error& e) {
      throw stage_error("topics", e);
    }
  }
  for (const auto& s : a.summaries) {
    if (s.skipped)
      a.warnings.push_back("window " + std::to_string(s.window.index + 1) + " has no documents with tokens");
    else if (s.degenerate_k)
      a.warnings.push_back("window " + std::to_string(s.window.index + 1) + " has fewer documents (" +
                           std::to_string(s.document_count) + ") than topics (" + std::to_string(cfg.k) + ")");
    a.key_posts.insert(a.key_posts.end(), s.key_posts.begin(), s.key_posts.end());
  }
  std::sort(a.key_posts.begin(), a.key_posts.end(), detail::ranks_before);
  clock.lap("topics+affinity");

  a.graph = build_graph(a.key_posts, a.corpus);
  a.components = connected_components(a.graph);
  clock.lap("graph");

  a.key_authors = aggregated_influence(a.key_posts, a.corpus);
  auto boosts = detail::in_stage("authors", [&] { return author_boost_scores(a.corpus, a.windows); });
  auto elected = elect_boost_authors(boosts, cfg.boost_theta);
  std::set<std::string> elected_names;
  for (const auto& r : elected) elected_names.insert(r.author);
  for (auto& r : boosts) {
    bool chosen = elected_names.contains(r.author);
    a.boost_authors.push_back({std::move(r), chosen});
  }
  clock.lap("authors");
  return a;
}

/// Timeline rows: each positive-score record of a (window, topic) with its
/// percentage share of that topic's total score.
inline void emit_timeline(std::ostream& out, const std::vector<WindowSummary>& summaries) {
  out << "window_index,topic,url,repr,share\n";
  for (const auto& s : summaries) {
    std::map<int, std::vector<const AffinityRecord*>> by_topic;
    for (const auto& r : s.records)
      if (r.repr > 0.0) by_topic[r.topic].push_back(&r);
    for (auto& [topic, rows] : by_topic) {
      double total = 0.0;
      for (const auto* r : rows) total += r->repr;
      std::stable_sort(rows.begin(), rows.end(), [](const AffinityRecord* x, const AffinityRecord* y) {
        return x->repr != y->repr ? x->repr > y->repr : x->url < y->url;
      });
      for (const auto* r : rows)
        out << s.window.index << ',' << topic << ',' << r->url << ',' << format_fixed(r->repr) << ','
            << format_fixed(100.0 * r->repr / total) << '\n';
    }
  }
}

inline nlohmann::json key_post_json(const KeyPost& kp) {
  nlohmann::json j{{"url", kp.url},           {"window", kp.window_index}, {"topic", kp.topic},
                   {"repr", kp.repr},         {"in_corpus", kp.in_corpus}, {"author", nullptr}};
  if (kp.author) j["author"] = *kp.author;
  return j;
}

inline nlohmann::json report_json(const Analysis& a, const PipelineConfig& cfg) {
  using nlohmann::json;
  json windows = json::array();
  std::size_t window_post_total = 0;
  std::set<std::string> covered;
  for (const auto& s : a.summaries) {
    window_post_total += static_cast<std::size_t>(s.post_count);
    for (const auto& p : posts_in_window(a.corpus, s.window)) covered.insert(p.id);
    json kps = json::array();
    for (const auto& kp : s.key_posts) kps.push_back({{"url", kp.url}, {"topic", kp.topic}, {"repr", kp.repr}});
    windows.push_back({{"index", s.window.index},
                       {"start", format_timestamp(s.window.start)},
                       {"end", format_timestamp(s.window.end)},
                       {"posts", s.post_count},
                       {"documents", s.document_count},
                       {"topics", s.skipped ? 0 : cfg.k},
                       {"topic_sizes", s.topic_sizes},
                       {"skipped", s.skipped},
                       {"degenerate_k", s.degenerate_k},
                       {"candidates", s.records.size()},
                       {"key_posts", std::move(kps)}});
  }

  json sizes = json::array();
  for (const auto& c : a.components) sizes.push_back(c.size());

  json config{{"gamma_days", cfg.window.gamma_days},
              {"delta_days", cfg.window.delta_days},
              {"topics", cfg.k},
              {"seed", cfg.seed},
              {"lda_iters", cfg.lda_iters},
              {"lda_burnin", cfg.lda_burnin},
              {"elect_mode", cfg.election.mode == ElectionRule::Mode::top ? "top" : "percent"},
              {"top_x", cfg.election.top_x},
              {"percent_theta", cfg.election.theta},
              {"boost_theta", cfg.boost_theta}};

  std::size_t elected_boost = 0;
  for (const auto& b : a.boost_authors) elected_boost += b.elected ? 1 : 0;

  return json{
      {"corpus",
       {{"posts", a.corpus.size()},
        {"first_at", format_timestamp(a.corpus.first_at())},
        {"last_at", format_timestamp(a.corpus.last_at())},
        {"span_days", a.corpus.span_days()}}},
      {"config", std::move(config)},
      {"windows", std::move(windows)},
      {"coverage", {{"window_post_total", window_post_total}, {"uncovered_posts", a.corpus.size() - covered.size()}}},
      {"key_posts", a.key_posts.size()},
      {"key_authors", a.key_authors.size()},
      {"boost_authors", {{"scored", a.boost_authors.size()}, {"elected", elected_boost}}},
      {"graph", {{"nodes", a.graph.nodes.size()}, {"edges", a.graph.edges.size()}, {"components", std::move(sizes)}}},
      {"warnings", a.warnings},
  };
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error(errc::io_error, "cannot write '" + path.string() + "'");
  out << body;
  if (!out) throw error(errc::io_error, "write to '" + path.string() + "' failed");
}

inline std::string json_text(const nlohmann::json& j) {
  std::ostringstream s;
  write_json(s, j);
  return s.str();
}

}  // namespace detail

inline void write_outputs(const Analysis& a, const PipelineConfig& cfg, const std::filesystem::path& dir) {
  using nlohmann::json;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw error(errc::io_error, "cannot create '" + dir.string() + "': " + ec.message());

  json key_posts = json::array();
  for (const auto& kp : a.key_posts) key_posts.push_back(key_post_json(kp));
  detail::write_file(dir / "key_posts.json", detail::json_text(key_posts));

  json key_authors = json::array();
  for (const auto& r : a.key_authors)
    key_authors.push_back({{"author", r.author}, {"aggregated", r.aggregated}, {"key_post_urls", r.key_post_urls}});
  detail::write_file(dir / "key_authors.json", detail::json_text(key_authors));

  json boost = json::array();
  for (const auto& b : a.boost_authors)
    boost.push_back({{"author", b.result.author},
                     {"boost", b.result.boost},
                     {"average", b.result.average()},
                     {"event_count", b.result.event_count},
                     {"elected", b.elected}});
  detail::write_file(dir / "boost_authors.json", detail::json_text(boost));

  export_graph(a.graph, GraphFormat::dot, (dir / "graph.dot").string());
  export_graph(a.graph, GraphFormat::edge_json, (dir / "graph.json").string());

  std::ostringstream timeline;
  emit_timeline(timeline, a.summaries);
  detail::write_file(dir / "timeline.csv", timeline.str());

  detail::write_file(dir / "report.json", detail::json_text(report_json(a, cfg)));
}

/// Loads inputs named by `cfg`, runs every stage and writes the output
/// directory. Failures surface as `stage_error`.
inline RunReport run_pipeline(const PipelineConfig& cfg) {
  RunReport report;
  detail::StageClock clock(&report.timings);
  detail::in_stage("config", [&] { cfg.validate(); });

  RedirectMap redirects;
  if (cfg.redirect_map_path)
    redirects = detail::in_stage("redirect-map", [&] { return load_redirect_map(*cfg.redirect_map_path); });
  StopwordList stops = cfg.stopwords_path
                           ? detail::in_stage("stopwords", [&] { return StopwordList::load(*cfg.stopwords_path); })
                           : StopwordList::english();
  Corpus corpus = detail::in_stage("ingest", [&] { return load_corpus(cfg.input_path, redirects); });
  if (corpus.empty()) throw stage_error("ingest", error(errc::empty_corpus, "'" + cfg.input_path + "' has no records"));
  clock.lap("ingest");

  report.analysis = analyze(std::move(corpus), stops, cfg, &report.timings);
  detail::StageClock output_clock(&report.timings);
  detail::in_stage("output", [&] { write_outputs(report.analysis, cfg, cfg.out_dir); });
  output_clock.lap("output");
  return report;
}

}  // namespace stormtrace
