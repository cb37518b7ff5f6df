// stormtrace: key-post and key-author election over a time-stamped corpus.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "stormtrace/corpus.hpp"
#include "stormtrace/fixture.hpp"
#include "stormtrace/pipeline.hpp"

namespace {

using namespace stormtrace;

void print_summary(const RunReport& report) {
  const auto& a = report.analysis;
  std::cerr << "corpus: " << a.corpus.size() << " posts, " << format_fixed(a.corpus.span_days()) << " days\n";
  for (const auto& s : a.summaries) {
    std::cerr << "window " << s.window.index + 1 << "/" << a.summaries.size() << " ["
              << format_timestamp(s.window.start) << " .. " << format_timestamp(s.window.end) << "] " << s.post_count
              << " posts, " << s.key_posts.size() << " key posts\n";
  }
  std::cerr << "graph: " << a.graph.nodes.size() << " nodes, " << a.graph.edges.size() << " edges, "
            << a.components.size() << " components\n";
  for (const auto& w : a.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& [stage, ms] : report.timings) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f ms", ms);
    std::cerr << "time " << stage << ": " << buf << '\n';
  }
}

void diagnose(const stage_error& e) {
  std::cerr << "stormtrace: stage '" << e.stage() << "' failed: " << e.cause().what() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elect key posts, key authors and boost authors per topic and time window"};
  app.require_subcommand(1);

  PipelineConfig cfg;
  std::string redirect_map;
  std::string stopwords;
  std::string elect_mode = "top";
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run the full pipeline and write the output directory");
  run->add_option("--input", cfg.input_path, "Line-delimited JSON posts")->required()->check(CLI::ExistingFile);
  run->add_option("--redirect-map", redirect_map, "source<TAB>destination url pairs")->check(CLI::ExistingFile);
  run->add_option("--stopwords", stopwords, "Stopword file replacing the bundled English list")
      ->check(CLI::ExistingFile);
  run->add_option("--gamma", cfg.window.gamma_days, "Window size in days")->capture_default_str();
  run->add_option("--delta", cfg.window.delta_days, "Window step in days")->capture_default_str();
  run->add_option("--topics", cfg.k, "LDA topics per window")->capture_default_str();
  run->add_option("--seed", cfg.seed, "Sampler seed")->capture_default_str();
  run->add_option("--lda-iters", cfg.lda_iters, "Gibbs sweeps per window")->capture_default_str();
  run->add_option("--lda-burnin", cfg.lda_burnin, "Sweeps discarded before averaging")->capture_default_str();
  run->add_option("--top-x", cfg.election.top_x, "Key posts per topic in top mode")->capture_default_str();
  run->add_option("--elect-mode", elect_mode, "top | percent")
      ->check(CLI::IsMember({"top", "percent"}))
      ->capture_default_str();
  run->add_option("--percent-theta", cfg.election.theta, "Fraction of the topic maximum in percent mode")
      ->capture_default_str();
  run->add_option("--boost-theta", cfg.boost_theta, "Fraction of the best average boost to elect an author")
      ->capture_default_str();
  run->add_option("--out-dir", cfg.out_dir, "Output directory")->capture_default_str();
  run->add_option("--threads", cfg.threads, "Worker threads for per-window topic fitting (0 = all cores)");
  run->add_flag("--quiet", quiet, "No summary on stderr");

  std::string validate_input;
  auto* validate = app.add_subcommand("validate", "Check the input schema without running the pipeline");
  validate->add_option("--input", validate_input, "Line-delimited JSON posts")->required();

  std::uint64_t fixture_seed = 42;
  std::string fixture_out;
  std::string fixture_kind = "standard";
  auto* gen = app.add_subcommand("gen-fixture", "Write a synthetic corpus with planted themes");
  gen->add_option("--seed", fixture_seed, "Generator seed")->capture_default_str();
  gen->add_option("--out", fixture_out, "Output file")->required();
  gen->add_option("--kind", fixture_kind, "standard | viral")
      ->check(CLI::IsMember({"standard", "viral"}))
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    if (!redirect_map.empty()) cfg.redirect_map_path = redirect_map;
    if (!stopwords.empty()) cfg.stopwords_path = stopwords;
    cfg.election.mode = elect_mode == "percent" ? ElectionRule::Mode::percent : ElectionRule::Mode::top;
    try {
      auto report = run_pipeline(cfg);
      if (!quiet) print_summary(report);
    } catch (const stage_error& e) {
      diagnose(e);
      return 1;
    }
    return 0;
  }

  if (*validate) {
    try {
      auto corpus = load_corpus(validate_input);
      std::cout << "ok: " << corpus.size() << " posts\n";
    } catch (const error& e) {
      std::cerr << "stormtrace: stage 'ingest' failed: " << e.what() << '\n';
      return 1;
    }
    return 0;
  }

  if (*gen) {
    std::ofstream out(fixture_out, std::ios::binary);
    if (!out) {
      std::cerr << "stormtrace: cannot write '" << fixture_out << "'\n";
      return 1;
    }
    write_fixture(out, generate_fixture(fixture_seed, fixture_kind == "viral" ? FixtureKind::viral
                                                                             : FixtureKind::standard));
    return out ? 0 : 1;
  }
  return 0;
}
