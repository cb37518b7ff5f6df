// Elect key posts from a posts file using the library directly.
//
//   key_posts posts.jsonl [topics]

#include <iostream>

#include "stormtrace/pipeline.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: key_posts posts.jsonl [topics]\n";
    return 2;
  }
  using namespace stormtrace;
  try {
    PipelineConfig cfg;
    if (argc > 2) cfg.k = std::stoi(argv[2]);

    Corpus corpus = load_corpus(argv[1]);
    Analysis a = analyze(std::move(corpus), StopwordList::english(), cfg);

    for (const auto& s : a.summaries) {
      std::cout << "window " << s.window.index << " (" << format_timestamp(s.window.start) << ")\n";
      for (const auto& kp : s.key_posts)
        std::cout << "  topic " << kp.topic << "  " << format_fixed(kp.repr) << "  " << kp.url << '\n';
    }
    for (const auto& r : a.key_authors) std::cout << r.author << ' ' << format_fixed(r.aggregated) << '\n';
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
}
