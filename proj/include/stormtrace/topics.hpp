#pragma once

#include <cassert>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "stormtrace/error.hpp"
#include "stormtrace/textprep.hpp"

namespace stormtrace {

struct LdaParams {
  int k = 10;
  double alpha = 5.0;
  double beta = 0.01;
  int iterations = 500;
  int burn_in = 100;
  std::uint64_t seed = 42;

  /// alpha = 50 / k, beta = 0.01, 500 sweeps with 100 burn-in.
  static LdaParams defaults(int k, std::uint64_t seed = 42) {
    LdaParams p;
    p.k = k;
    p.alpha = k > 0 ? 50.0 / k : 50.0;
    p.seed = seed;
    return p;
  }

  void validate() const {
    if (k < 1) throw error(errc::invalid_argument, "topic count must be at least 1");
    if (!(alpha > 0.0)) throw error(errc::invalid_argument, "alpha must be positive");
    if (!(beta > 0.0)) throw error(errc::invalid_argument, "beta must be positive");
    if (iterations < 1) throw error(errc::invalid_argument, "iterations must be at least 1");
    if (burn_in < 0 || burn_in >= iterations)
      throw error(errc::invalid_argument, "burn-in must lie in [0, iterations)");
  }
};

/// Count totals observed after one Gibbs sweep. The sampler keeps
/// `topic_total == doc_total == token_total` at every sweep.
struct SweepStats {
  int sweep = 0;
  std::int64_t topic_total = 0;
  std::int64_t doc_total = 0;
  std::int64_t token_total = 0;
};

using SweepObserver = std::function<void(const SweepStats&)>;

/// Per-window LDA fit with a crisp document assignment.
struct TopicModel {
  int window_index = 0;
  int k = 0;
  std::vector<std::string> doc_ids;
  std::vector<std::vector<double>> doc_topic;
  std::vector<std::string> vocabulary;
  std::vector<std::vector<double>> topic_word;
  std::map<std::string, int> assignment;
  /// More topics than documents; the fit still runs.
  bool degenerate_k = false;

  int topic_of(const std::string& post_id) const {
    auto it = assignment.find(post_id);
    return it == assignment.end() ? -1 : it->second;
  }
};

namespace detail {

// Uniform double in [0, 1) from the top 53 bits, identical on every
// standard library (std::uniform_real_distribution is not).
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline int argmax_lowest(const std::vector<double>& row) {
  int best = 0;
  for (int t = 1; t < static_cast<int>(row.size()); ++t)
    if (row[t] > row[best]) best = t;
  return best;
}

}  // namespace detail

/// Collapsed Gibbs sampling. Zero-token documents are skipped; estimates are
/// averaged over every sweep after burn-in. Deterministic for a given seed.
inline TopicModel fit_lda(const std::vector<TokenizedPost>& docs, const LdaParams& params,
                          const SweepObserver& observer = {}) {
  params.validate();
  const int K = params.k;

  TopicModel model;
  model.k = K;

  std::unordered_map<std::string, int> word_ids;
  std::vector<std::vector<int>> words;
  for (const auto& d : docs) {
    if (d.tokens.empty()) continue;
    std::vector<int> ids;
    ids.reserve(d.tokens.size());
    for (const auto& tok : d.tokens) {
      auto [it, fresh] = word_ids.try_emplace(tok, static_cast<int>(model.vocabulary.size()));
      if (fresh) model.vocabulary.push_back(tok);
      ids.push_back(it->second);
    }
    model.doc_ids.push_back(d.post_id);
    words.push_back(std::move(ids));
  }
  if (words.empty()) throw error(errc::empty_window, "no document with tokens");
  model.degenerate_k = K > static_cast<int>(words.size());

  const int D = static_cast<int>(words.size());
  const int V = static_cast<int>(model.vocabulary.size());
  const double alpha = params.alpha;
  const double beta = params.beta;
  const double v_beta = V * beta;

  std::vector<std::vector<int>> z(D);
  std::vector<std::vector<int>> n_dk(D, std::vector<int>(K, 0));
  std::vector<std::vector<int>> n_kw(K, std::vector<int>(V, 0));
  std::vector<int> n_k(K, 0);
  std::int64_t token_total = 0;

  std::mt19937_64 rng(params.seed);
  for (int d = 0; d < D; ++d) {
    z[d].resize(words[d].size());
    for (std::size_t n = 0; n < words[d].size(); ++n) {
      int t = static_cast<int>(detail::unit_uniform(rng) * K);
      z[d][n] = t;
      ++n_dk[d][t];
      ++n_kw[t][words[d][n]];
      ++n_k[t];
      ++token_total;
    }
  }

  std::vector<std::vector<double>> theta_sum(D, std::vector<double>(K, 0.0));
  std::vector<std::vector<double>> phi_sum(K, std::vector<double>(V, 0.0));
  std::vector<double> cumulative(K);
  int samples = 0;
#ifdef NDEBUG
  constexpr bool check_counts = false;
#else
  constexpr bool check_counts = true;
#endif

  for (int sweep = 0; sweep < params.iterations; ++sweep) {
    for (int d = 0; d < D; ++d) {
      for (std::size_t n = 0; n < words[d].size(); ++n) {
        const int w = words[d][n];
        int t = z[d][n];
        --n_dk[d][t];
        --n_kw[t][w];
        --n_k[t];

        double total = 0.0;
        for (int c = 0; c < K; ++c) {
          total += (n_dk[d][c] + alpha) * (n_kw[c][w] + beta) / (n_k[c] + v_beta);
          cumulative[c] = total;
        }
        const double u = detail::unit_uniform(rng) * total;
        t = 0;
        while (t < K - 1 && cumulative[t] <= u) ++t;

        z[d][n] = t;
        ++n_dk[d][t];
        ++n_kw[t][w];
        ++n_k[t];
      }
    }

    if (observer || check_counts) {
      SweepStats stats{sweep, 0, 0, token_total};
      for (int t = 0; t < K; ++t) stats.topic_total += n_k[t];
      for (int d = 0; d < D; ++d)
        for (int t = 0; t < K; ++t) stats.doc_total += n_dk[d][t];
      assert(stats.topic_total == token_total && stats.doc_total == token_total);
      if (observer) observer(stats);
    }

    if (sweep >= params.burn_in) {
      ++samples;
      for (int d = 0; d < D; ++d) {
        const double denom = static_cast<double>(words[d].size()) + K * alpha;
        for (int t = 0; t < K; ++t) theta_sum[d][t] += (n_dk[d][t] + alpha) / denom;
      }
      for (int t = 0; t < K; ++t) {
        const double denom = n_k[t] + v_beta;
        for (int w = 0; w < V; ++w) phi_sum[t][w] += (n_kw[t][w] + beta) / denom;
      }
    }
  }

  model.doc_topic = std::move(theta_sum);
  model.topic_word = std::move(phi_sum);
  for (auto* rows : {&model.doc_topic, &model.topic_word}) {
    for (auto& row : *rows) {
      for (auto& v : row) v /= samples;
    }
  }
  for (int d = 0; d < D; ++d) model.assignment.emplace(model.doc_ids[d], detail::argmax_lowest(model.doc_topic[d]));
  return model;
}

/// Posts whose crisp assignment is topic `t`.
inline std::set<std::string> topic_members(const TopicModel& m, int t) {
  if (t < 0 || t >= m.k)
    throw error(errc::topic_out_of_range, "topic " + std::to_string(t) + " outside [0, " + std::to_string(m.k) + ")");
  std::set<std::string> out;
  for (const auto& [id, topic] : m.assignment)
    if (topic == t) out.insert(id);
  return out;
}

}  // namespace stormtrace
