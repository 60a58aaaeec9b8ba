#pragma once

// LDA via collapsed Gibbs sampling, topic/article ranking, and keyword
// document co-occurrence.

#include <cstdint>
#include <functional>
#include <vector>

#include "narr/corpus.hpp"

namespace narr {

struct LdaConfig {
  int topics = 10;
  double alpha = 5.0;  // symmetric doc-topic prior, 50/K by convention
  double beta = 0.01;  // symmetric topic-word prior
  int iterations = 1000;
  int burn_in = 200;
  uint64_t seed = 42;
  bool average_after_burn_in = false;  // default: final-state estimators
  // Sweeps read the counts frozen at the start of the sweep and each
  // document samples from its own RNG stream, so document order does not
  // matter. Off by default; the classic sequential sampler is the
  // reference path.
  bool per_document_rng = false;

  static LdaConfig with_defaults(int k);
  void validate() const;
};

struct LdaModel {
  LdaConfig config;
  std::vector<std::string> terms;    // slice-local vocabulary
  std::vector<std::string> doc_ids;  // aligned with theta rows
  std::vector<std::vector<double>> phi;        // K x V, rows sum to 1
  std::vector<std::vector<double>> theta;      // D x K, rows sum to 1
  std::vector<std::vector<int32_t>> assignments;  // per-doc per-token topic
  std::vector<int64_t> topic_mass;   // tokens assigned per topic

  int topics() const { return static_cast<int>(phi.size()); }
  int vocab_size() const { return static_cast<int>(terms.size()); }
  int docs() const { return static_cast<int>(theta.size()); }
};

using SweepObserver =
    std::function<void(int sweep, const std::vector<int64_t>& topic_mass)>;

// Fits one model on a slice. Documents reference `vocab`; the model keeps
// a compacted vocabulary of the terms that actually occur in the slice.
LdaModel fit_lda(const std::vector<TokenizedDocument>& docs, const Vocabulary& vocab,
                 const LdaConfig& config, const SweepObserver& observer = nullptr);

// m highest-phi terms of a topic, ties broken by vocabulary index.
std::vector<std::string> top_keywords(const LdaModel& model, int topic, int m = 20);

// Topic indices by descending total assigned tokens.
std::vector<int> rank_topics(const LdaModel& model);

// Article ids by descending theta[doc][topic], ties by id.
std::vector<std::string> rank_articles_for_topic(const LdaModel& model, int topic);

struct CooccurrenceMatrix {
  std::vector<std::string> keywords;
  std::vector<std::vector<int32_t>> counts;  // symmetric; diagonal = slice DF
  double threshold = 0.0;
};

// counts[i][j] = number of slice documents containing both keywords.
CooccurrenceMatrix keyword_cooccurrence(const std::vector<TokenizedDocument>& docs,
                                        const Vocabulary& vocab,
                                        const std::vector<std::string>& keywords);

// Percentile (nearest-rank) of the nonzero off-diagonal counts.
double cooccurrence_threshold(const CooccurrenceMatrix& matrix,
                              double percentile = 0.75);

}  // namespace narr
