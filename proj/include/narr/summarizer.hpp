#pragma once

// Extractive topic summaries: TextRank over a BM25+ sentence-similarity
// graph, one summary per topic from its ten most relevant articles.

#include <span>
#include <string>
#include <vector>

#include "narr/corpus.hpp"
#include "narr/topicmodel.hpp"

namespace narr {

// Rule-based splitting on terminal punctuation with an abbreviation guard
// list; never produces empty sentences.
std::vector<std::string> split_sentences(const std::string& text);

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
  double delta = 1.0;
};

// Statistics over the sentence set under summarization. IDF is computed
// at sentence level and floored at 0.
struct SentenceStats {
  std::vector<std::vector<std::string>> sentence_terms;  // tokenized, aligned
  std::unordered_map<std::string, double> idf;
  std::unordered_map<std::string, int32_t> sentence_frequency;
  double avg_length = 0.0;

  static SentenceStats compute(const std::vector<std::string>& sentences,
                               const TokenizerConfig& config);
};

// Sum over distinct shared terms of idf * (tf saturation + delta); tf and
// length are the candidate's.
double bm25plus(std::span<const std::string> query,
                std::span<const std::string> candidate,
                const SentenceStats& stats, const Bm25Params& params);

struct SentenceGraph {
  std::vector<std::string> sentences;
  std::vector<std::vector<double>> weights;  // weights[i][j]: edge i -> j, zero diagonal
  double damping = 0.85;
};

SentenceGraph build_sentence_graph(const std::vector<std::string>& sentences,
                                   const Bm25Params& params,
                                   const TokenizerConfig& config,
                                   double damping = 0.85);

struct TextRankResult {
  std::vector<double> scores;
  int iterations = 0;
  bool converged = true;
};

// Weighted PageRank: S(i) = (1-d) + d * sum_j w_ji / rowsum_j * S(j),
// dangling rows spread uniformly; stops when the L1 change drops below eps.
TextRankResult textrank(const SentenceGraph& graph, double eps = 1e-6,
                        int max_iter = 200);

struct SummarizerConfig {
  int n_docs = 10;
  int target_sentences = 8;
  Bm25Params bm25;
  double damping = 0.85;
  double eps = 1e-6;
  int max_iter = 200;
};

struct Summary {
  int topic = 0;
  std::vector<std::string> sentences;  // original document order
  std::vector<double> scores;          // aligned with sentences
  bool converged = true;
};

// articles must be aligned with model.doc_ids.
Summary summarize_topic(const LdaModel& model,
                        const std::vector<const Article*>& articles, int topic,
                        const SummarizerConfig& config,
                        const TokenizerConfig& tokenizer);

}  // namespace narr
