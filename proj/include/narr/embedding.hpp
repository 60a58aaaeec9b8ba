#pragma once

// Skip-gram word embeddings with negative sampling, cosine similarity
// tables, and thresholded narrative term graphs.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "narr/corpus.hpp"

namespace narr {

struct EmbeddingConfig {
  int dim = 100;
  int window = 5;
  int negatives = 5;
  int epochs = 5;
  double learning_rate = 0.025;  // linear decay, floored at 1e-4 of initial
  int min_count = 5;             // token frequency cutoff
  double subsample = 1e-4;       // 0 disables frequent-word subsampling
  uint64_t seed = 1;

  void validate() const;
};

struct EmbeddingMatrix {
  int dim = 0;
  std::vector<std::string> terms;
  std::unordered_map<std::string, int32_t> index;
  std::vector<double> input;   // terms.size() x dim, row-major
  std::vector<double> output;  // context vectors, same shape

  int32_t lookup(const std::string& term) const;
  std::span<const double> input_vector(int32_t i) const;
  std::span<const double> output_vector(int32_t i) const;
  std::size_t size() const { return terms.size(); }
};

// Single-threaded deterministic SGNS training over one slice.
EmbeddingMatrix train_word2vec(const std::vector<TokenizedDocument>& docs,
                               const Vocabulary& vocab,
                               const EmbeddingConfig& config);

// u.v / (|u||v|); zero vectors are an error, never NaN.
double cosine(std::span<const double> u, std::span<const double> v);

// Negated SGNS objective for one (center, context, negatives) triple:
//   -log sigmoid(u_o.v_c) - sum_i log sigmoid(-u_ni.v_c)
double sgns_loss(std::span<const double> center, std::span<const double> context,
                 const std::vector<std::vector<double>>& negatives);

// Analytic gradients of sgns_loss in the same layout.
void sgns_gradients(std::span<const double> center, std::span<const double> context,
                    const std::vector<std::vector<double>>& negatives,
                    std::vector<double>& grad_center, std::vector<double>& grad_context,
                    std::vector<std::vector<double>>& grad_negatives);

struct SimilarityTable {
  std::vector<std::string> terms;
  std::vector<std::vector<double>> sim;  // symmetric, unit diagonal
};

// Pairwise cosine over the terms resolvable in the embedding vocabulary.
SimilarityTable similarity_table(const std::vector<std::string>& terms,
                                 const EmbeddingMatrix& embeddings);

struct NarrativeGraph {
  struct Edge {
    int32_t a = 0;
    int32_t b = 0;
    double weight = 0.0;
  };
  std::vector<std::string> nodes;
  std::vector<Edge> edges;        // a < b, similarity strictly above threshold
  std::vector<double> strength;   // sum of incident edge weights
  double threshold = 0.0;
};

// threshold: absolute cutoff if given, otherwise the percentile of this
// narrative's pairwise similarities. Isolated nodes are retained.
NarrativeGraph build_narrative_graph(const std::vector<std::string>& narrative_terms,
                                     const EmbeddingMatrix& embeddings,
                                     std::optional<double> threshold = std::nullopt,
                                     double percentile = 0.80);

// Binary layout: magic "NARRVEC1", u32 dim, u32 vocab count, then input
// and output vectors as little-endian f32; term strings go to a JSON
// vocabulary index next to it.
void save_embeddings(const std::filesystem::path& bin_path,
                     const std::filesystem::path& vocab_path,
                     const EmbeddingMatrix& embeddings);
EmbeddingMatrix load_embeddings(const std::filesystem::path& bin_path,
                                const std::filesystem::path& vocab_path);

}  // namespace narr
