#include "narr/embedding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "narr/rng.hpp"

namespace narr {

void EmbeddingConfig::validate() const {
  if (dim < 2) throw std::invalid_argument("embedding: dim must be >= 2");
  if (window < 1) throw std::invalid_argument("embedding: window must be >= 1");
  if (negatives < 1) throw std::invalid_argument("embedding: negatives must be >= 1");
  if (epochs < 0) throw std::invalid_argument("embedding: epochs must be >= 0");
  if (learning_rate <= 0) throw std::invalid_argument("embedding: bad learning rate");
  if (min_count < 1) throw std::invalid_argument("embedding: min_count must be >= 1");
}

int32_t EmbeddingMatrix::lookup(const std::string& term) const {
  const auto it = index.find(term);
  return it == index.end() ? -1 : it->second;
}

std::span<const double> EmbeddingMatrix::input_vector(int32_t i) const {
  return {input.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)};
}

std::span<const double> EmbeddingMatrix::output_vector(int32_t i) const {
  return {output.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)};
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double sgns_loss(std::span<const double> center, std::span<const double> context,
                 const std::vector<std::vector<double>>& negatives) {
  // -log sigma(x) written as log(1 + exp(-x)) with the usual stable split
  auto log1p_exp = [](double x) {
    return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
  };
  double loss = log1p_exp(-dot(context, center));
  for (const auto& n : negatives) {
    loss += log1p_exp(dot(n, center));
  }
  return loss;
}

void sgns_gradients(std::span<const double> center, std::span<const double> context,
                    const std::vector<std::vector<double>>& negatives,
                    std::vector<double>& grad_center, std::vector<double>& grad_context,
                    std::vector<std::vector<double>>& grad_negatives) {
  const std::size_t dim = center.size();
  grad_center.assign(dim, 0.0);
  grad_context.assign(dim, 0.0);
  grad_negatives.assign(negatives.size(), std::vector<double>(dim, 0.0));

  const double g_pos = sigmoid(dot(context, center)) - 1.0;  // d loss / d (u.v)
  for (std::size_t i = 0; i < dim; ++i) {
    grad_center[i] += g_pos * context[i];
    grad_context[i] += g_pos * center[i];
  }
  for (std::size_t n = 0; n < negatives.size(); ++n) {
    const double g_neg = sigmoid(dot(negatives[n], center));
    for (std::size_t i = 0; i < dim; ++i) {
      grad_center[i] += g_neg * negatives[n][i];
      grad_negatives[n][i] += g_neg * center[i];
    }
  }
}

EmbeddingMatrix train_word2vec(const std::vector<TokenizedDocument>& docs,
                               const Vocabulary& vocab,
                               const EmbeddingConfig& config) {
  config.validate();
  if (docs.empty()) throw std::invalid_argument("word2vec: empty document slice");

  // Count token frequencies and build the embedding vocabulary
  // (frequency desc, term asc) after the min_count cutoff.
  std::vector<int64_t> freq(vocab.size(), 0);
  int64_t total_tokens = 0;
  for (const auto& doc : docs) {
    for (int32_t t : doc.tokens) {
      if (t < 0 || static_cast<std::size_t>(t) >= vocab.size()) {
        throw std::out_of_range("word2vec: token index outside vocabulary");
      }
      ++freq[t];
      ++total_tokens;
    }
  }
  std::vector<int32_t> kept;
  for (std::size_t t = 0; t < vocab.size(); ++t) {
    if (freq[t] >= config.min_count) kept.push_back(static_cast<int32_t>(t));
  }
  std::sort(kept.begin(), kept.end(), [&](int32_t a, int32_t b) {
    if (freq[a] != freq[b]) return freq[a] > freq[b];
    return vocab.terms[a] < vocab.terms[b];
  });
  if (kept.empty()) {
    throw std::invalid_argument("word2vec: vocabulary empty after min_count");
  }

  EmbeddingMatrix matrix;
  matrix.dim = config.dim;
  matrix.terms.reserve(kept.size());
  std::vector<int32_t> remap(vocab.size(), -1);
  std::vector<int64_t> kept_freq;
  for (int32_t t : kept) {
    remap[t] = static_cast<int32_t>(matrix.terms.size());
    matrix.terms.push_back(vocab.terms[t]);
    kept_freq.push_back(freq[t]);
  }
  matrix.index.reserve(matrix.terms.size());
  for (std::size_t i = 0; i < matrix.terms.size(); ++i) {
    matrix.index.emplace(matrix.terms[i], static_cast<int32_t>(i));
  }

  const int dim = config.dim;
  const std::size_t v = matrix.terms.size();
  matrix.input.resize(v * dim);
  matrix.output.assign(v * dim, 0.0);

  Rng rng(derive_seed(config.seed, "word2vec"));
  for (auto& x : matrix.input) {
    x = (rng.uniform01() - 0.5) / dim;
  }

  // Unigram^0.75 negative-sampling distribution as a cumulative table.
  std::vector<double> neg_cumulative(v);
  double acc = 0.0;
  for (std::size_t i = 0; i < v; ++i) {
    acc += std::pow(static_cast<double>(kept_freq[i]), 0.75);
    neg_cumulative[i] = acc;
  }
  auto draw_negative = [&]() {
    const double target = rng.uniform01() * neg_cumulative.back();
    const auto it =
        std::upper_bound(neg_cumulative.begin(), neg_cumulative.end(), target);
    return static_cast<int32_t>(it - neg_cumulative.begin());
  };

  int64_t corpus_words = 0;
  for (int32_t t : kept) corpus_words += freq[t];
  const int64_t train_total = std::max<int64_t>(1, corpus_words * std::max(1, config.epochs));

  std::vector<int32_t> sentence;
  std::vector<double> center_delta(dim);
  int64_t processed = 0;
  double lr = config.learning_rate;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (const auto& doc : docs) {
      // subsample frequent words on the fly, per pass
      sentence.clear();
      for (int32_t t : doc.tokens) {
        const int32_t w = remap[t];
        if (w < 0) continue;
        if (config.subsample > 0) {
          const double f = static_cast<double>(kept_freq[w]) /
                           static_cast<double>(corpus_words);
          const double keep =
              (std::sqrt(f / config.subsample) + 1.0) * (config.subsample / f);
          if (keep < 1.0 && rng.uniform01() >= keep) {
            ++processed;
            continue;
          }
        }
        sentence.push_back(w);
      }
      const int n = static_cast<int>(sentence.size());
      for (int i = 0; i < n; ++i) {
        const int32_t center = sentence[i];
        const int reduced = static_cast<int>(rng.below(config.window));
        const int span = config.window - reduced;
        double* v_c = matrix.input.data() + static_cast<std::size_t>(center) * dim;
        for (int j = std::max(0, i - span); j <= std::min(n - 1, i + span); ++j) {
          if (j == i) continue;
          const int32_t context = sentence[j];
          std::fill(center_delta.begin(), center_delta.end(), 0.0);
          // positive pair plus sampled negatives; a draw equal to the
          // positive target is skipped, as in the reference trainer
          for (int s = 0; s < config.negatives + 1; ++s) {
            int32_t target;
            double label;
            if (s == 0) {
              target = context;
              label = 1.0;
            } else {
              target = draw_negative();
              if (target == context) continue;
              label = 0.0;
            }
            double* u = matrix.output.data() + static_cast<std::size_t>(target) * dim;
            double x = 0.0;
            for (int kk = 0; kk < dim; ++kk) x += v_c[kk] * u[kk];
            const double g = (label - sigmoid(x)) * lr;
            for (int kk = 0; kk < dim; ++kk) {
              center_delta[kk] += g * u[kk];
              u[kk] += g * v_c[kk];
            }
          }
          for (int kk = 0; kk < dim; ++kk) v_c[kk] += center_delta[kk];
        }
        ++processed;
      }
      // linear decay, refreshed per document
      const double remaining =
          1.0 - static_cast<double>(processed) / static_cast<double>(train_total);
      lr = config.learning_rate * std::max(1e-4, remaining);
    }
  }
  return matrix;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size() || u.empty()) {
    throw std::invalid_argument("cosine: dimension mismatch");
  }
  const double uu = dot(u, u);
  const double vv = dot(v, v);
  if (uu == 0.0 || vv == 0.0) {
    throw std::invalid_argument("cosine: zero vector");
  }
  return dot(u, v) / (std::sqrt(uu) * std::sqrt(vv));
}

SimilarityTable similarity_table(const std::vector<std::string>& terms,
                                 const EmbeddingMatrix& embeddings) {
  SimilarityTable table;
  for (const auto& term : terms) {
    if (embeddings.lookup(term) >= 0) table.terms.push_back(term);
  }
  const std::size_t n = table.terms.size();
  table.sim.assign(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    const auto vi = embeddings.input_vector(embeddings.lookup(table.terms[i]));
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto vj = embeddings.input_vector(embeddings.lookup(table.terms[j]));
      const double s = cosine(vi, vj);
      table.sim[i][j] = s;
      table.sim[j][i] = s;
    }
  }
  return table;
}

NarrativeGraph build_narrative_graph(const std::vector<std::string>& narrative_terms,
                                     const EmbeddingMatrix& embeddings,
                                     std::optional<double> threshold,
                                     double percentile) {
  const SimilarityTable table = similarity_table(narrative_terms, embeddings);
  const std::size_t n = table.terms.size();
  if (n < 2) {
    throw std::invalid_argument(
        "narrative graph needs at least 2 terms resolvable in the embedding");
  }

  NarrativeGraph graph;
  graph.nodes = table.terms;
  if (threshold) {
    graph.threshold = *threshold;
  } else {
    std::vector<double> sims;
    sims.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) sims.push_back(table.sim[i][j]);
    }
    std::sort(sims.begin(), sims.end());
    const std::size_t rank = static_cast<std::size_t>(
        std::ceil(percentile * static_cast<double>(sims.size())));
    graph.threshold = sims[std::min(sims.size() - 1, std::max<std::size_t>(rank, 1) - 1)];
  }

  graph.strength.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = table.sim[i][j];
      if (s > graph.threshold) {
        graph.edges.push_back({static_cast<int32_t>(i), static_cast<int32_t>(j), s});
        graph.strength[i] += s;
        graph.strength[j] += s;
      }
    }
  }
  return graph;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

constexpr char kMagic[8] = {'N', 'A', 'R', 'R', 'V', 'E', 'C', '1'};

void write_f32_le(std::ofstream& out, const std::vector<double>& values) {
  static_assert(std::endian::native == std::endian::little,
                "embedding persistence assumes a little-endian host");
  std::vector<float> row(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) row[i] = static_cast<float>(values[i]);
  out.write(reinterpret_cast<const char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(float)));
}

}  // namespace

void save_embeddings(const std::filesystem::path& bin_path,
                     const std::filesystem::path& vocab_path,
                     const EmbeddingMatrix& embeddings) {
  std::ofstream out(bin_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + bin_path.string());
  out.write(kMagic, sizeof(kMagic));
  const uint32_t dim = static_cast<uint32_t>(embeddings.dim);
  const uint32_t count = static_cast<uint32_t>(embeddings.terms.size());
  out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
  out.write(reinterpret_cast<const char*>(&count), sizeof(count));
  write_f32_le(out, embeddings.input);
  write_f32_le(out, embeddings.output);
  if (!out) throw std::runtime_error("failed writing " + bin_path.string());

  nlohmann::ordered_json vocab_json;
  vocab_json["format"] = "narratives.embedding-vocab";
  vocab_json["version"] = 1;
  vocab_json["dim"] = embeddings.dim;
  vocab_json["terms"] = embeddings.terms;
  std::ofstream vout(vocab_path);
  if (!vout) throw std::runtime_error("cannot write " + vocab_path.string());
  vout << vocab_json.dump(2) << "\n";
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& bin_path,
                                const std::filesystem::path& vocab_path) {
  std::ifstream in(bin_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + bin_path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error(bin_path.string() + ": not an embedding file");
  }
  uint32_t dim = 0;
  uint32_t count = 0;
  in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
  in.read(reinterpret_cast<char*>(&count), sizeof(count));
  if (!in) throw std::runtime_error(bin_path.string() + ": truncated header");

  EmbeddingMatrix matrix;
  matrix.dim = static_cast<int>(dim);
  const std::size_t total = static_cast<std::size_t>(dim) * count;
  std::vector<float> buffer(total);
  auto read_block = [&](std::vector<double>& dst) {
    in.read(reinterpret_cast<char*>(buffer.data()),
            static_cast<std::streamsize>(total * sizeof(float)));
    if (!in) throw std::runtime_error(bin_path.string() + ": truncated vectors");
    dst.assign(buffer.begin(), buffer.end());
  };
  read_block(matrix.input);
  read_block(matrix.output);

  std::ifstream vin(vocab_path);
  if (!vin) throw std::runtime_error("cannot open " + vocab_path.string());
  const auto vocab_json = nlohmann::json::parse(vin);
  matrix.terms = vocab_json.at("terms").get<std::vector<std::string>>();
  if (matrix.terms.size() != count) {
    throw std::runtime_error("embedding vocabulary does not match vector count");
  }
  for (std::size_t i = 0; i < matrix.terms.size(); ++i) {
    matrix.index.emplace(matrix.terms[i], static_cast<int32_t>(i));
  }
  return matrix;
}

}  // namespace narr
