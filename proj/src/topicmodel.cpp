#include "narr/topicmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "narr/rng.hpp"

namespace narr {

LdaConfig LdaConfig::with_defaults(int k) {
  LdaConfig config;
  config.topics = k;
  config.alpha = 50.0 / k;
  return config;
}

void LdaConfig::validate() const {
  if (topics < 1) throw std::invalid_argument("LDA: topics must be >= 1");
  if (alpha <= 0 || beta <= 0) throw std::invalid_argument("LDA: priors must be > 0");
  if (iterations <= burn_in || burn_in < 0) {
    throw std::invalid_argument("LDA: need iterations > burn_in >= 0");
  }
}

namespace {

struct GibbsState {
  int topics = 0;
  int vocab = 0;
  std::vector<std::vector<int32_t>> docs;       // local token indices
  std::vector<std::vector<int32_t>> z;          // assignments
  std::vector<std::vector<int32_t>> doc_topic;  // D x K
  std::vector<int64_t> topic_word;              // K x V flattened
  std::vector<int64_t> topic_total;             // K
};

int sample_discrete(const std::vector<double>& cumulative, double u) {
  const double target = u * cumulative.back();
  return static_cast<int>(
      std::upper_bound(cumulative.begin(), cumulative.end(), target) -
      cumulative.begin());
}

}  // namespace

LdaModel fit_lda(const std::vector<TokenizedDocument>& docs, const Vocabulary& vocab,
                 const LdaConfig& config, const SweepObserver& observer) {
  config.validate();
  if (docs.empty()) throw std::invalid_argument("LDA: empty document slice");

  // Compact the slice vocabulary: phi columns cover only terms that occur.
  std::vector<int32_t> global_to_local(vocab.size(), -1);
  std::vector<std::string> terms;
  GibbsState state;
  state.topics = config.topics;
  state.docs.reserve(docs.size());
  std::size_t total_tokens = 0;
  for (const auto& doc : docs) {
    std::vector<int32_t> local;
    local.reserve(doc.tokens.size());
    for (int32_t t : doc.tokens) {
      if (t < 0 || static_cast<std::size_t>(t) >= vocab.size()) {
        throw std::out_of_range("LDA: token index outside vocabulary");
      }
      if (global_to_local[t] < 0) {
        global_to_local[t] = static_cast<int32_t>(terms.size());
        terms.push_back(vocab.terms[t]);
      }
      local.push_back(global_to_local[t]);
    }
    total_tokens += local.size();
    state.docs.push_back(std::move(local));
  }
  if (total_tokens == 0) throw std::invalid_argument("LDA: all documents are empty");
  state.vocab = static_cast<int>(terms.size());
  if (state.vocab < config.topics) {
    throw std::invalid_argument("LDA: slice vocabulary smaller than topic count");
  }

  const int K = config.topics;
  const int V = state.vocab;
  const double alpha = config.alpha;
  const double beta = config.beta;
  const double v_beta = V * beta;
  const std::size_t D = state.docs.size();

  state.z.resize(D);
  state.doc_topic.assign(D, std::vector<int32_t>(K, 0));
  state.topic_word.assign(static_cast<std::size_t>(K) * V, 0);
  state.topic_total.assign(K, 0);

  // One stream per document (keyed by article id, so permutation-safe) or
  // a single shared stream; either way the stream carries from the random
  // initialization straight through the sweeps.
  Rng shared(derive_seed(config.seed, "lda"));
  std::vector<Rng> per_doc_rng;
  if (config.per_document_rng) {
    per_doc_rng.reserve(D);
    for (std::size_t d = 0; d < D; ++d) {
      per_doc_rng.emplace_back(derive_seed(config.seed, "lda-doc/" + docs[d].article_id));
    }
  }

  for (std::size_t d = 0; d < D; ++d) {
    Rng& rng = config.per_document_rng ? per_doc_rng[d] : shared;
    auto& zd = state.z[d];
    zd.resize(state.docs[d].size());
    for (std::size_t i = 0; i < zd.size(); ++i) {
      const int k = rng.index(K);
      zd[i] = k;
      ++state.doc_topic[d][k];
      ++state.topic_word[static_cast<std::size_t>(k) * V + state.docs[d][i]];
      ++state.topic_total[k];
    }
  }

  std::vector<double> phi_sum;
  std::vector<double> theta_sum;
  if (config.average_after_burn_in) {
    phi_sum.assign(static_cast<std::size_t>(K) * V, 0.0);
    theta_sum.assign(D * K, 0.0);
  }

  std::vector<double> cumulative(K);

  // Stale-count mode: each sweep reads the counts as of the sweep start
  // plus the document's own in-sweep changes, tracked in an overlay.
  std::vector<int64_t> snapshot_word;
  std::vector<int64_t> snapshot_total;

  for (int sweep = 0; sweep < config.iterations; ++sweep) {
    if (config.per_document_rng) {
      snapshot_word = state.topic_word;
      snapshot_total = state.topic_total;
    }
    for (std::size_t d = 0; d < D; ++d) {
      auto& doc = state.docs[d];
      auto& zd = state.z[d];
      auto& nd = state.doc_topic[d];
      Rng& rng = config.per_document_rng ? per_doc_rng[d] : shared;

      std::unordered_map<int64_t, int32_t> overlay;  // (k * V + w) -> delta
      std::vector<int64_t> total_delta;
      if (config.per_document_rng) total_delta.assign(K, 0);

      for (std::size_t i = 0; i < doc.size(); ++i) {
        const int32_t w = doc[i];
        const int old_k = zd[i];
        --nd[old_k];
        double total = 0.0;
        if (config.per_document_rng) {
          --total_delta[old_k];
          --overlay[static_cast<int64_t>(old_k) * V + w];
          for (int k = 0; k < K; ++k) {
            const int64_t key = static_cast<int64_t>(k) * V + w;
            const auto it = overlay.find(key);
            const int64_t nkw = snapshot_word[key] + (it == overlay.end() ? 0 : it->second);
            const int64_t nk = snapshot_total[k] + total_delta[k];
            const double p = (nkw + beta) / (nk + v_beta) * (nd[k] + alpha);
            total += p;
            cumulative[k] = total;
          }
        } else {
          --state.topic_word[static_cast<std::size_t>(old_k) * V + w];
          --state.topic_total[old_k];
          for (int k = 0; k < K; ++k) {
            const double p =
                (state.topic_word[static_cast<std::size_t>(k) * V + w] + beta) /
                (state.topic_total[k] + v_beta) * (nd[k] + alpha);
            total += p;
            cumulative[k] = total;
          }
        }
        const int new_k = std::min(K - 1, sample_discrete(cumulative, rng.uniform01()));
        zd[i] = new_k;
        ++nd[new_k];
        if (config.per_document_rng) {
          ++total_delta[new_k];
          ++overlay[static_cast<int64_t>(new_k) * V + w];
        } else {
          ++state.topic_word[static_cast<std::size_t>(new_k) * V + w];
          ++state.topic_total[new_k];
        }
      }
    }
    if (config.per_document_rng) {
      // Rebuild the shared counts from assignments; a plain sum, so the
      // result is independent of document order.
      std::fill(state.topic_word.begin(), state.topic_word.end(), 0);
      std::fill(state.topic_total.begin(), state.topic_total.end(), 0);
      for (std::size_t d = 0; d < D; ++d) {
        for (std::size_t i = 0; i < state.docs[d].size(); ++i) {
          ++state.topic_word[static_cast<std::size_t>(state.z[d][i]) * V +
                             state.docs[d][i]];
          ++state.topic_total[state.z[d][i]];
        }
      }
    }
    if (config.average_after_burn_in && sweep >= config.burn_in) {
      for (std::size_t dk = 0; dk < D; ++dk) {
        const double denom = state.docs[dk].size() + K * alpha;
        for (int k = 0; k < K; ++k) {
          theta_sum[dk * K + k] += (state.doc_topic[dk][k] + alpha) / denom;
        }
      }
      for (int k = 0; k < K; ++k) {
        const double denom = state.topic_total[k] + v_beta;
        for (int w = 0; w < V; ++w) {
          phi_sum[static_cast<std::size_t>(k) * V + w] +=
              (state.topic_word[static_cast<std::size_t>(k) * V + w] + beta) / denom;
        }
      }
    }
    if (observer) observer(sweep, state.topic_total);
  }

  LdaModel model;
  model.config = config;
  model.terms = std::move(terms);
  model.doc_ids.reserve(D);
  for (const auto& doc : docs) model.doc_ids.push_back(doc.article_id);
  model.assignments = state.z;
  model.topic_mass.assign(state.topic_total.begin(), state.topic_total.end());

  model.phi.assign(K, std::vector<double>(V, 0.0));
  model.theta.assign(D, std::vector<double>(K, 0.0));
  if (config.average_after_burn_in) {
    // Every accumulated sample is a normalized row, so renormalizing the
    // sums is the same as dividing by the sample count.
    for (int k = 0; k < K; ++k) {
      double row = 0.0;
      for (int w = 0; w < V; ++w) row += phi_sum[static_cast<std::size_t>(k) * V + w];
      for (int w = 0; w < V; ++w) {
        model.phi[k][w] = phi_sum[static_cast<std::size_t>(k) * V + w] / row;
      }
    }
    for (std::size_t d = 0; d < D; ++d) {
      double row = 0.0;
      for (int k = 0; k < K; ++k) row += theta_sum[d * K + k];
      for (int k = 0; k < K; ++k) model.theta[d][k] = theta_sum[d * K + k] / row;
    }
  } else {
    for (int k = 0; k < K; ++k) {
      const double denom = state.topic_total[k] + v_beta;
      for (int w = 0; w < V; ++w) {
        model.phi[k][w] =
            (state.topic_word[static_cast<std::size_t>(k) * V + w] + beta) / denom;
      }
    }
    for (std::size_t d = 0; d < D; ++d) {
      const double denom = state.docs[d].size() + K * alpha;
      for (int k = 0; k < K; ++k) {
        model.theta[d][k] = (state.doc_topic[d][k] + alpha) / denom;
      }
    }
  }
  return model;
}

std::vector<std::string> top_keywords(const LdaModel& model, int topic, int m) {
  if (topic < 0 || topic >= model.topics()) {
    throw std::out_of_range("topic index out of range");
  }
  const auto& row = model.phi[topic];
  std::vector<int> order(row.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (row[a] != row[b]) return row[a] > row[b];
    return a < b;
  });
  const int n = std::min<int>(m, static_cast<int>(order.size()));
  std::vector<std::string> keywords;
  keywords.reserve(n);
  for (int i = 0; i < n; ++i) keywords.push_back(model.terms[order[i]]);
  return keywords;
}

std::vector<int> rank_topics(const LdaModel& model) {
  std::vector<int> order(model.topics());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (model.topic_mass[a] != model.topic_mass[b]) {
      return model.topic_mass[a] > model.topic_mass[b];
    }
    return a < b;
  });
  return order;
}

std::vector<std::string> rank_articles_for_topic(const LdaModel& model, int topic) {
  if (topic < 0 || topic >= model.topics()) {
    throw std::out_of_range("topic index out of range");
  }
  std::vector<int> order(model.docs());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ta = model.theta[a][topic];
    const double tb = model.theta[b][topic];
    if (ta != tb) return ta > tb;
    return model.doc_ids[a] < model.doc_ids[b];
  });
  std::vector<std::string> ids;
  ids.reserve(order.size());
  for (int d : order) ids.push_back(model.doc_ids[d]);
  return ids;
}

CooccurrenceMatrix keyword_cooccurrence(const std::vector<TokenizedDocument>& docs,
                                        const Vocabulary& vocab,
                                        const std::vector<std::string>& keywords) {
  CooccurrenceMatrix matrix;
  matrix.keywords = keywords;
  const std::size_t n = keywords.size();
  std::vector<int32_t> keyword_ids(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int32_t id = vocab.lookup(keywords[i]);
    if (id < 0) throw std::invalid_argument("unknown keyword '" + keywords[i] + "'");
    keyword_ids[i] = id;
  }
  std::unordered_map<int32_t, int> keyword_of_token;
  for (std::size_t i = 0; i < n; ++i) keyword_of_token[keyword_ids[i]] = static_cast<int>(i);

  matrix.counts.assign(n, std::vector<int32_t>(n, 0));
  std::vector<int> present;
  std::vector<bool> seen(n, false);
  for (const auto& doc : docs) {
    present.clear();
    std::fill(seen.begin(), seen.end(), false);
    for (int32_t t : doc.tokens) {
      const auto it = keyword_of_token.find(t);
      if (it != keyword_of_token.end() && !seen[it->second]) {
        seen[it->second] = true;
        present.push_back(it->second);
      }
    }
    for (std::size_t a = 0; a < present.size(); ++a) {
      for (std::size_t b = a; b < present.size(); ++b) {
        ++matrix.counts[present[a]][present[b]];
        if (a != b) ++matrix.counts[present[b]][present[a]];
      }
    }
  }
  return matrix;
}

double cooccurrence_threshold(const CooccurrenceMatrix& matrix, double percentile) {
  std::vector<int32_t> values;
  for (std::size_t i = 0; i < matrix.counts.size(); ++i) {
    for (std::size_t j = i + 1; j < matrix.counts.size(); ++j) {
      if (matrix.counts[i][j] > 0) values.push_back(matrix.counts[i][j]);
    }
  }
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t rank = static_cast<std::size_t>(
      std::ceil(percentile * static_cast<double>(values.size())));
  return values[std::min(values.size() - 1, std::max<std::size_t>(rank, 1) - 1)];
}

}  // namespace narr
