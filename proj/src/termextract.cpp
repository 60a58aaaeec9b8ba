#include "narr/termextract.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace narr {

SliceTermStats SliceTermStats::compute(const std::vector<TokenizedDocument>& docs) {
  SliceTermStats stats;
  stats.total_documents = static_cast<int32_t>(docs.size());
  std::set<int32_t> present;
  for (const auto& doc : docs) {
    present.clear();
    present.insert(doc.tokens.begin(), doc.tokens.end());
    for (int32_t t : present) ++stats.document_frequency[t];
  }
  return stats;
}

double tfidf_weight(int32_t tf, int32_t df, int32_t total_documents) {
  if (total_documents < 1) throw std::invalid_argument("tfidf: N must be >= 1");
  if (tf == 0) return 0.0;
  if (df < 1) throw std::invalid_argument("tfidf: term occurs but df < 1");
  return static_cast<double>(tf) *
         std::log(static_cast<double>(total_documents) / static_cast<double>(df));
}

double tfidf_weight(const std::string& term, const TokenizedDocument& article,
                    const Vocabulary& vocab, const SliceTermStats& stats) {
  const int32_t id = vocab.lookup(term);
  if (id < 0) throw std::invalid_argument("tfidf: term '" + term + "' not in vocabulary");
  const int32_t tf = static_cast<int32_t>(
      std::count(article.tokens.begin(), article.tokens.end(), id));
  if (tf == 0) return 0.0;
  const auto it = stats.document_frequency.find(id);
  const int32_t df = it == stats.document_frequency.end() ? 0 : it->second;
  return tfidf_weight(tf, df, stats.total_documents);
}

NarrativeTermSet extract_narrative_terms(const LdaModel& model,
                                         const std::vector<TokenizedDocument>& docs,
                                         const Vocabulary& vocab, int topic,
                                         const TermExtractConfig& config,
                                         const std::vector<std::string>& excluded_terms) {
  if (topic < 0 || topic >= model.topics()) {
    throw std::out_of_range("topic index out of range");
  }
  if (docs.size() != static_cast<std::size_t>(model.docs()) || docs.empty()) {
    throw std::invalid_argument("documents must align with the model");
  }

  const SliceTermStats stats = SliceTermStats::compute(docs);

  std::vector<int> order(model.docs());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ta = model.theta[a][topic];
    const double tb = model.theta[b][topic];
    if (ta != tb) return ta > tb;
    return model.doc_ids[a] < model.doc_ids[b];
  });
  order.resize(std::min<std::size_t>(order.size(), config.n_articles));

  std::set<int32_t> excluded;
  for (const auto& term : excluded_terms) {
    const int32_t id = vocab.lookup(term);
    if (id >= 0) excluded.insert(id);
  }

  // Pool W_{t,a} over the selected articles.
  std::unordered_map<int32_t, double> pooled;
  std::unordered_map<int32_t, int32_t> tf;
  for (int doc_index : order) {
    tf.clear();
    for (int32_t t : docs[doc_index].tokens) {
      if (!excluded.count(t)) ++tf[t];
    }
    for (const auto& [t, count] : tf) {
      const double w =
          tfidf_weight(count, stats.document_frequency.at(t), stats.total_documents);
      auto& slot = pooled[t];
      slot = config.max_pooling ? std::max(slot, w) : slot + w;
    }
  }

  std::vector<TermWeight> weights;
  weights.reserve(pooled.size());
  for (const auto& [t, w] : pooled) {
    weights.push_back({vocab.terms[t], w});
  }
  std::sort(weights.begin(), weights.end(), [](const TermWeight& a, const TermWeight& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.term < b.term;
  });
  if (weights.size() < static_cast<std::size_t>(config.top)) {
    throw std::runtime_error(
        "narrative for topic " + std::to_string(topic) + " has only " +
        std::to_string(weights.size()) + " candidate terms, need " +
        std::to_string(config.top));
  }
  weights.resize(config.top);

  NarrativeTermSet set;
  set.topic = topic;
  set.terms = std::move(weights);
  set.label = label_narrative(set.terms);
  return set;
}

std::string label_narrative(const std::vector<TermWeight>& terms, int max_terms) {
  if (terms.empty()) throw std::invalid_argument("cannot label an empty term set");
  std::string label;
  const int n = std::min<int>(max_terms, static_cast<int>(terms.size()));
  for (int i = 0; i < n; ++i) {
    if (i > 0) label += "_";
    label += terms[i].term;
  }
  return label;
}

void label_narratives(std::vector<NarrativeTermSet>& sets) {
  auto label_frequency = [&sets]() {
    std::map<std::string, int> freq;
    for (const auto& s : sets) ++freq[s.label];
    return freq;
  };
  for (auto& s : sets) s.label = label_narrative(s.terms, 2);
  auto freq = label_frequency();
  for (auto& s : sets) {
    if (freq[s.label] > 1) s.label = label_narrative(s.terms, 3);
  }
  freq = label_frequency();
  for (auto& s : sets) {
    if (freq[s.label] > 1) s.label += "_" + std::to_string(s.topic);
  }
}

}  // namespace narr
