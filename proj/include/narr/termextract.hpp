#pragma once

// Narrative term extraction: per-article TF-IDF weights pooled over each
// topic's most relevant articles, plus narrative labels.

#include <string>
#include <unordered_map>
#include <vector>

#include "narr/corpus.hpp"
#include "narr/topicmodel.hpp"

namespace narr {

struct TermWeight {
  std::string term;
  double weight = 0.0;
};

struct NarrativeTermSet {
  SliceKey slice;
  int topic = 0;
  std::string label;
  std::vector<TermWeight> terms;  // ordered by (weight desc, term asc)
};

// N and DF over one (orientation, period) slice.
struct SliceTermStats {
  int32_t total_documents = 0;
  std::unordered_map<int32_t, int32_t> document_frequency;  // vocab id -> df

  static SliceTermStats compute(const std::vector<TokenizedDocument>& docs);
};

// W = tf * ln(N / df)
double tfidf_weight(int32_t tf, int32_t df, int32_t total_documents);

// W for one term in one article; throws if the term is not in the vocabulary.
double tfidf_weight(const std::string& term, const TokenizedDocument& article,
                    const Vocabulary& vocab, const SliceTermStats& stats);

struct TermExtractConfig {
  int n_articles = 500;
  int top = 50;
  bool max_pooling = false;  // default: sum of per-article weights
};

// docs must be aligned with model.doc_ids; excluded_terms are dropped
// before ranking (the lemma-filter phrases in the pipeline).
NarrativeTermSet extract_narrative_terms(const LdaModel& model,
                                         const std::vector<TokenizedDocument>& docs,
                                         const Vocabulary& vocab, int topic,
                                         const TermExtractConfig& config,
                                         const std::vector<std::string>& excluded_terms = {});

// Top terms joined with underscores ("migrants_refugees").
std::string label_narrative(const std::vector<TermWeight>& terms, int max_terms = 2);

// Labels a sibling group: colliding top-2 labels widen to three terms,
// and any label still colliding gets the topic index appended.
void label_narratives(std::vector<NarrativeTermSet>& sets);

}  // namespace narr
