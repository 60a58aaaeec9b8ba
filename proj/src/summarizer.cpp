#include "narr/summarizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace narr {

namespace {

const std::set<std::string>& abbreviation_guards() {
  static const std::set<std::string> kGuards = {
      "mr",  "mrs", "ms",  "dr",   "prof", "st",  "jr",  "sr",  "vs",
      "etc", "e.g", "i.e", "inc",  "ltd",  "co",  "no",  "gen", "sen",
      "rep", "gov", "rev", "hon",  "sgt",  "capt", "approx"};
  return kGuards;
}

std::string lower_ascii(std::string s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

// The word immediately before position i (exclusive), letters and dots.
std::string preceding_word(const std::string& text, std::size_t i) {
  std::size_t end = i;
  std::size_t start = end;
  while (start > 0) {
    const char c = text[start - 1];
    if (std::isalpha(static_cast<unsigned char>(c)) || (c == '.' && start - 1 > 0)) {
      --start;
    } else {
      break;
    }
  }
  std::string word = text.substr(start, end - start);
  while (!word.empty() && word.back() == '.') word.pop_back();
  return lower_ascii(word);
}

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

std::vector<std::string> split_sentences(const std::string& text) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    const char c = text[i];
    if (c != '.' && c != '?' && c != '!') continue;
    // swallow a run of terminal punctuation ("?!", "...")
    std::size_t end = i;
    while (end + 1 < n && (text[end + 1] == '.' || text[end + 1] == '?' ||
                           text[end + 1] == '!' || text[end + 1] == '"' ||
                           text[end + 1] == '\'')) {
      ++end;
    }
    if (c == '.' && abbreviation_guards().count(preceding_word(text, i))) {
      i = end;
      continue;
    }
    // a period glued to the next word ("U.S.Congress") is not a boundary
    if (end + 1 < n && !std::isspace(static_cast<unsigned char>(text[end + 1]))) {
      i = end;
      continue;
    }
    // a lowercase continuation ("well... maybe") is not a boundary
    std::size_t next = end + 1;
    while (next < n && std::isspace(static_cast<unsigned char>(text[next]))) ++next;
    if (next < n && std::islower(static_cast<unsigned char>(text[next]))) {
      i = end;
      continue;
    }
    const std::string sentence = trim(text.substr(start, end + 1 - start));
    if (!sentence.empty()) sentences.push_back(sentence);
    start = end + 1;
    i = end;
  }
  const std::string tail = trim(text.substr(start));
  if (!tail.empty()) sentences.push_back(tail);
  return sentences;
}

SentenceStats SentenceStats::compute(const std::vector<std::string>& sentences,
                                     const TokenizerConfig& config) {
  SentenceStats stats;
  stats.sentence_terms.reserve(sentences.size());
  double total_len = 0.0;
  for (const auto& s : sentences) {
    auto terms = tokenize_text(s, config);
    total_len += static_cast<double>(terms.size());
    std::unordered_set<std::string> distinct(terms.begin(), terms.end());
    for (const auto& t : distinct) ++stats.sentence_frequency[t];
    stats.sentence_terms.push_back(std::move(terms));
  }
  stats.avg_length = sentences.empty() ? 0.0 : total_len / sentences.size();
  const double n = static_cast<double>(sentences.size());
  for (const auto& [term, sf] : stats.sentence_frequency) {
    const double idf = std::log((n - sf + 0.5) / (sf + 0.5));
    stats.idf[term] = std::max(0.0, idf);
  }
  return stats;
}

double bm25plus(std::span<const std::string> query,
                std::span<const std::string> candidate,
                const SentenceStats& stats, const Bm25Params& params) {
  if (params.k1 <= 0 || params.b < 0 || params.b > 1 || params.delta < 0) {
    throw std::invalid_argument("bm25plus: invalid parameters");
  }
  std::unordered_map<std::string, int> tf;
  for (const auto& t : candidate) ++tf[t];
  const double len = static_cast<double>(candidate.size());
  const double norm =
      params.k1 * (1.0 - params.b +
                   params.b * (stats.avg_length > 0 ? len / stats.avg_length : 1.0));
  std::unordered_set<std::string> seen;
  double score = 0.0;
  for (const auto& t : query) {
    if (!seen.insert(t).second) continue;
    const auto it = tf.find(t);
    if (it == tf.end()) continue;
    const auto idf_it = stats.idf.find(t);
    const double idf = idf_it == stats.idf.end() ? 0.0 : idf_it->second;
    const double f = static_cast<double>(it->second);
    score += idf * (f * (params.k1 + 1.0) / (f + norm) + params.delta);
  }
  return score;
}

SentenceGraph build_sentence_graph(const std::vector<std::string>& sentences,
                                   const Bm25Params& params,
                                   const TokenizerConfig& config, double damping) {
  if (damping <= 0 || damping >= 1) {
    throw std::invalid_argument("damping must lie in (0, 1)");
  }
  SentenceGraph graph;
  graph.sentences = sentences;
  graph.damping = damping;
  const auto stats = SentenceStats::compute(sentences, config);
  const std::size_t n = sentences.size();
  graph.weights.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      graph.weights[i][j] = bm25plus(stats.sentence_terms[i],
                                     stats.sentence_terms[j], stats, params);
    }
  }
  return graph;
}

TextRankResult textrank(const SentenceGraph& graph, double eps, int max_iter) {
  const std::size_t n = graph.sentences.size();
  if (n == 0 || graph.weights.size() != n) {
    throw std::invalid_argument("textrank: graph must have n >= 1 sentences");
  }
  const double d = graph.damping;
  std::vector<double> row_sum(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (graph.weights[j][k] < 0) {
        throw std::invalid_argument("textrank: negative edge weight");
      }
      row_sum[j] += graph.weights[j][k];
    }
  }
  TextRankResult result;
  result.scores.assign(n, 1.0);
  std::vector<double> next(n, 0.0);
  for (int iter = 0; iter < max_iter; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      double in_flow = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (row_sum[j] > 0) {
          in_flow += graph.weights[j][i] / row_sum[j] * result.scores[j];
        } else {
          in_flow += result.scores[j] / static_cast<double>(n);
        }
      }
      next[i] = (1.0 - d) + d * in_flow;
    }
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - result.scores[i]);
    result.scores.swap(next);
    result.iterations = iter + 1;
    if (change < eps) {
      result.converged = true;
      return result;
    }
  }
  result.converged = false;
  return result;
}

Summary summarize_topic(const LdaModel& model,
                        const std::vector<const Article*>& articles, int topic,
                        const SummarizerConfig& config,
                        const TokenizerConfig& tokenizer) {
  if (topic < 0 || topic >= model.topics()) {
    throw std::out_of_range("topic index out of range");
  }
  if (articles.size() != static_cast<std::size_t>(model.docs()) || articles.empty()) {
    throw std::invalid_argument("articles must align with the model's documents");
  }

  // Top n_docs by theta, ties by article id.
  std::vector<int> order(model.docs());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ta = model.theta[a][topic];
    const double tb = model.theta[b][topic];
    if (ta != tb) return ta > tb;
    return model.doc_ids[a] < model.doc_ids[b];
  });
  order.resize(std::min<std::size_t>(order.size(), config.n_docs));

  // Sentences in document order; exact duplicates keep their first slot.
  std::vector<std::string> sentences;
  std::unordered_set<std::string> seen;
  for (int doc : order) {
    const Article& article = *articles[doc];
    for (const auto& text : {article.title, article.body}) {
      for (auto& s : split_sentences(text)) {
        if (seen.insert(s).second) sentences.push_back(std::move(s));
      }
    }
  }

  Summary summary;
  summary.topic = topic;
  if (sentences.empty()) return summary;

  const auto graph =
      build_sentence_graph(sentences, config.bm25, tokenizer, config.damping);
  const auto ranked = textrank(graph, config.eps, config.max_iter);
  summary.converged = ranked.converged;

  std::vector<int> by_score(sentences.size());
  std::iota(by_score.begin(), by_score.end(), 0);
  std::stable_sort(by_score.begin(), by_score.end(), [&](int a, int b) {
    if (ranked.scores[a] != ranked.scores[b]) {
      return ranked.scores[a] > ranked.scores[b];
    }
    return a < b;
  });
  by_score.resize(std::min<std::size_t>(by_score.size(), config.target_sentences));
  std::sort(by_score.begin(), by_score.end());  // back to document order
  for (int i : by_score) {
    summary.sentences.push_back(sentences[i]);
    summary.scores.push_back(ranked.scores[i]);
  }
  return summary;
}

}  // namespace narr
