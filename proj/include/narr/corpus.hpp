#pragma once

// Corpus ingestion: JSON Lines loading, lemma filtering, tokenization,
// vocabulary construction, and slicing by (orientation, year).

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace narr {

enum class Orientation { kFarRight, kRightWing, kLeftWing };

std::string to_string(Orientation o);
Orientation orientation_from_string(const std::string& s);  // throws std::invalid_argument

struct Article {
  std::string id;
  std::string newspaper;
  Orientation orientation = Orientation::kFarRight;
  std::string date;  // YYYY-MM-DD, validated on load
  int year = 0;
  std::string title;
  std::string body;
};

struct RejectedRecord {
  std::size_t line = 0;  // 1-based line in the source file
  std::string id;        // empty when the record could not be parsed
  std::string reason;
};

struct Corpus {
  std::vector<Article> articles;
  std::vector<RejectedRecord> rejects;
  std::size_t size() const { return articles.size(); }
};

// Orientation is never stored free-form on articles; it always comes from
// this newspaper -> orientation map.
using NewspaperMap = std::map<std::string, Orientation>;
NewspaperMap default_newspaper_map();

Corpus load_corpus(const std::filesystem::path& path, const NewspaperMap& map,
                   bool lenient = false);

struct LemmaFilter {
  std::vector<std::string> phrases;

  static LemmaFilter defaults();

  // Pure-uppercase acronyms match case-sensitively on word boundaries;
  // every other phrase matches case-insensitively on word boundaries.
  bool matches(const std::string& text) const;

  // Lowercased single-word phrases, as they would appear in token streams.
  std::vector<std::string> single_token_phrases() const;

  void validate() const;  // non-empty, no duplicates
};

// Retains articles whose title or body matches at least one phrase.
Corpus filter_by_lemmas(const Corpus& corpus, const LemmaFilter& filter);

struct TokenizerConfig {
  int min_token_length = 2;
  int min_document_frequency = 5;
  std::vector<std::string> stopwords;  // empty -> built-in English list

  const std::vector<std::string>& effective_stopwords() const;
};

const std::vector<std::string>& default_stopwords();

// Lowercased alphabetic tokens with stopwords and short tokens removed.
// Document-frequency filtering happens against a Vocabulary.
std::vector<std::string> tokenize_text(const std::string& text,
                                       const TokenizerConfig& config);

struct Vocabulary {
  std::vector<std::string> terms;           // sorted, unique
  std::vector<int32_t> document_frequency;  // aligned with terms
  int32_t total_documents = 0;
  std::unordered_map<std::string, int32_t> index;  // derived from terms

  int32_t lookup(const std::string& term) const;  // -1 when absent
  std::size_t size() const { return terms.size(); }
  void rebuild_index();
};

struct TokenizedDocument {
  std::string article_id;
  std::vector<int32_t> tokens;  // vocabulary indices, surface order
};

struct TokenizedCorpus {
  Vocabulary vocabulary;
  std::vector<TokenizedDocument> documents;  // aligned with Corpus::articles
};

Vocabulary build_vocabulary(const Corpus& corpus, const TokenizerConfig& config);
TokenizedDocument tokenize(const Article& article, const TokenizerConfig& config,
                           const Vocabulary& vocabulary);
TokenizedCorpus tokenize_corpus(const Corpus& corpus, const TokenizerConfig& config);

struct SliceKey {
  Orientation orientation = Orientation::kFarRight;
  int year = 0;

  std::string id() const;  // e.g. "far-right-2016"
  auto operator<=>(const SliceKey&) const = default;
};

// Indices of articles matching both keys; slices are disjoint and cover
// the corpus.
std::vector<std::size_t> partition(const Corpus& corpus, Orientation orientation,
                                   int year);
std::vector<SliceKey> discover_slices(const Corpus& corpus);

}  // namespace narr
