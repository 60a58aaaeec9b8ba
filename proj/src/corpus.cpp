#include "narr/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace narr {

using json = nlohmann::json;

std::string to_string(Orientation o) {
  switch (o) {
    case Orientation::kFarRight: return "far-right";
    case Orientation::kRightWing: return "right-wing";
    case Orientation::kLeftWing: return "left-wing";
  }
  throw std::logic_error("bad orientation value");
}

Orientation orientation_from_string(const std::string& s) {
  if (s == "far-right") return Orientation::kFarRight;
  if (s == "right-wing") return Orientation::kRightWing;
  if (s == "left-wing") return Orientation::kLeftWing;
  throw std::invalid_argument("unknown orientation: '" + s + "'");
}

NewspaperMap default_newspaper_map() {
  return {
      {"Daily Mirror", Orientation::kLeftWing},
      {"The Guardian", Orientation::kLeftWing},
      {"The Independent", Orientation::kLeftWing},
      {"Daily Star", Orientation::kRightWing},
      {"The Telegraph", Orientation::kRightWing},
      {"Daily Express", Orientation::kFarRight},
  };
}

namespace {

bool valid_date(const std::string& s, int* year_out) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  const int year = std::stoi(s.substr(0, 4));
  const int month = std::stoi(s.substr(5, 2));
  const int day = std::stoi(s.substr(8, 2));
  if (month < 1 || month > 12 || day < 1) return false;
  static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int max_day = days[month - 1];
  const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  if (month == 2 && leap) max_day = 29;
  if (day > max_day) return false;
  if (year_out) *year_out = year;
  return true;
}

std::string record_field(const json& rec, const char* field) {
  auto it = rec.find(field);
  if (it == rec.end() || !it->is_string()) {
    throw std::runtime_error(std::string("missing or non-string field '") + field + "'");
  }
  return it->get<std::string>();
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& path, const NewspaperMap& map,
                   bool lenient) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open corpus file: " + path.string());
  }
  Corpus corpus;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Article article;
    try {
      const json rec = json::parse(line);
      if (!rec.is_object()) throw std::runtime_error("record is not a JSON object");
      article.id = record_field(rec, "id");
      article.newspaper = record_field(rec, "newspaper");
      article.date = record_field(rec, "date");
      article.title = record_field(rec, "title");
      article.body = record_field(rec, "body");
      if (!valid_date(article.date, &article.year)) {
        throw std::runtime_error("unparseable date '" + article.date + "'");
      }
      if (!seen_ids.insert(article.id).second) {
        throw std::runtime_error("duplicate article id '" + article.id + "'");
      }
    } catch (const std::exception& e) {
      if (!lenient) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                 ": " + e.what());
      }
      corpus.rejects.push_back({line_no, "", std::string("malformed record: ") + e.what()});
      continue;
    }
    const auto it = map.find(article.newspaper);
    if (it == map.end()) {
      corpus.rejects.push_back(
          {line_no, article.id, "unmapped newspaper '" + article.newspaper + "'"});
      continue;
    }
    article.orientation = it->second;
    corpus.articles.push_back(std::move(article));
  }
  return corpus;
}

// ---------------------------------------------------------------------------
// Lemma filter

LemmaFilter LemmaFilter::defaults() {
  return {{"Europe", "European Union", "EU", "European Community", "EC",
           "European Economic Community", "EEC", "Common Market"}};
}

void LemmaFilter::validate() const {
  if (phrases.empty()) throw std::invalid_argument("lemma filter has no phrases");
  std::set<std::string> seen;
  for (const auto& p : phrases) {
    if (p.empty()) throw std::invalid_argument("empty lemma phrase");
    if (!seen.insert(p).second) {
      throw std::invalid_argument("duplicate lemma phrase '" + p + "'");
    }
  }
}

namespace {

// Word characters for boundary checks: ASCII letters/digits plus any
// non-ASCII byte, so a phrase never matches inside a longer word
// ("rEUnion" must not match "EU").
bool word_byte(unsigned char c) {
  return std::isalnum(c) || c >= 0x80;
}

bool all_upper_acronym(const std::string& phrase) {
  return !phrase.empty() &&
         std::all_of(phrase.begin(), phrase.end(),
                     [](unsigned char c) { return c >= 'A' && c <= 'Z'; });
}

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

// Case-insensitive phrase search where any whitespace run in the text
// matches the single spaces of the phrase. Returns true if the phrase
// occurs on word boundaries.
bool phrase_matches(const std::string& text, const std::string& phrase,
                    bool case_sensitive) {
  const std::size_t n = text.size();
  for (std::size_t start = 0; start < n; ++start) {
    if (start > 0 && word_byte(static_cast<unsigned char>(text[start - 1]))) continue;
    std::size_t ti = start;
    std::size_t pi = 0;
    bool ok = true;
    while (pi < phrase.size()) {
      if (phrase[pi] == ' ') {
        if (ti >= n || !std::isspace(static_cast<unsigned char>(text[ti]))) {
          ok = false;
          break;
        }
        while (ti < n && std::isspace(static_cast<unsigned char>(text[ti]))) ++ti;
        ++pi;
        continue;
      }
      if (ti >= n) {
        ok = false;
        break;
      }
      const char a = case_sensitive ? text[ti] : ascii_lower(text[ti]);
      const char b = case_sensitive ? phrase[pi] : ascii_lower(phrase[pi]);
      if (a != b) {
        ok = false;
        break;
      }
      ++ti;
      ++pi;
    }
    if (!ok) continue;
    if (ti < n && word_byte(static_cast<unsigned char>(text[ti]))) continue;
    return true;
  }
  return false;
}

}  // namespace

bool LemmaFilter::matches(const std::string& text) const {
  for (const auto& phrase : phrases) {
    if (phrase_matches(text, phrase, all_upper_acronym(phrase))) return true;
  }
  return false;
}

std::vector<std::string> LemmaFilter::single_token_phrases() const {
  std::vector<std::string> out;
  for (const auto& phrase : phrases) {
    if (phrase.find(' ') != std::string::npos) continue;
    std::string lower;
    lower.reserve(phrase.size());
    for (char c : phrase) lower.push_back(ascii_lower(c));
    out.push_back(std::move(lower));
  }
  return out;
}

Corpus filter_by_lemmas(const Corpus& corpus, const LemmaFilter& filter) {
  filter.validate();
  Corpus out;
  out.rejects = corpus.rejects;
  for (const auto& article : corpus.articles) {
    if (filter.matches(article.title) || filter.matches(article.body)) {
      out.articles.push_back(article);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tokenizer

const std::vector<std::string>& default_stopwords() {
  static const std::vector<std::string> kStopwords = {
      "a", "about", "above", "after", "again", "against", "all", "am", "an",
      "and", "any", "are", "aren", "as", "at", "be", "because", "been",
      "before", "being", "below", "between", "both", "but", "by", "can",
      "cannot", "could", "couldn", "did", "didn", "do", "does", "doesn",
      "doing", "don", "down", "during", "each", "few", "for", "from",
      "further", "had", "hadn", "has", "hasn", "have", "haven", "having",
      "he", "her", "here", "hers", "herself", "him", "himself", "his", "how",
      "i", "if", "in", "into", "is", "isn", "it", "its", "itself", "just",
      "let", "me", "more", "most", "mustn", "my", "myself", "no", "nor",
      "not", "now", "of", "off", "on", "once", "only", "or", "other",
      "ought", "our", "ours", "ourselves", "out", "over", "own", "said",
      "same", "shan", "she", "should", "shouldn", "so", "some", "such",
      "than", "that", "the", "their", "theirs", "them", "themselves",
      "then", "there", "these", "they", "this", "those", "through", "to",
      "too", "under", "until", "up", "very", "was", "wasn", "we", "were",
      "weren", "what", "when", "where", "which", "while", "who", "whom",
      "why", "will", "with", "won", "would", "wouldn", "you", "your",
      "yours", "yourself", "yourselves"};
  return kStopwords;
}

const std::vector<std::string>& TokenizerConfig::effective_stopwords() const {
  return stopwords.empty() ? default_stopwords() : stopwords;
}

namespace {

struct Codepoint {
  uint32_t value = 0;
  int length = 1;  // bytes consumed
};

Codepoint decode_utf8(const std::string& s, std::size_t i) {
  const unsigned char c0 = static_cast<unsigned char>(s[i]);
  if (c0 < 0x80) return {c0, 1};
  auto cont = [&](std::size_t k) {
    return i + k < s.size() &&
           (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
  };
  if ((c0 & 0xE0) == 0xC0 && cont(1)) {
    const uint32_t cp = ((c0 & 0x1Fu) << 6) |
                        (static_cast<unsigned char>(s[i + 1]) & 0x3Fu);
    return {cp, 2};
  }
  if ((c0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
    const uint32_t cp = ((c0 & 0x0Fu) << 12) |
                        ((static_cast<unsigned char>(s[i + 1]) & 0x3Fu) << 6) |
                        (static_cast<unsigned char>(s[i + 2]) & 0x3Fu);
    return {cp, 3};
  }
  if ((c0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
    const uint32_t cp = ((c0 & 0x07u) << 18) |
                        ((static_cast<unsigned char>(s[i + 1]) & 0x3Fu) << 12) |
                        ((static_cast<unsigned char>(s[i + 2]) & 0x3Fu) << 6) |
                        (static_cast<unsigned char>(s[i + 3]) & 0x3Fu);
    return {cp, 4};
  }
  return {0xFFFD, 1};  // invalid byte, treated as a separator
}

bool alphabetic(uint32_t cp) {
  if (cp < 0x80) return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  if (cp >= 0xC0 && cp <= 0x24F) return cp != 0xD7 && cp != 0xF7;  // Latin-1 + Extended
  if (cp >= 0x386 && cp <= 0x3FF) return true;                     // Greek
  if (cp >= 0x400 && cp <= 0x4FF) return true;                     // Cyrillic
  return false;
}

uint32_t lower(uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;  // Latin-1
  // Latin Extended-A case pairs
  if ((cp >= 0x100 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177)) {
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if ((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E)) {
    return (cp % 2 == 1) ? cp + 1 : cp;
  }
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;  // Greek
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;                 // Cyrillic
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  return cp;
}

void append_utf8(std::string& out, uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace

namespace {

using StopwordSet = std::set<std::string>;

std::vector<std::string> tokenize_with_stopset(const std::string& text,
                                               const TokenizerConfig& config,
                                               const StopwordSet& stop_set) {
  std::vector<std::string> tokens;
  std::string current;
  int current_len = 0;  // codepoints
  auto flush = [&]() {
    if (current_len >= config.min_token_length && !stop_set.count(current)) {
      tokens.push_back(current);
    }
    current.clear();
    current_len = 0;
  };
  for (std::size_t i = 0; i < text.size();) {
    const Codepoint cp = decode_utf8(text, i);
    i += cp.length;
    if (alphabetic(cp.value)) {
      append_utf8(current, lower(cp.value));
      ++current_len;
    } else if (!current.empty()) {
      flush();
    }
  }
  if (!current.empty()) flush();
  return tokens;
}

}  // namespace

std::vector<std::string> tokenize_text(const std::string& text,
                                       const TokenizerConfig& config) {
  const auto& list = config.effective_stopwords();
  return tokenize_with_stopset(text, config, StopwordSet(list.begin(), list.end()));
}

// ---------------------------------------------------------------------------
// Vocabulary

int32_t Vocabulary::lookup(const std::string& term) const {
  const auto it = index.find(term);
  return it == index.end() ? -1 : it->second;
}

void Vocabulary::rebuild_index() {
  index.clear();
  index.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    index.emplace(terms[i], static_cast<int32_t>(i));
  }
}

Vocabulary build_vocabulary(const Corpus& corpus, const TokenizerConfig& config) {
  const auto& list = config.effective_stopwords();
  const StopwordSet stop_set(list.begin(), list.end());
  std::map<std::string, int32_t> df;  // ordered: vocabulary comes out sorted
  for (const auto& article : corpus.articles) {
    auto tokens =
        tokenize_with_stopset(article.title + "\n" + article.body, config, stop_set);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (auto& t : tokens) ++df[t];
  }
  Vocabulary vocab;
  vocab.total_documents = static_cast<int32_t>(corpus.articles.size());
  for (auto& [term, count] : df) {
    if (count >= config.min_document_frequency) {
      vocab.terms.push_back(term);
      vocab.document_frequency.push_back(count);
    }
  }
  vocab.rebuild_index();
  return vocab;
}

namespace {

TokenizedDocument tokenize_with(const Article& article, const TokenizerConfig& config,
                                const Vocabulary& vocabulary,
                                const StopwordSet& stop_set) {
  TokenizedDocument doc;
  doc.article_id = article.id;
  for (const auto& t :
       tokenize_with_stopset(article.title + "\n" + article.body, config, stop_set)) {
    const int32_t id = vocabulary.lookup(t);
    if (id >= 0) doc.tokens.push_back(id);
  }
  return doc;
}

}  // namespace

TokenizedDocument tokenize(const Article& article, const TokenizerConfig& config,
                           const Vocabulary& vocabulary) {
  const auto& list = config.effective_stopwords();
  return tokenize_with(article, config, vocabulary,
                       StopwordSet(list.begin(), list.end()));
}

TokenizedCorpus tokenize_corpus(const Corpus& corpus, const TokenizerConfig& config) {
  TokenizedCorpus out;
  out.vocabulary = build_vocabulary(corpus, config);
  out.documents.reserve(corpus.articles.size());
  const auto& list = config.effective_stopwords();
  const StopwordSet stop_set(list.begin(), list.end());
  for (const auto& article : corpus.articles) {
    out.documents.push_back(tokenize_with(article, config, out.vocabulary, stop_set));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Slicing

std::string SliceKey::id() const {
  return to_string(orientation) + "-" + std::to_string(year);
}

std::vector<std::size_t> partition(const Corpus& corpus, Orientation orientation,
                                   int year) {
  std::vector<std::size_t> indices;
  for (std::size_t i = 0; i < corpus.articles.size(); ++i) {
    const auto& a = corpus.articles[i];
    if (a.orientation == orientation && a.year == year) indices.push_back(i);
  }
  return indices;
}

std::vector<SliceKey> discover_slices(const Corpus& corpus) {
  std::set<SliceKey> keys;
  for (const auto& a : corpus.articles) keys.insert({a.orientation, a.year});
  return {keys.begin(), keys.end()};
}

}  // namespace narr
