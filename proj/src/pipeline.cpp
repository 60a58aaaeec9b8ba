#include "narr/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>

#include "narr/rng.hpp"

namespace narr {

namespace fs = std::filesystem;
using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Config

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return it->get<T>();
}

std::optional<double> get_optional(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

}  // namespace

PipelineConfig PipelineConfig::from_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  auto config = from_json(j);
  // relative paths resolve against the config file's directory
  const fs::path base = path.parent_path();
  if (config.corpus_path.is_relative()) config.corpus_path = base / config.corpus_path;
  if (config.workspace.is_relative()) config.workspace = base / config.workspace;
  return config;
}

PipelineConfig PipelineConfig::from_json(const json& j) {
  PipelineConfig config;
  if (!j.contains("corpus") || !j.contains("workspace")) {
    throw std::invalid_argument("config needs 'corpus' and 'workspace' paths");
  }
  config.corpus_path = j.at("corpus").get<std::string>();
  config.workspace = j.at("workspace").get<std::string>();
  config.seed = get_or<uint64_t>(j, "seed", 42);
  config.lenient = get_or<bool>(j, "lenient", false);
  config.threads = get_or<int>(j, "threads", 1);

  if (j.contains("newspaper_map") && !j.at("newspaper_map").is_null()) {
    config.newspaper_map.clear();
    for (const auto& [name, orientation] : j.at("newspaper_map").items()) {
      config.newspaper_map[name] = orientation_from_string(orientation.get<std::string>());
    }
  }
  if (j.contains("lemma_phrases") && !j.at("lemma_phrases").is_null()) {
    config.lemma_filter.phrases = j.at("lemma_phrases").get<std::vector<std::string>>();
  }
  config.lemma_filter.validate();

  if (j.contains("tokenizer")) {
    const auto& t = j.at("tokenizer");
    config.tokenizer.min_token_length = get_or<int>(t, "min_token_length", 2);
    config.tokenizer.min_document_frequency = get_or<int>(t, "min_document_frequency", 5);
    config.tokenizer.stopwords =
        get_or<std::vector<std::string>>(t, "stopwords", {});
  }

  const int k = j.contains("lda") ? get_or<int>(j.at("lda"), "topics", 10) : 10;
  config.lda = LdaConfig::with_defaults(k);
  if (j.contains("lda")) {
    const auto& l = j.at("lda");
    if (const auto alpha = get_optional(l, "alpha")) config.lda.alpha = *alpha;
    config.lda.beta = get_or<double>(l, "beta", 0.01);
    config.lda.iterations = get_or<int>(l, "iterations", 1000);
    config.lda.burn_in = get_or<int>(l, "burn_in", 200);
    config.lda.average_after_burn_in = get_or<bool>(l, "average_after_burn_in", false);
  }
  config.lda.validate();
  config.keywords_per_topic = get_or<int>(j, "keywords_per_topic", 20);

  if (j.contains("cooccurrence")) {
    config.cooccurrence_cutoff = get_optional(j.at("cooccurrence"), "threshold");
    config.cooccurrence_percentile =
        get_or<double>(j.at("cooccurrence"), "percentile", 0.75);
  }
  if (j.contains("summarizer")) {
    const auto& s = j.at("summarizer");
    config.summarizer.n_docs = get_or<int>(s, "n_docs", 10);
    config.summarizer.target_sentences = get_or<int>(s, "target_sentences", 8);
    config.summarizer.bm25.k1 = get_or<double>(s, "k1", 1.2);
    config.summarizer.bm25.b = get_or<double>(s, "b", 0.75);
    config.summarizer.bm25.delta = get_or<double>(s, "delta", 1.0);
    config.summarizer.damping = get_or<double>(s, "damping", 0.85);
    config.summarizer.eps = get_or<double>(s, "eps", 1e-6);
    config.summarizer.max_iter = get_or<int>(s, "max_iter", 200);
  }
  if (j.contains("terms")) {
    const auto& t = j.at("terms");
    config.terms.n_articles = get_or<int>(t, "n_articles", 500);
    config.terms.top = get_or<int>(t, "top", 50);
    config.terms.max_pooling = get_or<std::string>(t, "pooling", "sum") == "max";
  }
  if (j.contains("embedding")) {
    const auto& e = j.at("embedding");
    config.embedding.dim = get_or<int>(e, "dim", 100);
    config.embedding.window = get_or<int>(e, "window", 5);
    config.embedding.negatives = get_or<int>(e, "negatives", 5);
    config.embedding.epochs = get_or<int>(e, "epochs", 5);
    config.embedding.learning_rate = get_or<double>(e, "learning_rate", 0.025);
    config.embedding.min_count = get_or<int>(e, "min_count", 5);
    config.embedding.subsample = get_or<double>(e, "subsample", 1e-4);
  }
  config.embedding.validate();
  if (j.contains("narrative_graph")) {
    config.narrative_cutoff = get_optional(j.at("narrative_graph"), "threshold");
    config.narrative_percentile =
        get_or<double>(j.at("narrative_graph"), "percentile", 0.80);
  }
  if (j.contains("verlet")) {
    const auto& v = j.at("verlet");
    config.verlet.spring_stiffness = get_or<double>(v, "spring_stiffness", 1.0);
    config.verlet.rest_length = get_or<double>(v, "rest_length", 30.0);
    config.verlet.charge = get_or<double>(v, "charge", -30.0);
    config.verlet.centering = get_or<double>(v, "centering", 0.05);
    config.verlet.velocity_decay = get_or<double>(v, "velocity_decay", 0.6);
    config.verlet.steps = get_or<int>(v, "steps", 300);
  }
  if (j.contains("fr")) {
    const auto& f = j.at("fr");
    config.fr.frame = get_or<double>(f, "frame", 100.0);
    config.fr.c = get_or<double>(f, "c", 1.0);
    config.fr.initial_temperature = get_or<double>(f, "initial_temperature", 0.0);
    config.fr.iterations = get_or<int>(f, "iterations", 500);
  }
  if (j.contains("flows")) {
    config.flow_mode =
        flow_mode_from_string(get_or<std::string>(j.at("flows"), "mode", "min-count"));
  }
  if (j.contains("sankey")) {
    const auto& s = j.at("sankey");
    config.sankey.width = get_or<double>(s, "width", 960.0);
    config.sankey.height = get_or<double>(s, "height", 600.0);
    config.sankey.node_width = get_or<double>(s, "node_width", 18.0);
    config.sankey.gap = get_or<double>(s, "gap", 8.0);
  }
  if (j.contains("stats")) {
    config.histogram_bins = get_or<int>(j.at("stats"), "bins", 20);
    config.log_frequency = get_or<bool>(j.at("stats"), "log_frequency", false);
  }
  if (j.contains("render")) {
    const auto& r = j.at("render");
    config.style.canvas = get_or<double>(r, "canvas", 800.0);
    config.style.node_radius = get_or<double>(r, "node_radius", 6.0);
    if (r.contains("palette") && !r.at("palette").is_null()) {
      config.style.palette = r.at("palette").get<std::vector<std::string>>();
    }
  }
  config.style.validate(config.lda.topics);
  return config;
}

// ---------------------------------------------------------------------------
// Stage names

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::kIngest: return "ingest";
    case Stage::kTopics: return "topics";
    case Stage::kSummarize: return "summarize";
    case Stage::kTerms: return "terms";
    case Stage::kEmbed: return "embed";
    case Stage::kGraphs: return "graphs";
    case Stage::kFlows: return "flows";
    case Stage::kStats: return "stats";
    case Stage::kRender: return "render";
    case Stage::kAll: return "all";
  }
  throw std::logic_error("bad stage value");
}

Stage stage_from_string(const std::string& s) {
  for (Stage stage : {Stage::kIngest, Stage::kTopics, Stage::kSummarize, Stage::kTerms,
                      Stage::kEmbed, Stage::kGraphs, Stage::kFlows, Stage::kStats,
                      Stage::kRender, Stage::kAll}) {
    if (to_string(stage) == s) return stage;
  }
  throw std::invalid_argument("unknown stage: '" + s + "'");
}

int RunReport::executed() const {
  int n = 0;
  for (const auto& s : stages) n += !s.skipped;
  return n;
}

int RunReport::skipped() const {
  int n = 0;
  for (const auto& s : stages) n += s.skipped;
  return n;
}

// ---------------------------------------------------------------------------
// Hashing and manifest

namespace {

std::string fnv1a_hex(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

std::string hash_json(const ojson& value) { return fnv1a_hex(value.dump()); }

std::mutex g_manifest_mutex;

void progress(const std::string& key, bool skipped) {
  std::lock_guard<std::mutex> lock(g_manifest_mutex);
  std::cerr << "[narratives] " << key << (skipped ? " (cached)" : " done") << "\n";
}

}  // namespace

Pipeline::Pipeline(PipelineConfig config)
    : config_(std::move(config)), workspace_(config_.workspace) {
  fs::create_directories(workspace_);
  load_manifest();
}

void Pipeline::load_manifest() {
  const fs::path path = workspace_ / "manifest.json";
  if (!fs::exists(path)) return;
  const json j = read_json_file(path);
  check_artifact(j, "narratives.manifest");
  for (const auto& [key, rec] : j.at("entries").items()) {
    Entry entry;
    entry.stage = rec.at("stage").get<std::string>();
    entry.config_hash = rec.at("config_hash").get<std::string>();
    for (const auto& [name, hash] : rec.at("inputs").items()) {
      entry.inputs[name] = hash.get<std::string>();
    }
    entry.outputs = rec.at("outputs").get<std::vector<std::string>>();
    manifest_[key] = std::move(entry);
  }
}

void Pipeline::save_manifest() const {
  ojson j;
  j["format"] = "narratives.manifest";
  j["version"] = 1;
  j["seed"] = config_.seed;
  ojson entries;
  for (const auto& [key, entry] : manifest_) {
    ojson rec;
    rec["stage"] = entry.stage;
    rec["config_hash"] = entry.config_hash;
    ojson inputs;
    for (const auto& [name, hash] : entry.inputs) inputs[name] = hash;
    rec["inputs"] = std::move(inputs);
    rec["outputs"] = entry.outputs;
    entries[key] = std::move(rec);
  }
  j["entries"] = std::move(entries);
  write_json_file(workspace_ / "manifest.json", j);
}

std::string Pipeline::file_hash(const fs::path& path) const {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return fnv1a_hex(buffer.str());
}

bool Pipeline::fresh(const std::string& key, const Entry& candidate) const {
  std::lock_guard<std::mutex> lock(g_manifest_mutex);
  const auto it = manifest_.find(key);
  if (it == manifest_.end()) return false;
  const Entry& have = it->second;
  if (have.config_hash != candidate.config_hash) return false;
  if (have.inputs != candidate.inputs) return false;
  for (const auto& output : have.outputs) {
    if (!fs::exists(workspace_ / output)) return false;
  }
  return true;
}

void Pipeline::guard_config_change(const std::string& key,
                                   const std::string& config_hash, bool force) const {
  if (force) return;
  std::lock_guard<std::mutex> lock(g_manifest_mutex);
  const auto it = manifest_.find(key);
  if (it != manifest_.end() && it->second.config_hash != config_hash) {
    throw std::runtime_error("config changed for stage '" + key +
                             "'; rerun with --force to overwrite its artifacts");
  }
}

void Pipeline::require(const fs::path& artifact, const std::string& stage) const {
  if (!fs::exists(artifact)) {
    throw std::runtime_error("missing artifact '" + artifact.string() +
                             "': run stage '" + stage + "' first");
  }
}

std::vector<SliceKey> Pipeline::slices() const {
  const fs::path path = workspace_ / "ingest" / "slices.json";
  require(path, "ingest");
  const json j = read_json_file(path);
  check_artifact(j, "narratives.slices");
  std::vector<SliceKey> keys;
  for (const auto& rec : j.at("slices")) {
    keys.push_back({orientation_from_string(rec.at("orientation").get<std::string>()),
                    rec.at("year").get<int>()});
  }
  return keys;
}

// ---------------------------------------------------------------------------
// Shared stage helpers

namespace {

struct SliceData {
  std::vector<TokenizedDocument> docs;
  std::vector<const Article*> articles;
};

SliceData slice_data(const CorpusCache& cache, const SliceKey& slice) {
  SliceData data;
  const auto indices = partition(cache.corpus, slice.orientation, slice.year);
  for (std::size_t i : indices) {
    data.docs.push_back(cache.tokenized.documents[i]);
    data.articles.push_back(&cache.corpus.articles[i]);
  }
  return data;
}

void stamp_seed(ojson& artifact, uint64_t seed) {
  if (!artifact.contains("seed")) artifact["seed"] = seed;
}

}  // namespace

// ---------------------------------------------------------------------------
// Stages

StageRun Pipeline::run_ingest(bool force) {
  const std::string key = "corpus/ingest";
  ojson fingerprint;
  fingerprint["tokenizer"] = {{"min_token_length", config_.tokenizer.min_token_length},
                              {"min_document_frequency",
                               config_.tokenizer.min_document_frequency},
                              {"stopwords", config_.tokenizer.effective_stopwords()}};
  fingerprint["lemma_phrases"] = config_.lemma_filter.phrases;
  ojson map_json;
  for (const auto& [name, orientation] : config_.newspaper_map) {
    map_json[name] = to_string(orientation);
  }
  fingerprint["newspaper_map"] = std::move(map_json);
  fingerprint["lenient"] = config_.lenient;
  fingerprint["seed"] = config_.seed;

  Entry entry;
  entry.stage = "ingest";
  entry.config_hash = hash_json(fingerprint);
  if (!fs::exists(config_.corpus_path)) {
    throw std::runtime_error("cannot open corpus file: " + config_.corpus_path.string());
  }
  entry.inputs["corpus"] = file_hash(config_.corpus_path);
  entry.outputs = {"ingest/corpus_cache.json", "ingest/slices.json",
                   "ingest/rejects.json"};

  guard_config_change(key, entry.config_hash, force);
  if (!force && fresh(key, entry)) {
    progress(key, true);
    return {key, "ingest", true};
  }

  const Corpus loaded =
      load_corpus(config_.corpus_path, config_.newspaper_map, config_.lenient);
  const Corpus corpus = filter_by_lemmas(loaded, config_.lemma_filter);
  const TokenizedCorpus tokenized = tokenize_corpus(corpus, config_.tokenizer);

  fs::create_directories(workspace_ / "ingest");
  ojson cache =
      corpus_cache_to_json(corpus, tokenized, config_.tokenizer, config_.seed);
  write_json_file(workspace_ / "ingest" / "corpus_cache.json", cache);

  ojson slices_json;
  slices_json["format"] = "narratives.slices";
  slices_json["version"] = 1;
  slices_json["seed"] = config_.seed;
  slices_json["total_loaded"] = loaded.articles.size();
  slices_json["retained"] = corpus.articles.size();
  slices_json["rejected"] = corpus.rejects.size();
  ojson slice_list = ojson::array();
  for (const auto& slice : discover_slices(corpus)) {
    ojson rec;
    rec["orientation"] = to_string(slice.orientation);
    rec["year"] = slice.year;
    rec["articles"] = partition(corpus, slice.orientation, slice.year).size();
    slice_list.push_back(std::move(rec));
  }
  slices_json["slices"] = std::move(slice_list);
  write_json_file(workspace_ / "ingest" / "slices.json", slices_json);

  ojson rejects;
  rejects["format"] = "narratives.rejects";
  rejects["version"] = 1;
  rejects["seed"] = config_.seed;
  ojson reject_list = ojson::array();
  for (const auto& r : corpus.rejects) {
    ojson rec;
    rec["line"] = r.line;
    rec["id"] = r.id;
    rec["reason"] = r.reason;
    reject_list.push_back(std::move(rec));
  }
  rejects["rejects"] = std::move(reject_list);
  write_json_file(workspace_ / "ingest" / "rejects.json", rejects);

  {
    std::lock_guard<std::mutex> lock(g_manifest_mutex);
    manifest_[key] = entry;
  }
  progress(key, false);
  return {key, "ingest", false};
}

StageRun Pipeline::run_topics(const SliceKey& slice, bool force) {
  const std::string key = slice.id() + "/topics";
  const fs::path cache_path = workspace_ / "ingest" / "corpus_cache.json";
  require(cache_path, "ingest");

  ojson fingerprint;
  fingerprint["lda"] = {{"topics", config_.lda.topics},
                        {"alpha", config_.lda.alpha},
                        {"beta", config_.lda.beta},
                        {"iterations", config_.lda.iterations},
                        {"burn_in", config_.lda.burn_in},
                        {"average_after_burn_in", config_.lda.average_after_burn_in}};
  fingerprint["keywords_per_topic"] = config_.keywords_per_topic;
  fingerprint["cooccurrence_cutoff"] =
      config_.cooccurrence_cutoff ? ojson(*config_.cooccurrence_cutoff) : ojson();
  fingerprint["cooccurrence_percentile"] = config_.cooccurrence_percentile;
  fingerprint["seed"] = config_.seed;

  Entry entry;
  entry.stage = "topics";
  entry.config_hash = hash_json(fingerprint);
  entry.inputs["ingest/corpus_cache.json"] = file_hash(cache_path);
  const std::string dir = slice.id() + "/topics";
  entry.outputs = {dir + "/lda_model.json", dir + "/keywords.json",
                   dir + "/cooccurrence.json"};

  guard_config_change(key, entry.config_hash, force);
  if (!force && fresh(key, entry)) {
    progress(key, true);
    return {key, "topics", true};
  }

  const CorpusCache cache = corpus_cache_from_json(read_json_file(cache_path));
  const SliceData data = slice_data(cache, slice);
  if (data.docs.empty()) {
    throw std::runtime_error("slice " + slice.id() + " has no documents");
  }

  LdaConfig lda_config = config_.lda;
  lda_config.seed = derive_seed(config_.seed, slice.id() + "/lda");
  const LdaModel model = fit_lda(data.docs, cache.tokenized.vocabulary, lda_config);

  fs::create_directories(workspace_ / dir);
  ojson model_json = lda_model_to_json(model, slice);
  write_json_file(workspace_ / dir / "lda_model.json", model_json);

  const std::vector<int> ranked = rank_topics(model);
  ojson keywords_json;
  keywords_json["format"] = "narratives.keywords";
  keywords_json["version"] = 1;
  keywords_json["seed"] = config_.seed;
  keywords_json["slice"] = {{"orientation", to_string(slice.orientation)},
                            {"year", slice.year}};
  keywords_json["ranked_topics"] = ranked;
  ojson per_topic = ojson::array();
  for (int topic = 0; topic < model.topics(); ++topic) {
    per_topic.push_back(top_keywords(model, topic, config_.keywords_per_topic));
  }
  keywords_json["keywords"] = std::move(per_topic);
  write_json_file(workspace_ / dir / "keywords.json", keywords_json);

  // keyword union in relevance order for the co-occurrence graph
  std::vector<std::string> union_keywords;
  std::set<std::string> seen;
  for (int topic : ranked) {
    for (const auto& kw : top_keywords(model, topic, config_.keywords_per_topic)) {
      if (seen.insert(kw).second) union_keywords.push_back(kw);
    }
  }
  CooccurrenceMatrix matrix =
      keyword_cooccurrence(data.docs, cache.tokenized.vocabulary, union_keywords);
  matrix.threshold = config_.cooccurrence_cutoff
                         ? *config_.cooccurrence_cutoff
                         : cooccurrence_threshold(matrix, config_.cooccurrence_percentile);
  ojson matrix_json = cooccurrence_to_json(matrix);
  stamp_seed(matrix_json, config_.seed);
  write_json_file(workspace_ / dir / "cooccurrence.json", matrix_json);

  {
    std::lock_guard<std::mutex> lock(g_manifest_mutex);
    manifest_[key] = entry;
  }
  progress(key, false);
  return {key, "topics", false};
}

StageRun Pipeline::run_summarize(const SliceKey& slice, bool force) {
  const std::string key = slice.id() + "/summarize";
  const fs::path cache_path = workspace_ / "ingest" / "corpus_cache.json";
  const fs::path model_path = workspace_ / slice.id() / "topics" / "lda_model.json";
  require(cache_path, "ingest");
  require(model_path, "topics");

  ojson fingerprint;
  fingerprint["summarizer"] = {{"n_docs", config_.summarizer.n_docs},
                               {"target_sentences", config_.summarizer.target_sentences},
                               {"k1", config_.summarizer.bm25.k1},
                               {"b", config_.summarizer.bm25.b},
                               {"delta", config_.summarizer.bm25.delta},
                               {"damping", config_.summarizer.damping},
                               {"eps", config_.summarizer.eps},
                               {"max_iter", config_.summarizer.max_iter}};
  fingerprint["seed"] = config_.seed;

  Entry entry;
  entry.stage = "summarize";
  entry.config_hash = hash_json(fingerprint);
  entry.inputs["ingest/corpus_cache.json"] = file_hash(cache_path);
  entry.inputs[slice.id() + "/topics/lda_model.json"] = file_hash(model_path);
  const std::string dir = slice.id() + "/summarize";
  entry.outputs = {dir + "/summaries.json", dir + "/summaries.txt"};

  guard_config_change(key, entry.config_hash, force);
  if (!force && fresh(key, entry)) {
    progress(key, true);
    return {key, "summarize", true};
  }

  const CorpusCache cache = corpus_cache_from_json(read_json_file(cache_path));
  const SliceData data = slice_data(cache, slice);
  const LdaModel model = lda_model_from_json(read_json_file(model_path));

  std::vector<Summary> summaries;
  for (int topic = 0; topic < model.topics(); ++topic) {
    summaries.push_back(summarize_topic(model, data.articles, topic,
                                        config_.summarizer, config_.tokenizer));
  }

  fs::create_directories(workspace_ / dir);
  ojson summaries_json = summaries_to_json(slice, summaries);
  stamp_seed(summaries_json, config_.seed);
  write_json_file(workspace_ / dir / "summaries.json", summaries_json);

  std::ofstream txt(workspace_ / dir / "summaries.txt");
  if (!txt) throw std::runtime_error("cannot write summaries.txt");
  for (const auto& summary : summaries) {
    txt << "== " << slice.id() << " topic " << summary.topic << "\n";
    for (const auto& sentence : summary.sentences) txt << sentence << "\n";
    txt << "\n";
  }

  {
    std::lock_guard<std::mutex> lock(g_manifest_mutex);
    manifest_[key] = entry;
  }
  progress(key, false);
  return {key, "summarize", false};
}

StageRun Pipeline::run_terms(const SliceKey& slice, bool force) {
  const std::string key = slice.id() + "/terms";
  const fs::path cache_path = workspace_ / "ingest" / "corpus_cache.json";
  const fs::path model_path = workspace_ / slice.id() / "topics" / "lda_model.json";
  require(cache_path, "ingest");
  require(model_path, "topics");

  ojson fingerprint;
  fingerprint["terms"] = {{"n_articles", config_.terms.n_articles},
                          {"top", config_.terms.top},
                          {"max_pooling", config_.terms.max_pooling}};
  fingerprint["seed"] = config_.seed;

  Entry entry;
  entry.stage = "terms";
  entry.config_hash = hash_json(fingerprint);
  entry.inputs["ingest/corpus_cache.json"] = file_hash(cache_path);
  entry.inputs[slice.id() + "/topics/lda_model.json"] = file_hash(model_path);
  const std::string dir = slice.id() + "/terms";
  entry.outputs = {dir + "/narratives.json"};

  guard_config_change(key, entry.config_hash, force);
  if (!force && fresh(key, entry)) {
    progress(key, true);
    return {key, "terms", true};
  }

  const CorpusCache cache = corpus_cache_from_json(read_json_file(cache_path));
  const SliceData data = slice_data(cache, slice);
  const LdaModel model = lda_model_from_json(read_json_file(model_path));

  const auto excluded = config_.lemma_filter.single_token_phrases();
  std::vector<NarrativeTermSet> sets;
  for (int topic : rank_topics(model)) {
    NarrativeTermSet set = extract_narrative_terms(
        model, data.docs, cache.tokenized.vocabulary, topic, config_.terms, excluded);
    set.slice = slice;
    sets.push_back(std::move(set));
  }
  label_narratives(sets);

  fs::create_directories(workspace_ / dir);
  ojson narratives_json = narratives_to_json(slice, sets);
  stamp_seed(narratives_json, config_.seed);
  write_json_file(workspace_ / dir / "narratives.json", narratives_json);

  {
    std::lock_guard<std::mutex> lock(g_manifest_mutex);
    manifest_[key] = entry;
  }
  progress(key, false);
  return {key, "terms", false};
}

StageRun Pipeline::run_embed(const SliceKey& slice, bool force) {
  const std::string key = slice.id() + "/embed";
  const fs::path cache_path = workspace_ / "ingest" / "corpus_cache.json";
  require(cache_path, "ingest");

  ojson fingerprint;
  fingerprint["embedding"] = {{"dim", config_.embedding.dim},
                              {"window", config_.embedding.window},
                              {"negatives", config_.embedding.negatives},
                              {"epochs", config_.embedding.epochs},
                              {"learning_rate", config_.embedding.learning_rate},
                              {"min_count", config_.embedding.min_count},
                              {"subsample", config_.embedding.subsample}};
  fingerprint["seed"] = config_.seed;

  Entry entry;
  entry.stage = "embed";
  entry.config_hash = hash_json(fingerprint);
  entry.inputs["ingest/corpus_cache.json"] = file_hash(cache_path);
  const std::string dir = slice.id() + "/embed";
  entry.outputs = {dir + "/embeddings.bin", dir + "/vocab.json"};

  guard_config_change(key, entry.config_hash, force);
  if (!force && fresh(key, entry)) {
    progress(key, true);
    return {key, "embed", true};
  }

  const CorpusCache cache = corpus_cache_from_json(read_json_file(cache_path));
  const SliceData data = slice_data(cache, slice);
  int64_t tokens = 0;
  for (const auto& doc : data.docs) tokens += static_cast<int64_t>(doc.tokens.size());
  if (tokens < 1000) {
    std::cerr << "[narratives] warning: slice " << slice.id() << " has only " << tokens
              << " tokens; embeddings will be noisy\n";
  }

  EmbeddingConfig embed_config = config_.embedding;
  embed_config.seed = derive_seed(config_.seed, slice.id() + "/embed");
  const EmbeddingMatrix matrix =
      train_word2vec(data.docs, cache.tokenized.vocabulary, embed_config);

  fs::create_directories(workspace_ / dir);
  save_embeddings(workspace_ / dir / "embeddings.bin", workspace_ / dir / "vocab.json",
                  matrix);

  {
    std::lock_guard<std::mutex> lock(g_manifest_mutex);
    manifest_[key] = entry;
  }
  progress(key, false);
  return {key, "embed", false};
}

StageRun Pipeline::run_graphs(const SliceKey& slice, bool force) {
  const std::string key = slice.id() + "/graphs";
  const fs::path keywords_path = workspace_ / slice.id() / "topics" / "keywords.json";
  const fs::path matrix_path = workspace_ / slice.id() / "topics" / "cooccurrence.json";
  const fs::path narratives_path = workspace_ / slice.id() / "terms" / "narratives.json";
  const fs::path embed_bin = workspace_ / slice.id() / "embed" / "embeddings.bin";
  const fs::path embed_vocab = workspace_ / slice.id() / "embed" / "vocab.json";
  require(keywords_path, "topics");
  require(matrix_path, "topics");
  require(narratives_path, "terms");
  require(embed_bin, "embed");
  require(embed_vocab, "embed");

  ojson fingerprint;
  fingerprint["narrative_cutoff"] =
      config_.narrative_cutoff ? ojson(*config_.narrative_cutoff) : ojson();
  fingerprint["narrative_percentile"] = config_.narrative_percentile;
  fingerprint["verlet"] = {{"spring_stiffness", config_.verlet.spring_stiffness},
                           {"rest_length", config_.verlet.rest_length},
                           {"charge", config_.verlet.charge},
                           {"centering", config_.verlet.centering},
                           {"velocity_decay", config_.verlet.velocity_decay},
                           {"steps", config_.verlet.steps}};
  fingerprint["fr"] = {{"frame", config_.fr.frame},
                       {"c", config_.fr.c},
                       {"initial_temperature", config_.fr.initial_temperature},
                       {"iterations", config_.fr.iterations}};
  fingerprint["seed"] = config_.seed;

  Entry entry;
  entry.stage = "graphs";
  entry.config_hash = hash_json(fingerprint);
  entry.inputs[slice.id() + "/topics/keywords.json"] = file_hash(keywords_path);
  entry.inputs[slice.id() + "/topics/cooccurrence.json"] = file_hash(matrix_path);
  entry.inputs[slice.id() + "/terms/narratives.json"] = file_hash(narratives_path);
  entry.inputs[slice.id() + "/embed/embeddings.bin"] = file_hash(embed_bin);

  const json narratives_json = read_json_file(narratives_path);
  const auto sets = narratives_from_json(narratives_json);
  const std::string dir = slice.id() + "/graphs";
  entry.outputs = {dir + "/topic_graph.json"};
  for (const auto& set : sets) {
    entry.outputs.push_back(dir + "/narrative_" + std::to_string(set.topic) + ".json");
    entry.outputs.push_back(dir + "/similarity_" + std::to_string(set.topic) + ".json");
  }

  guard_config_change(key, entry.config_hash, force);
  if (!force && fresh(key, entry)) {
    progress(key, true);
    return {key, "graphs", true};
  }

  fs::create_directories(workspace_ / dir);

  // Topic network graph: keyword nodes, co-occurrence edges, verlet layout.
  const json keywords_json = read_json_file(keywords_path);
  check_artifact(keywords_json, "narratives.keywords");
  const auto ranked = keywords_json.at("ranked_topics").get<std::vector<int>>();
  const auto per_topic =
      keywords_json.at("keywords").get<std::vector<std::vector<std::string>>>();
  const CooccurrenceMatrix matrix = cooccurrence_from_json(read_json_file(matrix_path));

  TopicGraphLayout topic_layout;
  topic_layout.keywords = matrix.keywords;
  topic_layout.threshold = matrix.threshold;
  std::map<std::string, int32_t> node_index;
  for (std::size_t i = 0; i < matrix.keywords.size(); ++i) {
    node_index[matrix.keywords[i]] = static_cast<int32_t>(i);
  }
  topic_layout.topic_of_node.assign(matrix.keywords.size(), -1);
  topic_layout.topic_rank_of_node.assign(matrix.keywords.size(), -1);
  for (std::size_t rank = 0; rank < ranked.size(); ++rank) {
    for (const auto& kw : per_topic[ranked[rank]]) {
      const int32_t node = node_index.at(kw);
      if (topic_layout.topic_of_node[node] < 0) {
        topic_layout.topic_of_node[node] = ranked[rank];
        topic_layout.topic_rank_of_node[node] = static_cast<int32_t>(rank);
      }
    }
  }
  LayoutGraph topic_graph;
  topic_graph.node_count = static_cast<int32_t>(matrix.keywords.size());
  for (std::size_t i = 0; i < matrix.keywords.size(); ++i) {
    for (std::size_t j = i + 1; j < matrix.keywords.size(); ++j) {
      if (matrix.counts[i][j] > matrix.threshold) {
        topic_graph.edges.push_back({static_cast<int32_t>(i), static_cast<int32_t>(j),
                                     static_cast<double>(matrix.counts[i][j])});
      }
    }
  }
  topic_layout.edges = topic_graph.edges;
  VerletConfig verlet_config = config_.verlet;
  verlet_config.seed = derive_seed(config_.seed, slice.id() + "/verlet");
  topic_layout.positions = verlet_layout(topic_graph, verlet_config);
  ojson topic_json = topic_graph_to_json(topic_layout);
  stamp_seed(topic_json, config_.seed);
  write_json_file(workspace_ / dir / "topic_graph.json", topic_json);

  // Narrative network graphs: similarity edges, FR, radial remap.
  const EmbeddingMatrix embeddings = load_embeddings(embed_bin, embed_vocab);
  for (const auto& set : sets) {
    std::vector<std::string> terms;
    terms.reserve(set.terms.size());
    for (const auto& tw : set.terms) terms.push_back(tw.term);
    const SimilarityTable table = similarity_table(terms, embeddings);
    ojson table_json = similarity_table_to_json(table, set.topic);
    stamp_seed(table_json, config_.seed);
    write_json_file(
        workspace_ / dir / ("similarity_" + std::to_string(set.topic) + ".json"),
        table_json);
    const NarrativeGraph graph = build_narrative_graph(
        terms, embeddings, config_.narrative_cutoff, config_.narrative_percentile);
    LayoutGraph fr_graph;
    fr_graph.node_count = static_cast<int32_t>(graph.nodes.size());
    for (const auto& e : graph.edges) fr_graph.edges.push_back({e.a, e.b, e.weight});
    FrConfig fr_config = config_.fr;
    fr_config.seed = derive_seed(config_.seed, slice.id() + "/fr/" +
                                                   std::to_string(set.topic));
    const FrResult fr = fruchterman_reingold(fr_graph, fr_config);
    const RadialLayout radial = radialize(fr.positions, graph.strength);
    ojson graph_json = narrative_graph_to_json(graph, radial, set.topic, set.label);
    stamp_seed(graph_json, config_.seed);
    write_json_file(
        workspace_ / dir / ("narrative_" + std::to_string(set.topic) + ".json"),
        graph_json);
  }

  {
    std::lock_guard<std::mutex> lock(g_manifest_mutex);
    manifest_[key] = entry;
  }
  progress(key, false);
  return {key, "graphs", false};
}

StageRun Pipeline::run_flows(Orientation orientation, int from, int to, bool force) {
  const SliceKey slice_from{orientation, from};
  const SliceKey slice_to{orientation, to};
  const std::string pair_id =
      to_string(orientation) + "-" + std::to_string(from) + "-" + std::to_string(to);
  const std::string key = pair_id + "/flows";

  const fs::path cache_path = workspace_ / "ingest" / "corpus_cache.json";
  const fs::path from_path = workspace_ / slice_from.id() / "terms" / "narratives.json";
  const fs::path to_path = workspace_ / slice_to.id() / "terms" / "narratives.json";
  require(cache_path, "ingest");
  require(from_path, "terms");
  require(to_path, "terms");

  ojson fingerprint;
  fingerprint["mode"] = to_string(config_.flow_mode);
  fingerprint["sankey"] = {{"width", config_.sankey.width},
                           {"height", config_.sankey.height},
                           {"node_width", config_.sankey.node_width},
                           {"gap", config_.sankey.gap}};
  fingerprint["seed"] = config_.seed;

  Entry entry;
  entry.stage = "flows";
  entry.config_hash = hash_json(fingerprint);
  entry.inputs["ingest/corpus_cache.json"] = file_hash(cache_path);
  entry.inputs[slice_from.id() + "/terms/narratives.json"] = file_hash(from_path);
  entry.inputs[slice_to.id() + "/terms/narratives.json"] = file_hash(to_path);
  const std::string dir = pair_id + "/flows";
  entry.outputs = {dir + "/flow_diagram.json", dir + "/sankey_geometry.json"};

  guard_config_change(key, entry.config_hash, force);
  if (!force && fresh(key, entry)) {
    progress(key, true);
    return {key, "flows", true};
  }

  const CorpusCache cache = corpus_cache_from_json(read_json_file(cache_path));
  const SliceData data_from = slice_data(cache, slice_from);
  const SliceData data_to = slice_data(cache, slice_to);
  const TermCounts counts_from = count_terms(data_from.docs, cache.tokenized.vocabulary);
  const TermCounts counts_to = count_terms(data_to.docs, cache.tokenized.vocabulary);

  const auto sets_from = narratives_from_json(read_json_file(from_path));
  const auto sets_to = narratives_from_json(read_json_file(to_path));

  const FlowDiagram diagram =
      compute_flows(sets_from, sets_to, counts_from, counts_to, config_.flow_mode);
  const SankeyGeometry geometry = sankey_geometry(diagram, config_.sankey);

  fs::create_directories(workspace_ / dir);
  ojson diagram_json = flow_diagram_to_json(diagram, orientation, from, to);
  stamp_seed(diagram_json, config_.seed);
  write_json_file(workspace_ / dir / "flow_diagram.json", diagram_json);
  ojson geometry_json = sankey_to_json(geometry);
  stamp_seed(geometry_json, config_.seed);
  write_json_file(workspace_ / dir / "sankey_geometry.json", geometry_json);

  {
    std::lock_guard<std::mutex> lock(g_manifest_mutex);
    manifest_[key] = entry;
  }
  progress(key, false);
  return {key, "flows", false};
}

StageRun Pipeline::run_stats(Orientation orientation, int from, int to, bool force) {
  const SliceKey slice_from{orientation, from};
  const SliceKey slice_to{orientation, to};
  const std::string pair_id =
      to_string(orientation) + "-" + std::to_string(from) + "-" + std::to_string(to);
  const std::string key = pair_id + "/stats";

  const fs::path cache_path = workspace_ / "ingest" / "corpus_cache.json";
  const fs::path from_path = workspace_ / slice_from.id() / "terms" / "narratives.json";
  const fs::path to_path = workspace_ / slice_to.id() / "terms" / "narratives.json";
  require(cache_path, "ingest");
  require(from_path, "terms");
  require(to_path, "terms");

  ojson fingerprint;
  fingerprint["bins"] = config_.histogram_bins;
  fingerprint["log_frequency"] = config_.log_frequency;
  fingerprint["seed"] = config_.seed;

  Entry entry;
  entry.stage = "stats";
  entry.config_hash = hash_json(fingerprint);
  entry.inputs["ingest/corpus_cache.json"] = file_hash(cache_path);
  entry.inputs[slice_from.id() + "/terms/narratives.json"] = file_hash(from_path);
  entry.inputs[slice_to.id() + "/terms/narratives.json"] = file_hash(to_path);
  const std::string dir = pair_id + "/stats";
  entry.outputs = {dir + "/regression.json"};

  guard_config_change(key, entry.config_hash, force);
  if (!force && fresh(key, entry)) {
    progress(key, true);
    return {key, "stats", true};
  }

  const CorpusCache cache = corpus_cache_from_json(read_json_file(cache_path));
  const SliceData data_from = slice_data(cache, slice_from);
  const SliceData data_to = slice_data(cache, slice_to);
  const TermCounts counts_from = count_terms(data_from.docs, cache.tokenized.vocabulary);
  const TermCounts counts_to = count_terms(data_to.docs, cache.tokenized.vocabulary);
  const int64_t total_from = total_token_count(data_from.docs);
  const int64_t total_to = total_token_count(data_to.docs);

  std::set<std::string> union_terms;
  for (const auto& set : narratives_from_json(read_json_file(from_path))) {
    for (const auto& tw : set.terms) union_terms.insert(tw.term);
  }
  for (const auto& set : narratives_from_json(read_json_file(to_path))) {
    for (const auto& tw : set.terms) union_terms.insert(tw.term);
  }

  std::vector<RegressionPoint> points;
  for (const auto& term : union_terms) {
    double x = term_frequency(term, counts_from, total_from);
    double y = term_frequency(term, counts_to, total_to);
    if (config_.log_frequency) {
      x = std::log1p(x);
      y = std::log1p(y);
    }
    points.push_back({term, x, y});
  }
  const RegressionFit fit = fit_regression(points, config_.histogram_bins);

  fs::create_directories(workspace_ / dir);
  ojson fit_json = regression_to_json(fit, orientation, from, to);
  stamp_seed(fit_json, config_.seed);
  write_json_file(workspace_ / dir / "regression.json", fit_json);

  {
    std::lock_guard<std::mutex> lock(g_manifest_mutex);
    manifest_[key] = entry;
  }
  progress(key, false);
  return {key, "stats", false};
}

// ---------------------------------------------------------------------------
// Render

namespace {

void copy_twin(const fs::path& source, const fs::path& twin) {
  std::ifstream in(source, std::ios::binary);
  std::ofstream out(twin, std::ios::binary);
  if (!in || !out) throw std::runtime_error("cannot copy twin for " + source.string());
  out << in.rdbuf();
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace

std::vector<StageRun> Pipeline::run_render(const std::optional<std::string>& only_slice,
                                           bool force) {
  std::vector<StageRun> runs;

  ojson fingerprint;
  fingerprint["style"] = {{"palette", config_.style.palette},
                          {"node_radius", config_.style.node_radius},
                          {"font", config_.style.font},
                          {"canvas", config_.style.canvas}};
  fingerprint["seed"] = config_.seed;
  const std::string config_hash = hash_json(fingerprint);

  for (const auto& slice : slices()) {
    if (only_slice && slice.id() != *only_slice &&
        to_string(slice.orientation) != *only_slice) {
      continue;
    }
    const std::string key = slice.id() + "/render";
    const fs::path graphs_dir = workspace_ / slice.id() / "graphs";
    const fs::path topic_path = graphs_dir / "topic_graph.json";
    require(topic_path, "graphs");

    Entry entry;
    entry.stage = "render";
    entry.config_hash = config_hash;
    entry.inputs[slice.id() + "/graphs/topic_graph.json"] = file_hash(topic_path);

    std::vector<fs::path> narrative_paths;
    for (const auto& file : fs::directory_iterator(graphs_dir)) {
      const std::string name = file.path().filename().string();
      if (name.rfind("narrative_", 0) == 0 && file.path().extension() == ".json") {
        narrative_paths.push_back(file.path());
      }
    }
    std::sort(narrative_paths.begin(), narrative_paths.end());
    for (const auto& path : narrative_paths) {
      entry.inputs[slice.id() + "/graphs/" + path.filename().string()] =
          file_hash(path);
    }

    const std::string dir = slice.id() + "/render";
    entry.outputs = {dir + "/topic_graph.svg", dir + "/topic_graph.json"};
    for (const auto& path : narrative_paths) {
      const std::string stem = path.stem().string();
      entry.outputs.push_back(dir + "/" + stem + ".svg");
      entry.outputs.push_back(dir + "/" + stem + ".json");
    }

    guard_config_change(key, entry.config_hash, force);
    if (!force && fresh(key, entry)) {
      progress(key, true);
      runs.push_back({key, "render", true});
      continue;
    }

    fs::create_directories(workspace_ / dir);
    const TopicGraphLayout topic_layout = topic_graph_from_json(read_json_file(topic_path));
    TopicGraphView view;
    view.labels = topic_layout.keywords;
    view.node_topic_rank = topic_layout.topic_rank_of_node;
    view.positions = topic_layout.positions;
    view.edges = topic_layout.edges;
    view.title = slice.id();
    write_text_file(workspace_ / dir / "topic_graph.svg",
                    render_topic_graph(view, config_.style));
    copy_twin(topic_path, workspace_ / dir / "topic_graph.json");

    for (const auto& path : narrative_paths) {
      NarrativeGraphView narrative_view;
      int topic = 0;
      std::string label;
      narrative_graph_from_json(read_json_file(path), &narrative_view.graph,
                                &narrative_view.layout, &topic, &label);
      narrative_view.title = std::to_string(topic) + " - " + label;
      const std::string stem = path.stem().string();
      write_text_file(workspace_ / dir / (stem + ".svg"),
                      render_narrative_graph(narrative_view, config_.style));
      copy_twin(path, workspace_ / dir / (stem + ".json"));
    }

    {
      std::lock_guard<std::mutex> lock(g_manifest_mutex);
      manifest_[key] = entry;
    }
    progress(key, false);
    runs.push_back({key, "render", false});
  }

  // Orientation pairs: sankey and scatter figures.
  for (const auto& [orientation, years] : [&] {
        std::map<Orientation, std::vector<int>> grouped;
        for (const auto& slice : slices()) {
          grouped[slice.orientation].push_back(slice.year);
        }
        return grouped;
      }()) {
    std::vector<int> sorted_years = years;
    std::sort(sorted_years.begin(), sorted_years.end());
    for (std::size_t i = 0; i + 1 < sorted_years.size(); ++i) {
      const std::string pair_id = to_string(orientation) + "-" +
                                  std::to_string(sorted_years[i]) + "-" +
                                  std::to_string(sorted_years[i + 1]);
      if (only_slice && *only_slice != to_string(orientation) &&
          *only_slice != pair_id) {
        continue;
      }
      const std::string key = pair_id + "/render";
      const fs::path geometry_path = workspace_ / pair_id / "flows" / "sankey_geometry.json";
      const fs::path diagram_path = workspace_ / pair_id / "flows" / "flow_diagram.json";
      const fs::path regression_path = workspace_ / pair_id / "stats" / "regression.json";
      require(geometry_path, "flows");
      require(diagram_path, "flows");
      require(regression_path, "stats");

      Entry entry;
      entry.stage = "render";
      entry.config_hash = config_hash;
      entry.inputs[pair_id + "/flows/sankey_geometry.json"] = file_hash(geometry_path);
      entry.inputs[pair_id + "/flows/flow_diagram.json"] = file_hash(diagram_path);
      entry.inputs[pair_id + "/stats/regression.json"] = file_hash(regression_path);
      const std::string dir = pair_id + "/render";
      entry.outputs = {dir + "/sankey.svg", dir + "/sankey.json",
                       dir + "/scatter.svg", dir + "/scatter.json"};

      guard_config_change(key, entry.config_hash, force);
      if (!force && fresh(key, entry)) {
        progress(key, true);
        runs.push_back({key, "render", true});
        continue;
      }

      fs::create_directories(workspace_ / dir);
      const SankeyGeometry geometry = sankey_from_json(read_json_file(geometry_path));
      const FlowDiagram diagram = flow_diagram_from_json(read_json_file(diagram_path));
      std::vector<std::string> left_labels, right_labels;
      for (const auto& n : diagram.left) left_labels.push_back(n.label);
      for (const auto& n : diagram.right) right_labels.push_back(n.label);
      write_text_file(workspace_ / dir / "sankey.svg",
                      render_sankey(geometry, left_labels, right_labels, config_.style,
                                    pair_id));
      copy_twin(geometry_path, workspace_ / dir / "sankey.json");

      const RegressionFit fit = regression_from_json(read_json_file(regression_path));
      write_text_file(
          workspace_ / dir / "scatter.svg",
          render_scatter(fit, config_.style, pair_id,
                         "frequency " + std::to_string(sorted_years[i]),
                         "frequency " + std::to_string(sorted_years[i + 1])));
      copy_twin(regression_path, workspace_ / dir / "scatter.json");

      {
        std::lock_guard<std::mutex> lock(g_manifest_mutex);
        manifest_[key] = entry;
      }
      progress(key, false);
      runs.push_back({key, "render", false});
    }
  }
  return runs;
}

// ---------------------------------------------------------------------------
// Driver

namespace {

// A pair stage is selected by its orientation name or its full pair id.
bool pair_selected(Orientation orientation, int from, int to,
                   const std::string& selector) {
  const std::string pair_id = to_string(orientation) + "-" + std::to_string(from) +
                              "-" + std::to_string(to);
  return selector == to_string(orientation) || selector == pair_id;
}

// Orientation pairs with consecutive years, in deterministic order.
std::vector<std::tuple<Orientation, int, int>> orientation_pairs(
    const std::vector<SliceKey>& slices) {
  std::map<Orientation, std::vector<int>> grouped;
  for (const auto& slice : slices) grouped[slice.orientation].push_back(slice.year);
  std::vector<std::tuple<Orientation, int, int>> pairs;
  for (auto& [orientation, years] : grouped) {
    std::sort(years.begin(), years.end());
    for (std::size_t i = 0; i + 1 < years.size(); ++i) {
      pairs.emplace_back(orientation, years[i], years[i + 1]);
    }
  }
  return pairs;
}

}  // namespace

RunReport Pipeline::run(Stage stage, const std::optional<std::string>& only_slice,
                        bool force) {
  RunReport report;

  // A selector names either one slice id or one orientation (which keeps
  // all of that orientation's slices and its cross-period figures).
  auto filter_slices = [&](const std::vector<SliceKey>& all) {
    std::vector<SliceKey> out;
    for (const auto& slice : all) {
      if (!only_slice || slice.id() == *only_slice ||
          to_string(slice.orientation) == *only_slice) {
        out.push_back(slice);
      }
    }
    if (only_slice && out.empty() && stage != Stage::kFlows && stage != Stage::kStats &&
        stage != Stage::kRender) {
      throw std::invalid_argument("unknown slice '" + *only_slice + "'");
    }
    return out;
  };

  // Per-slice stage over possibly several worker threads; results keep
  // slice order so reports and manifests are deterministic.
  auto parallel_slices = [&](const std::vector<SliceKey>& keys,
                             auto&& member) {
    const int workers = std::max(1, config_.threads);
    std::vector<StageRun> results(keys.size());
    std::size_t next = 0;
    while (next < keys.size()) {
      const std::size_t batch =
          std::min<std::size_t>(workers, keys.size() - next);
      std::vector<std::future<StageRun>> futures;
      for (std::size_t i = 0; i < batch; ++i) {
        const SliceKey slice = keys[next + i];
        futures.push_back(std::async(std::launch::async, [this, slice, force, &member] {
          return (this->*member)(slice, force);
        }));
      }
      for (std::size_t i = 0; i < batch; ++i) results[next + i] = futures[i].get();
      next += batch;
    }
    for (auto& r : results) report.stages.push_back(std::move(r));
  };

  switch (stage) {
    case Stage::kIngest:
      report.stages.push_back(run_ingest(force));
      break;
    case Stage::kTopics:
      parallel_slices(filter_slices(slices()), &Pipeline::run_topics);
      break;
    case Stage::kSummarize:
      parallel_slices(filter_slices(slices()), &Pipeline::run_summarize);
      break;
    case Stage::kTerms:
      parallel_slices(filter_slices(slices()), &Pipeline::run_terms);
      break;
    case Stage::kEmbed:
      parallel_slices(filter_slices(slices()), &Pipeline::run_embed);
      break;
    case Stage::kGraphs:
      parallel_slices(filter_slices(slices()), &Pipeline::run_graphs);
      break;
    case Stage::kFlows:
      for (const auto& [orientation, from, to] : orientation_pairs(slices())) {
        if (only_slice && !pair_selected(orientation, from, to, *only_slice)) continue;
        report.stages.push_back(run_flows(orientation, from, to, force));
      }
      break;
    case Stage::kStats:
      for (const auto& [orientation, from, to] : orientation_pairs(slices())) {
        if (only_slice && !pair_selected(orientation, from, to, *only_slice)) continue;
        report.stages.push_back(run_stats(orientation, from, to, force));
      }
      break;
    case Stage::kRender: {
      auto runs = run_render(only_slice, force);
      report.stages.insert(report.stages.end(), runs.begin(), runs.end());
      break;
    }
    case Stage::kAll: {
      report.stages.push_back(run_ingest(force));
      const auto keys = filter_slices(slices());
      parallel_slices(keys, &Pipeline::run_topics);
      parallel_slices(keys, &Pipeline::run_summarize);
      parallel_slices(keys, &Pipeline::run_terms);
      parallel_slices(keys, &Pipeline::run_embed);
      parallel_slices(keys, &Pipeline::run_graphs);
      // a single-slice run cannot produce cross-period figures; pair
      // stages run when unrestricted or when an orientation is named
      for (const auto& [orientation, from, to] : orientation_pairs(slices())) {
        if (only_slice && !pair_selected(orientation, from, to, *only_slice)) continue;
        report.stages.push_back(run_flows(orientation, from, to, force));
        report.stages.push_back(run_stats(orientation, from, to, force));
      }
      auto runs = run_render(only_slice, force);
      report.stages.insert(report.stages.end(), runs.begin(), runs.end());
      break;
    }
  }
  save_manifest();
  return report;
}

}  // namespace narr
