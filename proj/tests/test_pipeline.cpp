#include "narr/pipeline.hpp"

#include <doctest.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "test_helpers.hpp"

using namespace narr;
namespace fs = std::filesystem;

namespace {

PipelineConfig small_config(const fs::path& workspace) {
  PipelineConfig config;
  config.corpus_path = fs::path(NARR_DATA_DIR) / "mini_corpus.jsonl";
  config.workspace = workspace;
  config.seed = 42;
  config.threads = 2;
  config.tokenizer.min_document_frequency = 2;
  config.lda = LdaConfig::with_defaults(10);
  config.lda.iterations = 60;
  config.lda.burn_in = 20;
  config.terms.n_articles = 10;
  config.terms.top = 50;
  config.embedding.dim = 16;
  config.embedding.epochs = 2;
  config.embedding.min_count = 3;
  config.embedding.subsample = 0;
  config.fr.iterations = 150;
  config.verlet.steps = 150;
  return config;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::map<std::string, std::string> workspace_bytes(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) {
      files[fs::relative(entry.path(), root).string()] = slurp(entry.path());
    }
  }
  return files;
}

}  // namespace

TEST_CASE("pipeline: run(all) completes every stage and caches reruns") {
  const fs::path ws = fresh_dir("narr_pipeline_ws1");
  Pipeline pipeline(small_config(ws));
  const RunReport first = pipeline.run(Stage::kAll);
  CHECK(first.skipped() == 0);
  CHECK(first.executed() == 46);  // 1 + 6*5 + 3*2 + 9 render units

  // the manifest lists all 9 stages
  const auto manifest = read_json_file(ws / "manifest.json");
  std::set<std::string> stages;
  for (const auto& [key, entry] : manifest.at("entries").items()) {
    stages.insert(entry.at("stage").get<std::string>());
  }
  CHECK(stages == std::set<std::string>{"ingest", "topics", "summarize", "terms",
                                        "embed", "graphs", "flows", "stats",
                                        "render"});

  // rerun: zero recomputation, identical manifest
  const std::string manifest_before = slurp(ws / "manifest.json");
  Pipeline again(small_config(ws));
  const RunReport second = again.run(Stage::kAll);
  CHECK(second.executed() == 0);
  CHECK(second.skipped() == first.stages.size());
  CHECK(slurp(ws / "manifest.json") == manifest_before);
  fs::remove_all(ws);
}

TEST_CASE("pipeline: missing prerequisites name the stage to run") {
  const fs::path ws = fresh_dir("narr_pipeline_ws2");
  Pipeline pipeline(small_config(ws));
  CHECK_THROWS_WITH_AS(pipeline.run(Stage::kTopics), doctest::Contains("'ingest'"),
                       std::runtime_error);
  pipeline.run(Stage::kIngest);
  CHECK_THROWS_WITH_AS(pipeline.run(Stage::kFlows), doctest::Contains("'terms'"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(pipeline.run(Stage::kRender), doctest::Contains("'graphs'"),
                       std::runtime_error);
  fs::remove_all(ws);
}

TEST_CASE("pipeline: unknown slice and config-change guard") {
  const fs::path ws = fresh_dir("narr_pipeline_ws3");
  {
    Pipeline pipeline(small_config(ws));
    pipeline.run(Stage::kIngest);
    CHECK_THROWS_AS(pipeline.run(Stage::kTopics, std::string("nope-2016")),
                    std::invalid_argument);
    pipeline.run(Stage::kTopics, std::string("far-right-2016"));
  }
  {
    PipelineConfig changed = small_config(ws);
    changed.lda.iterations = 61;
    Pipeline pipeline(changed);
    CHECK_THROWS_WITH_AS(pipeline.run(Stage::kTopics, std::string("far-right-2016")),
                         doctest::Contains("--force"), std::runtime_error);
    const RunReport forced =
        pipeline.run(Stage::kTopics, std::string("far-right-2016"), true);
    CHECK(forced.executed() == 1);
  }
  fs::remove_all(ws);
}

TEST_CASE("pipeline: stage isolation - deleted outputs are reproduced exactly") {
  const fs::path ws = fresh_dir("narr_pipeline_ws4");
  Pipeline pipeline(small_config(ws));
  pipeline.run(Stage::kAll);

  const fs::path narratives = ws / "far-right-2016" / "terms" / "narratives.json";
  const std::string before = slurp(narratives);
  fs::remove_all(ws / "far-right-2016" / "terms");
  const RunReport report = pipeline.run(Stage::kTerms);
  CHECK(report.executed() == 1);  // only the deleted slice recomputes
  CHECK(report.skipped() == 5);
  CHECK(slurp(narratives) == before);
  fs::remove_all(ws);
}

TEST_CASE("pipeline: same seed gives byte-identical artifacts across workspaces") {
  const fs::path ws_a = fresh_dir("narr_pipeline_wsA");
  const fs::path ws_b = fresh_dir("narr_pipeline_wsB");
  Pipeline(small_config(ws_a)).run(Stage::kAll);
  PipelineConfig serial = small_config(ws_b);
  serial.threads = 1;  // results must not depend on the worker count
  Pipeline(std::move(serial)).run(Stage::kAll);
  const auto files_a = workspace_bytes(ws_a);
  const auto files_b = workspace_bytes(ws_b);
  CHECK(files_a.size() == files_b.size());
  for (const auto& [name, bytes] : files_a) {
    REQUIRE(files_b.count(name));
    CHECK_MESSAGE(files_b.at(name) == bytes, "file differs: ", name);
  }
  fs::remove_all(ws_a);
  fs::remove_all(ws_b);
}

TEST_CASE("pipeline: different seed changes model artifacts") {
  const fs::path ws_a = fresh_dir("narr_pipeline_wsC");
  const fs::path ws_b = fresh_dir("narr_pipeline_wsD");
  Pipeline(small_config(ws_a)).run(Stage::kIngest);
  Pipeline(small_config(ws_a)).run(Stage::kTopics);
  PipelineConfig other = small_config(ws_b);
  other.seed = 43;
  Pipeline(other).run(Stage::kIngest);
  Pipeline(other).run(Stage::kTopics);
  CHECK(slurp(ws_a / "far-right-2016" / "topics" / "lda_model.json") !=
        slurp(ws_b / "far-right-2016" / "topics" / "lda_model.json"));
  fs::remove_all(ws_a);
  fs::remove_all(ws_b);
}

TEST_CASE("pipeline config: JSON parsing, defaults, and validation") {
  nlohmann::json j;
  j["corpus"] = "corpus.jsonl";
  j["workspace"] = "ws";
  PipelineConfig config = PipelineConfig::from_json(j);
  CHECK(config.seed == 42);
  CHECK(config.lda.topics == 10);
  CHECK(config.lda.alpha == doctest::Approx(5.0));  // 50/K
  CHECK(config.terms.top == 50);
  CHECK(config.keywords_per_topic == 20);
  CHECK(config.newspaper_map.size() == 6);
  CHECK(config.lemma_filter.phrases.size() == 8);

  j["lda"] = {{"topics", 4}};
  config = PipelineConfig::from_json(j);
  CHECK(config.lda.alpha == doctest::Approx(12.5));

  nlohmann::json incomplete;
  incomplete["corpus"] = "x";
  CHECK_THROWS_AS(PipelineConfig::from_json(incomplete), std::invalid_argument);

  j["flows"] = {{"mode", "bogus"}};
  CHECK_THROWS_AS(PipelineConfig::from_json(j), std::invalid_argument);
}

TEST_CASE("stage names round-trip") {
  for (const auto& name : {"ingest", "topics", "summarize", "terms", "embed",
                           "graphs", "flows", "stats", "render", "all"}) {
    CHECK(to_string(stage_from_string(name)) == name);
  }
  CHECK_THROWS_AS(stage_from_string("bogus"), std::invalid_argument);
}
