#pragma once

// End-to-end orchestration: cached, resumable stages with deterministic
// seeding, plain-file artifacts under a workspace directory, and a
// manifest recording config and input hashes.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "narr/artifacts.hpp"
#include "narr/render.hpp"

namespace narr {

struct PipelineConfig {
  std::filesystem::path corpus_path;
  std::filesystem::path workspace;
  uint64_t seed = 42;
  bool lenient = false;
  int threads = 1;

  NewspaperMap newspaper_map = default_newspaper_map();
  LemmaFilter lemma_filter = LemmaFilter::defaults();
  TokenizerConfig tokenizer;

  LdaConfig lda = LdaConfig::with_defaults(10);
  int keywords_per_topic = 20;
  std::optional<double> cooccurrence_cutoff;  // absolute; empty -> percentile
  double cooccurrence_percentile = 0.75;

  SummarizerConfig summarizer;
  TermExtractConfig terms;
  EmbeddingConfig embedding;
  std::optional<double> narrative_cutoff;  // absolute; empty -> percentile
  double narrative_percentile = 0.80;

  VerletConfig verlet;
  FrConfig fr;

  FlowMode flow_mode = FlowMode::kMinCount;
  SankeyConfig sankey;
  int histogram_bins = 20;
  bool log_frequency = false;

  StyleSpec style = StyleSpec::defaults();

  static PipelineConfig from_file(const std::filesystem::path& path);
  static PipelineConfig from_json(const nlohmann::json& value);
};

enum class Stage {
  kIngest,
  kTopics,
  kSummarize,
  kTerms,
  kEmbed,
  kGraphs,
  kFlows,
  kStats,
  kRender,
  kAll,
};

std::string to_string(Stage stage);
Stage stage_from_string(const std::string& s);

struct StageRun {
  std::string key;    // e.g. "far-right-2016/topics"
  std::string stage;  // e.g. "topics"
  bool skipped = false;
};

struct RunReport {
  std::vector<StageRun> stages;

  int executed() const;
  int skipped() const;
};

class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config);

  // Runs one stage (or every stage in dependency order for kAll).
  // only_slice restricts per-slice work to one slice id; force overrides a
  // config-hash mismatch. Throws with the missing stage's name when a
  // prerequisite artifact is absent.
  RunReport run(Stage stage, const std::optional<std::string>& only_slice = {},
                bool force = false);

  const std::filesystem::path& workspace() const { return workspace_; }

 private:
  struct Entry {
    std::string stage;
    std::string config_hash;
    std::map<std::string, std::string> inputs;  // logical name -> file hash
    std::vector<std::string> outputs;           // workspace-relative paths
  };

  PipelineConfig config_;
  std::filesystem::path workspace_;
  std::map<std::string, Entry> manifest_;

  void load_manifest();
  void save_manifest() const;

  std::string file_hash(const std::filesystem::path& path) const;
  bool fresh(const std::string& key, const Entry& candidate) const;
  void guard_config_change(const std::string& key, const std::string& config_hash,
                           bool force) const;

  std::vector<SliceKey> slices() const;
  void require(const std::filesystem::path& artifact, const std::string& stage) const;

  StageRun run_ingest(bool force);
  StageRun run_topics(const SliceKey& slice, bool force);
  StageRun run_summarize(const SliceKey& slice, bool force);
  StageRun run_terms(const SliceKey& slice, bool force);
  StageRun run_embed(const SliceKey& slice, bool force);
  StageRun run_graphs(const SliceKey& slice, bool force);
  StageRun run_flows(Orientation orientation, int from, int to, bool force);
  StageRun run_stats(Orientation orientation, int from, int to, bool force);
  std::vector<StageRun> run_render(const std::optional<std::string>& only_slice,
                                   bool force);
};

}  // namespace narr
