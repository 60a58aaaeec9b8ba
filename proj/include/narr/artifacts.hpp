#pragma once

// Versioned JSON artifacts for every pipeline stage, plus file helpers.
// Serialization is deterministic: fixed key order, no timestamps.

#include <cstdint>
#include <filesystem>

#include <json.hpp>

#include "narr/corpus.hpp"
#include "narr/dynamics.hpp"
#include "narr/embedding.hpp"
#include "narr/layout.hpp"
#include "narr/summarizer.hpp"
#include "narr/termextract.hpp"
#include "narr/topicmodel.hpp"

namespace narr {

using ojson = nlohmann::ordered_json;

void write_json_file(const std::filesystem::path& path, const ojson& value);
nlohmann::json read_json_file(const std::filesystem::path& path);

// Rejects the file if the format tag or major version does not match.
void check_artifact(const nlohmann::json& value, const std::string& format);

// --- corpus cache ---------------------------------------------------------

struct CorpusCache {
  Corpus corpus;
  TokenizedCorpus tokenized;
  uint64_t seed = 0;
};

ojson corpus_cache_to_json(const Corpus& corpus, const TokenizedCorpus& tokenized,
                           const TokenizerConfig& config, uint64_t seed);
CorpusCache corpus_cache_from_json(const nlohmann::json& value);

// --- models and stage outputs ---------------------------------------------

ojson lda_model_to_json(const LdaModel& model, const SliceKey& slice);
LdaModel lda_model_from_json(const nlohmann::json& value, SliceKey* slice = nullptr);

ojson cooccurrence_to_json(const CooccurrenceMatrix& matrix);
CooccurrenceMatrix cooccurrence_from_json(const nlohmann::json& value);

ojson summaries_to_json(const SliceKey& slice, const std::vector<Summary>& summaries);

ojson narratives_to_json(const SliceKey& slice,
                         const std::vector<NarrativeTermSet>& sets);
std::vector<NarrativeTermSet> narratives_from_json(const nlohmann::json& value);

ojson similarity_table_to_json(const SimilarityTable& table, int topic);
SimilarityTable similarity_table_from_json(const nlohmann::json& value);

ojson narrative_graph_to_json(const NarrativeGraph& graph, const RadialLayout& layout,
                              int topic, const std::string& label);
void narrative_graph_from_json(const nlohmann::json& value, NarrativeGraph* graph,
                               RadialLayout* layout, int* topic, std::string* label);

struct TopicGraphLayout {
  std::vector<std::string> keywords;
  std::vector<int32_t> topic_of_node;   // topic id per node
  std::vector<int32_t> topic_rank_of_node;  // 0 = most relevant topic
  std::vector<Position> positions;
  std::vector<LayoutGraph::Edge> edges;  // weight = co-occurrence count
  double threshold = 0.0;
};

ojson topic_graph_to_json(const TopicGraphLayout& layout);
TopicGraphLayout topic_graph_from_json(const nlohmann::json& value);

ojson flow_diagram_to_json(const FlowDiagram& diagram, Orientation orientation,
                           int period_from, int period_to);
FlowDiagram flow_diagram_from_json(const nlohmann::json& value);

ojson sankey_to_json(const SankeyGeometry& geometry);
SankeyGeometry sankey_from_json(const nlohmann::json& value);

ojson regression_to_json(const RegressionFit& fit, Orientation orientation,
                         int period_from, int period_to);
RegressionFit regression_from_json(const nlohmann::json& value);

}  // namespace narr
