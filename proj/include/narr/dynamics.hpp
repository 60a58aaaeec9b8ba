#pragma once

// Narrative dynamics: cross-period term flows with Sankey geometry, and
// period-vs-period term-frequency regression with marginal histograms.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "narr/corpus.hpp"
#include "narr/termextract.hpp"

namespace narr {

using TermCounts = std::unordered_map<std::string, int64_t>;

TermCounts count_terms(const std::vector<TokenizedDocument>& docs,
                       const Vocabulary& vocab);
int64_t total_token_count(const std::vector<TokenizedDocument>& docs);

enum class FlowMode {
  kMinCount,     // magnitude = sum over shared terms of min(count_T, count_T1)
  kSharedTerms,  // magnitude = number of shared terms
};

std::string to_string(FlowMode mode);
FlowMode flow_mode_from_string(const std::string& s);

struct Flow {
  int32_t source = 0;  // index into FlowDiagram::left
  int32_t target = 0;  // index into FlowDiagram::right
  double magnitude = 0.0;
  std::vector<std::string> shared_terms;
};

struct FlowNode {
  int32_t topic = 0;
  std::string label;
  double mass = 0.0;  // sum of the narrative's term occurrences in its period
  int32_t rank = 0;   // 1 = most relevant
};

struct FlowDiagram {
  std::vector<FlowNode> left;   // period T, input order = relevance order
  std::vector<FlowNode> right;  // period T+1
  std::vector<Flow> flows;      // only nonzero magnitudes
  FlowMode mode = FlowMode::kMinCount;
};

FlowDiagram compute_flows(const std::vector<NarrativeTermSet>& from,
                          const std::vector<NarrativeTermSet>& to,
                          const TermCounts& counts_from, const TermCounts& counts_to,
                          FlowMode mode = FlowMode::kMinCount);

struct SankeyConfig {
  double width = 960.0;
  double height = 600.0;
  double node_width = 18.0;
  double gap = 8.0;  // vertical gap between stacked nodes
};

struct SankeyNode {
  int side = 0;  // 0 = left, 1 = right
  int32_t index = 0;
  std::string label;
  double x = 0.0, y = 0.0, width = 0.0, height = 0.0;
  double mass = 0.0;
  int32_t rank = 0;
};

struct SankeyRibbon {
  int32_t source = 0;
  int32_t target = 0;
  double thickness = 0.0;
  double x0 = 0.0, y0 = 0.0;  // source anchor (ribbon center line)
  double x1 = 0.0, y1 = 0.0;  // target anchor
};

struct SankeyGeometry {
  double width = 0.0, height = 0.0;
  std::vector<SankeyNode> nodes;
  std::vector<SankeyRibbon> ribbons;
};

// Heights proportional to mass under a shared scale; rank 1 stacks at the
// bottom; ribbons slot by the opposite side's rank to limit crossings.
SankeyGeometry sankey_geometry(const FlowDiagram& diagram, const SankeyConfig& config);

// Occurrences per million tokens.
double term_frequency(const std::string& term, const TermCounts& counts,
                      int64_t total_tokens);

struct Histogram {
  std::vector<double> edges;   // bins + 1 entries
  std::vector<int64_t> counts;
};

struct RegressionPoint {
  std::string term;
  double x = 0.0;
  double y = 0.0;
};

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r = 0.0;
  double r2 = 0.0;
  bool degenerate = false;  // zero y-variance: r reported as 0
  std::vector<RegressionPoint> points;
  Histogram hist_x, hist_y;
};

// Closed-form OLS; throws on fewer than 2 points or zero x-variance.
RegressionFit fit_regression(const std::vector<RegressionPoint>& points,
                             int bins = 20);

}  // namespace narr
