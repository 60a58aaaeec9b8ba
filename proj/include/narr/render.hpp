#pragma once

// Standalone SVG output for the four figure classes. Rendering is pure:
// identical inputs produce byte-identical files.

#include <string>
#include <vector>

#include "narr/dynamics.hpp"
#include "narr/embedding.hpp"
#include "narr/layout.hpp"

namespace narr {

struct StyleSpec {
  std::vector<std::string> palette;  // hot -> cold, hex colors
  double node_radius = 6.0;
  std::string font = "Helvetica, Arial, sans-serif";
  double canvas = 800.0;

  static StyleSpec defaults();
  void validate(int topic_count) const;
};

// Shortest round-trip decimal form of a double, for stable SVG attributes.
std::string format_number(double value);

struct TopicGraphView {
  std::vector<std::string> labels;      // node keyword text
  std::vector<int32_t> node_topic_rank; // 0 = hottest color
  std::vector<Position> positions;
  std::vector<LayoutGraph::Edge> edges;
  std::string title;
};

std::string render_topic_graph(const TopicGraphView& view, const StyleSpec& style);

struct NarrativeGraphView {
  NarrativeGraph graph;
  RadialLayout layout;  // unit-disk coordinates
  std::string title;
};

std::string render_narrative_graph(const NarrativeGraphView& view,
                                   const StyleSpec& style);

std::string render_sankey(const SankeyGeometry& geometry,
                          const std::vector<std::string>& left_labels,
                          const std::vector<std::string>& right_labels,
                          const StyleSpec& style, const std::string& title = "");

// Axis extents used by render_scatter: data extents padded by 5%.
struct AxisExtent {
  double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
};
AxisExtent scatter_extent(const RegressionFit& fit);

std::string render_scatter(const RegressionFit& fit, const StyleSpec& style,
                           const std::string& title = "",
                           const std::string& x_label = "",
                           const std::string& y_label = "");

}  // namespace narr
