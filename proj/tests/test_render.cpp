#include "narr/render.hpp"

#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"

using namespace narr;
using test_util::count_occurrences;
using test_util::well_formed_xml;

namespace {

TopicGraphView one_node_view() {
  TopicGraphView view;
  view.labels = {"keyword"};
  view.node_topic_rank = {0};
  view.positions = {{0.0, 0.0}};
  return view;
}

}  // namespace

TEST_CASE("xml checker sanity") {
  CHECK(well_formed_xml("<a><b/><c>x</c></a>"));
  CHECK_FALSE(well_formed_xml("<a><b></a></b>"));
  CHECK_FALSE(well_formed_xml("<a>"));
  CHECK_FALSE(well_formed_xml("<a/><b/>"));  // two roots
}

TEST_CASE("render_topic_graph: one labeled node, valid SVG") {
  const std::string svg = render_topic_graph(one_node_view(), StyleSpec::defaults());
  CHECK(well_formed_xml(svg));
  CHECK(count_occurrences(svg, "<circle") == 1);
  CHECK(svg.find(">keyword</text>") != std::string::npos);
  CHECK(svg.find("href") == std::string::npos);  // self-contained
}

TEST_CASE("render_topic_graph: node count equals graph order, ranks color nodes") {
  TopicGraphView view;
  const StyleSpec style = StyleSpec::defaults();
  for (int i = 0; i < 10; ++i) {
    view.labels.push_back("kw" + std::to_string(i));
    view.node_topic_rank.push_back(i);
    view.positions.push_back({std::cos(i * 0.7), std::sin(i * 0.7)});
  }
  view.edges = {{0, 1, 2.0}, {2, 3, 1.0}};
  const std::string svg = render_topic_graph(view, style);
  CHECK(well_formed_xml(svg));
  CHECK(count_occurrences(svg, "<circle") == 10);
  CHECK(count_occurrences(svg, "<line") == 2);
  for (const auto& color : style.palette) {
    CHECK(count_occurrences(svg, color) == 1);  // K distinct fills
  }
}

TEST_CASE("render_topic_graph: missing positions are an error") {
  TopicGraphView view = one_node_view();
  view.positions.clear();
  CHECK_THROWS_AS(render_topic_graph(view, StyleSpec::defaults()), std::invalid_argument);
  TopicGraphView bad_rank = one_node_view();
  bad_rank.node_topic_rank = {99};
  CHECK_THROWS_AS(render_topic_graph(bad_rank, StyleSpec::defaults()),
                  std::invalid_argument);
}

TEST_CASE("render_narrative_graph: single node at the center plus guide ring") {
  NarrativeGraphView view;
  view.graph.nodes = {"term"};
  view.graph.strength = {0.0};
  view.layout.positions = {{0.0, 0.0}};
  view.layout.radius = {0.5};
  view.layout.radius_rank = {0.0};
  const std::string svg = render_narrative_graph(view, StyleSpec::defaults());
  CHECK(well_formed_xml(svg));
  // guide ring + node
  CHECK(count_occurrences(svg, "<circle") == 2);
  CHECK(svg.find(">term</text>") != std::string::npos);
}

TEST_CASE("render_narrative_graph: radius-rank order matches screen distance") {
  NarrativeGraphView view;
  view.graph.nodes = {"strongest", "weaker"};
  view.graph.strength = {5.0, 1.0};
  view.graph.edges = {{0, 1, 0.9}};
  view.layout = radialize({{1.0, 0.0}, {0.0, 1.0}}, view.graph.strength);
  const StyleSpec style = StyleSpec::defaults();
  const std::string svg = render_narrative_graph(view, style);
  CHECK(well_formed_xml(svg));
  // the strongest node's circle must sit closer to the canvas center
  const double center = style.canvas / 2;
  const double scale = style.canvas * 0.45;
  const double d0 = std::hypot(center + view.layout.positions[0].x * scale - center,
                               view.layout.positions[0].y * scale);
  const double d1 = std::hypot(view.layout.positions[1].x * scale,
                               view.layout.positions[1].y * scale);
  CHECK(d0 < d1);
}

namespace {

SankeyGeometry toy_sankey(double mass0, double mass1) {
  std::vector<NarrativeTermSet> sets;
  NarrativeTermSet a;
  a.topic = 0;
  a.label = "first";
  a.terms = {{"aa", 1.0}};
  NarrativeTermSet b;
  b.topic = 1;
  b.label = "second";
  b.terms = {{"bb", 1.0}};
  sets = {a, b};
  TermCounts counts = {{"aa", static_cast<int64_t>(mass0)},
                       {"bb", static_cast<int64_t>(mass1)}};
  const FlowDiagram diagram = compute_flows(sets, sets, counts, counts);
  return sankey_geometry(diagram, SankeyConfig{});
}

}  // namespace

TEST_CASE("render_sankey: single flow renders one ribbon path") {
  std::vector<NarrativeTermSet> sets;
  NarrativeTermSet only;
  only.topic = 0;
  only.label = "only";
  only.terms = {{"aa", 1.0}};
  sets = {only};
  TermCounts counts = {{"aa", 10}};
  const FlowDiagram diagram = compute_flows(sets, sets, counts, counts);
  const SankeyGeometry geometry = sankey_geometry(diagram, SankeyConfig{});
  const std::string svg =
      render_sankey(geometry, {"only"}, {"only"}, StyleSpec::defaults());
  CHECK(well_formed_xml(svg));
  CHECK(count_occurrences(svg, "<path") == 1);
  CHECK(count_occurrences(svg, "<rect") == 3);  // background + 2 nodes
}

TEST_CASE("render_sankey: 2:1 masses show as 2:1 rect heights in attributes") {
  const SankeyGeometry geometry = toy_sankey(30, 15);
  const std::string svg =
      render_sankey(geometry, {"first", "second"}, {"first", "second"},
                    StyleSpec::defaults());
  CHECK(well_formed_xml(svg));
  // compare against the geometry twin rather than re-parsing floats
  double h0 = 0, h1 = 0;
  for (const auto& node : geometry.nodes) {
    if (node.side == 0 && node.index == 0) h0 = node.height;
    if (node.side == 0 && node.index == 1) h1 = node.height;
  }
  CHECK(h0 == doctest::Approx(2.0 * h1));
  CHECK(svg.find("height=\"" + format_number(h0) + "\"") != std::string::npos);
  CHECK(svg.find("height=\"" + format_number(h1) + "\"") != std::string::npos);
}

TEST_CASE("render_scatter: regression line spans the padded extent") {
  std::vector<RegressionPoint> points;
  for (int i = 0; i <= 10; ++i) {
    points.push_back({"t", static_cast<double>(i), static_cast<double>(i)});
  }
  const RegressionFit fit = fit_regression(points);
  const std::string svg = render_scatter(fit, StyleSpec::defaults(), "title");
  CHECK(well_formed_xml(svg));
  CHECK(count_occurrences(svg, "<circle") == 11);

  // extent oracle: data extents padded by 5% of the span
  const AxisExtent extent = scatter_extent(fit);
  CHECK(extent.min_x == doctest::Approx(-0.5));
  CHECK(extent.max_x == doctest::Approx(10.5));
  CHECK(extent.min_y == doctest::Approx(-0.5));
  CHECK(extent.max_y == doctest::Approx(10.5));
}

TEST_CASE("render_scatter: histograms render even with empty bins") {
  const std::vector<RegressionPoint> points = {
      {"a", 0, 0}, {"b", 0.1, 0.1}, {"c", 10, 10}};
  const RegressionFit fit = fit_regression(points, 10);
  int64_t empty_bins = 0;
  for (int64_t c : fit.hist_x.counts) empty_bins += c == 0;
  CHECK(empty_bins > 0);
  const std::string svg = render_scatter(fit, StyleSpec::defaults());
  CHECK(well_formed_xml(svg));
}

TEST_CASE("render: identical inputs give byte-identical output") {
  const SankeyGeometry geometry = toy_sankey(12, 5);
  const StyleSpec style = StyleSpec::defaults();
  CHECK(render_sankey(geometry, {"a", "b"}, {"a", "b"}, style) ==
        render_sankey(geometry, {"a", "b"}, {"a", "b"}, style));
  TopicGraphView view = one_node_view();
  CHECK(render_topic_graph(view, style) == render_topic_graph(view, style));
}

TEST_CASE("StyleSpec validation") {
  StyleSpec style = StyleSpec::defaults();
  CHECK(style.palette.size() == 10);
  style.validate(10);
  CHECK_THROWS_AS(style.validate(11), std::invalid_argument);
  style.palette[0] = "red";
  CHECK_THROWS_AS(style.validate(5), std::invalid_argument);
}

TEST_CASE("format_number: shortest round-trip form, locale-free") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(-3.0) == "-3");
  CHECK(format_number(123456.75) == "123456.75");
  CHECK_THROWS_AS(format_number(std::nan("")), std::invalid_argument);
}
