#include "narr/render.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace narr {

StyleSpec StyleSpec::defaults() {
  StyleSpec style;
  style.palette = {"#d62728", "#e8590c", "#ff7f0e", "#ffa600", "#ffd500",
                   "#d4e157", "#9ccc65", "#4caf50", "#26a69a", "#1f77b4"};
  return style;
}

void StyleSpec::validate(int topic_count) const {
  if (static_cast<int>(palette.size()) < topic_count) {
    throw std::invalid_argument("palette smaller than topic count");
  }
  for (const auto& color : palette) {
    const bool ok = (color.size() == 7 || color.size() == 4) && color[0] == '#' &&
                    std::all_of(color.begin() + 1, color.end(), [](char c) {
                      return std::isxdigit(static_cast<unsigned char>(c));
                    });
    if (!ok) throw std::invalid_argument("invalid hex color '" + color + "'");
  }
}

std::string format_number(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite SVG coordinate");
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

namespace {

std::string escape_xml(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

class SvgBuilder {
 public:
  SvgBuilder(double width, double height, const StyleSpec& style) : style_(style) {
    out_ += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
            format_number(width) + "\" height=\"" + format_number(height) +
            "\" viewBox=\"0 0 " + format_number(width) + " " +
            format_number(height) + "\" font-family=\"" + escape_xml(style.font) +
            "\">\n";
    out_ += "<rect width=\"" + format_number(width) + "\" height=\"" +
            format_number(height) + "\" fill=\"#ffffff\"/>\n";
  }

  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double stroke_width, double opacity = 1.0) {
    out_ += "<line x1=\"" + format_number(x1) + "\" y1=\"" + format_number(y1) +
            "\" x2=\"" + format_number(x2) + "\" y2=\"" + format_number(y2) +
            "\" stroke=\"" + stroke + "\" stroke-width=\"" +
            format_number(stroke_width) + "\"";
    if (opacity < 1.0) out_ += " stroke-opacity=\"" + format_number(opacity) + "\"";
    out_ += "/>\n";
  }

  void circle(double cx, double cy, double r, const std::string& fill,
              const std::string& stroke = "", double opacity = 1.0) {
    out_ += "<circle cx=\"" + format_number(cx) + "\" cy=\"" + format_number(cy) +
            "\" r=\"" + format_number(r) + "\" fill=\"" + fill + "\"";
    if (!stroke.empty()) out_ += " stroke=\"" + stroke + "\"";
    if (opacity < 1.0) out_ += " fill-opacity=\"" + format_number(opacity) + "\"";
    out_ += "/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill,
            double opacity = 1.0) {
    out_ += "<rect x=\"" + format_number(x) + "\" y=\"" + format_number(y) +
            "\" width=\"" + format_number(w) + "\" height=\"" + format_number(h) +
            "\" fill=\"" + fill + "\"";
    if (opacity < 1.0) out_ += " fill-opacity=\"" + format_number(opacity) + "\"";
    out_ += "/>\n";
  }

  void path(const std::string& d, const std::string& fill, double opacity) {
    out_ += "<path d=\"" + d + "\" fill=\"" + fill + "\" fill-opacity=\"" +
            format_number(opacity) + "\"/>\n";
  }

  void text(double x, double y, const std::string& content, double size,
            const std::string& anchor = "start", const std::string& fill = "#333333") {
    out_ += "<text x=\"" + format_number(x) + "\" y=\"" + format_number(y) +
            "\" font-size=\"" + format_number(size) + "\" text-anchor=\"" + anchor +
            "\" fill=\"" + fill + "\">" + escape_xml(content) + "</text>\n";
  }

  std::string finish() {
    out_ += "</svg>\n";
    return std::move(out_);
  }

  const StyleSpec& style() const { return style_; }

 private:
  const StyleSpec& style_;
  std::string out_;
};

struct Extent {
  double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
};

Extent padded_extent(const std::vector<Position>& positions, double pad_fraction) {
  Extent e;
  if (positions.empty()) return e;
  e.min_x = e.max_x = positions[0].x;
  e.min_y = e.max_y = positions[0].y;
  for (const auto& p : positions) {
    e.min_x = std::min(e.min_x, p.x);
    e.max_x = std::max(e.max_x, p.x);
    e.min_y = std::min(e.min_y, p.y);
    e.max_y = std::max(e.max_y, p.y);
  }
  double span_x = e.max_x - e.min_x;
  double span_y = e.max_y - e.min_y;
  if (span_x == 0) span_x = 1.0;
  if (span_y == 0) span_y = 1.0;
  e.min_x -= span_x * pad_fraction;
  e.max_x += span_x * pad_fraction;
  e.min_y -= span_y * pad_fraction;
  e.max_y += span_y * pad_fraction;
  return e;
}

}  // namespace

std::string render_topic_graph(const TopicGraphView& view, const StyleSpec& style) {
  const std::size_t n = view.labels.size();
  if (view.positions.size() != n || view.node_topic_rank.size() != n) {
    throw std::invalid_argument("topic graph: positions/ranks must cover every node");
  }
  int max_rank = 0;
  for (int32_t r : view.node_topic_rank) max_rank = std::max(max_rank, static_cast<int>(r));
  style.validate(max_rank + 1);

  const double size = style.canvas;
  SvgBuilder svg(size, size, style);
  const Extent e = padded_extent(view.positions, 0.10);
  auto sx = [&](double x) { return (x - e.min_x) / (e.max_x - e.min_x) * size; };
  auto sy = [&](double y) { return (y - e.min_y) / (e.max_y - e.min_y) * size; };

  for (const auto& edge : view.edges) {
    svg.line(sx(view.positions[edge.a].x), sy(view.positions[edge.a].y),
             sx(view.positions[edge.b].x), sy(view.positions[edge.b].y), "#999999",
             1.0, 0.6);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& color = style.palette[view.node_topic_rank[i]];
    svg.circle(sx(view.positions[i].x), sy(view.positions[i].y), style.node_radius,
               color, "#444444");
    svg.text(sx(view.positions[i].x) + style.node_radius + 2.0,
             sy(view.positions[i].y) + 3.0, view.labels[i], 10.0);
  }
  if (!view.title.empty()) svg.text(10.0, 18.0, view.title, 14.0);
  return svg.finish();
}

std::string render_narrative_graph(const NarrativeGraphView& view,
                                   const StyleSpec& style) {
  const std::size_t n = view.graph.nodes.size();
  if (view.layout.positions.size() != n) {
    throw std::invalid_argument("narrative graph: layout must cover every node");
  }
  const double size = style.canvas;
  const double center = size / 2.0;
  const double scale = size * 0.45;  // unit disk -> canvas
  SvgBuilder svg(size, size, style);
  auto sx = [&](double x) { return center + x * scale; };
  auto sy = [&](double y) { return center + y * scale; };

  // guide ring at the unit radius
  svg.circle(center, center, scale, "none", "#dddddd");

  for (const auto& edge : view.graph.edges) {
    const auto& a = view.layout.positions[edge.a];
    const auto& b = view.layout.positions[edge.b];
    svg.line(sx(a.x), sy(a.y), sx(b.x), sy(b.y), "#8888bb", 1.0, 0.5);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = view.layout.positions[i];
    svg.circle(sx(p.x), sy(p.y), style.node_radius, "#4c72b0", "#2a4d69");
    svg.text(sx(p.x) + style.node_radius + 2.0, sy(p.y) + 3.0, view.graph.nodes[i],
             10.0);
  }
  if (!view.title.empty()) svg.text(10.0, 18.0, view.title, 14.0);
  return svg.finish();
}

std::string render_sankey(const SankeyGeometry& geometry,
                          const std::vector<std::string>& left_labels,
                          const std::vector<std::string>& right_labels,
                          const StyleSpec& style, const std::string& title) {
  const int ranks = static_cast<int>(
      std::max(left_labels.size(), right_labels.size()));
  style.validate(std::min<int>(ranks, static_cast<int>(style.palette.size())));
  SvgBuilder svg(geometry.width, geometry.height, style);

  for (const auto& ribbon : geometry.ribbons) {
    // cubic ribbon along the center line, drawn as a closed band
    const double mid = (ribbon.x0 + ribbon.x1) / 2.0;
    const double half = ribbon.thickness / 2.0;
    std::string d = "M" + format_number(ribbon.x0) + "," +
                    format_number(ribbon.y0 - half) + "C" + format_number(mid) + "," +
                    format_number(ribbon.y0 - half) + " " + format_number(mid) + "," +
                    format_number(ribbon.y1 - half) + " " + format_number(ribbon.x1) +
                    "," + format_number(ribbon.y1 - half) + "L" +
                    format_number(ribbon.x1) + "," + format_number(ribbon.y1 + half) +
                    "C" + format_number(mid) + "," + format_number(ribbon.y1 + half) +
                    " " + format_number(mid) + "," + format_number(ribbon.y0 + half) +
                    " " + format_number(ribbon.x0) + "," +
                    format_number(ribbon.y0 + half) + "Z";
    svg.path(d, "#999999", 0.45);
  }
  for (const auto& node : geometry.nodes) {
    const int color_index =
        std::min<int>(node.rank - 1, static_cast<int>(style.palette.size()) - 1);
    svg.rect(node.x, node.y, node.width, node.height, style.palette[color_index]);
    const auto& labels = node.side == 0 ? left_labels : right_labels;
    const std::string label = static_cast<std::size_t>(node.index) < labels.size()
                                  ? labels[node.index]
                                  : node.label;
    const double text_y = node.y + node.height / 2.0 + 3.0;
    if (node.side == 0) {
      svg.text(node.x + node.width + 4.0, text_y, label, 10.0);
    } else {
      svg.text(node.x - 4.0, text_y, label, 10.0, "end");
    }
  }
  if (!title.empty()) svg.text(10.0, 16.0, title, 14.0);
  return svg.finish();
}

AxisExtent scatter_extent(const RegressionFit& fit) {
  std::vector<Position> pts;
  pts.reserve(fit.points.size());
  for (const auto& p : fit.points) pts.push_back({p.x, p.y});
  const Extent e = padded_extent(pts, 0.05);
  return {e.min_x, e.max_x, e.min_y, e.max_y};
}

std::string render_scatter(const RegressionFit& fit, const StyleSpec& style,
                           const std::string& title, const std::string& x_label,
                           const std::string& y_label) {
  const double size = style.canvas;
  const double margin = 50.0;
  const double hist_band = size * 0.18;        // marginal panels
  const double plot = size - margin * 2 - hist_band;

  const AxisExtent ax = scatter_extent(fit);
  const Extent e{ax.min_x, ax.max_x, ax.min_y, ax.max_y};

  SvgBuilder svg(size, size, style);
  auto sx = [&](double x) {
    return margin + (x - e.min_x) / (e.max_x - e.min_x) * plot;
  };
  auto sy = [&](double y) {
    return margin + hist_band + plot - (y - e.min_y) / (e.max_y - e.min_y) * plot;
  };

  // frame
  svg.line(margin, margin + hist_band, margin, margin + hist_band + plot, "#333333",
           1.0);
  svg.line(margin, margin + hist_band + plot, margin + plot, margin + hist_band + plot,
           "#333333", 1.0);

  // marginal histograms: x on top, y on the right
  if (!fit.hist_x.counts.empty()) {
    int64_t max_count = 1;
    for (int64_t c : fit.hist_x.counts) max_count = std::max(max_count, c);
    for (std::size_t i = 0; i < fit.hist_x.counts.size(); ++i) {
      const double x0 = sx(fit.hist_x.edges[i]);
      const double x1 = sx(fit.hist_x.edges[i + 1]);
      const double h = hist_band * 0.9 * static_cast<double>(fit.hist_x.counts[i]) /
                       static_cast<double>(max_count);
      svg.rect(x0, margin + hist_band - h, std::max(0.0, x1 - x0 - 1.0), h, "#7f9cc4");
    }
  }
  if (!fit.hist_y.counts.empty()) {
    int64_t max_count = 1;
    for (int64_t c : fit.hist_y.counts) max_count = std::max(max_count, c);
    for (std::size_t i = 0; i < fit.hist_y.counts.size(); ++i) {
      const double y0 = sy(fit.hist_y.edges[i]);
      const double y1 = sy(fit.hist_y.edges[i + 1]);
      const double w = hist_band * 0.9 * static_cast<double>(fit.hist_y.counts[i]) /
                       static_cast<double>(max_count);
      svg.rect(margin + plot + 2.0, y1, w, std::max(0.0, y0 - y1 - 1.0), "#7f9cc4");
    }
  }

  for (const auto& p : fit.points) {
    svg.circle(sx(p.x), sy(p.y), 3.0, "#1f5fa6", "", 0.7);
  }
  // regression line over the data extent
  const double y_at_min = fit.slope * e.min_x + fit.intercept;
  const double y_at_max = fit.slope * e.max_x + fit.intercept;
  svg.line(sx(e.min_x), sy(y_at_min), sx(e.max_x), sy(y_at_max), "#d62728", 1.5);

  if (!title.empty()) svg.text(10.0, 18.0, title, 14.0);
  if (!x_label.empty()) {
    svg.text(margin + plot / 2.0, size - 12.0, x_label, 11.0, "middle");
  }
  if (!y_label.empty()) {
    svg.text(14.0, margin + hist_band + plot / 2.0, y_label, 11.0, "middle");
  }
  return svg.finish();
}

}  // namespace narr
