#include "narr/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace narr {

TermCounts count_terms(const std::vector<TokenizedDocument>& docs,
                       const Vocabulary& vocab) {
  std::vector<int64_t> counts(vocab.size(), 0);
  for (const auto& doc : docs) {
    for (int32_t t : doc.tokens) ++counts[t];
  }
  TermCounts out;
  for (std::size_t t = 0; t < counts.size(); ++t) {
    if (counts[t] > 0) out.emplace(vocab.terms[t], counts[t]);
  }
  return out;
}

int64_t total_token_count(const std::vector<TokenizedDocument>& docs) {
  int64_t total = 0;
  for (const auto& doc : docs) total += static_cast<int64_t>(doc.tokens.size());
  return total;
}

std::string to_string(FlowMode mode) {
  return mode == FlowMode::kMinCount ? "min-count" : "shared-terms";
}

FlowMode flow_mode_from_string(const std::string& s) {
  if (s == "min-count") return FlowMode::kMinCount;
  if (s == "shared-terms") return FlowMode::kSharedTerms;
  throw std::invalid_argument("unknown flow mode: '" + s + "'");
}

namespace {

int64_t count_of(const TermCounts& counts, const std::string& term) {
  const auto it = counts.find(term);
  return it == counts.end() ? 0 : it->second;
}

FlowNode make_node(const NarrativeTermSet& set, int32_t rank,
                   const TermCounts& counts) {
  FlowNode node;
  node.topic = set.topic;
  node.label = set.label;
  node.rank = rank;
  for (const auto& tw : set.terms) {
    node.mass += static_cast<double>(count_of(counts, tw.term));
  }
  return node;
}

}  // namespace

FlowDiagram compute_flows(const std::vector<NarrativeTermSet>& from,
                          const std::vector<NarrativeTermSet>& to,
                          const TermCounts& counts_from, const TermCounts& counts_to,
                          FlowMode mode) {
  if (from.empty() || to.empty()) {
    throw std::invalid_argument("compute_flows: both periods need narratives");
  }
  FlowDiagram diagram;
  diagram.mode = mode;
  for (std::size_t i = 0; i < from.size(); ++i) {
    diagram.left.push_back(make_node(from[i], static_cast<int32_t>(i) + 1, counts_from));
  }
  for (std::size_t i = 0; i < to.size(); ++i) {
    diagram.right.push_back(make_node(to[i], static_cast<int32_t>(i) + 1, counts_to));
  }
  for (std::size_t s = 0; s < from.size(); ++s) {
    std::set<std::string> source_terms;
    for (const auto& tw : from[s].terms) source_terms.insert(tw.term);
    for (std::size_t t = 0; t < to.size(); ++t) {
      Flow flow;
      flow.source = static_cast<int32_t>(s);
      flow.target = static_cast<int32_t>(t);
      for (const auto& tw : to[t].terms) {
        if (!source_terms.count(tw.term)) continue;
        flow.shared_terms.push_back(tw.term);
        if (mode == FlowMode::kMinCount) {
          flow.magnitude += static_cast<double>(
              std::min(count_of(counts_from, tw.term), count_of(counts_to, tw.term)));
        } else {
          flow.magnitude += 1.0;
        }
      }
      std::sort(flow.shared_terms.begin(), flow.shared_terms.end());
      if (!flow.shared_terms.empty() && flow.magnitude > 0) {
        diagram.flows.push_back(std::move(flow));
      }
    }
  }
  return diagram;
}

SankeyGeometry sankey_geometry(const FlowDiagram& diagram, const SankeyConfig& config) {
  const auto column_scale = [&](const std::vector<FlowNode>& nodes) {
    if (nodes.empty()) throw std::invalid_argument("sankey: empty node column");
    const double gaps = config.gap * static_cast<double>(nodes.size() - 1);
    const double available = config.height - gaps;
    if (available <= 0) {
      throw std::invalid_argument("sankey: canvas height too small for node gaps");
    }
    double mass = 0.0;
    for (const auto& n : nodes) mass += n.mass;
    return mass > 0 ? available / mass : 0.0;
  };
  // One scale for both columns keeps ribbon thickness comparable.
  const double scale = std::min(column_scale(diagram.left), column_scale(diagram.right));

  SankeyGeometry geometry;
  geometry.width = config.width;
  geometry.height = config.height;

  // Rank 1 at the bottom; SVG y grows downward, so stack from height up.
  auto place_column = [&](const std::vector<FlowNode>& nodes, int side, double x) {
    std::vector<std::size_t> order(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return nodes[a].rank < nodes[b].rank;
    });
    double bottom = config.height;
    for (std::size_t i : order) {
      SankeyNode box;
      box.side = side;
      box.index = static_cast<int32_t>(i);
      box.label = nodes[i].label;
      box.mass = nodes[i].mass;
      box.rank = nodes[i].rank;
      box.width = config.node_width;
      box.height = nodes[i].mass * scale;
      box.x = x;
      box.y = bottom - box.height;
      bottom = box.y - config.gap;
      geometry.nodes.push_back(box);
    }
  };
  place_column(diagram.left, 0, 0.0);
  place_column(diagram.right, 1, config.width - config.node_width);

  auto find_box = [&](int side, int32_t index) -> const SankeyNode& {
    for (const auto& n : geometry.nodes) {
      if (n.side == side && n.index == index) return n;
    }
    throw std::logic_error("sankey: node box not found");
  };

  // Ribbon slots: along each node, order flows by the opposite node's
  // rank, filling from the bottom edge upward.
  std::vector<std::size_t> flow_order(diagram.flows.size());
  for (std::size_t i = 0; i < flow_order.size(); ++i) flow_order[i] = i;

  std::vector<double> used_left(diagram.left.size(), 0.0);
  std::vector<double> used_right(diagram.right.size(), 0.0);
  geometry.ribbons.resize(diagram.flows.size());

  auto by_opposite_rank = [&](bool source_side) {
    auto order = flow_order;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const Flow& fa = diagram.flows[a];
      const Flow& fb = diagram.flows[b];
      if (source_side) {
        if (fa.source != fb.source) return fa.source < fb.source;
        return diagram.right[fa.target].rank < diagram.right[fb.target].rank;
      }
      if (fa.target != fb.target) return fa.target < fb.target;
      return diagram.left[fa.source].rank < diagram.left[fb.source].rank;
    });
    return order;
  };

  for (std::size_t i : by_opposite_rank(true)) {
    const Flow& flow = diagram.flows[i];
    const SankeyNode& box = find_box(0, flow.source);
    const double thickness = flow.magnitude * scale;
    geometry.ribbons[i].source = flow.source;
    geometry.ribbons[i].target = flow.target;
    geometry.ribbons[i].thickness = thickness;
    geometry.ribbons[i].x0 = box.x + box.width;
    geometry.ribbons[i].y0 =
        box.y + box.height - used_left[flow.source] - thickness / 2.0;
    used_left[flow.source] += thickness;
  }
  for (std::size_t i : by_opposite_rank(false)) {
    const Flow& flow = diagram.flows[i];
    const SankeyNode& box = find_box(1, flow.target);
    const double thickness = flow.magnitude * scale;
    geometry.ribbons[i].x1 = box.x;
    geometry.ribbons[i].y1 =
        box.y + box.height - used_right[flow.target] - thickness / 2.0;
    used_right[flow.target] += thickness;
  }
  return geometry;
}

double term_frequency(const std::string& term, const TermCounts& counts,
                      int64_t total_tokens) {
  if (total_tokens <= 0) throw std::invalid_argument("term_frequency: empty slice");
  return 1e6 * static_cast<double>(count_of(counts, term)) /
         static_cast<double>(total_tokens);
}

namespace {

Histogram make_histogram(const std::vector<double>& values, int bins) {
  Histogram hist;
  if (values.empty() || bins < 1) return hist;
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  double lo = *min_it;
  double hi = *max_it;
  if (hi == lo) hi = lo + 1.0;  // all-equal values land in the first bin
  hist.edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i) {
    hist.edges[i] = lo + (hi - lo) * static_cast<double>(i) / bins;
  }
  hist.counts.assign(bins, 0);
  for (double v : values) {
    int bin = static_cast<int>((v - lo) / (hi - lo) * bins);
    bin = std::clamp(bin, 0, bins - 1);  // right edge closes the last bin
    ++hist.counts[bin];
  }
  return hist;
}

}  // namespace

RegressionFit fit_regression(const std::vector<RegressionPoint>& points, int bins) {
  if (points.size() < 2) {
    throw std::invalid_argument("regression needs at least 2 points");
  }
  const double n = static_cast<double>(points.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& p : points) {
    mean_x += p.x;
    mean_y += p.y;
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    sxx += (p.x - mean_x) * (p.x - mean_x);
    syy += (p.y - mean_y) * (p.y - mean_y);
    sxy += (p.x - mean_x) * (p.y - mean_y);
  }
  if (sxx == 0.0) {
    throw std::invalid_argument("regression: x-variance is zero");
  }

  RegressionFit fit;
  fit.points = points;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  if (syy == 0.0) {
    fit.degenerate = true;  // constant y: slope 0, correlation undefined
    fit.r = 0.0;
  } else {
    fit.r = sxy / std::sqrt(sxx * syy);
  }
  fit.r2 = fit.r * fit.r;

  std::vector<double> xs, ys;
  xs.reserve(points.size());
  ys.reserve(points.size());
  for (const auto& p : points) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  fit.hist_x = make_histogram(xs, bins);
  fit.hist_y = make_histogram(ys, bins);
  return fit;
}

}  // namespace narr
