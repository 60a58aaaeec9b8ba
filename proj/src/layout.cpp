#include "narr/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "narr/rng.hpp"

namespace narr {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_finite(const std::vector<Position>& positions, int step) {
  for (const auto& p : positions) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::runtime_error("layout diverged at step " + std::to_string(step));
    }
  }
}

}  // namespace

std::vector<Position> verlet_layout(const LayoutGraph& graph,
                                    const VerletConfig& config) {
  if (graph.node_count < 1) throw std::invalid_argument("layout: empty graph");
  if (config.velocity_decay <= 0 || config.velocity_decay > 1) {
    throw std::invalid_argument("layout: velocity decay must lie in (0, 1]");
  }
  if (config.steps < 1) throw std::invalid_argument("layout: steps must be >= 1");
  const int n = graph.node_count;

  // Phyllotaxis spiral, the usual deterministic seed placement.
  std::vector<Position> pos(n);
  const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double radius = 10.0 * std::sqrt(0.5 + i);
    const double angle = i * golden_angle;
    pos[i] = {radius * std::cos(angle), radius * std::sin(angle)};
  }
  std::vector<Position> vel(n, {0.0, 0.0});

  // Spring strength is scaled down by the smaller endpoint degree; dense
  // co-occurrence graphs blow up otherwise.
  std::vector<int> degree(n, 0);
  for (const auto& edge : graph.edges) {
    ++degree[edge.a];
    ++degree[edge.b];
  }

  // Deterministic jitter directions for coincident nodes.
  Rng rng(derive_seed(config.seed, "verlet-jitter"));

  // Force terms anneal with a geometrically decaying alpha; the spring /
  // repulsion equilibrium itself is alpha-independent.
  double alpha = 1.0;
  const double alpha_decay = 1.0 - std::pow(0.001, 1.0 / config.steps);

  for (int step = 0; step < config.steps; ++step) {
    alpha += (0.0 - alpha) * alpha_decay;
    // link springs
    for (const auto& edge : graph.edges) {
      double dx = pos[edge.b].x - pos[edge.a].x;
      double dy = pos[edge.b].y - pos[edge.a].y;
      double dist = std::hypot(dx, dy);
      if (dist < 1e-9) {
        const double theta = rng.uniform(0.0, 2.0 * kPi);
        dx = 1e-6 * std::cos(theta);
        dy = 1e-6 * std::sin(theta);
        dist = 1e-6;
      }
      const double strength =
          config.spring_stiffness / std::max(1, std::min(degree[edge.a], degree[edge.b]));
      const double f = alpha * strength * (dist - config.rest_length) / dist;
      vel[edge.a].x += dx * f * 0.5;
      vel[edge.a].y += dy * f * 0.5;
      vel[edge.b].x -= dx * f * 0.5;
      vel[edge.b].y -= dy * f * 0.5;
    }
    // pairwise charge
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        double dx = pos[j].x - pos[i].x;
        double dy = pos[j].y - pos[i].y;
        double d2 = dx * dx + dy * dy;
        if (d2 < 1e-12) {
          const double theta = rng.uniform(0.0, 2.0 * kPi);
          dx = 1e-6 * std::cos(theta);
          dy = 1e-6 * std::sin(theta);
          d2 = 1e-12;
        }
        const double w = alpha * config.charge / d2;
        vel[i].x += dx * w;
        vel[i].y += dy * w;
        vel[j].x -= dx * w;
        vel[j].y -= dy * w;
      }
    }
    // integrate, then pull the centroid toward the origin; a translation
    // keeps relative geometry (and the spring/charge balance) intact
    double cx = 0.0;
    double cy = 0.0;
    for (int i = 0; i < n; ++i) {
      vel[i].x *= config.velocity_decay;
      vel[i].y *= config.velocity_decay;
      pos[i].x += vel[i].x;
      pos[i].y += vel[i].y;
      cx += pos[i].x;
      cy += pos[i].y;
    }
    cx = cx / n * config.centering;
    cy = cy / n * config.centering;
    for (int i = 0; i < n; ++i) {
      pos[i].x -= cx;
      pos[i].y -= cy;
    }
    check_finite(pos, step);
  }
  return pos;
}

FrResult fruchterman_reingold(const LayoutGraph& graph, const FrConfig& config) {
  if (graph.node_count < 1) throw std::invalid_argument("layout: empty graph");
  if (config.frame <= 0) throw std::invalid_argument("layout: frame must be > 0");
  const int n = graph.node_count;
  const double l = config.frame;
  const double half = l / 2.0;

  FrResult result;
  result.k = config.c * std::sqrt(l * l / static_cast<double>(n));
  const double k = result.k;

  Rng rng(derive_seed(config.seed, "fr-init"));
  std::vector<Position> pos(n);
  for (auto& p : pos) {
    p.x = rng.uniform(-half, half);
    p.y = rng.uniform(-half, half);
  }

  double temperature =
      config.initial_temperature > 0 ? config.initial_temperature : 0.1 * l;
  const double cool = temperature / std::max(1, config.iterations);

  std::vector<Position> disp(n);
  result.max_displacement.reserve(config.iterations);
  for (int iter = 0; iter < config.iterations; ++iter) {
    for (auto& d : disp) d = {0.0, 0.0};
    // repulsion between all pairs
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        double dx = pos[i].x - pos[j].x;
        double dy = pos[i].y - pos[j].y;
        double dist = std::hypot(dx, dy);
        if (dist < 1e-9) {
          const double theta = rng.uniform(0.0, 2.0 * kPi);
          dx = 1e-9 * std::cos(theta);
          dy = 1e-9 * std::sin(theta);
          dist = 1e-9;
        }
        const double f = k * k / dist;
        disp[i].x += dx / dist * f;
        disp[i].y += dy / dist * f;
        disp[j].x -= dx / dist * f;
        disp[j].y -= dy / dist * f;
      }
    }
    // attraction along edges
    for (const auto& edge : graph.edges) {
      double dx = pos[edge.a].x - pos[edge.b].x;
      double dy = pos[edge.a].y - pos[edge.b].y;
      const double dist = std::max(1e-9, std::hypot(dx, dy));
      const double f = dist * dist / k;
      disp[edge.a].x -= dx / dist * f;
      disp[edge.a].y -= dy / dist * f;
      disp[edge.b].x += dx / dist * f;
      disp[edge.b].y += dy / dist * f;
    }
    // cap by temperature, clamp to frame
    double max_move = 0.0;
    for (int i = 0; i < n; ++i) {
      const double len = std::hypot(disp[i].x, disp[i].y);
      const double move = std::min(len, temperature);
      if (len > 0) {
        pos[i].x += disp[i].x / len * move;
        pos[i].y += disp[i].y / len * move;
      }
      pos[i].x = std::clamp(pos[i].x, -half, half);
      pos[i].y = std::clamp(pos[i].y, -half, half);
      max_move = std::max(max_move, move);
    }
    result.max_displacement.push_back(max_move);
    check_finite(pos, iter);
    temperature = std::max(0.0, temperature - cool);
  }
  result.positions = std::move(pos);
  return result;
}

RadialLayout radialize(const std::vector<Position>& positions,
                       const std::vector<double>& strengths) {
  if (positions.size() != strengths.size()) {
    throw std::invalid_argument("radialize: positions and strengths must align");
  }
  const std::size_t n = positions.size();
  RadialLayout out;
  out.positions.resize(n);
  out.radius.resize(n);
  out.radius_rank.resize(n);
  if (n == 0) return out;

  // Fractional rank by descending strength; ties share their average
  // rank, so an all-tied graph lands on a common middle ring.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (strengths[a] != strengths[b]) return strengths[a] > strengths[b];
    return a < b;
  });
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && strengths[order[j + 1]] == strengths[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0;
    for (std::size_t m = i; m <= j; ++m) out.radius_rank[order[m]] = rank;
    i = j + 1;
  }

  for (std::size_t node = 0; node < n; ++node) {
    const double radius =
        (out.radius_rank[node] + 1.0) / (static_cast<double>(n) + 1.0);
    const double angle = std::atan2(positions[node].y, positions[node].x);
    out.radius[node] = radius;
    out.positions[node] = {radius * std::cos(angle), radius * std::sin(angle)};
  }
  return out;
}

}  // namespace narr
