#pragma once

// Node positioning: a velocity-Verlet force simulation for topic graphs,
// Fruchterman-Reingold plus radial center/periphery remapping for
// narrative graphs.

#include <cstdint>
#include <vector>

namespace narr {

struct Position {
  double x = 0.0;
  double y = 0.0;
};

struct LayoutGraph {
  struct Edge {
    int32_t a = 0;
    int32_t b = 0;
    double weight = 1.0;
  };
  int32_t node_count = 0;
  std::vector<Edge> edges;
};

struct VerletConfig {
  double spring_stiffness = 1.0;
  double rest_length = 30.0;
  double charge = -30.0;  // negative = pairwise repulsion
  double centering = 0.05;
  // Velocity multiplier per step, in (0, 1]. Values much below 0.8
  // overdamp small symmetric cycles into folded local equilibria.
  double velocity_decay = 0.8;
  int steps = 300;
  uint64_t seed = 0;
};

// Deterministic phyllotaxis start, then per step: spring forces on links,
// charge repulsion on all pairs, centering pull, decayed velocity
// integration. Throws (with the step index) if a coordinate leaves the
// finite range.
std::vector<Position> verlet_layout(const LayoutGraph& graph,
                                    const VerletConfig& config);

struct FrConfig {
  double frame = 100.0;              // square side L
  double c = 1.0;                    // k = c * sqrt(L^2 / n)
  double initial_temperature = 0.0;  // <= 0 picks 0.1 * frame
  int iterations = 500;
  uint64_t seed = 0;
};

struct FrResult {
  std::vector<Position> positions;
  std::vector<double> max_displacement;  // per iteration
  double k = 0.0;
};

// Classical FR: repulsion k^2/d on all pairs, attraction d^2/k on edges,
// displacement capped by a linearly cooling temperature, frame-clamped.
FrResult fruchterman_reingold(const LayoutGraph& graph, const FrConfig& config);

struct RadialLayout {
  std::vector<Position> positions;  // inside the unit disk
  std::vector<double> radius;
  std::vector<double> radius_rank;  // fractional rank, 0 = strongest node
};

// Keeps each node's angle and remaps its radius so that rank by radius is
// the inverse of rank by strength: strongest nodes sit at the center.
RadialLayout radialize(const std::vector<Position>& positions,
                       const std::vector<double>& strengths);

}  // namespace narr
