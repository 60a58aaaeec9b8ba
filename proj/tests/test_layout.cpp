#include "narr/layout.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "test_helpers.hpp"

using namespace narr;

namespace {

double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// 1-d force balance for the two-node verlet system, solved by bisection:
// spring pull (half per endpoint) against charge repulsion.
double verlet_pair_equilibrium(const VerletConfig& config) {
  auto net_outward = [&](double d) {
    const double spring_in = 0.5 * config.spring_stiffness * (d - config.rest_length);
    const double repel_out = -config.charge / d;  // charge < 0
    return repel_out - spring_in;
  };
  double lo = config.rest_length;
  double hi = config.rest_length * 10;
  for (int i = 0; i < 200; ++i) {
    const double mid = (lo + hi) / 2.0;
    if (net_outward(mid) > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2.0;
}

LayoutGraph random_graph(int nodes, double edge_probability, uint64_t seed) {
  test_util::TestRng rng(seed);
  LayoutGraph graph;
  graph.node_count = nodes;
  for (int i = 0; i < nodes; ++i) {
    for (int j = i + 1; j < nodes; ++j) {
      if (rng.uniform01() < edge_probability) {
        graph.edges.push_back({i, j, rng.uniform(0.1, 1.0)});
      }
    }
  }
  return graph;
}

}  // namespace

TEST_CASE("verlet_layout: a single node settles at the origin") {
  LayoutGraph graph;
  graph.node_count = 1;
  const auto positions = verlet_layout(graph, VerletConfig{});
  REQUIRE(positions.size() == 1);
  CHECK(std::abs(positions[0].x) < 1e-4);
  CHECK(std::abs(positions[0].y) < 1e-4);
}

TEST_CASE("verlet_layout: linked pair settles near the spring/charge balance") {
  LayoutGraph graph;
  graph.node_count = 2;
  graph.edges.push_back({0, 1, 1.0});
  VerletConfig config;
  config.steps = 600;
  const auto positions = verlet_layout(graph, config);
  const double d = distance(positions[0], positions[1]);

  const double oracle = verlet_pair_equilibrium(config);
  CHECK(d == doctest::Approx(oracle).epsilon(0.02));
  // and the balance point itself sits within 10% of the rest length
  CHECK(std::abs(d - config.rest_length) <= 0.10 * config.rest_length);
}

TEST_CASE("verlet_layout: symmetric 4-cycle comes out square-ish") {
  LayoutGraph graph;
  graph.node_count = 4;
  graph.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 0, 1.0}};
  VerletConfig config;
  config.steps = 600;
  const auto p = verlet_layout(graph, config);
  const double sides[] = {distance(p[0], p[1]), distance(p[1], p[2]),
                          distance(p[2], p[3]), distance(p[3], p[0])};
  const double mean = (sides[0] + sides[1] + sides[2] + sides[3]) / 4.0;
  for (double side : sides) {
    CHECK(std::abs(side - mean) <= 0.05 * mean);
  }
  const double diag_a = distance(p[0], p[2]);
  const double diag_b = distance(p[1], p[3]);
  CHECK(std::abs(diag_a - diag_b) <= 0.05 * std::max(diag_a, diag_b));
}

TEST_CASE("verlet_layout: deterministic, finite, validated") {
  const LayoutGraph graph = random_graph(25, 0.2, 71);
  VerletConfig config;
  const auto a = verlet_layout(graph, config);
  const auto b = verlet_layout(graph, config);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
    CHECK(std::isfinite(a[i].x));
    CHECK(std::isfinite(a[i].y));
  }
  VerletConfig bad = config;
  bad.velocity_decay = 0.0;
  CHECK_THROWS_AS(verlet_layout(graph, bad), std::invalid_argument);
  CHECK_THROWS_AS(verlet_layout(LayoutGraph{}, config), std::invalid_argument);
}

TEST_CASE("fruchterman_reingold: two disconnected nodes repel past k") {
  LayoutGraph graph;
  graph.node_count = 2;
  FrConfig config;
  config.seed = 4;
  const FrResult result = fruchterman_reingold(graph, config);
  CHECK(distance(result.positions[0], result.positions[1]) > result.k);
}

TEST_CASE("fruchterman_reingold: edge pair settles near k") {
  LayoutGraph graph;
  graph.node_count = 2;
  graph.edges.push_back({0, 1, 1.0});
  FrConfig config;
  config.seed = 12;
  const FrResult result = fruchterman_reingold(graph, config);
  const double d = distance(result.positions[0], result.positions[1]);
  // 1-d oracle: attraction d^2/k equals repulsion k^2/d exactly at d = k
  CHECK(std::abs(d - result.k) <= 0.10 * result.k);
}

TEST_CASE("fruchterman_reingold: complete K4 is near-equilateral") {
  LayoutGraph graph;
  graph.node_count = 4;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) graph.edges.push_back({i, j, 1.0});
  }
  FrConfig config;
  config.frame = 60.0;
  config.seed = 5;
  const FrResult result = fruchterman_reingold(graph, config);
  std::vector<double> side_lengths;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      side_lengths.push_back(distance(result.positions[i], result.positions[j]));
    }
  }
  // 4 short sides and 2 diagonals at most; compare the four smallest
  std::sort(side_lengths.begin(), side_lengths.end());
  const double mean =
      (side_lengths[0] + side_lengths[1] + side_lengths[2] + side_lengths[3]) / 4.0;
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(side_lengths[i] - mean) <= 0.10 * mean);
  }
}

TEST_CASE("fruchterman_reingold: cooling keeps late displacements non-increasing") {
  const LayoutGraph graph = random_graph(20, 0.25, 90);
  FrConfig config;
  config.seed = 33;
  const FrResult result = fruchterman_reingold(graph, config);
  const std::size_t start = result.max_displacement.size() * 3 / 4;
  for (std::size_t i = start; i + 1 < result.max_displacement.size(); ++i) {
    CHECK(result.max_displacement[i + 1] <= result.max_displacement[i] + 1e-12);
  }
}

TEST_CASE("fruchterman_reingold: finite coordinates on random graphs") {
  for (uint64_t seed = 0; seed < 25; ++seed) {
    const LayoutGraph graph =
        random_graph(3 + static_cast<int>(seed) % 30, 0.3, 1000 + seed);
    FrConfig config;
    config.seed = seed;
    config.iterations = 200;
    const FrResult result = fruchterman_reingold(graph, config);
    for (const auto& p : result.positions) {
      CHECK(std::isfinite(p.x));
      CHECK(std::isfinite(p.y));
      CHECK(std::abs(p.x) <= config.frame / 2 + 1e-9);
      CHECK(std::abs(p.y) <= config.frame / 2 + 1e-9);
    }
  }
}

TEST_CASE("fruchterman_reingold: deterministic under seed") {
  const LayoutGraph graph = random_graph(15, 0.3, 8);
  FrConfig config;
  config.seed = 21;
  const FrResult a = fruchterman_reingold(graph, config);
  const FrResult b = fruchterman_reingold(graph, config);
  for (std::size_t i = 0; i < a.positions.size(); ++i) {
    CHECK(a.positions[i].x == b.positions[i].x);
    CHECK(a.positions[i].y == b.positions[i].y);
  }
}

TEST_CASE("radialize: strongest node gets the smallest radius") {
  const std::vector<Position> positions = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}};
  const std::vector<double> strengths = {0.2, 5.0, 1.0};
  const RadialLayout radial = radialize(positions, strengths);
  CHECK(radial.radius[1] < radial.radius[2]);
  CHECK(radial.radius[2] < radial.radius[0]);
  CHECK(radial.radius_rank[1] == doctest::Approx(0.0));
  // angles preserved
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const double before = std::atan2(positions[i].y, positions[i].x);
    const double after = std::atan2(radial.positions[i].y, radial.positions[i].x);
    CHECK(before == doctest::Approx(after).epsilon(1e-12));
    CHECK(std::hypot(radial.positions[i].x, radial.positions[i].y) < 1.0);
  }
}

TEST_CASE("radialize: equal strengths share the middle ring") {
  const std::vector<Position> positions = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const std::vector<double> strengths = {2.0, 2.0, 2.0, 2.0};
  const RadialLayout radial = radialize(positions, strengths);
  for (double r : radial.radius) {
    CHECK(r == doctest::Approx(0.5));
  }
}

TEST_CASE("radialize: strict strength order maps to strict radius order") {
  test_util::TestRng rng(61);
  std::vector<Position> positions;
  std::vector<double> strengths;
  for (int i = 0; i < 40; ++i) {
    positions.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
    strengths.push_back(rng.uniform(0, 10));
  }
  const RadialLayout radial = radialize(positions, strengths);
  for (std::size_t a = 0; a < strengths.size(); ++a) {
    for (std::size_t b = 0; b < strengths.size(); ++b) {
      if (strengths[a] > strengths[b]) {
        CHECK(radial.radius[a] < radial.radius[b]);
      }
    }
  }
  // sort oracle: radius ordering equals reversed strength ordering
  std::vector<std::size_t> by_strength(strengths.size());
  std::iota(by_strength.begin(), by_strength.end(), 0u);
  std::stable_sort(by_strength.begin(), by_strength.end(),
                   [&](std::size_t a, std::size_t b) { return strengths[a] > strengths[b]; });
  std::vector<std::size_t> by_radius(strengths.size());
  std::iota(by_radius.begin(), by_radius.end(), 0u);
  std::stable_sort(by_radius.begin(), by_radius.end(),
                   [&](std::size_t a, std::size_t b) { return radial.radius[a] < radial.radius[b]; });
  CHECK(by_strength == by_radius);
  CHECK_THROWS_AS(radialize(positions, std::vector<double>(3, 1.0)),
                  std::invalid_argument);
}
