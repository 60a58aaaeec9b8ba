#pragma once

// Shared test utilities: independent oracles and small checkers. Nothing
// in here calls back into the code paths under test.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace test_util {

// Minimal XML well-formedness check: balanced, properly nested tags,
// quoted attribute values, a single root element. Enough to catch broken
// SVG output without pulling in a parser.
inline bool well_formed_xml(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  const std::size_t n = text.size();
  int roots = 0;
  while (i < n) {
    if (text[i] != '<') {
      ++i;
      continue;
    }
    if (text.compare(i, 2, "<?") == 0) {  // declaration
      const auto end = text.find("?>", i);
      if (end == std::string::npos) return false;
      i = end + 2;
      continue;
    }
    if (text.compare(i, 4, "<!--") == 0) {
      const auto end = text.find("-->", i);
      if (end == std::string::npos) return false;
      i = end + 3;
      continue;
    }
    const auto close = text.find('>', i);
    if (close == std::string::npos) return false;
    std::string tag = text.substr(i + 1, close - i - 1);
    // quotes must pair up inside the tag
    if (std::count(tag.begin(), tag.end(), '"') % 2 != 0) return false;
    const bool closing = !tag.empty() && tag[0] == '/';
    const bool self_closing = !tag.empty() && tag.back() == '/';
    std::string name = closing ? tag.substr(1) : tag;
    name = name.substr(0, name.find_first_of(" \t\n/"));
    if (name.empty()) return false;
    if (closing) {
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
    } else if (!self_closing) {
      if (stack.empty() && roots++ > 0) return false;
      stack.push_back(name);
    } else if (stack.empty() && roots++ > 0) {
      return false;
    }
    i = close + 1;
  }
  return stack.empty() && roots == 1;
}

inline int count_occurrences(const std::string& text, const std::string& needle) {
  int count = 0;
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

// Independent weighted-PageRank oracle: dense matrix iteration with the
// same dangling-row convention, run to a much tighter epsilon.
inline std::vector<double> pagerank_oracle(const std::vector<std::vector<double>>& w,
                                           double damping, double eps = 1e-13,
                                           int max_iter = 100000) {
  const std::size_t n = w.size();
  std::vector<double> row_sum(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) row_sum[j] += w[j][k];
  }
  std::vector<double> score(n, 1.0);
  std::vector<double> next(n, 0.0);
  for (int iter = 0; iter < max_iter; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      double in_flow = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        in_flow += row_sum[j] > 0 ? w[j][i] / row_sum[j] * score[j]
                                  : score[j] / static_cast<double>(n);
      }
      next[i] = (1.0 - damping) + damping * in_flow;
    }
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - score[i]);
    score.swap(next);
    if (change < eps) break;
  }
  return score;
}

// Deterministic uniform helper for oracle data generation.
class TestRng {
 public:
  explicit TestRng(uint64_t seed) : engine_(seed) {}
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  int below(int n) { return static_cast<int>(engine_() % static_cast<uint64_t>(n)); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace test_util
