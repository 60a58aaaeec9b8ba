// Acceptance suite: one line per criterion, exit status = failure count.
// Each criterion pins its tolerance in code; oracles are independent of
// the implementation paths they check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "narr/pipeline.hpp"
#include "narr/rng.hpp"
#include "../test_helpers.hpp"

namespace fs = std::filesystem;
using namespace narr;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
  if (!condition) throw Failure(message);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Vocabulary synthetic_vocab(int size, const std::string& prefix) {
  Vocabulary vocab;
  for (int i = 0; i < size; ++i) {
    vocab.terms.push_back(prefix + std::to_string(1000 + i));
    vocab.document_frequency.push_back(1);
  }
  vocab.total_documents = 1;
  vocab.rebuild_index();
  return vocab;
}

// ---------------------------------------------------------------------------
// 1. planted topics

void planted_topic_recovery() {
  const auto start = std::chrono::steady_clock::now();
  const int topics = 5;
  const int words_per_topic = 10;
  const int vocab_size = topics * words_per_topic;
  const int n_docs = 500;

  // known topic-word distributions: Zipf-like weights over disjoint blocks
  std::vector<std::vector<double>> planted(topics, std::vector<double>(vocab_size, 0.0));
  for (int k = 0; k < topics; ++k) {
    double total = 0.0;
    for (int w = 0; w < words_per_topic; ++w) total += 1.0 / (1 + w);
    for (int w = 0; w < words_per_topic; ++w) {
      planted[k][k * words_per_topic + w] = (1.0 / (1 + w)) / total;
    }
  }
  const Vocabulary vocab = synthetic_vocab(vocab_size, "w");
  test_util::TestRng rng(11);
  std::vector<TokenizedDocument> docs;
  for (int d = 0; d < n_docs; ++d) {
    const int topic = d % topics;
    TokenizedDocument doc;
    doc.article_id = "doc" + std::to_string(10000 + d);
    for (int i = 0; i < 100; ++i) {
      double u = rng.uniform01();
      int w = 0;
      while (w + 1 < vocab_size && u > planted[topic][w]) {
        u -= planted[topic][w];
        ++w;
      }
      doc.tokens.push_back(w);
    }
    docs.push_back(std::move(doc));
  }

  LdaConfig config = LdaConfig::with_defaults(topics);
  config.iterations = 1000;
  config.burn_in = 200;
  // a single chain can stick in a merged/split-topic mode; the pinned
  // seed is part of the test setup, like the corpus seed above
  config.seed = 3;
  const LdaModel model = fit_lda(docs, vocab, config);

  std::vector<std::vector<double>> recovered(topics,
                                             std::vector<double>(vocab_size, 0.0));
  for (int k = 0; k < topics; ++k) {
    for (std::size_t local = 0; local < model.terms.size(); ++local) {
      recovered[k][vocab.lookup(model.terms[local])] = model.phi[k][local];
    }
  }
  // greedy matching on cosine
  auto cosine_rows = [](const std::vector<double>& a, const std::vector<double>& b) {
    double ab = 0, aa = 0, bb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      ab += a[i] * b[i];
      aa += a[i] * a[i];
      bb += b[i] * b[i];
    }
    return ab / (std::sqrt(aa) * std::sqrt(bb));
  };
  std::set<int> used_r, used_p;
  double mean = 0.0;
  for (int round = 0; round < topics; ++round) {
    double best = -2.0;
    int br = -1, bp = -1;
    for (int r = 0; r < topics; ++r) {
      if (used_r.count(r)) continue;
      for (int p = 0; p < topics; ++p) {
        if (used_p.count(p)) continue;
        const double c = cosine_rows(recovered[r], planted[p]);
        if (c > best) {
          best = c;
          br = r;
          bp = p;
        }
      }
    }
    used_r.insert(br);
    used_p.insert(bp);
    mean += best;
  }
  mean /= topics;
  const double elapsed = seconds_since(start);
  require(mean >= 0.8, "greedy-matched mean cosine " + std::to_string(mean) + " < 0.8");
  require(elapsed < 60.0, "took " + std::to_string(elapsed) + " s (limit 60)");
}

// ---------------------------------------------------------------------------
// 2. TF-IDF oracle

void tfidf_oracle_equivalence() {
  const int n_docs = 100;
  const int vocab_size = 150;
  const Vocabulary vocab = synthetic_vocab(vocab_size, "t");
  test_util::TestRng rng(22);
  std::vector<TokenizedDocument> docs;
  for (int d = 0; d < n_docs; ++d) {
    TokenizedDocument doc;
    doc.article_id = "a" + std::to_string(1000 + d);
    const int len = 40 + rng.below(80);
    for (int i = 0; i < len; ++i) doc.tokens.push_back(rng.below(vocab_size));
    docs.push_back(std::move(doc));
  }
  const SliceTermStats stats = SliceTermStats::compute(docs);

  // brute force: string-level scan, separate code path
  std::map<std::string, int> df;
  for (const auto& doc : docs) {
    std::set<std::string> seen;
    for (int32_t t : doc.tokens) seen.insert(vocab.terms[t]);
    for (const auto& term : seen) ++df[term];
  }
  for (const auto& doc : docs) {
    std::map<std::string, int> tf;
    for (int32_t t : doc.tokens) ++tf[vocab.terms[t]];
    for (const auto& [term, count] : tf) {
      const double expected =
          count * std::log(static_cast<double>(n_docs) / df.at(term));
      const double actual = tfidf_weight(term, doc, vocab, stats);
      require(std::abs(actual - expected) <= 1e-9,
              "W mismatch for " + term + " in " + doc.article_id);
    }
  }

  // top-50 ordering via extract_narrative_terms vs brute-force ordering
  LdaModel model;
  model.phi = {{}};
  model.topic_mass = {1};
  for (const auto& doc : docs) {
    model.doc_ids.push_back(doc.article_id);
    model.theta.push_back({1.0});
  }
  TermExtractConfig config;
  config.n_articles = n_docs;
  config.top = 50;
  const NarrativeTermSet set =
      extract_narrative_terms(model, docs, vocab, 0, config);

  std::map<std::string, double> pooled;
  for (const auto& doc : docs) {
    std::map<std::string, int> tf;
    for (int32_t t : doc.tokens) ++tf[vocab.terms[t]];
    for (const auto& [term, count] : tf) {
      pooled[term] += count * std::log(static_cast<double>(n_docs) / df.at(term));
    }
  }
  std::vector<std::pair<std::string, double>> order(pooled.begin(), pooled.end());
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  require(set.terms.size() == 50, "expected exactly 50 terms");
  for (int i = 0; i < 50; ++i) {
    require(set.terms[i].term == order[i].first,
            "top-50 ordering differs at position " + std::to_string(i));
  }
}

// ---------------------------------------------------------------------------
// 3. SGNS gradient check

void sgns_gradient_check() {
  test_util::TestRng rng(33);
  const double step = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 6 + rng.below(10);
    const int negatives = 1 + rng.below(6);
    std::vector<double> center(dim), context(dim);
    std::vector<std::vector<double>> negative(negatives, std::vector<double>(dim));
    for (auto& x : center) x = rng.uniform(-0.9, 0.9);
    for (auto& x : context) x = rng.uniform(-0.9, 0.9);
    for (auto& row : negative) {
      for (auto& x : row) x = rng.uniform(-0.9, 0.9);
    }
    std::vector<double> grad_center, grad_context;
    std::vector<std::vector<double>> grad_negative;
    sgns_gradients(center, context, negative, grad_center, grad_context,
                   grad_negative);

    auto check = [&](std::vector<double>& vec, int i, double analytic) {
      const double saved = vec[i];
      vec[i] = saved + step;
      const double up = sgns_loss(center, context, negative);
      vec[i] = saved - step;
      const double down = sgns_loss(center, context, negative);
      vec[i] = saved;
      const double numeric = (up - down) / (2 * step);
      const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
      require(std::abs(analytic - numeric) / scale <= 1e-4,
              "gradient mismatch at coordinate " + std::to_string(i));
    };
    for (int i = 0; i < dim; ++i) check(center, i, grad_center[i]);
    for (int i = 0; i < dim; ++i) check(context, i, grad_context[i]);
    for (int n = 0; n < negatives; ++n) {
      for (int i = 0; i < dim; ++i) check(negative[n], i, grad_negative[n][i]);
    }
  }
}

// ---------------------------------------------------------------------------
// 4. embedding context outlier

void embedding_context_outlier() {
  const auto start = std::chrono::steady_clock::now();
  const int fillers = 60;
  Vocabulary vocab;
  vocab.terms = {"probex", "probey", "anchora", "anchorb"};
  for (int i = 0; i < fillers; ++i) vocab.terms.push_back("f" + std::to_string(100 + i));
  vocab.document_frequency.assign(vocab.terms.size(), 1);
  vocab.total_documents = 1;
  vocab.rebuild_index();

  test_util::TestRng rng(44);
  std::vector<TokenizedDocument> docs;
  for (int d = 0; d < 120; ++d) {
    TokenizedDocument doc;
    doc.article_id = "d" + std::to_string(d);
    for (int s = 0; s < 15; ++s) {
      doc.tokens.push_back(2);
      doc.tokens.push_back(rng.below(2));  // probex or probey, same context
      doc.tokens.push_back(3);
      for (int f = 0; f < 4; ++f) doc.tokens.push_back(4 + rng.below(fillers));
    }
    docs.push_back(std::move(doc));
  }

  EmbeddingConfig config;
  config.dim = 48;
  config.window = 2;
  config.epochs = 10;
  config.min_count = 2;
  config.subsample = 0;
  config.seed = 5;
  const EmbeddingMatrix matrix = train_word2vec(docs, vocab, config);

  const int32_t x = matrix.lookup("probex");
  const int32_t y = matrix.lookup("probey");
  require(x >= 0 && y >= 0, "probe tokens missing from embedding vocabulary");
  const double probe = cosine(matrix.input_vector(x), matrix.input_vector(y));

  test_util::TestRng pair_rng(55);
  std::vector<double> random_cosines;
  const int v = static_cast<int>(matrix.size());
  while (random_cosines.size() < 1000) {
    const int a = pair_rng.below(v);
    const int b = pair_rng.below(v);
    if (a == b || a == x || a == y || b == x || b == y) continue;
    random_cosines.push_back(cosine(matrix.input_vector(a), matrix.input_vector(b)));
  }
  std::sort(random_cosines.begin(), random_cosines.end());
  const double p95 = random_cosines[950];
  const double elapsed = seconds_since(start);
  require(probe > p95, "probe cosine " + std::to_string(probe) +
                           " not above the 95th percentile " + std::to_string(p95));
  require(elapsed < 30.0, "took " + std::to_string(elapsed) + " s (limit 30)");
}

// ---------------------------------------------------------------------------
// 5. TextRank oracle

void textrank_oracle() {
  test_util::TestRng rng(66);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 20;
    SentenceGraph graph;
    graph.weights.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
      graph.sentences.push_back("s" + std::to_string(i));
      if (i % 7 == 6) continue;  // keep some dangling rows
      for (int j = 0; j < n; ++j) {
        if (i != j && rng.uniform01() < 0.35) {
          graph.weights[i][j] = rng.uniform(0.05, 2.0);
        }
      }
    }
    // convergence at the spec'd operating point
    const TextRankResult operating = textrank(graph, 1e-6, 200);
    require(operating.converged, "did not converge within 200 iterations at eps 1e-6");

    // oracle comparison at matching precision
    const TextRankResult tight = textrank(graph, 1e-12, 20000);
    const auto oracle = test_util::pagerank_oracle(graph.weights, graph.damping);
    for (int i = 0; i < n; ++i) {
      require(std::abs(tight.scores[i] - oracle[i]) <= 1e-8,
              "score differs from the power-iteration oracle at node " +
                  std::to_string(i));
    }
  }
}

// ---------------------------------------------------------------------------
// 6. layout properties

void layout_properties() {
  // FR pair equilibrium within 10% of k
  LayoutGraph pair;
  pair.node_count = 2;
  pair.edges.push_back({0, 1, 1.0});
  FrConfig fr_config;
  fr_config.seed = 3;
  const FrResult pair_result = fruchterman_reingold(pair, fr_config);
  const double d = std::hypot(pair_result.positions[0].x - pair_result.positions[1].x,
                              pair_result.positions[0].y - pair_result.positions[1].y);
  require(std::abs(d - pair_result.k) <= 0.10 * pair_result.k,
          "FR pair distance " + std::to_string(d) + " not within 10% of k " +
              std::to_string(pair_result.k));

  // 100 random graphs, both layouts finite
  test_util::TestRng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    LayoutGraph graph;
    graph.node_count = 2 + rng.below(40);
    for (int i = 0; i < graph.node_count; ++i) {
      for (int j = i + 1; j < graph.node_count; ++j) {
        if (rng.uniform01() < 0.25) {
          graph.edges.push_back({i, j, rng.uniform(0.1, 1.0)});
        }
      }
    }
    FrConfig fr;
    fr.seed = trial;
    fr.iterations = 150;
    const FrResult fr_result = fruchterman_reingold(graph, fr);
    for (const auto& p : fr_result.positions) {
      require(std::isfinite(p.x) && std::isfinite(p.y), "non-finite FR coordinate");
    }
    VerletConfig verlet;
    verlet.seed = trial;
    verlet.steps = 150;
    const auto positions = verlet_layout(graph, verlet);
    for (const auto& p : positions) {
      require(std::isfinite(p.x) && std::isfinite(p.y), "non-finite verlet coordinate");
    }
  }

  // radialization strictly order-preserving on strengths
  test_util::TestRng srng(88);
  std::vector<Position> positions;
  std::vector<double> strengths;
  for (int i = 0; i < 60; ++i) {
    positions.push_back({srng.uniform(-1, 1), srng.uniform(-1, 1)});
    strengths.push_back(srng.uniform(0, 5));
  }
  const RadialLayout radial = radialize(positions, strengths);
  for (std::size_t a = 0; a < strengths.size(); ++a) {
    for (std::size_t b = 0; b < strengths.size(); ++b) {
      if (strengths[a] > strengths[b]) {
        require(radial.radius[a] < radial.radius[b],
                "radialization broke the strength ordering");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// 7. flow conservation

void flow_conservation() {
  test_util::TestRng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const int n_narratives = 2 + rng.below(6);
    const int terms_per_set = 5 + rng.below(20);
    std::vector<NarrativeTermSet> from, to;
    TermCounts counts_from, counts_to;
    int serial = 0;
    for (int i = 0; i < n_narratives; ++i) {
      NarrativeTermSet set;
      set.topic = i;
      set.label = "s" + std::to_string(i);
      for (int t = 0; t < terms_per_set; ++t) {
        const std::string term = "term" + std::to_string(serial++);
        set.terms.push_back({term, 1.0});
        counts_from[term] = 1 + rng.below(100);
      }
      from.push_back(std::move(set));
    }
    // targets sample source terms without replacement, plus fresh ones
    std::vector<std::string> pool;
    for (const auto& set : from) {
      for (const auto& tw : set.terms) pool.push_back(tw.term);
    }
    for (int i = 0; i < n_narratives; ++i) {
      NarrativeTermSet set;
      set.topic = i;
      set.label = "t" + std::to_string(i);
      for (int t = 0; t < terms_per_set; ++t) {
        std::string term;
        if (!pool.empty() && rng.uniform01() < 0.5) {
          const int pick = rng.below(static_cast<int>(pool.size()));
          term = pool[pick];
          pool.erase(pool.begin() + pick);
        } else {
          term = "fresh" + std::to_string(serial++);
        }
        set.terms.push_back({term, 1.0});
        counts_to[term] = 1 + rng.below(100);
      }
      to.push_back(std::move(set));
    }

    const FlowDiagram diagram = compute_flows(from, to, counts_from, counts_to);
    std::vector<double> outgoing(from.size(), 0.0);
    for (const auto& flow : diagram.flows) outgoing[flow.source] += flow.magnitude;
    for (std::size_t s = 0; s < from.size(); ++s) {
      require(outgoing[s] <= diagram.left[s].mass + 1e-9,
              "outgoing flow exceeds source mass");
    }
  }

  // identity case: diagonal flows exactly
  std::vector<NarrativeTermSet> identity;
  TermCounts counts;
  for (int i = 0; i < 5; ++i) {
    NarrativeTermSet set;
    set.topic = i;
    set.label = "n" + std::to_string(i);
    for (int t = 0; t < 10; ++t) {
      const std::string term = "u" + std::to_string(i * 10 + t);
      set.terms.push_back({term, 1.0});
      counts[term] = 3 + t;
    }
    identity.push_back(std::move(set));
  }
  const FlowDiagram diagram = compute_flows(identity, identity, counts, counts);
  require(diagram.flows.size() == identity.size(), "identity case must be diagonal");
  for (const auto& flow : diagram.flows) {
    require(flow.source == flow.target, "off-diagonal flow in the identity case");
    require(flow.magnitude == diagram.left[flow.source].mass,
            "diagonal magnitude must equal the source mass");
  }
}

// ---------------------------------------------------------------------------
// 8. OLS

void ols_closed_form() {
  test_util::TestRng rng(111);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + rng.below(100);
    std::vector<RegressionPoint> points;
    for (int i = 0; i < n; ++i) {
      const double x = rng.uniform(-20, 20);
      points.push_back({"p", x, rng.uniform(-4, 4) * x + rng.uniform(-10, 10)});
    }
    const RegressionFit fit = fit_regression(points);
    double s1 = n, sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& p : points) {
      sx += p.x;
      sy += p.y;
      sxx += p.x * p.x;
      sxy += p.x * p.y;
      syy += p.y * p.y;
    }
    const double det = s1 * sxx - sx * sx;
    const double slope = (s1 * sxy - sx * sy) / det;
    const double intercept = (sxx * sy - sx * sxy) / det;
    const double r2 = (s1 * sxy - sx * sy) * (s1 * sxy - sx * sy) /
                      ((s1 * sxx - sx * sx) * (s1 * syy - sy * sy));
    require(std::abs(fit.slope - slope) <= 1e-12 * std::max(1.0, std::abs(slope)),
            "slope differs from the normal equations");
    require(std::abs(fit.intercept - intercept) <=
                1e-12 * std::max(1.0, std::abs(intercept)),
            "intercept differs from the normal equations");
    require(std::abs(fit.r2 - r2) <= 1e-12 * std::max(1.0, r2),
            "r2 differs from the normal equations");
  }

  std::vector<RegressionPoint> line;
  for (int i = 0; i < 25; ++i) {
    line.push_back({"p", static_cast<double>(i), static_cast<double>(i)});
  }
  const RegressionFit fit = fit_regression(line);
  require(std::abs(fit.slope - 1.0) <= 1e-12, "y=x slope must be 1");
  require(std::abs(fit.intercept) <= 1e-12, "y=x intercept must be 0");
  require(std::abs(fit.r2 - 1.0) <= 1e-12, "y=x r2 must be 1");
}

// ---------------------------------------------------------------------------
// 9 + 10. end-to-end determinism and pipeline shape

fs::path g_e2e_workspace;

void end_to_end_determinism() {
  const auto start = std::chrono::steady_clock::now();
  const fs::path config_path = fs::path(NARR_DATA_DIR) / "mini_corpus_config.json";
  const fs::path ws_a = fs::temp_directory_path() / "narr_accept_wsA";
  const fs::path ws_b = fs::temp_directory_path() / "narr_accept_wsB";
  fs::remove_all(ws_a);
  fs::remove_all(ws_b);

  for (const fs::path& ws : {ws_a, ws_b}) {
    PipelineConfig config = PipelineConfig::from_file(config_path);
    config.workspace = ws;
    config.seed = 42;
    Pipeline pipeline(std::move(config));
    pipeline.run(Stage::kAll);
  }

  // byte-identical JSON artifacts
  int compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(ws_a)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), ws_a);
    const fs::path other = ws_b / rel;
    require(fs::exists(other), "missing artifact in second run: " + rel.string());
    require(slurp(entry.path()) == slurp(other),
            "artifact differs between runs: " + rel.string());
    ++compared;
  }
  require(compared > 100, "suspiciously few artifacts compared");

  // well-formed SVG for all four figure classes
  const std::vector<fs::path> figures = {
      ws_a / "far-right-2016" / "render" / "topic_graph.svg",
      ws_a / "far-right-2016" / "render" / "narrative_0.svg",
      ws_a / "far-right-2016-2017" / "render" / "sankey.svg",
      ws_a / "far-right-2016-2017" / "render" / "scatter.svg",
  };
  for (const auto& figure : figures) {
    require(fs::exists(figure), "missing figure " + figure.string());
    require(test_util::well_formed_xml(slurp(figure)),
            "figure is not well-formed XML: " + figure.string());
  }

  const double elapsed = seconds_since(start);
  require(elapsed < 300.0, "took " + std::to_string(elapsed) + " s (limit 300)");
  g_e2e_workspace = ws_a;
  fs::remove_all(ws_b);
}

void pipeline_shape() {
  require(!g_e2e_workspace.empty(), "end-to-end run did not complete");
  const std::vector<std::string> slices = {"far-right-2016",  "far-right-2017",
                                           "right-wing-2016", "right-wing-2017",
                                           "left-wing-2016",  "left-wing-2017"};
  for (const auto& slice : slices) {
    const auto keywords =
        read_json_file(g_e2e_workspace / slice / "topics" / "keywords.json");
    const auto& lists = keywords.at("keywords");
    require(lists.size() == 10, slice + ": expected 10 topics");
    for (const auto& list : lists) {
      require(list.size() == 20, slice + ": expected 20 keywords per topic");
    }
    const auto narratives =
        read_json_file(g_e2e_workspace / slice / "terms" / "narratives.json");
    const auto& sets = narratives.at("narratives");
    require(sets.size() == 10, slice + ": expected 10 narratives");
    for (const auto& set : sets) {
      require(set.at("terms").size() == 50, slice + ": expected 50 terms per narrative");
      std::set<std::string> unique;
      for (const auto& t : set.at("terms")) {
        unique.insert(t.at("term").get<std::string>());
      }
      require(unique.size() == 50, slice + ": narrative terms must be unique");
    }
  }
  fs::remove_all(g_e2e_workspace);
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<void()> run;
  };
  const std::vector<Criterion> criteria = {
      {"planted-topic recovery (mean cosine >= 0.8, < 60 s)", planted_topic_recovery},
      {"TF-IDF oracle equivalence (1e-9, identical top-50)", tfidf_oracle_equivalence},
      {"SGNS gradient check (100 triples, rel err <= 1e-4)", sgns_gradient_check},
      {"embedding context outlier (> 95th percentile, < 30 s)",
       embedding_context_outlier},
      {"TextRank power-iteration oracle (1e-8, converges at 1e-6/200)",
       textrank_oracle},
      {"layout properties (FR pair within 10% of k, finite, radial order)",
       layout_properties},
      {"flow conservation (50 instances, identity diagonal)", flow_conservation},
      {"OLS closed form (1e-12, y=x exact)", ols_closed_form},
      {"end-to-end determinism (byte-identical artifacts, SVG, < 5 min)",
       end_to_end_determinism},
      {"pipeline shape (10x20 keywords, 10x50 narrative terms per slice)",
       pipeline_shape},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].run();
      std::printf("PASS %2zu. %s (%.1f s)\n", i + 1, criteria[i].name.c_str(),
                  seconds_since(start));
    } catch (const std::exception& e) {
      ++failures;
      std::printf("FAIL %2zu. %s: %s\n", i + 1, criteria[i].name.c_str(), e.what());
    }
    std::fflush(stdout);
  }
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
