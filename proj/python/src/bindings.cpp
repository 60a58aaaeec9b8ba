// Python bindings for the core operations: corpus handling, LDA, TextRank,
// TF-IDF, embeddings, layouts, dynamics, and the pipeline driver.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "narr/pipeline.hpp"

namespace py = pybind11;
using namespace narr;

namespace {

Vocabulary vocab_from_terms(const std::vector<std::string>& terms) {
  Vocabulary vocab;
  vocab.terms = terms;
  vocab.document_frequency.assign(terms.size(), 1);
  vocab.total_documents = 1;
  vocab.rebuild_index();
  return vocab;
}

std::vector<TokenizedDocument> docs_from_lists(
    const std::vector<std::vector<int32_t>>& token_lists,
    const std::vector<std::string>& doc_ids) {
  if (!doc_ids.empty() && doc_ids.size() != token_lists.size()) {
    throw std::invalid_argument("doc_ids must align with the token lists");
  }
  std::vector<TokenizedDocument> docs;
  for (std::size_t i = 0; i < token_lists.size(); ++i) {
    TokenizedDocument doc;
    doc.article_id = doc_ids.empty() ? "doc" + std::to_string(i) : doc_ids[i];
    doc.tokens = token_lists[i];
    docs.push_back(std::move(doc));
  }
  return docs;
}

LayoutGraph graph_from_edges(int nodes,
                             const std::vector<std::tuple<int, int, double>>& edges) {
  LayoutGraph graph;
  graph.node_count = nodes;
  for (const auto& [a, b, w] : edges) {
    graph.edges.push_back({a, b, w});
  }
  return graph;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Narrative topology and dynamics toolkit (C++ core)";

  // --- corpus -------------------------------------------------------------

  m.def(
      "tokenize_text",
      [](const std::string& text, int min_token_length,
         const std::vector<std::string>& stopwords, int min_document_frequency) {
        TokenizerConfig config;
        config.min_token_length = min_token_length;
        config.stopwords = stopwords;
        config.min_document_frequency = min_document_frequency;
        return tokenize_text(text, config);
      },
      py::arg("text"), py::arg("min_token_length") = 2,
      py::arg("stopwords") = std::vector<std::string>{},
      py::arg("min_document_frequency") = 5,
      "Lowercased alphabetic tokens with stopword and length filtering");

  m.def("split_sentences", &split_sentences, py::arg("text"));

  m.def(
      "lemma_matches",
      [](const std::string& text, const std::optional<std::vector<std::string>>& phrases) {
        LemmaFilter filter =
            phrases ? LemmaFilter{*phrases} : LemmaFilter::defaults();
        filter.validate();
        return filter.matches(text);
      },
      py::arg("text"), py::arg("phrases") = py::none());

  m.def("default_lemma_phrases", [] { return LemmaFilter::defaults().phrases; });

  // --- topic model ----------------------------------------------------------

  py::class_<LdaModel>(m, "LdaModel")
      .def_readonly("terms", &LdaModel::terms)
      .def_readonly("doc_ids", &LdaModel::doc_ids)
      .def_readonly("phi", &LdaModel::phi)
      .def_readonly("theta", &LdaModel::theta)
      .def_readonly("topic_mass", &LdaModel::topic_mass)
      .def_property_readonly("topics", &LdaModel::topics)
      .def(
          "top_keywords",
          [](const LdaModel& model, int topic, int count) {
            return top_keywords(model, topic, count);
          },
          py::arg("topic"), py::arg("m") = 20)
      .def("rank_topics", [](const LdaModel& model) { return rank_topics(model); })
      .def(
          "rank_articles",
          [](const LdaModel& model, int topic) {
            return rank_articles_for_topic(model, topic);
          },
          py::arg("topic"));

  m.def(
      "fit_lda",
      [](const std::vector<std::vector<int32_t>>& documents,
         const std::vector<std::string>& terms, int topics, std::optional<double> alpha,
         double beta, int iterations, int burn_in, uint64_t seed,
         const std::vector<std::string>& doc_ids) {
        LdaConfig config = LdaConfig::with_defaults(topics);
        if (alpha) config.alpha = *alpha;
        config.beta = beta;
        config.iterations = iterations;
        config.burn_in = burn_in;
        config.seed = seed;
        return fit_lda(docs_from_lists(documents, doc_ids), vocab_from_terms(terms),
                       config);
      },
      py::arg("documents"), py::arg("terms"), py::arg("topics") = 10,
      py::arg("alpha") = py::none(), py::arg("beta") = 0.01,
      py::arg("iterations") = 1000, py::arg("burn_in") = 200, py::arg("seed") = 42,
      py::arg("doc_ids") = std::vector<std::string>{},
      "Collapsed Gibbs LDA over documents given as vocabulary-index lists");

  m.def(
      "keyword_cooccurrence",
      [](const std::vector<std::vector<int32_t>>& documents,
         const std::vector<std::string>& terms,
         const std::vector<std::string>& keywords) {
        const auto matrix = keyword_cooccurrence(docs_from_lists(documents, {}),
                                                 vocab_from_terms(terms), keywords);
        return py::make_tuple(matrix.keywords, matrix.counts);
      },
      py::arg("documents"), py::arg("terms"), py::arg("keywords"));

  // --- summarizer -------------------------------------------------------------

  m.def(
      "textrank",
      [](const std::vector<std::vector<double>>& weights, double damping, double eps,
         int max_iter) {
        SentenceGraph graph;
        graph.weights = weights;
        graph.damping = damping;
        for (std::size_t i = 0; i < weights.size(); ++i) {
          graph.sentences.push_back("s" + std::to_string(i));
        }
        const auto result = textrank(graph, eps, max_iter);
        return py::make_tuple(result.scores, result.converged);
      },
      py::arg("weights"), py::arg("damping") = 0.85, py::arg("eps") = 1e-6,
      py::arg("max_iter") = 200,
      "Weighted PageRank scores and a convergence flag");

  m.def(
      "bm25_sentence_graph",
      [](const std::vector<std::string>& sentences, double k1, double b, double delta,
         double damping) {
        Bm25Params params{k1, b, delta};
        TokenizerConfig tokenizer;
        tokenizer.min_document_frequency = 1;
        return build_sentence_graph(sentences, params, tokenizer, damping).weights;
      },
      py::arg("sentences"), py::arg("k1") = 1.2, py::arg("b") = 0.75,
      py::arg("delta") = 1.0, py::arg("damping") = 0.85,
      "Pairwise BM25+ similarity matrix over sentences");

  // --- term extraction -----------------------------------------------------------

  m.def(
      "tfidf_weight",
      [](int tf, int df, int total_documents) {
        return tfidf_weight(tf, df, total_documents);
      },
      py::arg("tf"), py::arg("df"), py::arg("total_documents"),
      "tf * ln(N / df)");

  // --- embeddings -------------------------------------------------------------

  py::class_<EmbeddingMatrix>(m, "Embeddings")
      .def_readonly("terms", &EmbeddingMatrix::terms)
      .def_readonly("dim", &EmbeddingMatrix::dim)
      .def(
          "vector",
          [](const EmbeddingMatrix& matrix, const std::string& term) {
            const int32_t id = matrix.lookup(term);
            if (id < 0) throw std::invalid_argument("unknown term '" + term + "'");
            const auto view = matrix.input_vector(id);
            return std::vector<double>(view.begin(), view.end());
          },
          py::arg("term"))
      .def(
          "similarity",
          [](const EmbeddingMatrix& matrix, const std::string& a, const std::string& b) {
            const int32_t ia = matrix.lookup(a);
            const int32_t ib = matrix.lookup(b);
            if (ia < 0 || ib < 0) throw std::invalid_argument("unknown term");
            return cosine(matrix.input_vector(ia), matrix.input_vector(ib));
          },
          py::arg("a"), py::arg("b"));

  m.def(
      "train_word2vec",
      [](const std::vector<std::vector<int32_t>>& documents,
         const std::vector<std::string>& terms, int dim, int window, int negatives,
         int epochs, double learning_rate, int min_count, double subsample,
         uint64_t seed) {
        EmbeddingConfig config;
        config.dim = dim;
        config.window = window;
        config.negatives = negatives;
        config.epochs = epochs;
        config.learning_rate = learning_rate;
        config.min_count = min_count;
        config.subsample = subsample;
        config.seed = seed;
        return train_word2vec(docs_from_lists(documents, {}), vocab_from_terms(terms),
                              config);
      },
      py::arg("documents"), py::arg("terms"), py::arg("dim") = 100,
      py::arg("window") = 5, py::arg("negatives") = 5, py::arg("epochs") = 5,
      py::arg("learning_rate") = 0.025, py::arg("min_count") = 5,
      py::arg("subsample") = 1e-4, py::arg("seed") = 1,
      "Skip-gram negative-sampling embeddings, single-threaded deterministic");

  m.def(
      "cosine",
      [](const std::vector<double>& u, const std::vector<double>& v) {
        return cosine(u, v);
      },
      py::arg("u"), py::arg("v"));

  m.def(
      "narrative_graph",
      [](const std::vector<std::string>& terms, const EmbeddingMatrix& embeddings,
         std::optional<double> threshold, double percentile) {
        const auto graph = build_narrative_graph(terms, embeddings, threshold, percentile);
        py::dict out;
        out["nodes"] = graph.nodes;
        std::vector<std::tuple<int, int, double>> edges;
        for (const auto& e : graph.edges) edges.emplace_back(e.a, e.b, e.weight);
        out["edges"] = edges;
        out["strength"] = graph.strength;
        out["threshold"] = graph.threshold;
        return out;
      },
      py::arg("terms"), py::arg("embeddings"), py::arg("threshold") = py::none(),
      py::arg("percentile") = 0.80);

  // --- layout -----------------------------------------------------------------

  m.def(
      "verlet_layout",
      [](int nodes, const std::vector<std::tuple<int, int, double>>& edges,
         double spring_stiffness, double rest_length, double charge, double centering,
         double velocity_decay, int steps, uint64_t seed) {
        VerletConfig config;
        config.spring_stiffness = spring_stiffness;
        config.rest_length = rest_length;
        config.charge = charge;
        config.centering = centering;
        config.velocity_decay = velocity_decay;
        config.steps = steps;
        config.seed = seed;
        std::vector<std::pair<double, double>> out;
        for (const auto& p : verlet_layout(graph_from_edges(nodes, edges), config)) {
          out.emplace_back(p.x, p.y);
        }
        return out;
      },
      py::arg("nodes"), py::arg("edges"), py::arg("spring_stiffness") = 1.0,
      py::arg("rest_length") = 30.0, py::arg("charge") = -30.0,
      py::arg("centering") = 0.05, py::arg("velocity_decay") = 0.8,
      py::arg("steps") = 300, py::arg("seed") = 0);

  m.def(
      "fruchterman_reingold",
      [](int nodes, const std::vector<std::tuple<int, int, double>>& edges,
         double frame, double c, int iterations, uint64_t seed) {
        FrConfig config;
        config.frame = frame;
        config.c = c;
        config.iterations = iterations;
        config.seed = seed;
        const auto result = fruchterman_reingold(graph_from_edges(nodes, edges), config);
        std::vector<std::pair<double, double>> out;
        for (const auto& p : result.positions) out.emplace_back(p.x, p.y);
        return py::make_tuple(out, result.k);
      },
      py::arg("nodes"), py::arg("edges"), py::arg("frame") = 100.0, py::arg("c") = 1.0,
      py::arg("iterations") = 500, py::arg("seed") = 0);

  m.def(
      "radialize",
      [](const std::vector<std::pair<double, double>>& positions,
         const std::vector<double>& strengths) {
        std::vector<Position> pos;
        for (const auto& [x, y] : positions) pos.push_back({x, y});
        const RadialLayout radial = radialize(pos, strengths);
        std::vector<std::pair<double, double>> out;
        for (const auto& p : radial.positions) out.emplace_back(p.x, p.y);
        py::dict result;
        result["positions"] = out;
        result["radius"] = radial.radius;
        result["radius_rank"] = radial.radius_rank;
        return result;
      },
      py::arg("positions"), py::arg("strengths"));

  // --- dynamics -----------------------------------------------------------------

  m.def(
      "fit_regression",
      [](const std::vector<std::pair<double, double>>& points, int bins) {
        std::vector<RegressionPoint> rp;
        for (const auto& [x, y] : points) rp.push_back({"", x, y});
        const RegressionFit fit = fit_regression(rp, bins);
        py::dict out;
        out["slope"] = fit.slope;
        out["intercept"] = fit.intercept;
        out["r"] = fit.r;
        out["r2"] = fit.r2;
        out["degenerate"] = fit.degenerate;
        out["hist_x"] = py::make_tuple(fit.hist_x.edges, fit.hist_x.counts);
        out["hist_y"] = py::make_tuple(fit.hist_y.edges, fit.hist_y.counts);
        return out;
      },
      py::arg("points"), py::arg("bins") = 20,
      "Ordinary least squares with marginal histograms");

  m.def(
      "term_frequency",
      [](int64_t count, int64_t total_tokens) {
        TermCounts counts = {{"t", count}};
        return term_frequency("t", counts, total_tokens);
      },
      py::arg("count"), py::arg("total_tokens"), "Occurrences per million tokens");

  // --- pipeline -----------------------------------------------------------------

  m.def(
      "run_pipeline",
      [](const std::string& config_path, const std::string& stage,
         std::optional<uint64_t> seed, std::optional<std::string> slice, bool force,
         bool lenient, std::optional<int> threads,
         std::optional<std::string> workspace) {
        PipelineConfig config = PipelineConfig::from_file(config_path);
        if (seed) config.seed = *seed;
        if (lenient) config.lenient = true;
        if (threads) config.threads = *threads;
        if (workspace) config.workspace = *workspace;
        Pipeline pipeline(std::move(config));
        const RunReport report = pipeline.run(stage_from_string(stage), slice, force);
        std::vector<py::dict> out;
        for (const auto& run : report.stages) {
          py::dict rec;
          rec["key"] = run.key;
          rec["stage"] = run.stage;
          rec["skipped"] = run.skipped;
          out.push_back(std::move(rec));
        }
        return out;
      },
      py::arg("config_path"), py::arg("stage") = "all", py::arg("seed") = py::none(),
      py::arg("slice") = py::none(), py::arg("force") = false,
      py::arg("lenient") = false, py::arg("threads") = py::none(),
      py::arg("workspace") = py::none(),
      "Run one pipeline stage (or 'all'); returns the per-stage report");

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
