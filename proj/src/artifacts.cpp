#include "narr/artifacts.hpp"

#include <fstream>
#include <stdexcept>

namespace narr {

void write_json_file(const std::filesystem::path& path, const ojson& value) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << value.dump(2) << "\n";
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return nlohmann::json::parse(in);
}

void check_artifact(const nlohmann::json& value, const std::string& format) {
  if (!value.is_object() || value.value("format", "") != format) {
    throw std::runtime_error("artifact is not a '" + format + "' file");
  }
  if (value.value("version", 0) != 1) {
    throw std::runtime_error("unsupported '" + format + "' version");
  }
}

namespace {

ojson slice_to_json(const SliceKey& slice) {
  ojson j;
  j["orientation"] = to_string(slice.orientation);
  j["year"] = slice.year;
  return j;
}

SliceKey slice_from_json(const nlohmann::json& j) {
  return {orientation_from_string(j.at("orientation").get<std::string>()),
          j.at("year").get<int>()};
}

}  // namespace

// --- corpus cache ----------------------------------------------------------

ojson corpus_cache_to_json(const Corpus& corpus, const TokenizedCorpus& tokenized,
                           const TokenizerConfig& config, uint64_t seed) {
  ojson j;
  j["format"] = "narratives.corpus-cache";
  j["version"] = 1;
  j["seed"] = seed;
  ojson cfg;
  cfg["min_token_length"] = config.min_token_length;
  cfg["min_document_frequency"] = config.min_document_frequency;
  cfg["stopwords"] = config.effective_stopwords();
  j["tokenizer"] = cfg;
  ojson vocab;
  vocab["terms"] = tokenized.vocabulary.terms;
  vocab["document_frequency"] = tokenized.vocabulary.document_frequency;
  vocab["total_documents"] = tokenized.vocabulary.total_documents;
  j["vocabulary"] = vocab;
  ojson articles = ojson::array();
  for (std::size_t i = 0; i < corpus.articles.size(); ++i) {
    const Article& a = corpus.articles[i];
    ojson rec;
    rec["id"] = a.id;
    rec["newspaper"] = a.newspaper;
    rec["orientation"] = to_string(a.orientation);
    rec["date"] = a.date;
    rec["title"] = a.title;
    rec["body"] = a.body;
    rec["tokens"] = tokenized.documents[i].tokens;
    articles.push_back(std::move(rec));
  }
  j["articles"] = std::move(articles);
  ojson rejects = ojson::array();
  for (const auto& r : corpus.rejects) {
    ojson rec;
    rec["line"] = r.line;
    rec["id"] = r.id;
    rec["reason"] = r.reason;
    rejects.push_back(std::move(rec));
  }
  j["rejects"] = std::move(rejects);
  return j;
}

CorpusCache corpus_cache_from_json(const nlohmann::json& j) {
  check_artifact(j, "narratives.corpus-cache");
  CorpusCache cache;
  cache.seed = j.at("seed").get<uint64_t>();
  const auto& vocab = j.at("vocabulary");
  cache.tokenized.vocabulary.terms = vocab.at("terms").get<std::vector<std::string>>();
  cache.tokenized.vocabulary.document_frequency =
      vocab.at("document_frequency").get<std::vector<int32_t>>();
  cache.tokenized.vocabulary.total_documents =
      vocab.at("total_documents").get<int32_t>();
  cache.tokenized.vocabulary.rebuild_index();
  for (const auto& rec : j.at("articles")) {
    Article a;
    a.id = rec.at("id").get<std::string>();
    a.newspaper = rec.at("newspaper").get<std::string>();
    a.orientation = orientation_from_string(rec.at("orientation").get<std::string>());
    a.date = rec.at("date").get<std::string>();
    a.year = std::stoi(a.date.substr(0, 4));
    a.title = rec.at("title").get<std::string>();
    a.body = rec.at("body").get<std::string>();
    TokenizedDocument doc;
    doc.article_id = a.id;
    doc.tokens = rec.at("tokens").get<std::vector<int32_t>>();
    cache.corpus.articles.push_back(std::move(a));
    cache.tokenized.documents.push_back(std::move(doc));
  }
  for (const auto& rec : j.at("rejects")) {
    cache.corpus.rejects.push_back({rec.at("line").get<std::size_t>(),
                                    rec.at("id").get<std::string>(),
                                    rec.at("reason").get<std::string>()});
  }
  return cache;
}

// --- LDA model ---------------------------------------------------------------

ojson lda_model_to_json(const LdaModel& model, const SliceKey& slice) {
  ojson j;
  j["format"] = "narratives.lda-model";
  j["version"] = 1;
  j["slice"] = slice_to_json(slice);
  ojson cfg;
  cfg["topics"] = model.config.topics;
  cfg["alpha"] = model.config.alpha;
  cfg["beta"] = model.config.beta;
  cfg["iterations"] = model.config.iterations;
  cfg["burn_in"] = model.config.burn_in;
  cfg["seed"] = model.config.seed;
  cfg["average_after_burn_in"] = model.config.average_after_burn_in;
  j["config"] = cfg;
  j["terms"] = model.terms;
  j["doc_ids"] = model.doc_ids;
  j["phi"] = model.phi;
  j["theta"] = model.theta;
  j["topic_mass"] = model.topic_mass;
  return j;
}

LdaModel lda_model_from_json(const nlohmann::json& j, SliceKey* slice) {
  check_artifact(j, "narratives.lda-model");
  LdaModel model;
  const auto& cfg = j.at("config");
  model.config.topics = cfg.at("topics").get<int>();
  model.config.alpha = cfg.at("alpha").get<double>();
  model.config.beta = cfg.at("beta").get<double>();
  model.config.iterations = cfg.at("iterations").get<int>();
  model.config.burn_in = cfg.at("burn_in").get<int>();
  model.config.seed = cfg.at("seed").get<uint64_t>();
  model.config.average_after_burn_in = cfg.at("average_after_burn_in").get<bool>();
  model.terms = j.at("terms").get<std::vector<std::string>>();
  model.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
  model.phi = j.at("phi").get<std::vector<std::vector<double>>>();
  model.theta = j.at("theta").get<std::vector<std::vector<double>>>();
  model.topic_mass = j.at("topic_mass").get<std::vector<int64_t>>();
  if (slice) *slice = slice_from_json(j.at("slice"));
  return model;
}

// --- co-occurrence -----------------------------------------------------------

ojson cooccurrence_to_json(const CooccurrenceMatrix& matrix) {
  ojson j;
  j["format"] = "narratives.cooccurrence";
  j["version"] = 1;
  j["keywords"] = matrix.keywords;
  j["counts"] = matrix.counts;
  j["threshold"] = matrix.threshold;
  return j;
}

CooccurrenceMatrix cooccurrence_from_json(const nlohmann::json& j) {
  check_artifact(j, "narratives.cooccurrence");
  CooccurrenceMatrix matrix;
  matrix.keywords = j.at("keywords").get<std::vector<std::string>>();
  matrix.counts = j.at("counts").get<std::vector<std::vector<int32_t>>>();
  matrix.threshold = j.at("threshold").get<double>();
  return matrix;
}

// --- summaries ---------------------------------------------------------------

ojson summaries_to_json(const SliceKey& slice, const std::vector<Summary>& summaries) {
  ojson j;
  j["format"] = "narratives.summaries";
  j["version"] = 1;
  j["slice"] = slice_to_json(slice);
  ojson list = ojson::array();
  for (const auto& s : summaries) {
    ojson rec;
    rec["orientation"] = to_string(slice.orientation);
    rec["period"] = slice.year;
    rec["topic"] = s.topic;
    rec["sentences"] = s.sentences;
    rec["scores"] = s.scores;
    rec["converged"] = s.converged;
    list.push_back(std::move(rec));
  }
  j["summaries"] = std::move(list);
  return j;
}

// --- narrative term sets -------------------------------------------------------

ojson narratives_to_json(const SliceKey& slice,
                         const std::vector<NarrativeTermSet>& sets) {
  ojson j;
  j["format"] = "narratives.term-sets";
  j["version"] = 1;
  j["slice"] = slice_to_json(slice);
  ojson list = ojson::array();
  for (const auto& set : sets) {
    ojson rec;
    rec["topic"] = set.topic;
    rec["label"] = set.label;
    ojson terms = ojson::array();
    for (const auto& tw : set.terms) {
      ojson t;
      t["term"] = tw.term;
      t["weight"] = tw.weight;
      terms.push_back(std::move(t));
    }
    rec["terms"] = std::move(terms);
    list.push_back(std::move(rec));
  }
  j["narratives"] = std::move(list);
  return j;
}

std::vector<NarrativeTermSet> narratives_from_json(const nlohmann::json& j) {
  check_artifact(j, "narratives.term-sets");
  const SliceKey slice = slice_from_json(j.at("slice"));
  std::vector<NarrativeTermSet> sets;
  for (const auto& rec : j.at("narratives")) {
    NarrativeTermSet set;
    set.slice = slice;
    set.topic = rec.at("topic").get<int>();
    set.label = rec.at("label").get<std::string>();
    for (const auto& t : rec.at("terms")) {
      set.terms.push_back(
          {t.at("term").get<std::string>(), t.at("weight").get<double>()});
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

// --- similarity table ------------------------------------------------------------

ojson similarity_table_to_json(const SimilarityTable& table, int topic) {
  ojson j;
  j["format"] = "narratives.similarity-table";
  j["version"] = 1;
  j["topic"] = topic;
  j["terms"] = table.terms;
  j["similarity"] = table.sim;
  return j;
}

SimilarityTable similarity_table_from_json(const nlohmann::json& j) {
  check_artifact(j, "narratives.similarity-table");
  SimilarityTable table;
  table.terms = j.at("terms").get<std::vector<std::string>>();
  table.sim = j.at("similarity").get<std::vector<std::vector<double>>>();
  return table;
}

// --- narrative graph -----------------------------------------------------------

ojson narrative_graph_to_json(const NarrativeGraph& graph, const RadialLayout& layout,
                              int topic, const std::string& label) {
  ojson j;
  j["format"] = "narratives.narrative-graph";
  j["version"] = 1;
  j["topic"] = topic;
  j["label"] = label;
  j["threshold"] = graph.threshold;
  ojson nodes = ojson::array();
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    ojson n;
    n["node"] = graph.nodes[i];
    n["strength"] = graph.strength[i];
    n["x"] = layout.positions[i].x;
    n["y"] = layout.positions[i].y;
    n["radius"] = layout.radius[i];
    n["radius_rank"] = layout.radius_rank[i];
    nodes.push_back(std::move(n));
  }
  j["nodes"] = std::move(nodes);
  ojson edges = ojson::array();
  for (const auto& e : graph.edges) {
    ojson rec;
    rec["a"] = e.a;
    rec["b"] = e.b;
    rec["weight"] = e.weight;
    edges.push_back(std::move(rec));
  }
  j["edges"] = std::move(edges);
  return j;
}

void narrative_graph_from_json(const nlohmann::json& j, NarrativeGraph* graph,
                               RadialLayout* layout, int* topic, std::string* label) {
  check_artifact(j, "narratives.narrative-graph");
  if (topic) *topic = j.at("topic").get<int>();
  if (label) *label = j.at("label").get<std::string>();
  if (graph) {
    graph->nodes.clear();
    graph->edges.clear();
    graph->strength.clear();
    graph->threshold = j.at("threshold").get<double>();
  }
  if (layout) {
    layout->positions.clear();
    layout->radius.clear();
    layout->radius_rank.clear();
  }
  for (const auto& n : j.at("nodes")) {
    if (graph) {
      graph->nodes.push_back(n.at("node").get<std::string>());
      graph->strength.push_back(n.at("strength").get<double>());
    }
    if (layout) {
      layout->positions.push_back({n.at("x").get<double>(), n.at("y").get<double>()});
      layout->radius.push_back(n.at("radius").get<double>());
      layout->radius_rank.push_back(n.at("radius_rank").get<double>());
    }
  }
  if (graph) {
    for (const auto& e : j.at("edges")) {
      graph->edges.push_back({e.at("a").get<int32_t>(), e.at("b").get<int32_t>(),
                              e.at("weight").get<double>()});
    }
  }
}

// --- topic graph layout ----------------------------------------------------------

ojson topic_graph_to_json(const TopicGraphLayout& layout) {
  ojson j;
  j["format"] = "narratives.topic-graph";
  j["version"] = 1;
  j["threshold"] = layout.threshold;
  ojson nodes = ojson::array();
  for (std::size_t i = 0; i < layout.keywords.size(); ++i) {
    ojson n;
    n["keyword"] = layout.keywords[i];
    n["topic"] = layout.topic_of_node[i];
    n["topic_rank"] = layout.topic_rank_of_node[i];
    n["x"] = layout.positions[i].x;
    n["y"] = layout.positions[i].y;
    nodes.push_back(std::move(n));
  }
  j["nodes"] = std::move(nodes);
  ojson edges = ojson::array();
  for (const auto& e : layout.edges) {
    ojson rec;
    rec["a"] = e.a;
    rec["b"] = e.b;
    rec["count"] = e.weight;
    edges.push_back(std::move(rec));
  }
  j["edges"] = std::move(edges);
  return j;
}

TopicGraphLayout topic_graph_from_json(const nlohmann::json& j) {
  check_artifact(j, "narratives.topic-graph");
  TopicGraphLayout layout;
  layout.threshold = j.at("threshold").get<double>();
  for (const auto& n : j.at("nodes")) {
    layout.keywords.push_back(n.at("keyword").get<std::string>());
    layout.topic_of_node.push_back(n.at("topic").get<int32_t>());
    layout.topic_rank_of_node.push_back(n.at("topic_rank").get<int32_t>());
    layout.positions.push_back({n.at("x").get<double>(), n.at("y").get<double>()});
  }
  for (const auto& e : j.at("edges")) {
    layout.edges.push_back({e.at("a").get<int32_t>(), e.at("b").get<int32_t>(),
                            e.at("count").get<double>()});
  }
  return layout;
}

// --- flows -----------------------------------------------------------------------

ojson flow_diagram_to_json(const FlowDiagram& diagram, Orientation orientation,
                           int period_from, int period_to) {
  ojson j;
  j["format"] = "narratives.flow-diagram";
  j["version"] = 1;
  j["orientation"] = to_string(orientation);
  j["period_from"] = period_from;
  j["period_to"] = period_to;
  j["mode"] = to_string(diagram.mode);
  auto nodes_json = [](const std::vector<FlowNode>& nodes) {
    ojson list = ojson::array();
    for (const auto& n : nodes) {
      ojson rec;
      rec["topic"] = n.topic;
      rec["label"] = n.label;
      rec["mass"] = n.mass;
      rec["rank"] = n.rank;
      list.push_back(std::move(rec));
    }
    return list;
  };
  j["left"] = nodes_json(diagram.left);
  j["right"] = nodes_json(diagram.right);
  ojson flows = ojson::array();
  for (const auto& f : diagram.flows) {
    ojson rec;
    rec["source"] = f.source;
    rec["target"] = f.target;
    rec["magnitude"] = f.magnitude;
    rec["shared_terms"] = f.shared_terms;
    flows.push_back(std::move(rec));
  }
  j["flows"] = std::move(flows);
  return j;
}

FlowDiagram flow_diagram_from_json(const nlohmann::json& j) {
  check_artifact(j, "narratives.flow-diagram");
  FlowDiagram diagram;
  diagram.mode = flow_mode_from_string(j.at("mode").get<std::string>());
  auto nodes_from = [](const nlohmann::json& list) {
    std::vector<FlowNode> nodes;
    for (const auto& rec : list) {
      FlowNode n;
      n.topic = rec.at("topic").get<int32_t>();
      n.label = rec.at("label").get<std::string>();
      n.mass = rec.at("mass").get<double>();
      n.rank = rec.at("rank").get<int32_t>();
      nodes.push_back(std::move(n));
    }
    return nodes;
  };
  diagram.left = nodes_from(j.at("left"));
  diagram.right = nodes_from(j.at("right"));
  for (const auto& rec : j.at("flows")) {
    Flow f;
    f.source = rec.at("source").get<int32_t>();
    f.target = rec.at("target").get<int32_t>();
    f.magnitude = rec.at("magnitude").get<double>();
    f.shared_terms = rec.at("shared_terms").get<std::vector<std::string>>();
    diagram.flows.push_back(std::move(f));
  }
  return diagram;
}

// --- sankey ------------------------------------------------------------------------

ojson sankey_to_json(const SankeyGeometry& geometry) {
  ojson j;
  j["format"] = "narratives.sankey-geometry";
  j["version"] = 1;
  j["width"] = geometry.width;
  j["height"] = geometry.height;
  ojson nodes = ojson::array();
  for (const auto& n : geometry.nodes) {
    ojson rec;
    rec["side"] = n.side;
    rec["index"] = n.index;
    rec["label"] = n.label;
    rec["x"] = n.x;
    rec["y"] = n.y;
    rec["width"] = n.width;
    rec["height"] = n.height;
    rec["mass"] = n.mass;
    rec["rank"] = n.rank;
    nodes.push_back(std::move(rec));
  }
  j["nodes"] = std::move(nodes);
  ojson ribbons = ojson::array();
  for (const auto& r : geometry.ribbons) {
    ojson rec;
    rec["source"] = r.source;
    rec["target"] = r.target;
    rec["thickness"] = r.thickness;
    rec["x0"] = r.x0;
    rec["y0"] = r.y0;
    rec["x1"] = r.x1;
    rec["y1"] = r.y1;
    ribbons.push_back(std::move(rec));
  }
  j["ribbons"] = std::move(ribbons);
  return j;
}

SankeyGeometry sankey_from_json(const nlohmann::json& j) {
  check_artifact(j, "narratives.sankey-geometry");
  SankeyGeometry geometry;
  geometry.width = j.at("width").get<double>();
  geometry.height = j.at("height").get<double>();
  for (const auto& rec : j.at("nodes")) {
    SankeyNode n;
    n.side = rec.at("side").get<int>();
    n.index = rec.at("index").get<int32_t>();
    n.label = rec.at("label").get<std::string>();
    n.x = rec.at("x").get<double>();
    n.y = rec.at("y").get<double>();
    n.width = rec.at("width").get<double>();
    n.height = rec.at("height").get<double>();
    n.mass = rec.at("mass").get<double>();
    n.rank = rec.at("rank").get<int32_t>();
    geometry.nodes.push_back(std::move(n));
  }
  for (const auto& rec : j.at("ribbons")) {
    SankeyRibbon r;
    r.source = rec.at("source").get<int32_t>();
    r.target = rec.at("target").get<int32_t>();
    r.thickness = rec.at("thickness").get<double>();
    r.x0 = rec.at("x0").get<double>();
    r.y0 = rec.at("y0").get<double>();
    r.x1 = rec.at("x1").get<double>();
    r.y1 = rec.at("y1").get<double>();
    geometry.ribbons.push_back(r);
  }
  return geometry;
}

// --- regression -----------------------------------------------------------------

ojson regression_to_json(const RegressionFit& fit, Orientation orientation,
                         int period_from, int period_to) {
  ojson j;
  j["format"] = "narratives.regression";
  j["version"] = 1;
  j["orientation"] = to_string(orientation);
  j["period_from"] = period_from;
  j["period_to"] = period_to;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["r"] = fit.r;
  j["r2"] = fit.r2;
  j["degenerate"] = fit.degenerate;
  ojson points = ojson::array();
  for (const auto& p : fit.points) {
    ojson rec;
    rec["term"] = p.term;
    rec["x"] = p.x;
    rec["y"] = p.y;
    points.push_back(std::move(rec));
  }
  j["points"] = std::move(points);
  auto hist_json = [](const Histogram& hist) {
    ojson h;
    h["edges"] = hist.edges;
    h["counts"] = hist.counts;
    return h;
  };
  j["hist_x"] = hist_json(fit.hist_x);
  j["hist_y"] = hist_json(fit.hist_y);
  return j;
}

RegressionFit regression_from_json(const nlohmann::json& j) {
  check_artifact(j, "narratives.regression");
  RegressionFit fit;
  fit.slope = j.at("slope").get<double>();
  fit.intercept = j.at("intercept").get<double>();
  fit.r = j.at("r").get<double>();
  fit.r2 = j.at("r2").get<double>();
  fit.degenerate = j.at("degenerate").get<bool>();
  for (const auto& rec : j.at("points")) {
    fit.points.push_back({rec.at("term").get<std::string>(),
                          rec.at("x").get<double>(), rec.at("y").get<double>()});
  }
  auto hist_from = [](const nlohmann::json& h) {
    Histogram hist;
    hist.edges = h.at("edges").get<std::vector<double>>();
    hist.counts = h.at("counts").get<std::vector<int64_t>>();
    return hist;
  };
  fit.hist_x = hist_from(j.at("hist_x"));
  fit.hist_y = hist_from(j.at("hist_y"));
  return fit;
}

}  // namespace narr
