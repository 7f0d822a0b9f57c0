#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "skipdim/embedding.hpp"
#include "skipdim/graph.hpp"
#include "skipdim/linkpred.hpp"
#include "skipdim/theory.hpp"
#include "skipdim/trainer.hpp"
#include "skipdim/walks.hpp"

namespace py = pybind11;
using namespace skipdim;

PYBIND11_MODULE(_core, m) {
  m.doc() = "skip-gram graph embeddings with interchangeable repulsion";

  // ---- graph ----
  py::class_<Graph>(m, "Graph")
      .def(py::init<>())
      .def_static("from_edges", &Graph::from_edges, py::arg("edges"))
      .def_static("from_id_edges", &Graph::from_id_edges, py::arg("n"),
                  py::arg("edges"), py::arg("labels") = std::vector<int64_t>{})
      .def_property_readonly("num_nodes", &Graph::num_nodes)
      .def_property_readonly("num_edges", &Graph::num_edges)
      .def("degree", &Graph::degree, py::arg("v"))
      .def("neighbors",
           [](const Graph& g, int32_t v) {
             return std::vector<int32_t>(g.neighbors_begin(v), g.neighbors_end(v));
           },
           py::arg("v"))
      .def("has_edge", &Graph::has_edge, py::arg("u"), py::arg("v"))
      .def("label", &Graph::label, py::arg("v"))
      .def("labels", &Graph::labels)
      .def("edges", &Graph::edges)
      .def("is_connected", &Graph::is_connected)
      .def("__repr__", [](const Graph& g) {
        return "Graph(n=" + std::to_string(g.num_nodes()) +
               ", m=" + std::to_string(g.num_edges()) + ")";
      });

  m.def("load_edge_list",
        [](const std::string& path, bool directed_hint) {
          return load_edge_list(path, directed_hint);
        },
        py::arg("path"), py::arg("directed_hint") = false);
  m.def("save_edge_list",
        [](const std::string& path, const Graph& g) { save_edge_list(path, g); },
        py::arg("path"), py::arg("graph"));
  m.def("generate_erdos_renyi", &generate_erdos_renyi, py::arg("n"), py::arg("p"),
        py::arg("seed"));
  m.def("generate_sbm", &generate_sbm, py::arg("n"), py::arg("block_count"),
        py::arg("p_within"), py::arg("p_between"), py::arg("seed"));
  m.def("average_clustering_coefficient", &average_clustering_coefficient,
        py::arg("graph"));

  py::class_<SplitRatios>(m, "SplitRatios")
      .def(py::init<>())
      .def_readwrite("train", &SplitRatios::train)
      .def_readwrite("valid", &SplitRatios::valid)
      .def_readwrite("test", &SplitRatios::test);

  py::class_<EdgeSplit>(m, "EdgeSplit")
      .def_readonly("train", &EdgeSplit::train)
      .def_readonly("valid", &EdgeSplit::valid)
      .def_readonly("test", &EdgeSplit::test)
      .def_readonly("test_negatives", &EdgeSplit::test_negatives);

  m.def("split_edges",
        [](const Graph& g, double train, double valid, double test, uint64_t seed) {
          return split_edges(g, SplitRatios{train, valid, test}, seed);
        },
        py::arg("graph"), py::arg("train") = 0.7, py::arg("valid") = 0.1,
        py::arg("test") = 0.2, py::arg("seed") = 1);
  m.def("training_subgraph", &training_subgraph, py::arg("graph"),
        py::arg("train_edges"));
  m.def("sample_non_edges",
        [](const Graph& g, int64_t count, uint64_t seed) {
          auto rng = substream(seed, "non_edges");
          return sample_non_edges(g, count, rng);
        },
        py::arg("graph"), py::arg("count"), py::arg("seed"));

  // ---- walks and training pairs ----
  py::class_<WalkConfig>(m, "WalkConfig")
      .def(py::init<>())
      .def_readwrite("p", &WalkConfig::p)
      .def_readwrite("q", &WalkConfig::q)
      .def_readwrite("walk_length", &WalkConfig::walk_length)
      .def_readwrite("walks_per_node", &WalkConfig::walks_per_node)
      .def_readwrite("context_size", &WalkConfig::context_size);

  py::class_<PairSet>(m, "PairSet")
      .def_readonly("pairs", &PairSet::pairs)
      .def_readonly("num_nodes", &PairSet::num_nodes)
      .def("pairs_per_node", &PairSet::pairs_per_node)
      .def("__len__", [](const PairSet& p) { return p.pairs.size(); });

  m.def("pairs_from_edges", &pairs_from_edges, py::arg("graph"));
  m.def("generate_walks", &generate_walks, py::arg("graph"), py::arg("config"),
        py::arg("seed"), py::arg("threads") = 1);
  m.def("pairs_from_walks", &pairs_from_walks, py::arg("walks"),
        py::arg("context_size"), py::arg("num_nodes"));

  // ---- embeddings and training ----
  m.def("init_embeddings", &init_embeddings, py::arg("n"), py::arg("d"),
        py::arg("scale"), py::arg("seed"));
  m.def("constriction", &constriction, py::arg("X"), py::arg("threads") = 1);
  m.def("save_embeddings_text", &save_embeddings_text, py::arg("path"), py::arg("X"),
        py::arg("labels"));
  m.def("load_embeddings_text",
        [](const std::string& path) {
          std::vector<int64_t> labels;
          Matrix X = load_embeddings_text(path, &labels);
          return py::make_tuple(X, labels);
        },
        py::arg("path"));
  m.def("save_embeddings_binary", &save_embeddings_binary, py::arg("path"),
        py::arg("X"));
  m.def("load_embeddings_binary", &load_embeddings_binary, py::arg("path"));

  py::enum_<RepulsionMode>(m, "RepulsionMode")
      .value("SGNS", RepulsionMode::kSgns)
      .value("NONE", RepulsionMode::kNone)
      .value("DIMREG", RepulsionMode::kDimreg);
  py::enum_<OptimizerKind>(m, "OptimizerKind")
      .value("SGD", OptimizerKind::kSgd)
      .value("ADAM", OptimizerKind::kAdam);
  py::enum_<WeightVectorMode>(m, "WeightVectorMode")
      .value("UNIFORM", WeightVectorMode::kUniform)
      .value("DEGREE_ALPHA", WeightVectorMode::kDegreeAlpha);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("dim", &TrainConfig::dim)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("eta", &TrainConfig::eta)
      .def_readwrite("repulsion", &TrainConfig::repulsion)
      .def_readwrite("k", &TrainConfig::k)
      .def_readwrite("alpha", &TrainConfig::alpha)
      .def_readwrite("sgns_paper_sign", &TrainConfig::sgns_paper_sign)
      .def_readwrite("lambda_", &TrainConfig::lambda)
      .def_readwrite("n_negative", &TrainConfig::n_negative)
      .def_readwrite("weight_mode", &TrainConfig::weight_mode)
      .def_readwrite("weight_alpha", &TrainConfig::weight_alpha)
      .def_readwrite("optimizer", &TrainConfig::optimizer)
      .def_readwrite("adam_beta1", &TrainConfig::adam_beta1)
      .def_readwrite("adam_beta2", &TrainConfig::adam_beta2)
      .def_readwrite("adam_eps", &TrainConfig::adam_eps)
      .def_readwrite("init_scale", &TrainConfig::init_scale)
      .def_readwrite("track_constriction", &TrainConfig::track_constriction)
      .def_readwrite("none_epoch_cap", &TrainConfig::none_epoch_cap)
      .def_readwrite("allow_uncapped_none", &TrainConfig::allow_uncapped_none)
      .def("validate", &TrainConfig::validate);

  py::class_<TraceRow>(m, "TraceRow")
      .def_readonly("epoch", &TraceRow::epoch)
      .def_readonly("positive_loss", &TraceRow::positive_loss)
      .def_readonly("constriction", &TraceRow::constriction)
      .def_readonly("wall_clock_ms", &TraceRow::wall_clock_ms);

  m.def("train",
        [](const PairSet& pairs, const std::vector<int32_t>& degrees,
           const TrainConfig& cfg, uint64_t seed) {
          return train(pairs, degrees, cfg, seed);
        },
        py::arg("pairs"), py::arg("degrees"), py::arg("config"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());
  m.def("train_with_trace",
        [](const PairSet& pairs, const std::vector<int32_t>& degrees,
           const TrainConfig& cfg, uint64_t seed) {
          TrainingTrace trace;
          Matrix X;
          {
            py::gil_scoped_release release;
            X = train(pairs, degrees, cfg, seed, &trace);
          }
          return py::make_tuple(X, trace.rows);
        },
        py::arg("pairs"), py::arg("degrees"), py::arg("config"), py::arg("seed"));

  // ---- link prediction ----
  py::class_<ClassifierConfig>(m, "ClassifierConfig")
      .def(py::init<>())
      .def_readwrite("hidden", &ClassifierConfig::hidden)
      .def_readwrite("epochs", &ClassifierConfig::epochs)
      .def_readwrite("batch_size", &ClassifierConfig::batch_size)
      .def_readwrite("eta", &ClassifierConfig::eta);

  py::class_<EdgeClassifier>(m, "EdgeClassifier")
      .def(py::init<int32_t, int32_t, uint64_t>(), py::arg("input_dim"),
           py::arg("hidden"), py::arg("seed"))
      .def("score_edge", &EdgeClassifier::score_edge, py::arg("X"), py::arg("u"),
           py::arg("v"));

  m.def("train_classifier", &train_classifier, py::arg("X"), py::arg("graph"),
        py::arg("train_pos"), py::arg("config"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());
  m.def("auc_roc", &auc_roc, py::arg("scores_pos"), py::arg("scores_neg"));

  py::class_<RankConfig>(m, "RankConfig")
      .def(py::init<>())
      .def_readwrite("candidates_per_node", &RankConfig::candidates_per_node)
      .def_readwrite("k_list", &RankConfig::k_list);

  py::class_<MetricReport>(m, "MetricReport")
      .def_readonly("auc_roc", &MetricReport::auc_roc)
      .def_readonly("mrr", &MetricReport::mrr)
      .def_readonly("hits_at_k", &MetricReport::hits_at_k)
      .def_readonly("nodes_evaluated", &MetricReport::nodes_evaluated)
      .def_readonly("nodes_skipped", &MetricReport::nodes_skipped)
      .def("to_json", &MetricReport::to_json);

  m.def("evaluate_embeddings", &evaluate_embeddings, py::arg("X"), py::arg("clf"),
        py::arg("graph"), py::arg("test_pos"), py::arg("test_neg"),
        py::arg("config"), py::arg("seed"), py::call_guard<py::gil_scoped_release>());

  // ---- theory harness ----
  m.def("loss_positive", &loss_positive, py::arg("X"), py::arg("graph"));
  m.def("loss_negative", &loss_negative, py::arg("X"), py::arg("graph"));
  m.def("loss_negative_all", &loss_negative_all, py::arg("X"));
  m.def("loss_regularizer", &loss_regularizer, py::arg("X"));

  py::class_<ExactGradients>(m, "ExactGradients")
      .def_readonly("pos", &ExactGradients::pos)
      .def_readonly("neg", &ExactGradients::neg)
      .def_readonly("neg_all", &ExactGradients::neg_all)
      .def_readonly("reg", &ExactGradients::reg);
  m.def("exact_gradients", &exact_gradients, py::arg("X"), py::arg("graph"));

  py::class_<FrobeniusCheck>(m, "FrobeniusCheck")
      .def_readonly("lhs", &FrobeniusCheck::lhs)
      .def_readonly("rhs", &FrobeniusCheck::rhs)
      .def_readonly("abs_diff", &FrobeniusCheck::abs_diff)
      .def_readonly("rel_err", &FrobeniusCheck::rel_err)
      .def_readonly("passed", &FrobeniusCheck::pass);
  m.def("check_frobenius_identity", &check_frobenius_identity, py::arg("X"));

  py::class_<GradientReport>(m, "GradientReport")
      .def_readonly("n", &GradientReport::n)
      .def_readonly("d", &GradientReport::d)
      .def_readonly("m", &GradientReport::m)
      .def_readonly("sparsity", &GradientReport::sparsity)
      .def_readonly("C", &GradientReport::C)
      .def_readonly("beta_max", &GradientReport::beta_max)
      .def_readonly("ratio_prop3", &GradientReport::ratio_prop3)
      .def_readonly("bound_prop3", &GradientReport::bound_prop3)
      .def_readonly("diff_prop4", &GradientReport::diff_prop4)
      .def_readonly("bound_prop4", &GradientReport::bound_prop4)
      .def_readonly("seed", &GradientReport::seed)
      .def_readonly("passed", &GradientReport::pass);
  m.def("construct_constricted", &construct_constricted, py::arg("n"), py::arg("d"),
        py::arg("C"), py::arg("spread"), py::arg("seed"));
  m.def("prop3_sweep", &prop3_sweep, py::arg("n_list"), py::arg("avg_degree"),
        py::arg("d"), py::arg("C_floor"), py::arg("seeds"), py::arg("seed0"),
        py::call_guard<py::gil_scoped_release>());
  m.def("prop4_sweep", &prop4_sweep, py::arg("n"), py::arg("d"), py::arg("C_list"),
        py::arg("seed"), py::call_guard<py::gil_scoped_release>());

  py::class_<LemmaCheck>(m, "LemmaCheck")
      .def_readonly("max_softplus_gap", &LemmaCheck::max_softplus_gap)
      .def_readonly("max_sigmoid_gap", &LemmaCheck::max_sigmoid_gap)
      .def_readonly("passed", &LemmaCheck::pass);
  m.def("lemma1_check", &lemma1_check, py::arg("x_max") = 40.0,
        py::arg("points") = 10000);

  py::class_<CollapseResult>(m, "CollapseResult")
      .def_readonly("min_row_norm", &CollapseResult::min_row_norm)
      .def_readonly("max_row_norm", &CollapseResult::max_row_norm)
      .def_readonly("p", &CollapseResult::p)
      .def_readonly("n", &CollapseResult::n)
      .def_readonly("graph_seed", &CollapseResult::graph_seed)
      .def_readonly("t0", &CollapseResult::t0)
      .def_readonly("certified", &CollapseResult::certified)
      .def_readonly("dipped_below_start", &CollapseResult::dipped_below_start)
      .def_property_readonly("constriction_trace", [](const CollapseResult& r) {
        std::vector<double> c;
        c.reserve(r.rows.size());
        for (const auto& row : r.rows) c.push_back(row.constriction);
        return c;
      });
  m.def("collapse_experiment", &collapse_experiment, py::arg("n"), py::arg("p"),
        py::arg("eta"), py::arg("init_scale"), py::arg("d"), py::arg("steps"),
        py::arg("seed"), py::call_guard<py::gil_scoped_release>());
}
