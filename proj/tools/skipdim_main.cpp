#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "skipdim/embedding.hpp"
#include "skipdim/graph.hpp"
#include "skipdim/linkpred.hpp"
#include "skipdim/runconfig.hpp"
#include "skipdim/theory.hpp"
#include "skipdim/trainer.hpp"
#include "skipdim/walks.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace skipdim;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out = "runs";
  int64_t seed = -1;  // >= 0 overrides the config seed
  int threads = 1;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, CommonFlags& f, bool config_required = true) {
  auto* c = sub->add_option("--config", f.config_path, "run config (JSON)");
  if (config_required) c->required();
  sub->add_option("--out", f.out, "output root directory");
  sub->add_option("--seed", f.seed, "override the config seed");
  sub->add_option("--threads", f.threads, "worker threads for walks")
      ->check(CLI::PositiveNumber);
  sub->add_option("--override", f.overrides,
                  "dotted.key=value applied to the config (repeatable)");
}

json load_raw_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return j;
}

RunConfig resolve_config(const CommonFlags& f) {
  json j = load_raw_config(f.config_path);
  for (const auto& o : f.overrides) apply_override(j, o);
  if (f.seed >= 0) j["seed"] = static_cast<uint64_t>(f.seed);
  return parse_run_config(j);
}

Graph load_graph(const RunConfig& cfg) {
  if (!cfg.dataset_path.empty()) return load_edge_list(cfg.dataset_path);
  const GeneratorSpec& g = cfg.generator;
  if (g.type == "sbm")
    return generate_sbm(g.n, g.blocks, g.p_within, g.p_between, cfg.seed);
  return generate_erdos_renyi(g.n, g.p, cfg.seed);
}

bool run_complete(const fs::path& dir) {
  return fs::exists(dir / "resolved_config.json") &&
         fs::exists(dir / "embeddings.bin") && fs::exists(dir / "trace.csv") &&
         fs::exists(dir / "split.train");
}

// Trains into <out>/<config-hash>; a directory that already holds a finished
// run is reused untouched so repeated invocations (and sweep cells) are
// idempotent. Returns the run directory.
fs::path do_train(const RunConfig& cfg, const std::string& out, int threads,
                  bool quiet = false) {
  const std::string hash = config_hash(cfg);
  const fs::path run_dir = fs::path(out) / hash;
  if (run_complete(run_dir)) {
    if (!quiet) std::cout << "run " << hash << " already complete: " << run_dir.string() << "\n";
    return run_dir;
  }

  Graph g = load_graph(cfg);
  EdgeSplit split = split_edges(g, cfg.split, cfg.seed);
  Graph g_train = training_subgraph(g, split.train);

  PairSet pairs;
  if (cfg.model == ModelKind::kLine) {
    pairs = pairs_from_edges(g_train);
  } else {
    auto walks = generate_walks(g_train, cfg.walk, cfg.seed, threads);
    pairs = pairs_from_walks(walks, cfg.walk.context_size, g_train.num_nodes());
  }
  if (pairs.pairs.empty()) throw ConfigError("no training pairs (empty training split?)");

  std::vector<int32_t> degrees(g_train.num_nodes());
  for (int32_t v = 0; v < g_train.num_nodes(); ++v) degrees[v] = g_train.degree(v);

  TrainingTrace trace;
  Matrix X = train(pairs, degrees, cfg.train, cfg.seed, &trace);

  fs::create_directories(run_dir);
  {
    std::ofstream out_json(run_dir / "resolved_config.json");
    out_json << resolved_json(cfg).dump(2) << "\n";
  }
  save_embeddings_text((run_dir / "embeddings.tsv").string(), X, g.labels());
  save_embeddings_binary((run_dir / "embeddings.bin").string(), X);
  save_trace_csv((run_dir / "trace.csv").string(), trace);
  save_split((run_dir / "split").string(), split, g);

  if (!quiet) {
    std::cout << "run " << hash << ": n=" << g.num_nodes() << " m=" << g.num_edges()
              << " pairs=" << pairs.pairs.size() << "\n";
    if (!trace.rows.empty()) {
      const TraceRow& last = trace.rows.back();
      std::cout << "final epoch " << last.epoch << ": positive_loss=" << last.positive_loss
                << " wall_ms=" << last.wall_clock_ms << "\n";
    }
    std::cout << "wrote " << run_dir.string() << "\n";
  }
  return run_dir;
}

MetricReport do_eval(const RunConfig& cfg, const fs::path& run_dir) {
  if (!run_complete(run_dir))
    throw IoError("no finished run at " + run_dir.string() + "; train first");
  Graph g = load_graph(cfg);
  EdgeSplit split = load_split((run_dir / "split").string(), g);
  Matrix X = load_embeddings_binary((run_dir / "embeddings.bin").string());
  if (X.rows() != g.num_nodes())
    throw IoError("embedding rows do not match the graph");

  Graph g_train = training_subgraph(g, split.train);
  EdgeClassifier clf = train_classifier(X, g_train, split.train, cfg.classifier, cfg.seed);
  MetricReport report =
      evaluate_embeddings(X, clf, g, split.test, split.test_negatives, cfg.rank, cfg.seed);
  report.dataset = cfg.dataset_name;
  report.variant = to_string(cfg.variant);
  report.seed = cfg.seed;
  return report;
}

void append_results_csv(const fs::path& path, const MetricReport& report) {
  const bool fresh = !fs::exists(path);
  std::ofstream out(path, std::ios::app);
  if (!out) throw IoError("cannot write " + path.string());
  if (fresh) out << MetricReport::csv_header() << "\n";
  out << report.to_csv_row();
}

double validation_auc(const RunConfig& cfg, const fs::path& run_dir) {
  Graph g = load_graph(cfg);
  EdgeSplit split = load_split((run_dir / "split").string(), g);
  if (split.valid.empty()) throw ConfigError("sweep needs a non-empty validation split");
  Matrix X = load_embeddings_binary((run_dir / "embeddings.bin").string());
  Graph g_train = training_subgraph(g, split.train);
  EdgeClassifier clf = train_classifier(X, g_train, split.train, cfg.classifier, cfg.seed);

  auto rng = substream(cfg.seed, "valid_negatives");
  std::vector<Edge> valid_neg =
      sample_non_edges(g, static_cast<int64_t>(split.valid.size()), rng);
  Vector sp = clf.score_edges(X, split.valid);
  Vector sn = clf.score_edges(X, valid_neg);
  std::vector<double> scores;
  std::vector<char> labels;
  scores.reserve(sp.size() + sn.size());
  for (int64_t i = 0; i < sp.size(); ++i) { scores.push_back(sp[i]); labels.push_back(1); }
  for (int64_t i = 0; i < sn.size(); ++i) { scores.push_back(sn[i]); labels.push_back(0); }
  return auc_roc(scores, labels);
}

// ---- subcommands ----

int cmd_train(const CommonFlags& f) {
  RunConfig cfg = resolve_config(f);
  do_train(cfg, f.out, f.threads);
  return 0;
}

int cmd_eval(const CommonFlags& f, const std::string& run_flag) {
  RunConfig cfg;
  fs::path run_dir;
  if (!run_flag.empty()) {
    run_dir = run_flag;
    json j = load_raw_config((run_dir / "resolved_config.json").string());
    for (const auto& o : f.overrides) apply_override(j, o);
    cfg = parse_run_config(j);
  } else {
    if (f.config_path.empty()) throw ConfigError("eval needs --config or --run");
    cfg = resolve_config(f);
    run_dir = fs::path(f.out) / config_hash(cfg);
  }
  MetricReport report = do_eval(cfg, run_dir);
  {
    json out_json = json::parse(report.to_json());
    out_json["config_hash"] = run_dir.filename().string();
    std::ofstream out(run_dir / "metrics.json");
    out << out_json.dump(2) << "\n";
  }
  // results accumulate next to the run directories
  fs::path results_dir = run_flag.empty() ? fs::path(f.out) : run_dir.parent_path();
  if (!results_dir.empty()) fs::create_directories(results_dir);
  append_results_csv(results_dir / "results.csv", report);
  std::cout << report.to_json() << "\n";
  return 0;
}

struct SweepGrids {
  std::vector<double> etas{0.001, 0.01, 0.1, 1.0};
  std::vector<double> ps{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> qs{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<int> n_negatives{5, 10, 100};
  std::vector<double> lambdas{0.1, 1.0, 10.0, 100.0};
};

struct SweepRow {
  int stage = 0;
  std::string variant;
  double eta = 0, p = 1, q = 1;
  int n_negative = 0;
  double lambda = 0;
  std::string hash;
  double valid_auc = 0;
  bool best = false;
};

void write_sweep_csv(const fs::path& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  out << "stage,variant,eta,p,q,n_negative,lambda,config_hash,valid_auc,best\n";
  for (const auto& r : rows) {
    out << r.stage << ',' << r.variant << ',' << r.eta << ',' << r.p << ',' << r.q << ','
        << r.n_negative << ',' << r.lambda << ',' << r.hash << ',' << r.valid_auc << ','
        << (r.best ? 1 : 0) << "\n";
  }
}

std::map<std::string, double> read_sweep_cache(const fs::path& path) {
  std::map<std::string, double> cache;
  std::ifstream in(path);
  if (!in) return cache;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() >= 9) cache[fields[7]] = std::stod(fields[8]);
  }
  return cache;
}

int cmd_sweep(const CommonFlags& f, const SweepGrids& grids) {
  if (grids.etas.empty() || grids.ps.empty() || grids.qs.empty() ||
      grids.n_negatives.empty() || grids.lambdas.empty())
    throw ConfigError("sweep grids must be non-empty");
  json base = load_raw_config(f.config_path);
  for (const auto& o : f.overrides) apply_override(base, o);
  if (f.seed >= 0) base["seed"] = static_cast<uint64_t>(f.seed);
  const RunConfig base_cfg = parse_run_config(base);

  const fs::path sweep_csv = fs::path(f.out) / "sweep.csv";
  fs::create_directories(f.out);
  std::map<std::string, double> cache = read_sweep_cache(sweep_csv);
  std::vector<SweepRow> rows;

  auto run_cell = [&](json cell_json, int stage) {
    RunConfig cfg = parse_run_config(cell_json);
    SweepRow row;
    row.stage = stage;
    row.variant = to_string(cfg.variant);
    row.eta = cfg.train.eta;
    row.p = cfg.walk.p;
    row.q = cfg.walk.q;
    row.n_negative = cfg.train.n_negative;
    row.lambda = cfg.train.lambda;
    row.hash = config_hash(cfg);
    auto hit = cache.find(row.hash);
    if (hit != cache.end()) {
      row.valid_auc = hit->second;
      std::cout << "cell " << row.hash << " cached (valid_auc=" << row.valid_auc << ")\n";
    } else {
      fs::path run_dir = do_train(cfg, f.out, f.threads, /*quiet=*/true);
      row.valid_auc = validation_auc(cfg, run_dir);
      cache[row.hash] = row.valid_auc;
      std::cout << "cell " << row.hash << " stage=" << stage << " eta=" << row.eta
                << " p=" << row.p << " q=" << row.q << " n_negative=" << row.n_negative
                << " lambda=" << row.lambda << " valid_auc=" << row.valid_auc << "\n";
    }
    rows.push_back(row);
    write_sweep_csv(sweep_csv, rows);
    return rows.size() - 1;
  };

  auto mark_best = [&](size_t begin, size_t end) {
    size_t best = begin;
    for (size_t i = begin; i < end; ++i)
      if (rows[i].valid_auc > rows[best].valid_auc) best = i;
    rows[best].best = true;
    return best;
  };

  // stage 1: learning rate on the vanilla variant
  json vanilla = base;
  vanilla["variant"] = "I";
  if (vanilla.contains("train")) vanilla["train"].erase("repulsion_mode");
  size_t s1_begin = rows.size();
  for (double eta : grids.etas) {
    json cell = vanilla;
    cell["train"]["eta"] = eta;
    run_cell(cell, 1);
  }
  size_t s1_best = mark_best(s1_begin, rows.size());
  const double best_eta = rows[s1_best].eta;
  std::cout << "stage 1 best eta=" << best_eta << "\n";

  // stage 2: walk parameters (node2vec only)
  double best_p = base_cfg.walk.p, best_q = base_cfg.walk.q;
  if (base_cfg.model == ModelKind::kNode2vec) {
    size_t s2_begin = rows.size();
    for (double p : grids.ps)
      for (double q : grids.qs) {
        json cell = vanilla;
        cell["train"]["eta"] = best_eta;
        cell["walk"]["p"] = p;
        cell["walk"]["q"] = q;
        run_cell(cell, 2);
      }
    size_t s2_best = mark_best(s2_begin, rows.size());
    best_p = rows[s2_best].p;
    best_q = rows[s2_best].q;
    std::cout << "stage 2 best p=" << best_p << " q=" << best_q << "\n";
  }

  // stage 3: regularization grid on the augmented variant
  json augmented = base;
  augmented["variant"] = "II";
  if (augmented.contains("train")) augmented["train"].erase("repulsion_mode");
  augmented["train"]["eta"] = best_eta;
  if (base_cfg.model == ModelKind::kNode2vec) {
    augmented["walk"]["p"] = best_p;
    augmented["walk"]["q"] = best_q;
  }
  size_t s3_begin = rows.size();
  for (int n_negative : grids.n_negatives)
    for (double lambda : grids.lambdas) {
      json cell = augmented;
      cell["train"]["n_negative"] = n_negative;
      cell["train"]["lambda"] = lambda;
      run_cell(cell, 3);
    }
  size_t s3_best = mark_best(s3_begin, rows.size());
  write_sweep_csv(sweep_csv, rows);

  json best_ii = augmented;
  best_ii["train"]["n_negative"] = rows[s3_best].n_negative;
  best_ii["train"]["lambda"] = rows[s3_best].lambda;
  {
    std::ofstream out(fs::path(f.out) / "best_config.json");
    out << resolved_json(parse_run_config(best_ii)).dump(2) << "\n";
  }
  std::cout << "stage 3 best n_negative=" << rows[s3_best].n_negative
            << " lambda=" << rows[s3_best].lambda
            << " valid_auc=" << rows[s3_best].valid_auc << "\n";
  std::cout << "wrote " << sweep_csv.string() << "\n";
  return 0;
}

int cmd_generate(const CommonFlags& f, const std::string& output) {
  RunConfig cfg = resolve_config(f);
  if (cfg.generator.type.empty())
    throw ConfigError("generate needs dataset.generator in the config");
  Graph g = load_graph(cfg);
  std::string path = output.empty() ? cfg.dataset_name + ".edges" : output;
  save_edge_list(path, g);
  std::cout << "generated " << cfg.generator.type << ": n=" << g.num_nodes()
            << " m=" << g.num_edges()
            << " clustering=" << average_clustering_coefficient(g) << "\n";
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_split(const std::string& input, const std::string& prefix, double train_frac,
              double valid_frac, double test_frac, uint64_t seed) {
  Graph g = load_edge_list(input);
  SplitRatios ratios{train_frac, valid_frac, test_frac};
  EdgeSplit split = split_edges(g, ratios, seed);
  std::string out_prefix = prefix;
  if (out_prefix.empty()) {
    out_prefix = input;
    auto dot = out_prefix.find_last_of('.');
    auto slash = out_prefix.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
      out_prefix = out_prefix.substr(0, dot);
  }
  if (fs::path(out_prefix).has_parent_path())
    fs::create_directories(fs::path(out_prefix).parent_path());
  save_split(out_prefix, split, g);
  std::cout << "split " << g.num_edges() << " edges: train=" << split.train.size()
            << " valid=" << split.valid.size() << " test=" << split.test.size()
            << " test_negatives=" << split.test_negatives.size() << "\n";
  std::cout << "wrote " << out_prefix << ".{train,valid,test,testneg}\n";
  return 0;
}

// ---- validate ----

json validate_prop1(const fs::path& dir, uint64_t seed, int count) {
  auto rng = substream(seed, "prop1");
  std::ofstream csv(dir / "prop1.csv");
  csv << "index,n,d,lhs,rhs,rel_err,pass\n";
  double max_rel = 0.0;
  bool pass = true;
  for (int i = 0; i < count; ++i) {
    int32_t n = 1 + static_cast<int32_t>(rng() % 40);
    int32_t d = 1 + static_cast<int32_t>(rng() % 16);
    Matrix X = init_embeddings(n, d, 1.0, rng());
    FrobeniusCheck c = check_frobenius_identity(X);
    max_rel = std::max(max_rel, c.rel_err);
    pass = pass && c.pass;
    csv << i << ',' << n << ',' << d << ',' << c.lhs << ',' << c.rhs << ',' << c.rel_err
        << ',' << (c.pass ? 1 : 0) << "\n";
  }
  return json{{"matrices", count}, {"max_rel_err", max_rel}, {"pass", pass}};
}

json validate_collapse(const fs::path& dir, uint64_t seed) {
  const std::vector<double> densities{0.05, 0.1, 0.2, 0.5};
  json traces = json::array();
  bool all_certified = true;
  bool sparse_dipped = false;
  for (double p : densities) {
    CollapseResult r = collapse_experiment(100, p, 5e-3, 1e-2, 16, 4000, seed);
    char name[64];
    snprintf(name, sizeof(name), "collapse_p%.2f.csv", p);
    write_collapse_csv((dir / name).string(), r);
    all_certified = all_certified && r.certified;
    if (p == 0.05) sparse_dipped = r.dipped_below_start;
    traces.push_back(json{{"p", p},
                          {"t0", r.t0},
                          {"certified", r.certified},
                          {"dipped_below_start", r.dipped_below_start},
                          {"graph_seed", r.graph_seed}});
  }
  return json{{"traces", traces},
              {"all_certified", all_certified},
              {"sparsest_dipped", sparse_dipped},
              {"pass", all_certified && sparse_dipped}};
}

json validate_prop3(const fs::path& dir, uint64_t seed) {
  const std::vector<int32_t> n_list{100, 200, 400, 800};
  auto reports = prop3_sweep(n_list, 10.0, 32, 0.5, 5, seed);
  write_gradient_reports_csv((dir / "prop3.csv").string(), reports);
  bool all_bounded = true;
  std::map<int32_t, std::vector<double>> by_n;
  for (const auto& r : reports) {
    all_bounded = all_bounded && r.pass;
    by_n[r.n].push_back(r.ratio_prop3);
  }
  std::vector<double> medians;
  for (int32_t n : n_list) {
    auto& v = by_n[n];
    std::sort(v.begin(), v.end());
    medians.push_back(v[v.size() / 2]);
  }
  bool decreasing = true;
  for (size_t i = 1; i < medians.size(); ++i)
    decreasing = decreasing && medians[i] < medians[i - 1];
  return json{{"medians", medians},
              {"all_bounded", all_bounded},
              {"median_decreasing", decreasing},
              {"pass", all_bounded && decreasing}};
}

json validate_prop4(const fs::path& dir, uint64_t seed) {
  const std::vector<double> c_list{0.5, 1.0, 2.0, 5.0, 10.0};
  auto reports = prop4_sweep(100, 32, c_list, seed);
  write_gradient_reports_csv((dir / "prop4.csv").string(), reports);
  bool all_bounded = true, decreasing = true;
  for (size_t i = 0; i < reports.size(); ++i) {
    all_bounded = all_bounded && reports[i].pass;
    if (i > 0) decreasing = decreasing && reports[i].diff_prop4 < reports[i - 1].diff_prop4;
  }
  json diffs = json::array();
  for (const auto& r : reports) diffs.push_back(r.diff_prop4);
  return json{{"diffs", diffs},
              {"all_bounded", all_bounded},
              {"strictly_decreasing", decreasing},
              {"pass", all_bounded && decreasing}};
}

json validate_lemma1() {
  LemmaCheck c = lemma1_check();
  return json{{"max_softplus_gap", c.max_softplus_gap},
              {"max_sigmoid_gap", c.max_sigmoid_gap},
              {"pass", c.pass}};
}

json validate_taylor(const fs::path& dir, uint64_t seed) {
  Graph g = generate_erdos_renyi(50, 0.2, seed);
  std::ofstream csv(dir / "taylor.csv");
  csv << "init_scale,max_abs_dot,deviation,bound,pass\n";
  bool pass = true;
  json rows = json::array();
  for (double scale : {0.05, 0.01, 0.001}) {
    Matrix X = init_embeddings(50, 8, scale, seed);
    TaylorReport r = taylor_surrogate_check(X, g, 0.1);
    pass = pass && r.pass;
    csv << scale << ',' << r.max_abs_dot << ',' << r.deviation << ',' << r.bound << ','
        << (r.pass ? 1 : 0) << "\n";
    rows.push_back(json{{"init_scale", scale},
                        {"max_abs_dot", r.max_abs_dot},
                        {"deviation", r.deviation},
                        {"bound", r.bound}});
  }
  return json{{"rows", rows}, {"pass", pass}};
}

int cmd_validate(const std::string& selector, const std::string& out, uint64_t seed) {
  const fs::path dir(out);
  fs::create_directories(dir);
  const std::vector<std::string> known{"prop1", "prop2", "collapse", "prop3",
                                       "prop4", "lemma1", "taylor"};
  std::vector<std::string> wanted;
  if (selector == "all") {
    wanted = {"prop1", "collapse", "prop3", "prop4", "lemma1", "taylor"};
  } else if (std::find(known.begin(), known.end(), selector) != known.end()) {
    wanted = {selector == "prop2" ? "collapse" : selector};
  } else {
    throw ConfigError("unknown selector '" + selector +
                      "' (prop1|prop2|collapse|prop3|prop4|lemma1|taylor|all)");
  }

  json summary;
  bool all_pass = true;
  for (const std::string& which : wanted) {
    json r;
    if (which == "prop1")
      r = validate_prop1(dir, seed, 1000);
    else if (which == "collapse")
      r = validate_collapse(dir, seed);
    else if (which == "prop3")
      r = validate_prop3(dir, seed);
    else if (which == "prop4")
      r = validate_prop4(dir, seed);
    else if (which == "lemma1")
      r = validate_lemma1();
    else
      r = validate_taylor(dir, seed);
    const bool pass = r.at("pass").get<bool>();
    all_pass = all_pass && pass;
    summary[which] = r;
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << which << "\n";
  }
  summary["pass"] = all_pass;
  {
    std::ofstream out_json(dir / "summary.json");
    out_json << summary.dump(2) << "\n";
  }
  std::cout << "wrote " << (dir / "summary.json").string() << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skip-gram graph embeddings with dimension-regularized repulsion"};
  app.require_subcommand(1);

  CommonFlags train_f, eval_f, sweep_f, gen_f;
  std::string eval_run, gen_output;

  auto* train_sub = app.add_subcommand("train", "train embeddings into a hashed run directory");
  add_common(train_sub, train_f);

  auto* eval_sub = app.add_subcommand("eval", "link-prediction metrics for a finished run");
  add_common(eval_sub, eval_f, /*config_required=*/false);
  eval_sub->add_option("--run", eval_run, "run directory (instead of --config)");

  auto* sweep_sub = app.add_subcommand("sweep", "staged hyperparameter sweep");
  add_common(sweep_sub, sweep_f);
  SweepGrids grids;
  sweep_sub->add_option("--etas", grids.etas, "stage-1 learning-rate grid")->delimiter(',');
  sweep_sub->add_option("--ps", grids.ps, "stage-2 return-parameter grid")->delimiter(',');
  sweep_sub->add_option("--qs", grids.qs, "stage-2 in-out-parameter grid")->delimiter(',');
  sweep_sub->add_option("--n-negatives", grids.n_negatives, "stage-3 period grid")->delimiter(',');
  sweep_sub->add_option("--lambdas", grids.lambdas, "stage-3 weight grid")->delimiter(',');

  auto* gen_sub = app.add_subcommand("generate", "write a synthetic graph as an edge list");
  add_common(gen_sub, gen_f);
  gen_sub->add_option("--output", gen_output, "edge-list path (default <name>.edges)");

  std::string split_input, split_prefix;
  double split_train = 0.7, split_valid = 0.1, split_test = 0.2;
  uint64_t split_seed = 1;
  auto* split_sub = app.add_subcommand("split", "partition an edge list into train/valid/test");
  split_sub->add_option("--input", split_input, "edge-list path")->required();
  split_sub->add_option("--prefix", split_prefix, "output prefix (default input stem)");
  split_sub->add_option("--train", split_train, "train fraction");
  split_sub->add_option("--valid", split_valid, "validation fraction");
  split_sub->add_option("--test", split_test, "test fraction");
  split_sub->add_option("--seed", split_seed, "split seed");

  std::string val_selector = "all", val_out = "validation";
  uint64_t val_seed = 1;
  auto* val_sub = app.add_subcommand("validate", "numerical checks of the analytic claims");
  val_sub->add_option("selector", val_selector,
                      "prop1|prop2|collapse|prop3|prop4|lemma1|taylor|all");
  val_sub->add_option("--out", val_out, "report directory");
  val_sub->add_option("--seed", val_seed, "harness seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_sub->parsed()) return cmd_train(train_f);
    if (eval_sub->parsed()) return cmd_eval(eval_f, eval_run);
    if (sweep_sub->parsed()) return cmd_sweep(sweep_f, grids);
    if (gen_sub->parsed()) return cmd_generate(gen_f, gen_output);
    if (split_sub->parsed())
      return cmd_split(split_input, split_prefix, split_train, split_valid, split_test,
                       split_seed);
    if (val_sub->parsed()) return cmd_validate(val_selector, val_out, val_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
