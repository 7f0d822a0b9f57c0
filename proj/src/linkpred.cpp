#include "skipdim/linkpred.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include "json.hpp"
#include "skipdim/trainer.hpp"

namespace skipdim {

void ClassifierConfig::validate() const {
  if (hidden < 1) throw ConfigError("classifier hidden width must be >= 1");
  if (epochs < 1) throw ConfigError("classifier epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("classifier batch_size must be >= 1");
  if (eta <= 0.0) throw ConfigError("classifier eta must be positive");
}

EdgeClassifier::EdgeClassifier(int32_t input_dim, int32_t hidden, uint64_t seed) {
  if (input_dim < 2) throw ConfigError("classifier input needs d >= 1 per node");
  auto rng = substream(seed, "classifier_init");
  std::normal_distribution<double> normal(0.0, 1.0);
  W1_.resize(hidden, input_dim);
  const double s1 = std::sqrt(2.0 / input_dim);
  for (int32_t i = 0; i < hidden; ++i)
    for (int32_t j = 0; j < input_dim; ++j) W1_(i, j) = s1 * normal(rng);
  b1_ = Vector::Zero(hidden);
  w2_.resize(hidden);
  const double s2 = std::sqrt(2.0 / hidden);
  for (int32_t i = 0; i < hidden; ++i) w2_[i] = s2 * normal(rng);
  b2_ = 0.0;
}

EdgeClassifier EdgeClassifier::from_weights(Matrix W1, Vector b1, Vector w2,
                                            double b2) {
  if (W1.rows() < 1 || W1.cols() < 2) throw ConfigError("classifier weights need hidden >= 1, input >= 2");
  if (b1.size() != W1.rows() || w2.size() != W1.rows())
    throw ConfigError("classifier weight shapes disagree");
  EdgeClassifier clf;
  clf.W1_ = std::move(W1);
  clf.b1_ = std::move(b1);
  clf.w2_ = std::move(w2);
  clf.b2_ = b2;
  return clf;
}

Vector EdgeClassifier::predict(const Matrix& features) const {
  Matrix H = (features * W1_.transpose()).rowwise() + b1_.transpose();
  H = H.cwiseMax(0.0);
  Vector logits = H * w2_;
  logits.array() += b2_;
  return logits.unaryExpr([](double z) { return sigmoid(z); });
}

double EdgeClassifier::score_edge(const Matrix& X, int32_t u, int32_t v) const {
  Matrix f(2, 2 * X.cols());
  f.row(0) << X.row(u), X.row(v);
  f.row(1) << X.row(v), X.row(u);
  Vector p = predict(f);
  return 0.5 * (p[0] + p[1]);
}

Vector EdgeClassifier::score_edges(const Matrix& X, const std::vector<Edge>& edges) const {
  const int64_t d = X.cols();
  Matrix f(2 * static_cast<int64_t>(edges.size()), 2 * d);
  for (size_t i = 0; i < edges.size(); ++i) {
    f.row(2 * i) << X.row(edges[i].first), X.row(edges[i].second);
    f.row(2 * i + 1) << X.row(edges[i].second), X.row(edges[i].first);
  }
  Vector p = predict(f);
  Vector out(static_cast<int64_t>(edges.size()));
  for (size_t i = 0; i < edges.size(); ++i) out[i] = 0.5 * (p[2 * i] + p[2 * i + 1]);
  return out;
}

double EdgeClassifier::fit(const Matrix& X,
                           const std::vector<std::tuple<int32_t, int32_t, double>>& rows,
                           const ClassifierConfig& cfg, uint64_t seed) {
  cfg.validate();
  const int64_t d = X.cols();
  const int64_t total = static_cast<int64_t>(rows.size());
  if (total == 0) throw ConfigError("classifier needs training rows");

  Matrix mW1 = Matrix::Zero(W1_.rows(), W1_.cols()), vW1 = mW1;
  Vector mb1 = Vector::Zero(b1_.size()), vb1 = mb1;
  Vector mw2 = Vector::Zero(w2_.size()), vw2 = mw2;
  double mb2 = 0.0, vb2 = 0.0;
  int64_t step = 0;
  double last_loss = 0.0;

  std::vector<int64_t> order(total);
  std::iota(order.begin(), order.end(), 0);

  for (int32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    {
      auto rng = substream(seed, "classifier_shuffle", static_cast<uint64_t>(epoch));
      std::shuffle(order.begin(), order.end(), rng);
    }
    double epoch_loss = 0.0;
    for (int64_t lo = 0; lo < total; lo += cfg.batch_size) {
      const int64_t hi = std::min(total, lo + cfg.batch_size);
      const int64_t B = hi - lo;
      Matrix F(B, 2 * d);
      Vector y(B);
      for (int64_t r = 0; r < B; ++r) {
        const auto& [u, v, lab] = rows[order[lo + r]];
        F.row(r) << X.row(u), X.row(v);
        y[r] = lab;
      }
      Matrix H = (F * W1_.transpose()).rowwise() + b1_.transpose();
      Matrix Hr = H.cwiseMax(0.0);
      Vector logits = Hr * w2_;
      logits.array() += b2_;
      for (int64_t r = 0; r < B; ++r)
        epoch_loss -= y[r] * log_sigmoid(logits[r]) + (1.0 - y[r]) * log_sigmoid(-logits[r]);

      Vector dlogit(B);
      for (int64_t r = 0; r < B; ++r)
        dlogit[r] = (sigmoid(logits[r]) - y[r]) / static_cast<double>(B);
      Vector gw2 = Hr.transpose() * dlogit;
      const double gb2 = dlogit.sum();
      Matrix dH = dlogit * w2_.transpose();
      dH = (H.array() > 0.0).select(dH, 0.0);
      Matrix gW1 = dH.transpose() * F;
      Vector gb1 = dH.colwise().sum();

      step++;
      const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(step));
      auto adam = [&](auto& param, auto& m, auto& v, const auto& grad) {
        m = cfg.adam_beta1 * m + (1.0 - cfg.adam_beta1) * grad;
        v = cfg.adam_beta2 * v.array().matrix() +
            (1.0 - cfg.adam_beta2) * grad.cwiseProduct(grad);
        param.array() -=
            cfg.eta * (m.array() / bc1) / ((v.array() / bc2).sqrt() + cfg.adam_eps);
      };
      adam(W1_, mW1, vW1, gW1);
      adam(b1_, mb1, vb1, gb1);
      adam(w2_, mw2, vw2, gw2);
      mb2 = cfg.adam_beta1 * mb2 + (1.0 - cfg.adam_beta1) * gb2;
      vb2 = cfg.adam_beta2 * vb2 + (1.0 - cfg.adam_beta2) * gb2 * gb2;
      b2_ -= cfg.eta * (mb2 / bc1) / (std::sqrt(vb2 / bc2) + cfg.adam_eps);
    }
    if (!std::isfinite(epoch_loss) || !W1_.allFinite())
      throw TrainError("classifier loss non-finite at epoch " + std::to_string(epoch));
    last_loss = epoch_loss / static_cast<double>(total);
  }
  return last_loss;
}

namespace {

std::vector<std::tuple<int32_t, int32_t, double>> both_orders(
    const std::vector<Edge>& edges, double label) {
  std::vector<std::tuple<int32_t, int32_t, double>> rows;
  rows.reserve(edges.size() * 2);
  for (const auto& [a, b] : edges) {
    rows.emplace_back(a, b, label);
    rows.emplace_back(b, a, label);
  }
  return rows;
}

}  // namespace

EdgeClassifier train_classifier(const Matrix& X, const Graph& g,
                                const std::vector<Edge>& train_pos,
                                const ClassifierConfig& cfg, uint64_t seed) {
  cfg.validate();
  if (train_pos.empty()) throw ConfigError("no positive training edges");
  EdgeClassifier clf(static_cast<int32_t>(2 * X.cols()), cfg.hidden, seed);
  // fresh negatives every epoch (one fit-epoch per outer epoch)
  ClassifierConfig one = cfg;
  one.epochs = 1;
  auto pos_rows = both_orders(train_pos, 1.0);
  for (int32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    auto rng = substream(seed, "classifier_negatives", static_cast<uint64_t>(epoch));
    auto negatives = sample_non_edges(g, static_cast<int64_t>(train_pos.size()), rng);
    auto rows = pos_rows;
    auto neg_rows = both_orders(negatives, 0.0);
    rows.insert(rows.end(), neg_rows.begin(), neg_rows.end());
    clf.fit(X, rows, one, seed + static_cast<uint64_t>(epoch) * 0x9e37ULL);
  }
  return clf;
}

EdgeClassifier train_classifier_with_negatives(const Matrix& X,
                                               const std::vector<Edge>& train_pos,
                                               const std::vector<Edge>& train_neg,
                                               const ClassifierConfig& cfg, uint64_t seed) {
  cfg.validate();
  if (train_pos.size() != train_neg.size())
    throw ConfigError("positive and negative training edge counts must match");
  EdgeClassifier clf(static_cast<int32_t>(2 * X.cols()), cfg.hidden, seed);
  auto rows = both_orders(train_pos, 1.0);
  auto neg_rows = both_orders(train_neg, 0.0);
  rows.insert(rows.end(), neg_rows.begin(), neg_rows.end());
  clf.fit(X, rows, cfg, seed);
  return clf;
}

double auc_roc(const std::vector<double>& scores, const std::vector<char>& labels) {
  if (scores.size() != labels.size()) throw ConfigError("scores/labels length mismatch");
  int64_t P = 0, N = 0;
  for (char l : labels) (l ? P : N)++;
  if (P == 0 || N == 0) throw ConfigError("auc needs both classes");

  std::vector<int64_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](int64_t a, int64_t b) { return scores[a] < scores[b]; });
  // midranks over tie groups
  double pos_rank_sum = 0.0;
  size_t i = 0;
  while (i < idx.size()) {
    size_t j = i;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) j++;
    const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (size_t t = i; t < j; ++t)
      if (labels[idx[t]]) pos_rank_sum += midrank;
    i = j;
  }
  const double u = pos_rank_sum - 0.5 * static_cast<double>(P) * (P + 1);
  return u / (static_cast<double>(P) * static_cast<double>(N));
}

std::string MetricReport::to_json() const {
  nlohmann::json j;
  j["auc_roc"] = auc_roc;
  j["mrr"] = mrr;
  nlohmann::json hk = nlohmann::json::object();
  for (const auto& [k, v] : hits_at_k) hk["hits_at_" + std::to_string(k)] = v;
  j["hits"] = hk;
  j["nodes_evaluated"] = nodes_evaluated;
  j["nodes_skipped"] = nodes_skipped;
  j["dataset"] = dataset;
  j["variant"] = variant;
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

std::string MetricReport::csv_header() {
  return "dataset,variant,seed,auc_roc,mrr,hits_k,hits_value,nodes_evaluated,nodes_skipped";
}

std::string MetricReport::to_csv_row() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : hits_at_k) {
    if (!first) os << '\n';
    first = false;
    os << dataset << ',' << variant << ',' << seed << ',' << auc_roc << ',' << mrr << ','
       << k << ',' << v << ',' << nodes_evaluated << ',' << nodes_skipped;
  }
  if (hits_at_k.empty())
    os << dataset << ',' << variant << ',' << seed << ',' << auc_roc << ',' << mrr
       << ",,," << nodes_evaluated << ',' << nodes_skipped;
  return os.str();
}

MetricReport node_level_rank_metrics(const Matrix& X, const EdgeClassifier& clf,
                                     const Graph& g, const std::vector<Edge>& test_pos,
                                     const RankConfig& cfg, uint64_t seed) {
  if (cfg.candidates_per_node < 1) throw ConfigError("need candidates_per_node >= 1");
  MetricReport rep;
  rep.seed = seed;
  const int32_t n = g.num_nodes();
  std::vector<std::vector<int32_t>> true_neighbors(n);
  for (const auto& [a, b] : test_pos) {
    true_neighbors[a].push_back(b);
    true_neighbors[b].push_back(a);
  }

  double mrr_sum = 0.0;
  std::map<int32_t, double> hits_sum;
  for (int32_t k : cfg.k_list) hits_sum[k] = 0.0;

  for (int32_t u = 0; u < n; ++u) {
    if (true_neighbors[u].empty()) continue;
    auto rng = substream(seed, "rank_candidates", static_cast<uint64_t>(u));
    // non-neighbors of u: not adjacent anywhere in g, not u itself
    std::vector<int32_t> candidates;
    candidates.reserve(cfg.candidates_per_node);
    std::unordered_set<int32_t> seen;
    std::uniform_int_distribution<int32_t> pick(0, n - 1);
    const int64_t max_attempts =
        static_cast<int64_t>(cfg.candidates_per_node) * 200 + 1000;
    int64_t attempts = 0;
    while (static_cast<int32_t>(candidates.size()) < cfg.candidates_per_node &&
           attempts++ < max_attempts) {
      int32_t v = pick(rng);
      if (v == u || g.has_edge(u, v)) continue;
      if (!seen.insert(v).second) continue;
      candidates.push_back(v);
    }
    if (candidates.empty()) {
      rep.nodes_skipped++;
      continue;
    }
    std::vector<Edge> cand_edges, true_edges;
    for (int32_t v : candidates) cand_edges.emplace_back(u, v);
    for (int32_t v : true_neighbors[u]) true_edges.emplace_back(u, v);
    Vector cand_scores = clf.score_edges(X, cand_edges);
    Vector true_scores = clf.score_edges(X, true_edges);

    std::vector<double> sorted_cand(cand_scores.data(), cand_scores.data() + cand_scores.size());
    std::sort(sorted_cand.begin(), sorted_cand.end());
    int64_t best_rank = std::numeric_limits<int64_t>::max();
    for (int64_t t = 0; t < true_scores.size(); ++t) {
      // pessimistic: true edge placed after all candidates with score >= its own
      const int64_t geq = static_cast<int64_t>(
          sorted_cand.end() -
          std::lower_bound(sorted_cand.begin(), sorted_cand.end(), true_scores[t]));
      best_rank = std::min(best_rank, geq + 1);
    }
    mrr_sum += 1.0 / static_cast<double>(best_rank);
    for (int32_t k : cfg.k_list) hits_sum[k] += best_rank <= k ? 1.0 : 0.0;
    rep.nodes_evaluated++;
  }
  if (rep.nodes_evaluated > 0) {
    rep.mrr = mrr_sum / static_cast<double>(rep.nodes_evaluated);
    for (int32_t k : cfg.k_list)
      rep.hits_at_k[k] = hits_sum[k] / static_cast<double>(rep.nodes_evaluated);
  }
  return rep;
}

MetricReport evaluate_embeddings(const Matrix& X, const EdgeClassifier& clf,
                                 const Graph& g, const std::vector<Edge>& test_pos,
                                 const std::vector<Edge>& test_neg,
                                 const RankConfig& cfg, uint64_t seed) {
  if (test_pos.empty()) throw ConfigError("empty test set");
  if (test_pos.size() != test_neg.size())
    throw ConfigError("test negatives must match test positives in count");
  MetricReport rep = node_level_rank_metrics(X, clf, g, test_pos, cfg, seed);
  Vector sp = clf.score_edges(X, test_pos);
  Vector sn = clf.score_edges(X, test_neg);
  std::vector<double> scores;
  std::vector<char> labels;
  scores.reserve(sp.size() + sn.size());
  for (int64_t i = 0; i < sp.size(); ++i) {
    scores.push_back(sp[i]);
    labels.push_back(1);
  }
  for (int64_t i = 0; i < sn.size(); ++i) {
    scores.push_back(sn[i]);
    labels.push_back(0);
  }
  rep.auc_roc = auc_roc(scores, labels);
  rep.seed = seed;
  return rep;
}

}  // namespace skipdim
