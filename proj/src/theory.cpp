#include "skipdim/theory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace skipdim {

namespace {

Matrix dense_adjacency(const Graph& g) {
  const int32_t n = g.num_nodes();
  Matrix S = Matrix::Zero(n, n);
  for (const auto& [a, b] : g.edges()) {
    S(a, b) = 1.0;
    S(b, a) = 1.0;
  }
  return S;
}

Matrix sigmoid_elementwise(const Matrix& Z) {
  return Z.unaryExpr([](double z) { return sigmoid(z); });
}

}  // namespace

double loss_positive(const Matrix& X, const Graph& g) {
  double loss = 0.0;
  for (const auto& [a, b] : g.edges())
    loss -= 2.0 * log_sigmoid(X.row(a).dot(X.row(b)));
  return loss;
}

double loss_negative(const Matrix& X, const Graph& g) {
  const int64_t n = X.rows();
  double loss = 0.0;
  for (int64_t i = 0; i < n; ++i)
    for (int64_t j = 0; j < n; ++j) {
      if (i != j && g.has_edge(static_cast<int32_t>(i), static_cast<int32_t>(j)))
        continue;
      loss -= log_sigmoid(-X.row(i).dot(X.row(j)));
    }
  return loss;
}

double loss_negative_all(const Matrix& X) {
  const int64_t n = X.rows();
  double loss = 0.0;
  for (int64_t i = 0; i < n; ++i)
    for (int64_t j = 0; j < n; ++j)
      loss -= log_sigmoid(-X.row(i).dot(X.row(j)));
  return loss;
}

double loss_regularizer(const Matrix& X) {
  return (X.transpose() * Vector::Ones(X.rows())).squaredNorm();
}

ExactGradients exact_gradients(const Matrix& X, const Graph& g) {
  const int64_t n = X.rows();
  if (n > 5000) throw ConfigError("exact_gradients: n too large for dense Gram");
  if (g.num_nodes() != n) throw ConfigError("exact_gradients: graph/embedding size mismatch");
  const Matrix S = dense_adjacency(g);
  const Matrix Z = X * X.transpose();
  const Matrix K = sigmoid_elementwise(Z);
  const Matrix Kneg = Matrix::Ones(n, n) - K;  // sigmoid(-z)
  const Matrix M = Matrix::Ones(n, n) - S;     // 1 where S_ij = 0 (diagonal included)

  ExactGradients out;
  out.pos = -2.0 * (S.array() * Kneg.array()).matrix() * X;
  out.neg = 2.0 * (M.array() * K.array()).matrix() * X;
  out.neg_all = 2.0 * K * X;
  Eigen::RowVectorXd colsum = X.colwise().sum();
  out.reg = 2.0 * Vector::Ones(n) * colsum;
  return out;
}

FrobeniusCheck check_frobenius_identity(const Matrix& X) {
  FrobeniusCheck c;
  c.lhs = (X * X.transpose()).squaredNorm();
  c.rhs = (X.transpose() * X).squaredNorm();
  c.abs_diff = std::abs(c.lhs - c.rhs);
  c.rel_err = c.abs_diff / std::max({c.lhs, c.rhs, 1e-300});
  c.pass = c.rel_err <= 1e-9;
  return c;
}

Matrix construct_constricted(int32_t n, int32_t d, double C, double spread,
                             uint64_t seed) {
  if (C <= 0.0) throw ConfigError("target constriction must be positive");
  for (int attempt = 0; attempt < 200; ++attempt) {
    auto rng = substream(seed, "constricted", static_cast<uint64_t>(attempt));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, spread);
    Vector mu(d);
    for (int32_t j = 0; j < d; ++j) mu[j] = normal(rng);
    mu.normalize();
    // Noise is i.i.d. per row with its dominant component along mu, so the
    // Gram entries spread multiplicatively above the minimum. The decay
    // bounds need that headroom: with entries concentrated at the minimum,
    // the n^2 e^{-2C} beta_max form is off by a factor of n.
    Matrix X(n, d);
    const double jitter = 0.01 / std::sqrt(static_cast<double>(d));
    for (int32_t i = 0; i < n; ++i) {
      const double s = 1.0 + uniform(rng);
      for (int32_t j = 0; j < d; ++j) X(i, j) = s * mu[j] + jitter * normal(rng);
    }
    const double cmin = constriction(X);
    if (cmin <= 1e-3) continue;  // jitter crossed zero; resample
    X *= std::sqrt(C / cmin);
    return X;
  }
  throw ConfigError("could not construct positively constricted embedding; lower spread");
}

namespace {

GradientReport report_for(const Matrix& X, const Graph& g, uint64_t seed) {
  GradientReport r;
  r.n = static_cast<int32_t>(X.rows());
  r.d = static_cast<int32_t>(X.cols());
  r.m = 2 * g.num_edges();
  r.sparsity = static_cast<double>(r.m) / (static_cast<double>(r.n) * r.n);
  r.C = constriction(X);
  r.beta_max = X.rowwise().squaredNorm().maxCoeff();
  r.seed = seed;

  ExactGradients grads = exact_gradients(X, g);
  r.norm_neg = grads.neg.norm();
  r.norm_neg_all = grads.neg_all.norm();
  r.norm_reg = grads.reg.norm();
  r.ratio_prop3 = (grads.neg_all - grads.neg).squaredNorm() / grads.neg.squaredNorm();
  const double denom = static_cast<double>(r.n) * r.n - static_cast<double>(r.m);
  r.bound_prop3 = (std::pow(r.beta_max, 3) / std::pow(r.C, 4)) *
                  (static_cast<double>(r.m) / denom);
  // proof-convention R gradient is 1X (each row = the column sums)
  Eigen::RowVectorXd colsum = X.colwise().sum();
  Matrix reg_proof = Vector::Ones(r.n) * colsum;
  r.diff_prop4 = (0.5 * grads.neg_all - reg_proof).squaredNorm();
  r.bound_prop4 = std::pow(static_cast<double>(r.n) * std::exp(-r.C), 2) * r.beta_max;
  return r;
}

}  // namespace

std::vector<GradientReport> prop3_sweep(const std::vector<int32_t>& n_list,
                                        double avg_degree, int32_t d, double C_floor,
                                        int32_t seeds, uint64_t seed0) {
  if (C_floor <= 0.0) throw ConfigError("C_floor must be positive");
  std::vector<GradientReport> out;
  for (int32_t n : n_list) {
    const double p = avg_degree / static_cast<double>(n - 1);
    for (int32_t s = 0; s < seeds; ++s) {
      const uint64_t seed = seed0 + static_cast<uint64_t>(s);
      Graph g = generate_erdos_renyi(n, p, seed * 1000003ULL + static_cast<uint64_t>(n));
      if (g.num_edges() == 0) continue;  // vanishing-probability corner at small n
      Matrix X = construct_constricted(n, d, C_floor, 4.0,
                                       seed * 7919ULL + static_cast<uint64_t>(n));
      GradientReport r = report_for(X, g, seed);
      r.pass = r.C >= C_floor - 1e-9 && r.ratio_prop3 <= r.bound_prop3;
      out.push_back(r);
    }
  }
  return out;
}

std::vector<GradientReport> prop4_sweep(int32_t n, int32_t d,
                                        const std::vector<double>& C_list,
                                        uint64_t seed) {
  // One shared base shape; each target constriction is a pure rescale of it.
  Matrix base = construct_constricted(n, d, 1.0, 4.0, seed);
  const double base_c = constriction(base);
  Graph empty = Graph::from_id_edges(n, {});
  std::vector<GradientReport> out;
  for (double C : C_list) {
    if (C <= 0.0) throw ConfigError("constriction targets must be positive");
    Matrix X = base * std::sqrt(C / base_c);
    GradientReport r = report_for(X, empty, seed);
    r.pass = r.diff_prop4 <= r.bound_prop4;
    out.push_back(r);
  }
  return out;
}

LemmaCheck lemma1_check(double x_max, int32_t points) {
  LemmaCheck c;
  c.max_softplus_gap = -std::numeric_limits<double>::infinity();
  c.max_sigmoid_gap = -std::numeric_limits<double>::infinity();
  for (int32_t i = 0; i < points; ++i) {
    const double x = x_max * static_cast<double>(i) / (points - 1);
    const double ex = std::exp(-x);
    // log(1 + e^x) - x computed stably as log1p(e^{-x}); 1 - sigmoid(x)
    // computed as sigmoid(-x) to avoid cancellation near 1
    c.max_softplus_gap = std::max(c.max_softplus_gap, std::log1p(ex) - ex);
    c.max_sigmoid_gap = std::max(c.max_sigmoid_gap, sigmoid(-x) - ex);
  }
  c.pass = c.max_softplus_gap <= 0.0 && c.max_sigmoid_gap <= 0.0;
  return c;
}

CollapseResult collapse_experiment(int32_t n, double p, double eta, double init_scale,
                                   int32_t d, int32_t steps, uint64_t seed) {
  CollapseResult res;
  res.p = p;
  res.n = n;
  // connectivity is a hypothesis of the collapse proposition
  uint64_t gseed = seed;
  Graph g;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    g = generate_erdos_renyi(n, p, gseed);
    if (g.is_connected()) break;
    gseed++;
  }
  if (!g.is_connected())
    throw ConfigError("no connected sample found; increase p or n");
  res.graph_seed = gseed;

  PairSet pairs = pairs_from_edges(g);
  Matrix X = init_embeddings(n, d, init_scale, seed);
  res.rows.reserve(steps + 1);
  for (int32_t t = 0; t <= steps; ++t) {
    TraceRow row;
    row.epoch = t;
    row.positive_loss = loss_positive(X, g);
    row.constriction = constriction(X);
    res.rows.push_back(row);
    Vector norms = X.rowwise().norm();
    res.min_row_norm.push_back(norms.minCoeff());
    res.max_row_norm.push_back(norms.maxCoeff());
    if (t < steps) positive_update(X, pairs.pairs, eta);
  }

  // smallest t0 such that C is positive and non-decreasing (1e-9 slack) from
  // t0 through the end of the recorded horizon
  const int32_t T = static_cast<int32_t>(res.rows.size()) - 1;
  int32_t good_from = -1;
  for (int32_t t = T; t >= 0; --t) {
    const double c = res.rows[t].constriction;
    if (c <= 0.0) break;
    if (t < T && res.rows[t + 1].constriction < c - 1e-9) break;
    good_from = t;
  }
  // require some certified run after t0 (not just the final point)
  if (good_from >= 0 && good_from < T) {
    res.t0 = good_from;
    res.certified = true;
  }
  const double c0 = res.rows.front().constriction;
  for (const auto& row : res.rows)
    if (row.constriction < c0 - 1e-15) {
      res.dipped_below_start = true;
      break;
    }
  return res;
}

TaylorReport taylor_surrogate_check(const Matrix& X, const Graph& g, double eta) {
  TaylorReport rep;
  const Matrix Z = X * X.transpose();
  rep.max_abs_dot = Z.cwiseAbs().maxCoeff();
  if (rep.max_abs_dot > 0.1)
    throw ConfigError("taylor check requires max |dot| <= 0.1 (near-origin regime)");

  PairSet pairs = pairs_from_edges(g);
  Matrix truth = X;
  positive_update(truth, pairs.pairs, eta);

  // surrogate step: same update with sigmoid(-z) replaced by 1/2 - z/4
  Matrix surrogate = X;
  Matrix delta = Matrix::Zero(X.rows(), X.cols());
  for (const auto& [i, j] : pairs.pairs) {
    const double z = X.row(i).dot(X.row(j));
    delta.row(i) += eta * (0.5 - 0.25 * z) * X.row(j);
    delta.row(j) += eta * (0.5 - 0.25 * z) * X.row(i);
  }
  surrogate += delta;

  rep.deviation = (truth - surrogate).cwiseAbs().maxCoeff();
  rep.bound = rep.max_abs_dot * rep.max_abs_dot * eta;
  rep.pass = rep.deviation <= rep.bound;
  return rep;
}

void write_gradient_reports_csv(const std::string& path,
                                const std::vector<GradientReport>& reports) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report: " + path);
  out << "n,d,m,sparsity,C,beta_max,norm_neg,norm_neg_all,norm_reg,"
         "ratio_prop3,bound_prop3,diff_prop4,bound_prop4,seed,pass\n";
  for (const auto& r : reports)
    out << r.n << ',' << r.d << ',' << r.m << ',' << r.sparsity << ',' << r.C << ','
        << r.beta_max << ',' << r.norm_neg << ',' << r.norm_neg_all << ','
        << r.norm_reg << ',' << r.ratio_prop3 << ',' << r.bound_prop3 << ','
        << r.diff_prop4 << ',' << r.bound_prop4 << ',' << r.seed << ','
        << (r.pass ? 1 : 0) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

void write_collapse_csv(const std::string& path, const CollapseResult& r) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write trace: " + path);
  out << "step,constriction,min_row_norm,max_row_norm,positive_loss\n";
  for (size_t i = 0; i < r.rows.size(); ++i)
    out << r.rows[i].epoch << ',' << r.rows[i].constriction << ','
        << r.min_row_norm[i] << ',' << r.max_row_norm[i] << ','
        << r.rows[i].positive_loss << '\n';
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace skipdim
