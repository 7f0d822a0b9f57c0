#include "skipdim/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>

namespace skipdim {

void TrainConfig::validate() const {
  if (dim <= 0) throw ConfigError("dim must be positive");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (batch_size <= 0) throw ConfigError("batch_size must be positive");
  if (eta <= 0.0) throw ConfigError("eta must be positive");
  if (k < 0) throw ConfigError("k must be >= 0");
  if (alpha < 0.0) throw ConfigError("alpha must be >= 0");
  if (lambda < 0.0) throw ConfigError("lambda must be >= 0");
  if (n_negative <= 0) throw ConfigError("n_negative must be positive");
  if (init_scale <= 0.0) throw ConfigError("init_scale must be positive");
  if (adam_beta1 < 0.0 || adam_beta1 >= 1.0 || adam_beta2 < 0.0 || adam_beta2 >= 1.0)
    throw ConfigError("adam betas must be in [0, 1)");
  if (adam_eps <= 0.0) throw ConfigError("adam_eps must be positive");
  if (repulsion == RepulsionMode::kNone && epochs > none_epoch_cap && !allow_uncapped_none)
    throw ConfigError(
        "repulsion 'none' is capped at " + std::to_string(none_epoch_cap) +
        " epochs; set allow_uncapped_none to run longer");
}

namespace {

// Scratch accumulator over a fixed row set: zeroed lazily via the touched list.
struct RowAccumulator {
  Matrix buf;
  std::vector<int32_t> touched;
  std::vector<char> mark;

  explicit RowAccumulator(int64_t n, int64_t d) : buf(n, d), mark(n, 0) {
    buf.setZero();
  }
  Matrix::RowXpr row(int32_t r) {
    if (!mark[r]) {
      mark[r] = 1;
      touched.push_back(r);
    }
    return buf.row(r);
  }
  void reset() {
    for (int32_t r : touched) {
      buf.row(r).setZero();
      mark[r] = 0;
    }
    touched.clear();
  }
};

}  // namespace

void positive_update(Matrix& X, PairView batch, double eta) {
  RowAccumulator acc(X.rows(), X.cols());
  for (const auto& [i, j] : batch) {
    const double z = X.row(i).dot(X.row(j));
    const double c = eta * sigmoid(-z);
    acc.row(i) += c * X.row(j);
    acc.row(j) += c * X.row(i);
  }
  for (int32_t r : acc.touched) X.row(r) += acc.buf.row(r);
}

void sgns_update(Matrix& X, PairView batch, const NegativeSampler& sampler, int32_t k,
                 double eta, std::mt19937_64& rng, bool paper_sign) {
  RowAccumulator acc(X.rows(), X.cols());
  for (const auto& [i, j] : batch) {
    (void)j;
    for (int32_t t = 0; t < k; ++t) {
      const int32_t neg = sampler.sample(rng);
      const double z = X.row(i).dot(X.row(neg));
      const double c = eta * (paper_sign ? sigmoid(-z) : sigmoid(z));
      acc.row(i) -= c * X.row(neg);
      acc.row(neg) -= c * X.row(i);
    }
  }
  for (int32_t r : acc.touched) X.row(r) += acc.buf.row(r);
}

void dimreg_update(Matrix& X, double lambda) {
  if (X.rows() == 0) return;
  Eigen::RowVectorXd colsum = X.colwise().sum();
  X.rowwise() -= (lambda / static_cast<double>(X.rows())) * colsum;
}

void dimreg_update(Matrix& X, double lambda, const Vector& p) {
  if (p.size() != X.rows()) throw ConfigError("weight vector length != rows");
  Eigen::RowVectorXd proj = p.transpose() * X;
  X.noalias() -= (lambda * static_cast<double>(X.rows())) * (p * proj);
}

Vector degree_weight_vector(const std::vector<int32_t>& degrees, double alpha) {
  Vector p(static_cast<int64_t>(degrees.size()));
  double total = 0.0;
  for (size_t i = 0; i < degrees.size(); ++i) {
    p[static_cast<int64_t>(i)] =
        alpha == 0.0 ? 1.0 : std::pow(static_cast<double>(degrees[i]), alpha);
    total += p[static_cast<int64_t>(i)];
  }
  if (total <= 0.0) throw ConfigError("weight vector sums to zero");
  p /= total;
  return p;
}

void adam_step(AdamState& state, Matrix& params, const Matrix& grad, double eta,
               double beta1, double beta2, double eps) {
  if (state.m.rows() != params.rows() || state.m.cols() != params.cols() ||
      grad.rows() != params.rows() || grad.cols() != params.cols()) {
    throw ConfigError("adam_step shape mismatch");
  }
  state.t += 1;
  state.m = beta1 * state.m + (1.0 - beta1) * grad;
  state.v = beta2 * state.v + (1.0 - beta2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(state.t));
  params -= (eta * (state.m / c1).array() /
             ((state.v / c2).array().sqrt() + eps))
                .matrix();
}

Matrix train(const PairSet& pairs, const std::vector<int32_t>& degrees,
             const TrainConfig& cfg, uint64_t seed, TrainingTrace* trace) {
  cfg.validate();
  Matrix X = init_embeddings(pairs.num_nodes, cfg.dim, cfg.init_scale, seed);
  return train_from(std::move(X), pairs, degrees, cfg, seed, trace);
}

Matrix train_from(Matrix X, const PairSet& pairs, const std::vector<int32_t>& degrees,
                  const TrainConfig& cfg, uint64_t seed, TrainingTrace* trace) {
  cfg.validate();
  const int64_t n = X.rows();
  if (n != pairs.num_nodes) throw ConfigError("embedding rows != pair-set nodes");
  for (const auto& [i, j] : pairs.pairs)
    if (i < 0 || j < 0 || i >= n || j >= n) throw ConfigError("pair id out of range");

  const bool use_sgns = cfg.repulsion == RepulsionMode::kSgns && cfg.k > 0;
  const bool use_dimreg = cfg.repulsion == RepulsionMode::kDimreg;
  std::unique_ptr<NegativeSampler> sampler;
  if (use_sgns) {
    if (static_cast<int64_t>(degrees.size()) != n)
      throw ConfigError("degree vector length != nodes");
    sampler = std::make_unique<NegativeSampler>(degrees, cfg.alpha);
  }
  Vector weight_p;
  if (use_dimreg && cfg.weight_mode == WeightVectorMode::kDegreeAlpha) {
    if (static_cast<int64_t>(degrees.size()) != n)
      throw ConfigError("degree vector length != nodes");
    weight_p = degree_weight_vector(degrees, cfg.weight_alpha);
  }

  std::vector<std::pair<int32_t, int32_t>> order(pairs.pairs);
  auto neg_rng = substream(seed, "negatives");

  const bool adam = cfg.optimizer == OptimizerKind::kAdam;
  Matrix adam_m, adam_v;
  if (adam) {
    adam_m = Matrix::Zero(n, X.cols());
    adam_v = Matrix::Zero(n, X.cols());
  }
  int64_t adam_t = 0;

  RowAccumulator acc(n, X.cols());
  int64_t batch_counter = 0;

  for (int32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto t_start = std::chrono::steady_clock::now();
    {
      auto rng = substream(seed, "epoch_shuffle", static_cast<uint64_t>(epoch));
      std::shuffle(order.begin(), order.end(), rng);
    }
    double positive_loss = 0.0;
    for (int64_t lo = 0; lo < static_cast<int64_t>(order.size()); lo += cfg.batch_size) {
      const int64_t hi = std::min<int64_t>(order.size(), lo + cfg.batch_size);
      PairView batch(order.data() + lo, static_cast<size_t>(hi - lo));

      // Attraction and repulsion both read the pre-batch snapshot; `acc`
      // collects the ascent direction (optionally scaled by eta for sgd).
      const double scale = adam ? 1.0 : cfg.eta;
      for (const auto& [i, j] : batch) {
        const double z = X.row(i).dot(X.row(j));
        positive_loss -= log_sigmoid(z);
        const double c = scale * sigmoid(-z);
        acc.row(i) += c * X.row(j);
        acc.row(j) += c * X.row(i);
      }
      if (use_sgns) {
        for (const auto& [i, j] : batch) {
          (void)j;
          for (int32_t t = 0; t < cfg.k; ++t) {
            const int32_t neg = sampler->sample(neg_rng);
            const double z = X.row(i).dot(X.row(neg));
            const double c =
                scale * (cfg.sgns_paper_sign ? sigmoid(-z) : sigmoid(z));
            acc.row(i) -= c * X.row(neg);
            acc.row(neg) -= c * X.row(i);
          }
        }
      }

      bool bad = false;
      if (adam) {
        // Moments update lazily on the rows this batch touched; bias
        // correction uses the global batch step.
        adam_t++;
        const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(adam_t));
        const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(adam_t));
        for (int32_t r : acc.touched) {
          auto g = -acc.buf.row(r);  // loss gradient
          adam_m.row(r) = cfg.adam_beta1 * adam_m.row(r) + (1.0 - cfg.adam_beta1) * g;
          adam_v.row(r) =
              cfg.adam_beta2 * adam_v.row(r) + (1.0 - cfg.adam_beta2) * g.cwiseProduct(g);
          auto mhat = adam_m.row(r) / bc1;
          auto vhat = (adam_v.row(r) / bc2).cwiseSqrt();
          X.row(r) -= cfg.eta * (mhat.array() / (vhat.array() + cfg.adam_eps)).matrix();
          if (!X.row(r).allFinite()) bad = true;
        }
      } else {
        for (int32_t r : acc.touched) {
          X.row(r) += acc.buf.row(r);
          if (!X.row(r).allFinite()) bad = true;
        }
      }
      acc.reset();
      batch_counter++;

      if (use_dimreg && batch_counter % cfg.n_negative == 0) {
        if (cfg.weight_mode == WeightVectorMode::kUniform)
          dimreg_update(X, cfg.lambda);
        else
          dimreg_update(X, cfg.lambda, weight_p);
        if (!X.allFinite()) bad = true;
      }
      if (bad)
        throw TrainError("non-finite embedding at epoch " + std::to_string(epoch) +
                         ", batch " + std::to_string(lo / cfg.batch_size) +
                         " (global batch " + std::to_string(batch_counter - 1) + ")");
    }

    if (trace) {
      TraceRow row;
      row.epoch = epoch;
      row.positive_loss = positive_loss;
      row.constriction = cfg.track_constriction
                             ? constriction(X)
                             : std::numeric_limits<double>::quiet_NaN();
      row.wall_clock_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                    t_start)
              .count();
      trace->rows.push_back(row);
    }
  }
  return X;
}

}  // namespace skipdim
