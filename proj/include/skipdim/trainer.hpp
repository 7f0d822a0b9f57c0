#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "skipdim/embedding.hpp"
#include "skipdim/sampler.hpp"
#include "skipdim/walks.hpp"

namespace skipdim {

enum class RepulsionMode { kSgns, kNone, kDimreg };
enum class OptimizerKind { kSgd, kAdam };
enum class WeightVectorMode { kUniform, kDegreeAlpha };

struct TrainConfig {
  int32_t dim = 128;
  int32_t epochs = 5;
  int64_t batch_size = 1024;
  double eta = 0.025;
  RepulsionMode repulsion = RepulsionMode::kSgns;

  // sgns: k negatives per positive, noise distribution ~ degree^alpha.
  int32_t k = 1;
  double alpha = 0.0;
  // The repulsive coefficient is sigmoid(+dot), the gradient of the SGNS
  // objective. The published pseudocode prints sigmoid(-dot); set this flag
  // to reproduce that exactly.
  bool sgns_paper_sign = false;

  // dimreg: one plain (no step size, no optimizer state) dimension step
  // every n_negative batches.
  double lambda = 1.0;
  int32_t n_negative = 10;
  WeightVectorMode weight_mode = WeightVectorMode::kUniform;
  double weight_alpha = 0.75;

  OptimizerKind optimizer = OptimizerKind::kSgd;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  double init_scale = 1e-2;
  bool track_constriction = false;
  // Training with no repulsion degenerates quickly; epochs are capped unless
  // explicitly unlocked.
  int32_t none_epoch_cap = 2;
  bool allow_uncapped_none = false;

  void validate() const;
};

struct TrainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using PairView = std::span<const std::pair<int32_t, int32_t>>;

// One attraction step over `batch` at rate eta: every ordered pair (i, j)
// moves both endpoints together with coefficient sigmoid(-X_i.X_j). All
// coefficients come from the state at entry (pre-batch snapshot), so with the
// full pair set this is exactly one gradient-ascent step on the positive
// log-likelihood.
void positive_update(Matrix& X, PairView batch, double eta);

// SGNS repulsion for one batch: k sampled negatives per positive pair, both
// the source row and the sampled row move. Snapshot semantics as above.
void sgns_update(Matrix& X, PairView batch, const NegativeSampler& sampler, int32_t k,
                 double eta, std::mt19937_64& rng, bool paper_sign = false);

// Dimension step, uniform weights: X -= (lambda / n) * 1 (1^T X); lambda = 1
// centers the embedding columns exactly.
void dimreg_update(Matrix& X, double lambda);
// Weighted form: X -= lambda * n * p (p^T X) for a probability vector p.
// p = 1/n reproduces the uniform step.
void dimreg_update(Matrix& X, double lambda, const Vector& p);

// Full training loop: shuffled batches per epoch, positive pass plus the
// configured repulsion, optional Adam, per-epoch trace. All randomness is
// derived from `seed`. `degrees` feeds the negative sampler and the weighted
// dimension step; pass the training-graph degrees.
Matrix train(const PairSet& pairs, const std::vector<int32_t>& degrees,
             const TrainConfig& cfg, uint64_t seed, TrainingTrace* trace = nullptr);

// Same, but resumes from a given matrix (used by experiments and tests).
Matrix train_from(Matrix X, const PairSet& pairs, const std::vector<int32_t>& degrees,
                  const TrainConfig& cfg, uint64_t seed, TrainingTrace* trace = nullptr);

// Normalized degree^alpha weight vector for the weighted dimension step.
Vector degree_weight_vector(const std::vector<int32_t>& degrees, double alpha);

struct AdamState {
  Matrix m, v;
  int64_t t = 0;
  AdamState(int64_t rows, int64_t cols)
      : m(Matrix::Zero(rows, cols)), v(Matrix::Zero(rows, cols)) {}
};

// Standard bias-corrected Adam: params -= eta * mhat / (sqrt(vhat) + eps).
// The trainer applies the same formula lazily per touched row (with the
// global step for bias correction); this dense form is the reference.
void adam_step(AdamState& state, Matrix& params, const Matrix& grad, double eta,
               double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

}  // namespace skipdim
