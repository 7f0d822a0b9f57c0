#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skipdim/graph.hpp"
#include "skipdim/trainer.hpp"

namespace skipdim {

// ---- exact dense losses (small n; used by tests and the harness) ----

// -sum over ordered pairs with S_ij = 1 of log sigmoid(x_i . x_j)
double loss_positive(const Matrix& X, const Graph& g);
// -sum over ordered pairs with S_ij = 0 (diagonal included) of log sigmoid(-x_i . x_j)
double loss_negative(const Matrix& X, const Graph& g);
// -sum over all ordered pairs (diagonal included) of log sigmoid(-x_i . x_j)
double loss_negative_all(const Matrix& X);
// ||X^T 1||^2
double loss_regularizer(const Matrix& X);

// True analytic gradients of the four losses above (they match central finite
// differences; published formulas omit shared constant factors).
struct ExactGradients {
  Matrix pos;
  Matrix neg;
  Matrix neg_all;
  Matrix reg;
};
ExactGradients exact_gradients(const Matrix& X, const Graph& g);

// ---- proposition harness ----

struct FrobeniusCheck {
  double lhs = 0.0;   // ||X X^T||_F^2
  double rhs = 0.0;   // ||X^T X||_F^2
  double abs_diff = 0.0;
  double rel_err = 0.0;
  bool pass = false;  // rel_err <= 1e-9
};
FrobeniusCheck check_frobenius_identity(const Matrix& X);

struct GradientReport {
  int32_t n = 0;
  int32_t d = 0;
  int64_t m = 0;          // nonzero entries of S (= 2x undirected edges)
  double sparsity = 0.0;  // m / n^2
  double C = 0.0;         // constriction of the constructed X
  double beta_max = 0.0;  // max squared row norm
  double norm_neg = 0.0;      // ||grad N||_F
  double norm_neg_all = 0.0;  // ||grad N'||_F
  double norm_reg = 0.0;      // ||grad R||_F
  double ratio_prop3 = 0.0;   // ||grad N' - grad N||_F^2 / ||grad N||_F^2
  double bound_prop3 = 0.0;   // (beta_max^3 / C^4) * m / (n^2 - m)
  double diff_prop4 = 0.0;    // ||(1/2) grad N' - 1X||_F^2 (proof-convention R scaling)
  double bound_prop4 = 0.0;   // (n e^{-C})^2 * beta_max
  uint64_t seed = 0;
  bool pass = false;
};

// X_i = mu + eps_i with unit mu and noise std `spread` per dot-product unit,
// resampled until the Gram minimum is usable, then rescaled so the
// constriction is exactly C. The noise keeps the Gram mean a few times above
// its minimum, the regime the decay bounds address.
Matrix construct_constricted(int32_t n, int32_t d, double C, double spread,
                             uint64_t seed);

// Fixed average degree, growing n: Prop. 3's sparse-graph regime.
std::vector<GradientReport> prop3_sweep(const std::vector<int32_t>& n_list,
                                        double avg_degree, int32_t d, double C_floor,
                                        int32_t seeds, uint64_t seed0);
// Shared base X rescaled to each target constriction: Prop. 4's decay curve.
std::vector<GradientReport> prop4_sweep(int32_t n, int32_t d,
                                        const std::vector<double>& C_list,
                                        uint64_t seed);

struct LemmaCheck {
  double max_softplus_gap = 0.0;  // max over grid of (log(1+e^x) - x) - e^{-x}  (should be <= 0)
  double max_sigmoid_gap = 0.0;   // max over grid of (1 - sigmoid(x)) - e^{-x}  (should be <= 0)
  bool pass = false;
};
LemmaCheck lemma1_check(double x_max = 40.0, int32_t points = 10000);

struct CollapseResult {
  std::vector<TraceRow> rows;  // epoch = step index; constriction recorded per step
  std::vector<double> min_row_norm;
  std::vector<double> max_row_norm;
  double p = 0.0;
  int32_t n = 0;
  uint64_t graph_seed = 0;  // seed actually used after connectivity resampling
  int32_t t0 = -1;          // first step from which C stays positive and non-decreasing
  bool certified = false;
  bool dipped_below_start = false;
};
// Positive-only plain SGD (full-batch, one exact gradient step per recorded
// step) on a connected ER(n, p) graph; disconnected samples are resampled
// deterministically (seed, seed+1, ...).
CollapseResult collapse_experiment(int32_t n, double p, double eta, double init_scale,
                                   int32_t d, int32_t steps, uint64_t seed);

struct TaylorReport {
  double max_abs_dot = 0.0;
  double deviation = 0.0;  // max |entry| difference between the two updated matrices
  double bound = 0.0;      // (max_abs_dot)^2 * eta
  bool pass = false;
};
// One positive_update step vs one gradient step on the linearized surrogate
// (sigmoid(z) ~ 1/2 + z/4). Requires max |dot| <= 0.1.
TaylorReport taylor_surrogate_check(const Matrix& X, const Graph& g, double eta);

// ---- report emission ----
void write_gradient_reports_csv(const std::string& path,
                                const std::vector<GradientReport>& reports);
void write_collapse_csv(const std::string& path, const CollapseResult& r);

}  // namespace skipdim
