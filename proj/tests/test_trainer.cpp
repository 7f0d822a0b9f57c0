#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "oracles.hpp"
#include "skipdim/embedding.hpp"
#include "skipdim/trainer.hpp"

using namespace skipdim;

namespace {

PairSet full_pair_set(const Graph& g) { return pairs_from_edges(g); }

TrainConfig quick_config() {
  TrainConfig cfg;
  cfg.dim = 8;
  cfg.epochs = 3;
  cfg.batch_size = 256;
  cfg.eta = 0.05;
  cfg.k = 2;
  cfg.init_scale = 0.01;
  return cfg;
}

}  // namespace

TEST_CASE("init_embeddings is deterministic and scales correctly") {
  Matrix a = init_embeddings(50, 6, 0.01, 3);
  Matrix b = init_embeddings(50, 6, 0.01, 3);
  Matrix c = init_embeddings(50, 6, 0.01, 4);
  CHECK(a.rows() == 50);
  CHECK(a.cols() == 6);
  CHECK(a == b);
  CHECK(a != c);
  // 300 standard normal draws at sd 0.01: |entry| < 6 sigma
  CHECK(a.cwiseAbs().maxCoeff() < 0.06);
  CHECK(a.cwiseAbs().maxCoeff() > 1e-4);
  // tenfold scale is exact: the draws are scaled, not redrawn
  Matrix big = init_embeddings(50, 6, 0.1, 3);
  CHECK((big - 10.0 * a).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("positive_update moves both endpoints with coefficient sigmoid(-z)") {
  Matrix X(2, 2);
  X << 0.0, 0.0, 1.0, 0.0;
  std::vector<std::pair<int32_t, int32_t>> batch = {{0, 1}};
  positive_update(X, batch, 1.0);
  // z = 0, sigma(0) = 1/2: row 0 += 0.5 * [1,0]; row 1 += 0.5 * [0,0]
  CHECK(X(0, 0) == doctest::Approx(0.5));
  CHECK(X(0, 1) == 0.0);
  CHECK(X(1, 0) == 1.0);
  CHECK(X(1, 1) == 0.0);
}

TEST_CASE("positive_update uses the pre-batch snapshot for every pair") {
  Matrix X(3, 2);
  X << 1.0, 0.0, 0.0, 1.0, 1.0, 1.0;
  std::vector<std::pair<int32_t, int32_t>> batch = {{0, 1}, {1, 2}};
  positive_update(X, batch, 0.5);
  const double s01 = 0.5 * oracle::sig(-0.0);   // eta * sigmoid(-z01), z01 = 0
  const double s12 = 0.5 * oracle::sig(-1.0);   // z12 = 1
  CHECK(X(0, 0) == doctest::Approx(1.0));
  CHECK(X(0, 1) == doctest::Approx(s01));
  CHECK(X(1, 0) == doctest::Approx(s01 + s12));
  CHECK(X(1, 1) == doctest::Approx(1.0 + s12));
  CHECK(X(2, 0) == doctest::Approx(1.0));
  CHECK(X(2, 1) == doctest::Approx(1.0 + s12));
}

TEST_CASE("positive_update over the full pair set matches the analytic gradient") {
  Graph g = generate_erdos_renyi(7, 0.5, 2);
  PairSet pairs = full_pair_set(g);
  Matrix X0 = init_embeddings(7, 3, 0.5, 6);

  const double eta = 1e-3;
  Matrix X = X0;
  positive_update(X, pairs.pairs, eta);
  Matrix step = (X - X0) / eta;  // should equal -grad of the attraction loss

  Matrix grad = oracle::fd_gradient(
      [&](const Matrix& Y) { return oracle::loss_positive(Y, g); }, X0);
  CHECK(oracle::rel_frob_err(step, -grad) < 1e-6);
}

TEST_CASE("sgns_update with a forced sampler matches hand arithmetic") {
  // degrees [0, 5] with alpha 1: the sampler always returns node 1
  NegativeSampler sampler({0, 5}, 1.0);
  auto rng = substream(1, "test_sgns");

  Matrix X(2, 2);
  X << 1.0, 0.0, 0.5, 0.0;
  std::vector<std::pair<int32_t, int32_t>> batch = {{0, 1}};
  const double eta = 0.1;
  const double z = 0.5;
  sgns_update(X, batch, sampler, 3, eta, rng);
  const double c = eta * oracle::sig(z);
  CHECK(X(0, 0) == doctest::Approx(1.0 - 3.0 * c * 0.5).epsilon(1e-12));
  CHECK(X(1, 0) == doctest::Approx(0.5 - 3.0 * c * 1.0).epsilon(1e-12));

  // the published pseudocode's sign: coefficient sigmoid(-z) instead
  Matrix Y(2, 2);
  Y << 1.0, 0.0, 0.5, 0.0;
  auto rng2 = substream(1, "test_sgns");
  sgns_update(Y, batch, sampler, 3, eta, rng2, /*paper_sign=*/true);
  const double cp = eta * oracle::sig(-z);
  CHECK(Y(0, 0) == doctest::Approx(1.0 - 3.0 * cp * 0.5).epsilon(1e-12));
  CHECK(Y(1, 0) == doctest::Approx(0.5 - 3.0 * cp * 1.0).epsilon(1e-12));
}

TEST_CASE("sgns_update with k = 0 is a no-op") {
  Matrix X = init_embeddings(5, 3, 0.1, 1);
  Matrix before = X;
  NegativeSampler sampler({1, 1, 1, 1, 1}, 0.75);
  auto rng = substream(2, "test_sgns_k0");
  std::vector<std::pair<int32_t, int32_t>> batch = {{0, 1}, {2, 3}};
  sgns_update(X, batch, sampler, 0, 0.5, rng);
  CHECK(X == before);
}

TEST_CASE("negative sampler probabilities follow degree^alpha") {
  NegativeSampler s({1, 2, 4}, 0.75);
  const double w0 = 1.0, w1 = std::pow(2.0, 0.75), w2 = std::pow(4.0, 0.75);
  const double total = w0 + w1 + w2;
  REQUIRE(s.probabilities().size() == 3);
  CHECK(s.probabilities()[0] == doctest::Approx(w0 / total).epsilon(1e-12));
  CHECK(s.probabilities()[1] == doctest::Approx(w1 / total).epsilon(1e-12));
  CHECK(s.probabilities()[2] == doctest::Approx(w2 / total).epsilon(1e-12));

  // empirical check of the alias table: 2e5 draws, 3 sigma per bucket
  auto rng = substream(3, "test_sampler");
  std::vector<int64_t> counts(3, 0);
  const int64_t draws = 200000;
  for (int64_t t = 0; t < draws; ++t) counts[s.sample(rng)]++;
  for (int i = 0; i < 3; ++i) {
    const double p = s.probabilities()[i];
    const double sd = std::sqrt(p * (1.0 - p) * draws);
    CHECK(std::abs(counts[i] - p * draws) < 3.0 * sd);
  }
}

TEST_CASE("alpha = 0 sampling is uniform and includes zero-degree nodes") {
  NegativeSampler s({0, 1, 2}, 0.0);
  for (double p : s.probabilities()) CHECK(p == doctest::Approx(1.0 / 3.0));
  auto rng = substream(4, "test_sampler_uniform");
  std::vector<int64_t> counts(3, 0);
  for (int64_t t = 0; t < 100000; ++t) counts[s.sample(rng)]++;
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(counts[i] - 100000.0 / 3.0) < 3.0 * std::sqrt(100000.0 * 2.0 / 9.0));

  CHECK_THROWS_AS(NegativeSampler({0, 0}, 1.0), ConfigError);
}

TEST_CASE("dimreg_update centers columns") {
  Matrix ones = Matrix::Ones(2, 2);
  dimreg_update(ones, 1.0);
  CHECK(ones.cwiseAbs().maxCoeff() == 0.0);

  // lambda = 1 centers exactly (criterion tolerance 1e-12)
  Matrix X = init_embeddings(50, 8, 1.0, 9);
  dimreg_update(X, 1.0);
  CHECK(X.colwise().sum().cwiseAbs().maxCoeff() < 1e-12);

  // a centered matrix stays put
  Matrix before = X;
  dimreg_update(X, 1.0);
  CHECK((X - before).cwiseAbs().maxCoeff() < 1e-14);

  // lambda = 0 is a no-op
  Matrix Y = init_embeddings(10, 4, 0.3, 2);
  Matrix y0 = Y;
  dimreg_update(Y, 0.0);
  CHECK(Y == y0);
}

TEST_CASE("weighted dimreg matches hand arithmetic and the uniform special case") {
  Matrix X = Matrix::Identity(2, 2);
  Vector p(2);
  p << 0.75, 0.25;
  dimreg_update(X, 1.0, p);
  // X -= lambda * n * p (p^T X), all values exact in binary
  CHECK(X(0, 0) == doctest::Approx(-0.125).epsilon(1e-15));
  CHECK(X(0, 1) == doctest::Approx(-0.375).epsilon(1e-15));
  CHECK(X(1, 0) == doctest::Approx(-0.375).epsilon(1e-15));
  CHECK(X(1, 1) == doctest::Approx(0.875).epsilon(1e-15));

  Matrix A = init_embeddings(20, 5, 0.4, 11);
  Matrix B = A;
  Vector uniform = Vector::Constant(20, 1.0 / 20.0);
  dimreg_update(A, 0.7, uniform);
  dimreg_update(B, 0.7);
  CHECK((A - B).cwiseAbs().maxCoeff() < 1e-14);

  Vector wrong(3);
  wrong << 0.5, 0.25, 0.25;
  CHECK_THROWS_AS(dimreg_update(A, 1.0, wrong), ConfigError);
}

TEST_CASE("degree_weight_vector normalizes degree^alpha") {
  Vector p = degree_weight_vector({1, 2, 4}, 0.75);
  NegativeSampler s({1, 2, 4}, 0.75);
  for (int i = 0; i < 3; ++i)
    CHECK(p[i] == doctest::Approx(s.probabilities()[i]).epsilon(1e-12));
  Vector u = degree_weight_vector({0, 3, 9}, 0.0);
  for (int i = 0; i < 3; ++i) CHECK(u[i] == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(degree_weight_vector({0, 0}, 1.0), ConfigError);
}

TEST_CASE("adam_step matches a scalar reference") {
  AdamState state(1, 1);
  Matrix params(1, 1);
  params << 2.0;
  oracle::ScalarAdam ref;
  double ref_param = 2.0;
  for (int t = 0; t < 10; ++t) {
    const double g = std::sin(t + 1.0);
    Matrix grad(1, 1);
    grad << g;
    adam_step(state, params, grad, 0.01);
    ref_param += ref.step(g, 0.01);
    CHECK(params(0, 0) == doctest::Approx(ref_param).epsilon(1e-12));
  }
}

TEST_CASE("adam_step first step moves by roughly eta in the gradient sign") {
  AdamState state(1, 2);
  Matrix params = Matrix::Zero(1, 2);
  Matrix grad(1, 2);
  grad << 0.5, -3.0;
  adam_step(state, params, grad, 0.01);
  CHECK(params(0, 0) == doctest::Approx(-0.01).epsilon(1e-6));
  CHECK(params(0, 1) == doctest::Approx(0.01).epsilon(1e-6));

  // zero gradient leaves parameters untouched
  AdamState z(1, 2);
  Matrix zp = Matrix::Ones(1, 2);
  adam_step(z, zp, Matrix::Zero(1, 2), 0.5);
  CHECK(zp == Matrix::Ones(1, 2));

  Matrix bad(2, 2);
  CHECK_THROWS_AS(adam_step(z, zp, bad, 0.1), ConfigError);
}

TEST_CASE("train is deterministic in the seed") {
  Graph g = generate_sbm(40, 2, 0.3, 0.05, 5);
  PairSet pairs = full_pair_set(g);
  std::vector<int32_t> degrees(g.num_nodes());
  for (int32_t v = 0; v < g.num_nodes(); ++v) degrees[v] = g.degree(v);
  TrainConfig cfg = quick_config();
  Matrix a = train(pairs, degrees, cfg, 31);
  Matrix b = train(pairs, degrees, cfg, 31);
  Matrix c = train(pairs, degrees, cfg, 32);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("dimreg with lambda = 0 reproduces the repulsion-free path") {
  Graph g = generate_erdos_renyi(25, 0.2, 8);
  PairSet pairs = full_pair_set(g);
  std::vector<int32_t> degrees(g.num_nodes());
  for (int32_t v = 0; v < g.num_nodes(); ++v) degrees[v] = g.degree(v);

  TrainConfig a = quick_config();
  a.repulsion = RepulsionMode::kDimreg;
  a.lambda = 0.0;
  a.epochs = 2;
  TrainConfig b = a;
  b.repulsion = RepulsionMode::kNone;
  CHECK(train(pairs, degrees, a, 7) == train(pairs, degrees, b, 7));
}

TEST_CASE("repulsion-free training is epoch-capped unless unlocked") {
  TrainConfig cfg = quick_config();
  cfg.repulsion = RepulsionMode::kNone;
  cfg.epochs = 50;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.allow_uncapped_none = true;
  CHECK_NOTHROW(cfg.validate());
  cfg.epochs = 2;
  cfg.allow_uncapped_none = false;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config validation rejects out-of-range values") {
  TrainConfig cfg;
  cfg.dim = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = TrainConfig{};
  cfg.eta = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = TrainConfig{};
  cfg.lambda = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = TrainConfig{};
  cfg.n_negative = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = TrainConfig{};
  cfg.init_scale = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = TrainConfig{};
  cfg.adam_beta1 = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("rows never touched by attraction stay at their initialization") {
  PairSet pairs;
  pairs.num_nodes = 5;
  pairs.pairs = {{0, 1}, {1, 0}};
  std::vector<int32_t> degrees = {1, 1, 0, 0, 0};
  TrainConfig cfg = quick_config();
  cfg.repulsion = RepulsionMode::kNone;
  cfg.epochs = 2;
  Matrix init = init_embeddings(5, cfg.dim, cfg.init_scale, 13);
  Matrix out = train(pairs, degrees, cfg, 13);
  for (int32_t r : {2, 3, 4}) CHECK(out.row(r) == init.row(r));
  CHECK(out.row(0) != init.row(0));

  // the dimension step moves every row, including untouched ones
  cfg.repulsion = RepulsionMode::kDimreg;
  cfg.n_negative = 1;
  cfg.epochs = 3;
  Matrix reg = train(pairs, degrees, cfg, 13);
  CHECK(reg.row(2) != init.row(2));
}

TEST_CASE("exploding updates abort with a diagnostic") {
  PairSet pairs;
  pairs.num_nodes = 2;
  pairs.pairs = {{0, 1}};
  std::vector<int32_t> degrees = {1, 1};
  TrainConfig cfg = quick_config();
  cfg.repulsion = RepulsionMode::kNone;
  cfg.epochs = 1;
  cfg.dim = 2;
  cfg.eta = 3.0;
  Matrix X(2, 2);
  X << 1e308, 0.0, -1e308, 0.0;  // z = -inf, coefficient 1, update overflows
  CHECK_THROWS_WITH_AS(train_from(std::move(X), pairs, degrees, cfg, 1),
                       doctest::Contains("epoch 0"), TrainError);
}

TEST_CASE("single-batch trace reports the loss at the epoch entry state") {
  Graph g = generate_erdos_renyi(12, 0.3, 3);
  PairSet pairs = full_pair_set(g);
  std::vector<int32_t> degrees(g.num_nodes());
  for (int32_t v = 0; v < g.num_nodes(); ++v) degrees[v] = g.degree(v);
  TrainConfig cfg = quick_config();
  cfg.repulsion = RepulsionMode::kNone;
  cfg.epochs = 1;
  cfg.batch_size = 4096;  // one batch
  TrainingTrace trace;
  train(pairs, degrees, cfg, 19, &trace);
  REQUIRE(trace.rows.size() == 1);
  Matrix init = init_embeddings(12, cfg.dim, cfg.init_scale, 19);
  CHECK(trace.rows[0].positive_loss ==
        doctest::Approx(oracle::loss_positive(init, g)).epsilon(1e-9));
  CHECK(std::isnan(trace.rows[0].constriction));  // tracking off

  cfg.track_constriction = true;
  TrainingTrace traced;
  train(pairs, degrees, cfg, 19, &traced);
  CHECK(std::isfinite(traced.rows[0].constriction));
}

TEST_CASE("adam training runs and differs from sgd") {
  Graph g = generate_sbm(30, 2, 0.3, 0.05, 6);
  PairSet pairs = full_pair_set(g);
  std::vector<int32_t> degrees(g.num_nodes());
  for (int32_t v = 0; v < g.num_nodes(); ++v) degrees[v] = g.degree(v);
  TrainConfig cfg = quick_config();
  Matrix sgd = train(pairs, degrees, cfg, 23);
  cfg.optimizer = OptimizerKind::kAdam;
  Matrix adam = train(pairs, degrees, cfg, 23);
  CHECK(adam.rows() == 30);
  CHECK(adam.allFinite());
  CHECK(adam != sgd);
}

TEST_CASE("dimreg training separates the blocks of an sbm") {
  Graph g = generate_sbm(60, 2, 0.4, 0.05, 15);
  PairSet pairs = full_pair_set(g);
  std::vector<int32_t> degrees(g.num_nodes());
  for (int32_t v = 0; v < g.num_nodes(); ++v) degrees[v] = g.degree(v);
  TrainConfig cfg;
  cfg.dim = 8;
  cfg.epochs = 20;
  cfg.eta = 0.1;
  cfg.repulsion = RepulsionMode::kDimreg;
  cfg.lambda = 1.0;
  cfg.n_negative = 5;
  cfg.init_scale = 0.01;
  Matrix X = train(pairs, degrees, cfg, 15);

  double within = 0.0, between = 0.0;
  int64_t nw = 0, nb = 0;
  for (int32_t i = 0; i < 60; ++i)
    for (int32_t j = i + 1; j < 60; ++j) {
      const bool same = (i < 30) == (j < 30);
      const double z = X.row(i).dot(X.row(j));
      if (same) {
        within += z;
        nw++;
      } else {
        between += z;
        nb++;
      }
    }
  CHECK(within / nw > between / nb);
}

TEST_CASE("constriction matches brute force") {
  Matrix same(2, 2);
  same << 1.0, 0.0, 1.0, 0.0;
  CHECK(constriction(same) == doctest::Approx(1.0));
  Matrix ortho = Matrix::Identity(2, 2);
  CHECK(constriction(ortho) == doctest::Approx(0.0));
  Matrix opposed(2, 2);
  opposed << 1.0, 0.0, -1.0, 0.0;
  CHECK(constriction(opposed) == doctest::Approx(-1.0));

  Matrix X = init_embeddings(40, 5, 0.7, 21);
  CHECK(constriction(X) == doctest::Approx(oracle::min_gram(X)).epsilon(1e-12));

  // the blocked threaded path agrees on a size that spans several tiles
  Matrix big = init_embeddings(2500, 6, 0.3, 22);
  const double brute = oracle::min_gram(big);
  CHECK(std::abs(constriction(big, 1) - brute) < 1e-12);
  CHECK(std::abs(constriction(big, 4) - brute) < 1e-12);
}

TEST_CASE("embedding file round-trips") {
  namespace fs = std::filesystem;
  Matrix X = init_embeddings(9, 4, 0.5, 30);
  std::vector<int64_t> labels = {5, 6, 7, 8, 9, 10, 11, 12, 13};

  fs::path txt = fs::temp_directory_path() / "skipdim_trainer_emb.tsv";
  save_embeddings_text(txt.string(), X, labels);
  std::vector<int64_t> back_labels;
  Matrix back = load_embeddings_text(txt.string(), &back_labels);
  CHECK(back_labels == labels);
  CHECK((back - X).cwiseAbs().maxCoeff() == 0.0);  // shortest round-trip decimals
  fs::remove(txt);

  fs::path bin = fs::temp_directory_path() / "skipdim_trainer_emb.bin";
  save_embeddings_binary(bin.string(), X);
  Matrix back2 = load_embeddings_binary(bin.string());
  CHECK(back2.rows() == 9);
  CHECK(back2.cols() == 4);
  // float32 storage: relative error bounded by the single-precision ulp
  CHECK((back2 - X).cwiseAbs().maxCoeff() < 1e-6);
  fs::remove(bin);
}
