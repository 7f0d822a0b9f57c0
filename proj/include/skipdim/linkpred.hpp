#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "skipdim/graph.hpp"

namespace skipdim {

struct ClassifierConfig {
  int32_t hidden = 128;
  int32_t epochs = 100;
  int64_t batch_size = 256;
  double eta = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  void validate() const;
};

// One hidden rectifier layer over the concatenation of two node embeddings,
// scalar logistic output, trained with binary cross-entropy + Adam.
// Embeddings are frozen inputs.
class EdgeClassifier {
 public:
  EdgeClassifier() = default;
  EdgeClassifier(int32_t input_dim, int32_t hidden, uint64_t seed);
  // explicit weights, for controlled scoring
  static EdgeClassifier from_weights(Matrix W1, Vector b1, Vector w2, double b2);

  int32_t input_dim() const { return static_cast<int32_t>(W1_.cols()); }
  // probability for a batch of feature rows
  Vector predict(const Matrix& features) const;
  // symmetric edge score: both concatenation orders, averaged
  double score_edge(const Matrix& X, int32_t u, int32_t v) const;
  Vector score_edges(const Matrix& X, const std::vector<Edge>& edges) const;

  // One labeled example per row; returns final mean BCE. Used by the training
  // drivers below.
  double fit(const Matrix& X, const std::vector<std::tuple<int32_t, int32_t, double>>& rows,
             const ClassifierConfig& cfg, uint64_t seed);

  const Matrix& W1() const { return W1_; }

 private:
  Matrix W1_;  // hidden x input
  Vector b1_, w2_;
  double b2_ = 0.0;
};

// Balanced training: the positive edges (both concatenation orders) against
// uniformly sampled non-edges, resampled fresh every epoch.
EdgeClassifier train_classifier(const Matrix& X, const Graph& g,
                                const std::vector<Edge>& train_pos,
                                const ClassifierConfig& cfg, uint64_t seed);
// Fixed caller-supplied negatives (no resampling); counts must match.
EdgeClassifier train_classifier_with_negatives(const Matrix& X,
                                               const std::vector<Edge>& train_pos,
                                               const std::vector<Edge>& train_neg,
                                               const ClassifierConfig& cfg, uint64_t seed);

// Mann-Whitney AUC: P(score_pos > score_neg) + 0.5 P(tie). Throws on a
// single-class input.
double auc_roc(const std::vector<double>& scores, const std::vector<char>& labels);

struct MetricReport {
  double auc_roc = 0.0;
  double mrr = 0.0;
  std::map<int32_t, double> hits_at_k;
  int64_t nodes_evaluated = 0;
  int64_t nodes_skipped = 0;
  std::string dataset;
  std::string variant;
  uint64_t seed = 0;

  std::string to_json() const;
  static std::string csv_header();
  std::string to_csv_row() const;
};

struct RankConfig {
  int32_t candidates_per_node = 100;
  std::vector<int32_t> k_list{50, 100};
};

// For every node incident to a test edge: rank its true test neighbors'
// scores among that node's sampled non-neighbor candidates. Ties are broken
// pessimistically (true edge placed after equal-scored candidates). MRR uses
// the best-ranked true edge per node; Hits@k is the indicator that any true
// edge lands in the top k.
MetricReport node_level_rank_metrics(const Matrix& X, const EdgeClassifier& clf,
                                     const Graph& g, const std::vector<Edge>& test_pos,
                                     const RankConfig& cfg, uint64_t seed);

// AUC over balanced test positives/negatives plus the ranking metrics.
MetricReport evaluate_embeddings(const Matrix& X, const EdgeClassifier& clf,
                                 const Graph& g, const std::vector<Edge>& test_pos,
                                 const std::vector<Edge>& test_neg,
                                 const RankConfig& cfg, uint64_t seed);

}  // namespace skipdim
