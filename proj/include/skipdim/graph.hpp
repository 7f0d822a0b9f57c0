#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "skipdim/common.hpp"

namespace skipdim {

using Edge = std::pair<int32_t, int32_t>;  // canonical: first < second

// Undirected simple graph in CSR form. Node ids are dense [0, n); `labels`
// maps ids back to the labels that appeared in the input edge list.
class Graph {
 public:
  Graph() = default;
  // Builds from undirected edges over labels; dedupes and drops self-loops.
  static Graph from_edges(const std::vector<std::pair<int64_t, int64_t>>& edges);
  // Builds over a fixed id space [0, n) (keeps isolated nodes). Labels default
  // to the ids themselves; edges are deduped and self-loops dropped.
  static Graph from_id_edges(int32_t n, std::vector<Edge> edges,
                             std::vector<int64_t> labels = {});

  int32_t num_nodes() const { return static_cast<int32_t>(offsets_.size()) - 1; }
  int64_t num_edges() const { return static_cast<int64_t>(neighbors_.size()) / 2; }
  int32_t degree(int32_t v) const { return static_cast<int32_t>(offsets_[v + 1] - offsets_[v]); }
  // Sorted neighbor list.
  const int32_t* neighbors_begin(int32_t v) const { return neighbors_.data() + offsets_[v]; }
  const int32_t* neighbors_end(int32_t v) const { return neighbors_.data() + offsets_[v + 1]; }
  bool has_edge(int32_t u, int32_t v) const;
  int64_t label(int32_t v) const { return labels_[v]; }
  const std::vector<int64_t>& labels() const { return labels_; }

  std::vector<Edge> edges() const;  // canonical undirected edges, sorted
  bool is_connected() const;
  // Degree sum equals twice the edge count; neighbor lists sorted and
  // self-loop free. Throws on violation (used by tests and after I/O).
  void check_invariants() const;

 private:
  std::vector<int64_t> offsets_{0};
  std::vector<int32_t> neighbors_;
  std::vector<int64_t> labels_;
};

struct EdgeListStats {
  int64_t lines_parsed = 0;
  int64_t self_loops_dropped = 0;
  int64_t duplicates_dropped = 0;
};

// Two integer tokens per non-comment line (further tokens ignored). Directed
// input is symmetrized either way; the hint only documents intent.
Graph load_edge_list(const std::string& path, bool directed_hint = false,
                     EdgeListStats* stats = nullptr);
void save_edge_list(const std::string& path, const Graph& g);
void save_edge_list(const std::string& path, const std::vector<Edge>& edges,
                    const std::vector<int64_t>& labels);

// Equal block sizes (remainder joins the last block); ids assigned block by
// block. Each intra-block pair edged with p_within, inter-block with p_between.
Graph generate_sbm(int32_t n, int32_t block_count, double p_within,
                   double p_between, uint64_t seed);
Graph generate_erdos_renyi(int32_t n, double p, uint64_t seed);

double average_clustering_coefficient(const Graph& g);

struct SplitRatios {
  double train = 0.7;
  double valid = 0.1;
  double test = 0.2;
};

// Uniform random partition of the undirected edges plus one sampled non-edge
// per test edge. Ratios must sum to 1; counts are rounded so the three parts
// partition the edge set exactly.
struct EdgeSplit {
  std::vector<Edge> train;
  std::vector<Edge> valid;
  std::vector<Edge> test;
  std::vector<Edge> test_negatives;
};

EdgeSplit split_edges(const Graph& g, const SplitRatios& ratios, uint64_t seed);
// Uniformly samples `count` distinct non-edges (canonical orientation).
// Throws if the graph has fewer than `count` non-edges.
std::vector<Edge> sample_non_edges(const Graph& g, int64_t count, std::mt19937_64& rng,
                                   const std::vector<Edge>* exclude = nullptr);

// Four files: <prefix>.train/.valid/.test/.testneg (edge-list format, original labels).
void save_split(const std::string& prefix, const EdgeSplit& split, const Graph& g);
EdgeSplit load_split(const std::string& prefix, const Graph& g);

// Graph containing only the training edges (same node set / labels).
Graph training_subgraph(const Graph& g, const std::vector<Edge>& train_edges);

}  // namespace skipdim
