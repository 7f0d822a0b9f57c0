#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "skipdim/graph.hpp"

namespace skipdim {

struct WalkConfig {
  double p = 1.0;            // return parameter (backtrack weight 1/p)
  double q = 1.0;            // in-out parameter (distance-2 weight 1/q)
  int32_t walk_length = 20;  // nodes per walk
  int32_t walks_per_node = 10;
  int32_t context_size = 5;  // skip-gram window

  void validate() const;
};

// Ordered (source, context) training pairs over dense node ids.
struct PairSet {
  std::vector<std::pair<int32_t, int32_t>> pairs;
  int32_t num_nodes = 0;
  // Average contexts per node; with LINE pairs this is the average degree.
  double pairs_per_node() const {
    return num_nodes ? static_cast<double>(pairs.size()) / num_nodes : 0.0;
  }
};

// Both orientations of every edge: the LINE objective's pair multiset.
PairSet pairs_from_edges(const Graph& g);

// Unnormalized second-order transition weights from `cur` given predecessor
// `prev`, aligned with the sorted neighbor list of `cur`:
//   back to prev -> 1/p, neighbor of prev -> 1, otherwise -> 1/q.
std::vector<double> transition_weights(const Graph& g, int32_t prev, int32_t cur,
                                       const WalkConfig& cfg);

// walks_per_node second-order walks from every node with degree > 0. The RNG
// substream is keyed by (start node, walk index), so output is identical for
// any thread count.
std::vector<std::vector<int32_t>> generate_walks(const Graph& g, const WalkConfig& cfg,
                                                 uint64_t seed, int threads = 1);

// Skip-gram pairs: for each walk position t, every position within
// `context_size` on either side contributes one ordered (walk[t], walk[u]) pair.
PairSet pairs_from_walks(const std::vector<std::vector<int32_t>>& walks,
                         int32_t context_size, int32_t num_nodes);

// One walk per line, space-separated node ids.
void dump_walks(const std::string& path, const std::vector<std::vector<int32_t>>& walks);

}  // namespace skipdim
