#pragma once

#include <cstdint>
#include <vector>

#include "skipdim/common.hpp"

namespace skipdim {

// Draws node ids with probability proportional to degree^alpha. alpha = 0 is
// uniform over all nodes (zero-degree included); for alpha > 0 zero-degree
// nodes get probability zero. O(1) draws via Vose's alias method.
class NegativeSampler {
 public:
  NegativeSampler(const std::vector<int32_t>& degrees, double alpha);

  int32_t sample(std::mt19937_64& rng) const;
  const std::vector<double>& probabilities() const { return probs_; }
  double alpha() const { return alpha_; }

 private:
  double alpha_ = 0.0;
  std::vector<double> probs_;        // normalized target distribution
  std::vector<double> threshold_;    // alias table acceptance thresholds
  std::vector<int32_t> alias_;
};

}  // namespace skipdim
