#include "skipdim/sampler.hpp"

#include <cmath>
#include <numeric>

namespace skipdim {

NegativeSampler::NegativeSampler(const std::vector<int32_t>& degrees, double alpha)
    : alpha_(alpha) {
  if (degrees.empty()) throw ConfigError("sampler needs at least one node");
  if (alpha < 0.0) throw ConfigError("sampler alpha must be >= 0");
  const size_t n = degrees.size();
  probs_.resize(n);
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (degrees[i] < 0) throw ConfigError("negative degree");
    probs_[i] = (alpha == 0.0) ? 1.0 : std::pow(static_cast<double>(degrees[i]), alpha);
    total += probs_[i];
  }
  if (total <= 0.0) throw ConfigError("sampler weights sum to zero (all degrees zero?)");
  for (double& p : probs_) p /= total;

  // Vose alias construction over scaled probabilities n * p_i.
  threshold_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<int32_t> small, large;
  for (size_t i = 0; i < n; ++i) {
    scaled[i] = probs_[i] * static_cast<double>(n);
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<int32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    int32_t s = small.back(), l = large.back();
    small.pop_back();
    large.pop_back();
    threshold_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  for (int32_t l : large) threshold_[l] = 1.0;
  for (int32_t s : small) threshold_[s] = 1.0;  // numerical leftovers
}

int32_t NegativeSampler::sample(std::mt19937_64& rng) const {
  std::uniform_int_distribution<int32_t> bucket(0, static_cast<int32_t>(probs_.size()) - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int32_t b = bucket(rng);
  return u(rng) < threshold_[b] ? b : alias_[b];
}

}  // namespace skipdim
