#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace skipdim {

// All dense math is double precision, row-major: row i = embedding of node i.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(sigmoid(x)), stable for large |x|
inline double log_sigmoid(double x) {
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Every random decision in the library draws from a substream derived from the
// one top-level seed and a purpose name (plus optional indices), so results are
// reproducible and independent of thread count or call order.
inline std::mt19937_64 substream(uint64_t seed, std::string_view name,
                                 uint64_t a = 0, uint64_t b = 0) {
  uint64_t s = seed ^ fnv1a64(name);
  uint64_t st = s;
  uint64_t k0 = splitmix64(st);
  st ^= (a + 0x9e3779b97f4a7c15ULL) * 0xff51afd7ed558ccdULL;
  uint64_t k1 = splitmix64(st);
  st ^= (b + 0x2545f4914f6cdd1dULL) * 0xc4ceb9fe1a85ec53ULL;
  uint64_t k2 = splitmix64(st);
  std::seed_seq seq{uint32_t(k0), uint32_t(k0 >> 32), uint32_t(k1),
                    uint32_t(k1 >> 32), uint32_t(k2), uint32_t(k2 >> 32)};
  return std::mt19937_64(seq);
}

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace skipdim
