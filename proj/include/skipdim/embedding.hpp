#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skipdim/common.hpp"

namespace skipdim {

// Rows i.i.d. normal with standard deviation `scale`, drawn row-major so the
// result is a pure function of (n, d, scale, seed).
Matrix init_embeddings(int32_t n, int32_t d, double scale, uint64_t seed);

// Exact minimum of X_i . X_j over all ordered (i, j) including i == j.
// Computed in blocked tiles; n <= 4000 effectively forms the full Gram.
double constriction(const Matrix& X, int threads = 1);

// Text format: one row per node, original label then the d coordinates,
// tab-separated, shortest round-trip decimals. Deterministic byte-for-byte.
void save_embeddings_text(const std::string& path, const Matrix& X,
                          const std::vector<int64_t>& labels);
Matrix load_embeddings_text(const std::string& path, std::vector<int64_t>* labels);

// Binary format: 8-byte header (n then d, 32-bit little-endian unsigned),
// then n*d float32 little-endian, row-major.
void save_embeddings_binary(const std::string& path, const Matrix& X);
Matrix load_embeddings_binary(const std::string& path);

struct TraceRow {
  int32_t epoch = 0;
  double positive_loss = 0.0;
  double constriction = 0.0;  // NaN when tracking is off
  double wall_clock_ms = 0.0;
};

struct TrainingTrace {
  std::vector<TraceRow> rows;
};

void save_trace_csv(const std::string& path, const TrainingTrace& trace);

}  // namespace skipdim
