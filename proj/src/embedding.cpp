#include "skipdim/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace skipdim {

Matrix init_embeddings(int32_t n, int32_t d, double scale, uint64_t seed) {
  if (n < 0 || d <= 0) throw ConfigError("invalid embedding shape");
  if (scale <= 0.0) throw ConfigError("init scale must be positive");
  auto rng = substream(seed, "init_embeddings");
  std::normal_distribution<double> normal(0.0, scale);
  Matrix X(n, d);
  for (int32_t i = 0; i < n; ++i)
    for (int32_t j = 0; j < d; ++j) X(i, j) = normal(rng);
  return X;
}

double constriction(const Matrix& X, int threads) {
  const int64_t n = X.rows();
  if (n == 0) return 0.0;
  constexpr int64_t kTile = 1024;
  std::vector<std::pair<int64_t, int64_t>> tiles;
  for (int64_t i = 0; i < n; i += kTile)
    for (int64_t j = i; j < n; j += kTile) tiles.emplace_back(i, j);

  auto tile_min = [&](int64_t ti, int64_t tj) {
    int64_t hi_i = std::min(n, ti + kTile), hi_j = std::min(n, tj + kTile);
    Matrix g = X.middleRows(ti, hi_i - ti) * X.middleRows(tj, hi_j - tj).transpose();
    return g.minCoeff();
  };

  if (threads <= 1 || tiles.size() < 4) {
    double best = std::numeric_limits<double>::infinity();
    for (auto& [ti, tj] : tiles) best = std::min(best, tile_min(ti, tj));
    return best;
  }
  size_t t = std::min<size_t>(threads, tiles.size());
  std::vector<double> part(t, std::numeric_limits<double>::infinity());
  std::vector<std::thread> pool;
  for (size_t w = 0; w < t; ++w)
    pool.emplace_back([&, w] {
      for (size_t idx = w; idx < tiles.size(); idx += t)
        part[w] = std::min(part[w], tile_min(tiles[idx].first, tiles[idx].second));
    });
  for (auto& th : pool) th.join();
  return *std::min_element(part.begin(), part.end());
}

namespace {
void format_double(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}
}  // namespace

void save_embeddings_text(const std::string& path, const Matrix& X,
                          const std::vector<int64_t>& labels) {
  if (static_cast<int64_t>(labels.size()) != X.rows())
    throw IoError("label count does not match embedding rows");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write embeddings: " + path);
  std::string line;
  for (int64_t i = 0; i < X.rows(); ++i) {
    line.clear();
    line += std::to_string(labels[i]);
    for (int64_t j = 0; j < X.cols(); ++j) {
      line += '\t';
      format_double(line, X(i, j));
    }
    line += '\n';
    out << line;
  }
  if (!out) throw IoError("write failed: " + path);
}

Matrix load_embeddings_text(const std::string& path, std::vector<int64_t>* labels) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embeddings: " + path);
  std::vector<int64_t> labs;
  std::vector<std::vector<double>> rows;
  std::string line;
  int64_t lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    if (line.empty()) continue;
    std::istringstream ls(line);
    int64_t lab;
    if (!(ls >> lab)) throw IoError(path + ":" + std::to_string(lineno) + ": bad label");
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!rows.empty() && row.size() != rows.front().size())
      throw IoError(path + ":" + std::to_string(lineno) + ": inconsistent dimension");
    if (row.empty()) throw IoError(path + ":" + std::to_string(lineno) + ": no coordinates");
    labs.push_back(lab);
    rows.push_back(std::move(row));
  }
  Matrix X(static_cast<int64_t>(rows.size()),
           rows.empty() ? 0 : static_cast<int64_t>(rows.front().size()));
  for (int64_t i = 0; i < X.rows(); ++i)
    for (int64_t j = 0; j < X.cols(); ++j) X(i, j) = rows[i][j];
  if (labels) *labels = std::move(labs);
  return X;
}

void save_embeddings_binary(const std::string& path, const Matrix& X) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write embeddings: " + path);
  uint32_t header[2] = {static_cast<uint32_t>(X.rows()), static_cast<uint32_t>(X.cols())};
  out.write(reinterpret_cast<const char*>(header), 8);
  std::vector<float> row(X.cols());
  for (int64_t i = 0; i < X.rows(); ++i) {
    for (int64_t j = 0; j < X.cols(); ++j) row[j] = static_cast<float>(X(i, j));
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  if (!out) throw IoError("write failed: " + path);
}

Matrix load_embeddings_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open embeddings: " + path);
  uint32_t header[2];
  in.read(reinterpret_cast<char*>(header), 8);
  if (!in) throw IoError("truncated header: " + path);
  Matrix X(header[0], header[1]);
  std::vector<float> row(header[1]);
  for (uint32_t i = 0; i < header[0]; ++i) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(float)));
    if (!in) throw IoError("truncated data: " + path);
    for (uint32_t j = 0; j < header[1]; ++j) X(i, j) = row[j];
  }
  return X;
}

void save_trace_csv(const std::string& path, const TrainingTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write trace: " + path);
  out << "epoch,positive_loss,constriction,wall_clock_ms\n";
  std::string line;
  for (const auto& r : trace.rows) {
    line.clear();
    line += std::to_string(r.epoch);
    line += ',';
    format_double(line, r.positive_loss);
    line += ',';
    format_double(line, r.constriction);
    line += ',';
    format_double(line, r.wall_clock_ms);
    line += '\n';
    out << line;
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace skipdim
