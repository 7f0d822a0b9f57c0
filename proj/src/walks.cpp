#include "skipdim/walks.hpp"

#include <algorithm>
#include <fstream>
#include <thread>

namespace skipdim {

void WalkConfig::validate() const {
  if (p <= 0.0 || q <= 0.0) throw ConfigError("walk p and q must be positive");
  if (walk_length < 2) throw ConfigError("walk_length must be >= 2");
  if (walks_per_node < 1) throw ConfigError("walks_per_node must be >= 1");
  if (context_size < 1 || context_size >= walk_length)
    throw ConfigError("need 1 <= context_size < walk_length");
}

PairSet pairs_from_edges(const Graph& g) {
  PairSet ps;
  ps.num_nodes = g.num_nodes();
  ps.pairs.reserve(static_cast<size_t>(2 * g.num_edges()));
  for (const auto& [a, b] : g.edges()) {
    ps.pairs.emplace_back(a, b);
    ps.pairs.emplace_back(b, a);
  }
  return ps;
}

std::vector<double> transition_weights(const Graph& g, int32_t prev, int32_t cur,
                                       const WalkConfig& cfg) {
  std::vector<double> w;
  w.reserve(g.degree(cur));
  for (const int32_t* it = g.neighbors_begin(cur); it != g.neighbors_end(cur); ++it) {
    if (*it == prev)
      w.push_back(1.0 / cfg.p);
    else if (g.has_edge(*it, prev))
      w.push_back(1.0);
    else
      w.push_back(1.0 / cfg.q);
  }
  return w;
}

namespace {

void walk_from(const Graph& g, const WalkConfig& cfg, int32_t start,
               std::mt19937_64& rng, std::vector<int32_t>& out,
               std::vector<double>& cumw) {
  out.clear();
  out.push_back(start);
  if (cfg.walk_length == 1 || g.degree(start) == 0) return;
  std::uniform_int_distribution<int32_t> first(0, g.degree(start) - 1);
  out.push_back(g.neighbors_begin(start)[first(rng)]);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  while (static_cast<int32_t>(out.size()) < cfg.walk_length) {
    int32_t prev = out[out.size() - 2];
    int32_t cur = out.back();
    const int32_t* nb = g.neighbors_begin(cur);
    int32_t deg = g.degree(cur);
    cumw.clear();
    double total = 0.0;
    for (int32_t i = 0; i < deg; ++i) {
      int32_t x = nb[i];
      double w;
      if (x == prev)
        w = 1.0 / cfg.p;
      else if (g.has_edge(x, prev))
        w = 1.0;
      else
        w = 1.0 / cfg.q;
      total += w;
      cumw.push_back(total);
    }
    double r = unif(rng) * total;
    int32_t pick = static_cast<int32_t>(
        std::lower_bound(cumw.begin(), cumw.end(), r) - cumw.begin());
    if (pick >= deg) pick = deg - 1;
    out.push_back(nb[pick]);
  }
}

}  // namespace

std::vector<std::vector<int32_t>> generate_walks(const Graph& g, const WalkConfig& cfg,
                                                 uint64_t seed, int threads) {
  cfg.validate();
  const int32_t n = g.num_nodes();
  std::vector<int32_t> starts;
  for (int32_t v = 0; v < n; ++v)
    if (g.degree(v) > 0) starts.push_back(v);

  std::vector<std::vector<int32_t>> walks(starts.size() * cfg.walks_per_node);
  auto work = [&](size_t lo, size_t hi) {
    std::vector<double> cumw;
    for (size_t s = lo; s < hi; ++s)
      for (int32_t w = 0; w < cfg.walks_per_node; ++w) {
        auto rng = substream(seed, "walk", static_cast<uint64_t>(starts[s]),
                             static_cast<uint64_t>(w));
        walk_from(g, cfg, starts[s], rng, walks[s * cfg.walks_per_node + w], cumw);
      }
  };
  if (threads <= 1 || starts.size() < 2) {
    work(0, starts.size());
  } else {
    size_t t = std::min<size_t>(threads, starts.size());
    std::vector<std::thread> pool;
    size_t chunk = (starts.size() + t - 1) / t;
    for (size_t i = 0; i < t; ++i) {
      size_t lo = i * chunk, hi = std::min(starts.size(), lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return walks;
}

void dump_walks(const std::string& path, const std::vector<std::vector<int32_t>>& walks) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write walks: " + path);
  for (const auto& w : walks) {
    for (size_t i = 0; i < w.size(); ++i) {
      if (i) out << ' ';
      out << w[i];
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

PairSet pairs_from_walks(const std::vector<std::vector<int32_t>>& walks,
                         int32_t context_size, int32_t num_nodes) {
  if (context_size < 1) throw ConfigError("context_size must be >= 1");
  PairSet ps;
  ps.num_nodes = num_nodes;
  for (const auto& w : walks) {
    const int64_t len = static_cast<int64_t>(w.size());
    for (int64_t t = 0; t < len; ++t) {
      int64_t lo = std::max<int64_t>(0, t - context_size);
      int64_t hi = std::min<int64_t>(len - 1, t + context_size);
      for (int64_t u = lo; u <= hi; ++u)
        if (u != t) ps.pairs.emplace_back(w[t], w[u]);
    }
  }
  return ps;
}

}  // namespace skipdim
