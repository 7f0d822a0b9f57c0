#include "skipdim/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace skipdim {

Graph Graph::from_id_edges(int32_t n, std::vector<Edge> edges,
                           std::vector<int64_t> labels) {
  for (auto& e : edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
    if (e.first < 0 || e.second >= n)
      throw IoError("edge endpoint out of range");
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges.erase(std::remove_if(edges.begin(), edges.end(),
                             [](const Edge& e) { return e.first == e.second; }),
              edges.end());

  Graph g;
  g.labels_ = std::move(labels);
  if (g.labels_.empty()) {
    g.labels_.resize(n);
    std::iota(g.labels_.begin(), g.labels_.end(), 0);
  }
  if (static_cast<int32_t>(g.labels_.size()) != n)
    throw IoError("label count does not match node count");

  std::vector<int32_t> deg(n, 0);
  for (const auto& [a, b] : edges) {
    deg[a]++;
    deg[b]++;
  }
  g.offsets_.assign(n + 1, 0);
  for (int32_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
  g.neighbors_.resize(g.offsets_[n]);
  std::vector<int64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [a, b] : edges) {
    g.neighbors_[cursor[a]++] = b;
    g.neighbors_[cursor[b]++] = a;
  }
  for (int32_t v = 0; v < n; ++v)
    std::sort(g.neighbors_.begin() + g.offsets_[v], g.neighbors_.begin() + g.offsets_[v + 1]);
  return g;
}

Graph Graph::from_edges(const std::vector<std::pair<int64_t, int64_t>>& edges) {
  std::vector<int64_t> labels;
  labels.reserve(edges.size() * 2);
  for (const auto& [a, b] : edges) {
    labels.push_back(a);
    labels.push_back(b);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  std::unordered_map<int64_t, int32_t> id;
  id.reserve(labels.size() * 2);
  for (size_t i = 0; i < labels.size(); ++i) id[labels[i]] = static_cast<int32_t>(i);

  std::vector<Edge> mapped;
  mapped.reserve(edges.size());
  for (const auto& [a, b] : edges)
    mapped.emplace_back(id[a], id[b]);
  const int32_t n = static_cast<int32_t>(labels.size());
  return from_id_edges(n, std::move(mapped), std::move(labels));
}

bool Graph::has_edge(int32_t u, int32_t v) const {
  if (u < 0 || v < 0 || u >= num_nodes() || v >= num_nodes()) return false;
  const int32_t* b = neighbors_begin(u);
  const int32_t* e = neighbors_end(u);
  return std::binary_search(b, e, v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<size_t>(num_edges()));
  for (int32_t v = 0; v < num_nodes(); ++v)
    for (const int32_t* it = neighbors_begin(v); it != neighbors_end(v); ++it)
      if (v < *it) out.emplace_back(v, *it);
  return out;
}

bool Graph::is_connected() const {
  const int32_t n = num_nodes();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::vector<int32_t> stack{0};
  seen[0] = 1;
  int32_t count = 1;
  while (!stack.empty()) {
    int32_t v = stack.back();
    stack.pop_back();
    for (const int32_t* it = neighbors_begin(v); it != neighbors_end(v); ++it)
      if (!seen[*it]) {
        seen[*it] = 1;
        count++;
        stack.push_back(*it);
      }
  }
  return count == n;
}

void Graph::check_invariants() const {
  const int32_t n = num_nodes();
  int64_t degsum = 0;
  for (int32_t v = 0; v < n; ++v) {
    degsum += degree(v);
    const int32_t* b = neighbors_begin(v);
    const int32_t* e = neighbors_end(v);
    for (const int32_t* it = b; it != e; ++it) {
      if (*it == v) throw IoError("self-loop in adjacency");
      if (it + 1 != e && !(*it < *(it + 1)))
        throw IoError("neighbor list not sorted/deduped");
      if (!has_edge(*it, v)) throw IoError("adjacency not symmetric");
    }
  }
  if (degsum != 2 * num_edges()) throw IoError("degree sum != 2m");
}

Graph load_edge_list(const std::string& path, bool directed_hint, EdgeListStats* stats) {
  (void)directed_hint;  // reversed duplicates merge regardless
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge list: " + path);
  std::vector<std::pair<int64_t, int64_t>> edges;
  EdgeListStats st;
  std::string line;
  int64_t lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream ls(line);
    int64_t a, b;
    if (!(ls >> a >> b))
      throw IoError(path + ":" + std::to_string(lineno) + ": expected two integers");
    st.lines_parsed++;
    if (a == b) {
      st.self_loops_dropped++;
      continue;
    }
    edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(edges.begin(), edges.end());
  int64_t before = static_cast<int64_t>(edges.size());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  st.duplicates_dropped = before - static_cast<int64_t>(edges.size());
  if (stats) *stats = st;
  if (edges.empty()) throw IoError("empty graph: " + path);
  return Graph::from_edges(edges);
}

void save_edge_list(const std::string& path, const std::vector<Edge>& edges,
                    const std::vector<int64_t>& labels) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write edge list: " + path);
  for (const auto& [a, b] : edges)
    out << labels[a] << '\t' << labels[b] << '\n';
  if (!out) throw IoError("write failed: " + path);
}

void save_edge_list(const std::string& path, const Graph& g) {
  save_edge_list(path, g.edges(), g.labels());
}

Graph generate_sbm(int32_t n, int32_t block_count, double p_within,
                   double p_between, uint64_t seed) {
  if (p_within < 0 || p_within > 1 || p_between < 0 || p_between > 1)
    throw ConfigError("invalid sbm probabilities");
  if (block_count < 1 || n < block_count) throw ConfigError("need n >= block_count >= 1");
  const int32_t base = n / block_count;  // remainder joins the last block
  std::vector<int32_t> block(n);
  for (int32_t i = 0; i < n; ++i)
    block[i] = std::min(i / base, block_count - 1);
  auto rng = substream(seed, "sbm");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Edge> edges;
  for (int32_t i = 0; i < n; ++i)
    for (int32_t j = i + 1; j < n; ++j) {
      double p = (block[i] == block[j]) ? p_within : p_between;
      if (u(rng) < p) edges.emplace_back(i, j);
    }
  return Graph::from_id_edges(n, std::move(edges));
}

Graph generate_erdos_renyi(int32_t n, double p, uint64_t seed) {
  if (n < 1) throw ConfigError("erdos-renyi needs n >= 1");
  return generate_sbm(n, 1, p, p, seed);
}

double average_clustering_coefficient(const Graph& g) {
  const int32_t n = g.num_nodes();
  if (n == 0) return 0.0;
  double total = 0.0;
  for (int32_t v = 0; v < n; ++v) {
    int32_t d = g.degree(v);
    if (d < 2) continue;
    int64_t links = 0;
    const int32_t* b = g.neighbors_begin(v);
    const int32_t* e = g.neighbors_end(v);
    for (const int32_t* it = b; it != e; ++it)
      for (const int32_t* jt = it + 1; jt != e; ++jt)
        if (g.has_edge(*it, *jt)) links++;
    total += 2.0 * static_cast<double>(links) / (static_cast<double>(d) * (d - 1));
  }
  return total / n;
}

EdgeSplit split_edges(const Graph& g, const SplitRatios& ratios, uint64_t seed) {
  if (std::abs(ratios.train + ratios.valid + ratios.test - 1.0) > 1e-9)
    throw ConfigError("split ratios must sum to 1");
  if (ratios.train < 0 || ratios.valid < 0 || ratios.test < 0)
    throw ConfigError("split ratios must be non-negative");
  std::vector<Edge> edges = g.edges();
  const int64_t m = static_cast<int64_t>(edges.size());
  auto rng = substream(seed, "edge_split");
  std::shuffle(edges.begin(), edges.end(), rng);

  // validation and test sizes are floors; train absorbs the remainder
  int64_t n_valid = static_cast<int64_t>(std::floor(ratios.valid * static_cast<double>(m)));
  int64_t n_test = static_cast<int64_t>(std::floor(ratios.test * static_cast<double>(m)));
  if (n_valid + n_test > m) n_valid = m - n_test;

  EdgeSplit split;
  split.test.assign(edges.begin(), edges.begin() + n_test);
  split.valid.assign(edges.begin() + n_test, edges.begin() + n_test + n_valid);
  split.train.assign(edges.begin() + n_test + n_valid, edges.end());
  split.test_negatives = sample_non_edges(g, n_test, rng);
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.valid.begin(), split.valid.end());
  std::sort(split.test.begin(), split.test.end());
  std::sort(split.test_negatives.begin(), split.test_negatives.end());
  return split;
}

std::vector<Edge> sample_non_edges(const Graph& g, int64_t count, std::mt19937_64& rng,
                                   const std::vector<Edge>* exclude) {
  const int64_t n = g.num_nodes();
  const int64_t pairs = n * (n - 1) / 2;
  if (pairs - g.num_edges() < count)
    throw ConfigError("graph has fewer non-edges than requested");
  std::unordered_set<int64_t> taken;
  auto key = [n](const Edge& e) { return static_cast<int64_t>(e.first) * n + e.second; };
  if (exclude)
    for (const auto& e : *exclude) taken.insert(key(e));
  std::vector<Edge> out;
  out.reserve(count);
  std::uniform_int_distribution<int32_t> pick(0, static_cast<int32_t>(n - 1));
  while (static_cast<int64_t>(out.size()) < count) {
    int32_t a = pick(rng), b = pick(rng);
    if (a == b) continue;
    Edge e{std::min(a, b), std::max(a, b)};
    if (g.has_edge(e.first, e.second)) continue;
    if (!taken.insert(key(e)).second) continue;
    out.push_back(e);
  }
  return out;
}

void save_split(const std::string& prefix, const EdgeSplit& split, const Graph& g) {
  save_edge_list(prefix + ".train", split.train, g.labels());
  save_edge_list(prefix + ".valid", split.valid, g.labels());
  save_edge_list(prefix + ".test", split.test, g.labels());
  save_edge_list(prefix + ".testneg", split.test_negatives, g.labels());
}

namespace {
std::vector<Edge> load_labeled_edges(const std::string& path, const Graph& g) {
  std::unordered_map<int64_t, int32_t> id;
  id.reserve(g.labels().size() * 2);
  for (int32_t v = 0; v < g.num_nodes(); ++v) id[g.label(v)] = v;
  std::ifstream in(path);
  if (!in) throw IoError("cannot open split file: " + path);
  std::vector<Edge> out;
  std::string line;
  int64_t lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream ls(line);
    int64_t a, b;
    if (!(ls >> a >> b))
      throw IoError(path + ":" + std::to_string(lineno) + ": expected two integers");
    auto ia = id.find(a), ib = id.find(b);
    if (ia == id.end() || ib == id.end())
      throw IoError(path + ":" + std::to_string(lineno) + ": label not in graph");
    Edge e{std::min(ia->second, ib->second), std::max(ia->second, ib->second)};
    out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}
}  // namespace

EdgeSplit load_split(const std::string& prefix, const Graph& g) {
  EdgeSplit s;
  s.train = load_labeled_edges(prefix + ".train", g);
  s.valid = load_labeled_edges(prefix + ".valid", g);
  s.test = load_labeled_edges(prefix + ".test", g);
  s.test_negatives = load_labeled_edges(prefix + ".testneg", g);
  return s;
}

Graph training_subgraph(const Graph& g, const std::vector<Edge>& train_edges) {
  return Graph::from_id_edges(g.num_nodes(), train_edges,
                              std::vector<int64_t>(g.labels()));
}

}  // namespace skipdim
