#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "asgat/matrix.hpp"

namespace asgat {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Undirected graph with dense node features and integer class labels.
/// Edges are kept as canonical (u < v) pairs, self-loops dropped and
/// duplicates collapsed by normalize_edges().
struct Graph {
  int num_nodes = 0;
  int class_count = 0;
  std::vector<std::pair<int, int>> edges;
  Matrix features;             // num_nodes x m
  std::vector<int> labels;     // num_nodes, values in [0, class_count)

  int feature_dim() const { return int(features.cols()); }

  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(num_nodes);
    for (auto [u, v] : edges) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());
    return adj;
  }

  std::vector<int> degrees() const {
    std::vector<int> deg(num_nodes, 0);
    for (auto [u, v] : edges) {
      ++deg[u];
      ++deg[v];
    }
    return deg;
  }
};

inline void normalize_edges(std::vector<std::pair<int, int>>& edges) {
  for (auto& e : edges)
    if (e.first > e.second) std::swap(e.first, e.second);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges.erase(std::remove_if(edges.begin(), edges.end(),
                             [](const auto& e) { return e.first == e.second; }),
              edges.end());
}

/// Symmetry closure over the stored edge list; idempotent.
inline Graph to_undirected(Graph g) {
  normalize_edges(g.edges);
  return g;
}

enum class GraphFormat { canonical_tsv };

/// Canonical TSV: header `N<TAB>m<TAB>C`, one `id<TAB>label<TAB>f_1 ... f_m`
/// line per node, a literal `EDGES` line, then `u<TAB>v` per edge.
inline Graph load_graph(const std::string& path, GraphFormat = GraphFormat::canonical_tsv) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset file: " + path);

  auto fail = [&path](int line_no, const std::string& what) -> ParseError {
    return ParseError(path + ":" + std::to_string(line_no) + ": " + what);
  };

  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw fail(1, "missing header");
  ++line_no;

  Graph g;
  long n = 0, m = 0, c = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> n >> m >> c) || n < 0 || m < 0 || c < 1)
      throw fail(line_no, "malformed header, expected `N m C`");
  }
  g.num_nodes = int(n);
  g.class_count = int(c);
  g.features = Matrix::Zero(n, m);
  g.labels.assign(n, -1);

  std::vector<char> seen(n, 0);
  for (long i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw fail(line_no + 1, "unexpected end of file in node section");
    ++line_no;
    std::istringstream ls(line);
    long id = -1, label = -1;
    if (!(ls >> id >> label)) throw fail(line_no, "malformed node line");
    if (id < 0 || id >= n) throw ValidationError(path + ":" + std::to_string(line_no) +
                                                 ": node id out of range: " + std::to_string(id));
    if (seen[id]) throw ValidationError(path + ":" + std::to_string(line_no) +
                                        ": duplicate node id: " + std::to_string(id));
    seen[id] = 1;
    if (label < 0 || label >= c)
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": label out of range: " + std::to_string(label));
    g.labels[id] = int(label);
    for (long j = 0; j < m; ++j) {
      double f;
      if (!(ls >> f)) throw fail(line_no, "expected " + std::to_string(m) + " features");
      g.features(id, j) = f;
    }
    double extra;
    if (ls >> extra) throw fail(line_no, "trailing values after " + std::to_string(m) + " features");
  }

  if (!std::getline(in, line)) throw fail(line_no + 1, "missing EDGES marker");
  ++line_no;
  if (line != "EDGES") throw fail(line_no, "expected literal `EDGES` line");

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream es(line);
    long u, v;
    if (!(es >> u >> v)) throw fail(line_no, "malformed edge line");
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw ValidationError(path + ":" + std::to_string(line_no) + ": edge endpoint out of range");
    g.edges.emplace_back(int(u), int(v));
  }

  normalize_edges(g.edges);
  return g;
}

inline void save_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  out << g.num_nodes << '\t' << g.feature_dim() << '\t' << g.class_count << '\n';
  std::ostringstream buf;
  buf.precision(17);
  for (int i = 0; i < g.num_nodes; ++i) {
    buf.str("");
    buf << i << '\t' << g.labels[i] << '\t';
    for (int j = 0; j < g.feature_dim(); ++j) {
      if (j) buf << ' ';
      buf << g.features(i, j);
    }
    out << buf.str() << '\n';
  }
  out << "EDGES\n";
  for (auto [u, v] : g.edges) out << u << '\t' << v << '\n';
}

/// L = I - D^{-1/2} A D^{-1/2}; rows of isolated nodes equal identity rows.
inline SymMatrix normalized_laplacian(const Graph& g) {
  auto deg = g.degrees();
  SymMatrix lap(g.num_nodes);
  for (int i = 0; i < g.num_nodes; ++i) lap.set(i, i, 1.0);
  for (auto [u, v] : g.edges) {
    double w = -1.0 / std::sqrt(double(deg[u]) * double(deg[v]));
    lap.set(u, v, w);
  }
  return lap;
}

/// Self-loop-augmented normalized adjacency D~^{-1/2} (A + I) D~^{-1/2}.
inline Matrix gcn_adjacency(const Graph& g) {
  auto deg = g.degrees();
  Matrix a = Matrix::Zero(g.num_nodes, g.num_nodes);
  for (int i = 0; i < g.num_nodes; ++i) a(i, i) = 1.0;
  for (auto [u, v] : g.edges) a(u, v) = a(v, u) = 1.0;
  Vector dinv(g.num_nodes);
  for (int i = 0; i < g.num_nodes; ++i) dinv(i) = 1.0 / std::sqrt(double(deg[i] + 1));
  return dinv.asDiagonal() * a * dinv.asDiagonal();
}

struct HomophilyReport {
  double beta = 0.0;            // mean of beta_v over nodes with >= 1 neighbor
  bool defined = false;         // false for edgeless graphs
  std::vector<double> beta_v;   // per node; NaN where the node is isolated
  std::array<int, 5> bins{};    // (0,.2], (.2,.4], (.4,.6], (.6,.8], (.8,1]
  int zero_bin = 0;             // nodes with beta_v == 0 exactly
};

inline HomophilyReport homophily(const Graph& g) {
  HomophilyReport rep;
  rep.beta_v.assign(g.num_nodes, std::numeric_limits<double>::quiet_NaN());
  auto adj = g.adjacency();
  double sum = 0.0;
  int count = 0;
  for (int v = 0; v < g.num_nodes; ++v) {
    if (adj[v].empty()) continue;
    int same = 0;
    for (int u : adj[v])
      if (g.labels[u] == g.labels[v]) ++same;
    double bv = double(same) / double(adj[v].size());
    rep.beta_v[v] = bv;
    sum += bv;
    ++count;
    if (bv == 0.0) {
      ++rep.zero_bin;
    } else {
      int b = std::min(4, int(std::ceil(bv * 5.0)) - 1);
      ++rep.bins[b];
    }
  }
  if (count > 0) {
    rep.beta = sum / count;
    rep.defined = true;
  }
  return rep;
}

struct Split {
  std::vector<uint8_t> train_mask, val_mask, test_mask;
  uint64_t seed = 0;

  int size() const { return int(train_mask.size()); }
};

namespace detail {
// Hand-rolled Fisher-Yates so split layouts are stable across standard
// library implementations.
inline void shuffle_indices(std::vector<int>& v, std::mt19937_64& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    size_t j = size_t(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}
}  // namespace detail

/// Per class: 60% train (floor), 20% val (floor), remainder test.
inline Split split_per_class(const Graph& g, uint64_t seed) {
  std::vector<std::vector<int>> members(g.class_count);
  for (int v = 0; v < g.num_nodes; ++v) members[g.labels[v]].push_back(v);
  for (int c = 0; c < g.class_count; ++c)
    if (members[c].size() < 3)
      throw ValidationError("split_per_class: class " + std::to_string(c) + " has " +
                            std::to_string(members[c].size()) + " members (< 3)");

  Split s;
  s.seed = seed;
  s.train_mask.assign(g.num_nodes, 0);
  s.val_mask.assign(g.num_nodes, 0);
  s.test_mask.assign(g.num_nodes, 0);
  std::mt19937_64 rng(seed);
  for (int c = 0; c < g.class_count; ++c) {
    auto& mem = members[c];
    detail::shuffle_indices(mem, rng);
    size_t n = mem.size();
    size_t n_train = size_t(0.6 * double(n));
    size_t n_val = size_t(0.2 * double(n));
    for (size_t i = 0; i < n; ++i) {
      if (i < n_train)
        s.train_mask[mem[i]] = 1;
      else if (i < n_train + n_val)
        s.val_mask[mem[i]] = 1;
      else
        s.test_mask[mem[i]] = 1;
    }
  }
  return s;
}

inline void save_split(const Split& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write split file: " + path);
  auto dump = [&out](const char* name, const std::vector<uint8_t>& mask) {
    out << name << '\n';
    bool first = true;
    for (size_t i = 0; i < mask.size(); ++i)
      if (mask[i]) {
        if (!first) out << ' ';
        out << i;
        first = false;
      }
    out << '\n';
  };
  dump("TRAIN", s.train_mask);
  dump("VAL", s.val_mask);
  dump("TEST", s.test_mask);
}

inline Split load_split(const std::string& path, int num_nodes) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open split file: " + path);
  Split s;
  s.train_mask.assign(num_nodes, 0);
  s.val_mask.assign(num_nodes, 0);
  s.test_mask.assign(num_nodes, 0);
  std::string header, indices;
  for (auto* mask : {&s.train_mask, &s.val_mask, &s.test_mask}) {
    if (!std::getline(in, header) || !std::getline(in, indices))
      throw ParseError(path + ": truncated split file");
    std::istringstream is(indices);
    long v;
    while (is >> v) {
      if (v < 0 || v >= num_nodes) throw ValidationError(path + ": split index out of range");
      (*mask)[v] = 1;
    }
  }
  return s;
}

}  // namespace asgat
