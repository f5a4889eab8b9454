#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "skc/error.hpp"
#include "skc/gf2.hpp"
#include "skc/subset.hpp"

namespace skc {

struct Edge {
  int u = 0;
  int v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected multigraph on vertices 1..m. Parallel edges are allowed, self-loops are not.
class Graph {
 public:
  explicit Graph(int vertex_count, std::vector<Edge> edges = {}) : m_(vertex_count) {
    if (vertex_count < 1 || vertex_count > SubsetMask::max_terminals) {
      throw GraphError("vertex count " + std::to_string(vertex_count) + " out of range");
    }
    for (const auto& e : edges) add_edge(e.u, e.v);
  }

  static Graph complete(int m) {
    Graph g(m);
    for (int u = 1; u <= m; ++u) {
      for (int v = u + 1; v <= m; ++v) g.add_edge(u, v);
    }
    return g;
  }

  static Graph path(int m) {
    Graph g(m);
    for (int u = 1; u < m; ++u) g.add_edge(u, u + 1);
    return g;
  }

  void add_edge(int u, int v) {
    if (u == v) throw GraphError("self-loop at vertex " + std::to_string(u));
    if (u < 1 || v < 1 || u > m_ || v > m_) {
      throw GraphError("edge {" + std::to_string(u) + "," + std::to_string(v) + "} has an endpoint outside 1.." +
                       std::to_string(m_));
    }
    edges_.push_back(Edge{u, v});
  }

  int vertex_count() const { return m_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  /// True when every unordered pair of vertices is joined by exactly one edge.
  bool is_complete() const {
    std::map<std::pair<int, int>, int> mult;
    for (const auto& e : edges_) ++mult[{std::min(e.u, e.v), std::max(e.u, e.v)}];
    if (mult.size() != static_cast<std::size_t>(m_) * (m_ - 1) / 2) return false;
    return std::all_of(mult.begin(), mult.end(), [](const auto& kv) { return kv.second == 1; });
  }

  bool is_connected() const {
    std::vector<int> parent(static_cast<std::size_t>(m_) + 1);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    int components = m_;
    for (const auto& e : edges_) {
      int a = find(e.u), b = find(e.v);
      if (a != b) {
        parent[a] = b;
        --components;
      }
    }
    return components == 1;
  }

 private:
  int m_;
  std::vector<Edge> edges_;
};

/// One column of a PIN model: copy `copy` of base edge `edge_index`.
struct EdgeInstance {
  std::size_t edge_index = 0;
  int u = 0;  // smaller endpoint
  int v = 0;
  int copy = 0;
};

/// Pairwise independent network on G^(n): one fair bit per edge instance,
/// terminal i observes the bits of the instances incident with it.
///
/// Column order is canonical: base edges sorted by (min endpoint, max
/// endpoint, insertion index), each followed by its copies 0..n-1.
class PinInstance {
 public:
  PinInstance(Graph graph, int n) : graph_(std::move(graph)), n_(n) {
    if (graph_.vertex_count() < 2) throw GraphError("a PIN model needs at least two terminals");
    if (n < 1) throw ArgumentError("replication count must be at least 1");

    const auto& edges = graph_.edges();
    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), 0);
    auto key = [&](std::size_t i) {
      return std::make_tuple(std::min(edges[i].u, edges[i].v), std::max(edges[i].u, edges[i].v), i);
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

    std::map<std::pair<int, int>, int> multiplicity;
    for (const auto& e : edges) ++multiplicity[{std::min(e.u, e.v), std::max(e.u, e.v)}];
    std::map<std::pair<int, int>, int> seen;

    std::vector<std::string> labels;
    for (std::size_t idx : order) {
      const int u = std::min(edges[idx].u, edges[idx].v);
      const int v = std::max(edges[idx].u, edges[idx].v);
      std::string base = std::to_string(u) + "-" + std::to_string(v);
      const int occurrence = seen[{u, v}]++;
      if (multiplicity[{u, v}] > 1) base += "." + std::to_string(occurrence);
      for (int c = 0; c < n; ++c) {
        instances_.push_back(EdgeInstance{idx, u, v, c});
        labels.push_back(base + "#" + std::to_string(c));
      }
    }
    space_ = std::make_shared<const ColumnSpace>(std::move(labels));

    const int m = graph_.vertex_count();
    incident_.assign(static_cast<std::size_t>(m) + 1, {});
    for (std::size_t col = 0; col < instances_.size(); ++col) {
      incident_[instances_[col].u].push_back(col);
      incident_[instances_[col].v].push_back(col);
    }
  }

  const Graph& graph() const { return graph_; }
  int n() const { return n_; }
  int m() const { return graph_.vertex_count(); }
  const SpacePtr& space() const { return space_; }
  std::size_t column_count() const { return instances_.size(); }
  const std::vector<EdgeInstance>& instances() const { return instances_; }
  const EdgeInstance& instance(std::size_t col) const { return instances_.at(col); }

  /// Columns of E_i (instances incident with terminal i), ascending.
  const std::vector<std::size_t>& incident(int terminal) const {
    check_terminal(terminal);
    return incident_[terminal];
  }

  std::vector<std::string> incident_labels(int terminal) const {
    std::vector<std::string> out;
    for (std::size_t c : incident(terminal)) out.push_back(space_->label(c));
    return out;
  }

  BitVector incident_mask(int terminal) const {
    BitVector mask(column_count());
    for (std::size_t c : incident(terminal)) mask.set(c);
    return mask;
  }

  /// Columns with at least one endpoint in `set` (the instances seen by X_set).
  BitVector touching_mask(SubsetMask set) const {
    BitVector mask(column_count());
    for (std::size_t c = 0; c < instances_.size(); ++c) {
      if (set.contains(instances_[c].u) || set.contains(instances_[c].v)) mask.set(c);
    }
    return mask;
  }

  /// Columns with both endpoints in `set`; the complement of touching_mask(set^c).
  BitVector within_mask(SubsetMask set) const {
    BitVector mask(column_count());
    for (std::size_t c = 0; c < instances_.size(); ++c) {
      if (set.contains(instances_[c].u) && set.contains(instances_[c].v)) mask.set(c);
    }
    return mask;
  }

  /// Whether the base graph is K_m (so the closed-form rank formulas apply).
  bool is_complete() const { return graph_.is_complete(); }

 private:
  void check_terminal(int terminal) const {
    if (terminal < 1 || terminal > m()) throw ArgumentError("terminal " + std::to_string(terminal) + " out of range");
  }

  Graph graph_;
  int n_;
  SpacePtr space_;
  std::vector<EdgeInstance> instances_;
  std::vector<std::vector<std::size_t>> incident_;
};

inline PinInstance build_pin(const Graph& graph, int n) { return PinInstance(graph, n); }

}  // namespace skc
