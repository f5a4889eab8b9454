#pragma once

// PIN-model analysis in terms of GF(2) ranks: subset entropies, conditional
// multipartite information of linear functions, the incidence counting bound,
// maximum spanning-tree packings and a linear key/omniscience protocol built
// from a packing.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "skc/error.hpp"
#include "skc/gf2.hpp"
#include "skc/multipartite_info.hpp"
#include "skc/partition_lp.hpp"
#include "skc/pin_instance.hpp"
#include "skc/rational.hpp"
#include "skc/subset.hpp"
#include "skc/transcript.hpp"

namespace skc {

/// H(X_A^n) for every A: the number of edge instances with an endpoint in A.
inline EntropyMap pin_subset_entropies(const PinInstance& pin) {
  EntropyMap out;
  for (SubsetMask a : all_subsets(pin.m())) out.emplace(a, Rational(pin.touching_mask(a).count()));
  return out;
}

/// Capacity LP on the pin's entropies. Values are per n symbols; divide by n for rates.
inline CapacityResult pin_capacity(const PinInstance& pin) { return solve_capacity(pin_subset_entropies(pin), pin.m()); }

/// R_CO = H(X_M) - I(X_M), per source symbol.
inline Rational r_co(const PinInstance& pin) {
  CapacityResult r = pin_capacity(pin);
  return (r.joint_entropy - r.capacity) / pin.n();
}

namespace detail {

inline void check_matrix(const PinInstance& pin, const BitMatrix& l) {
  if (!same_space(pin.space(), l.space_ptr())) throw DimensionError("matrix is not over the PIN column space");
}

inline void require_complete(const PinInstance& pin) {
  if (!pin.is_complete()) {
    throw ArgumentError("closed-form rank formula needs a complete base graph; supply λ* for other graphs");
  }
}

}  // namespace detail

/// I(X^n | Lξ) from ranks for any graph and any λ ∈ Λ:
///   H(X^n | L)          = |E| - rank(L)
///   H(X_B | X_{B^c}, L) = |E(B)| - rank(L restricted to E(B))
/// where E(B) is the set of instances with both endpoints in B.
inline CmiReport cmi_rank(const PinInstance& pin, const BitMatrix& l, const FractionalPartition& lambda) {
  detail::check_matrix(pin, l);
  detail::check_lambda(lambda, pin.m());
  const Rational total(pin.column_count());
  std::vector<CmiTerm> terms;
  for (const auto& [b, w] : lambda.weights()) {
    const BitVector inside = pin.within_mask(b);
    const Rational cond(static_cast<long long>(inside.count()) - static_cast<long long>(masked_rank(l, inside)));
    terms.push_back(CmiTerm{b, w, Bits::from_exact(cond)});
  }
  return detail::assemble_cmi(Backend::rank, lambda, Bits::from_exact(total - Rational(rank(l))), std::move(terms));
}

/// Closed form for K_m with λ* uniform on (m-1)-subsets:
///   I(X^n | L) = nm/2 - rank(L) + 1/(m-1) Σ_i rank(L restricted to E_i^c).
inline CmiReport cmi_rank(const PinInstance& pin, const BitMatrix& l) {
  detail::check_matrix(pin, l);
  detail::require_complete(pin);
  const int m = pin.m();
  const int n = pin.n();
  const FractionalPartition lambda = FractionalPartition::co_singletons(m);
  const std::size_t r = rank(l);
  Rational sum_restricted = 0;
  std::vector<CmiTerm> terms;
  for (int i = 1; i <= m; ++i) {
    const BitVector outside = ~pin.incident_mask(i);
    const std::size_t ri = masked_rank(l, outside);
    sum_restricted += ri;
    const Rational cond(static_cast<long long>(outside.count()) - static_cast<long long>(ri));
    terms.push_back(CmiTerm{SubsetMask::singleton(i).complement(m), Rational(1, m - 1), Bits::from_exact(cond)});
  }
  std::sort(terms.begin(), terms.end(), [](const CmiTerm& a, const CmiTerm& b) { return a.block < b.block; });
  CmiReport report;
  report.backend = Backend::rank;
  report.lambda_used = lambda;
  report.joint_given_l = Bits::from_exact(Rational(pin.column_count()) - Rational(r));
  report.terms = std::move(terms);
  report.value = Bits::from_exact(Rational(n * m, 2) - Rational(r) + sum_restricted / (m - 1));
  return report;
}

/// nm/2 - rank(L)/(m-1), a lower bound on cmi_rank for complete graphs.
inline Rational cmi_rank_lower_bound(const PinInstance& pin, const BitMatrix& l) {
  detail::check_matrix(pin, l);
  detail::require_complete(pin);
  const int m = pin.m();
  return Rational(pin.n() * m, 2) - Rational(rank(l)) / (m - 1);
}

struct IncidenceCheck {
  /// Σ_i rank(L restricted to E_i^c)
  std::size_t restricted_rank_sum = 0;
  /// (m-2)·rank(L)
  std::size_t scaled_rank = 0;
  long long margin() const { return static_cast<long long>(restricted_rank_sum) - static_cast<long long>(scaled_rank); }
};

inline IncidenceCheck incidence_rank_inequality(const PinInstance& pin, const BitMatrix& l) {
  detail::check_matrix(pin, l);
  detail::require_complete(pin);
  IncidenceCheck out;
  for (int i = 1; i <= pin.m(); ++i) out.restricted_rank_sum += masked_rank(l, ~pin.incident_mask(i));
  out.scaled_rank = static_cast<std::size_t>(pin.m() - 2) * rank(l);
  return out;
}

/// n·I(X_M) at λ from the pin's subset entropies.
inline Rational weighted_capacity_rank(const PinInstance& pin, const FractionalPartition& lambda) {
  Rational out(pin.column_count());
  for (const auto& [b, w] : lambda.weights()) out -= w * Rational(pin.within_mask(b).count());
  return out;
}

namespace detail {

/// Uses the closed form when it applies so that the identity check compares two routes.
inline CmiReport cmi_rank_auto(const PinInstance& pin, const BitMatrix& l, const FractionalPartition& lambda) {
  if (pin.is_complete() && lambda == FractionalPartition::co_singletons(pin.m())) return cmi_rank(pin, l);
  return cmi_rank(pin, l, lambda);
}

}  // namespace detail

/// Capacity decomposition identity on the rank backend; every field is exact.
inline Lemma1Check verify_lemma1(const PinInstance& pin, const BitMatrix& l, const FractionalPartition& lambda) {
  detail::check_matrix(pin, l);
  detail::check_lambda(lambda, pin.m());
  Lemma1Check out;
  out.n_capacity = Bits::from_exact(weighted_capacity_rank(pin, lambda));
  out.cmi = detail::cmi_rank_auto(pin, l, lambda).value;
  out.h_l = Bits::from_exact(Rational(rank(l)));
  Rational weighted = 0;
  for (const auto& [b, w] : lambda.weights()) weighted += w * Rational(masked_rank(l, pin.within_mask(b)));
  out.weighted_conditional = Bits::from_exact(weighted);
  out.residual = out.n_capacity - (out.cmi + out.h_l - out.weighted_conditional);
  return out;
}

inline WynerBound wyner_bound_check(const PinInstance& pin, const BitMatrix& l, const FractionalPartition& lambda) {
  detail::check_matrix(pin, l);
  detail::check_lambda(lambda, pin.m());
  WynerBound out;
  out.cmi = detail::cmi_rank_auto(pin, l, lambda).value;
  out.h_l = Bits::from_exact(Rational(rank(l)));
  out.n_capacity = Bits::from_exact(weighted_capacity_rank(pin, lambda));
  out.margin = out.h_l - (out.n_capacity - out.cmi);
  return out;
}

// ---------------------------------------------------------------------------
// Spanning tree packing

/// Edge-disjoint spanning trees of G^(n), each a list of column indices.
struct TreePacking {
  std::vector<std::vector<std::size_t>> trees;

  std::size_t size() const { return trees.size(); }
  bool empty() const { return trees.empty(); }

  std::vector<std::vector<std::string>> labels(const PinInstance& pin) const {
    std::vector<std::vector<std::string>> out;
    for (const auto& t : trees) {
      std::vector<std::string> ls;
      for (std::size_t c : t) ls.push_back(pin.space()->label(c));
      out.push_back(std::move(ls));
    }
    return out;
  }
};

/// Throws StructureError unless every tree has m-1 instances, spans all
/// vertices without a cycle, and no instance is used twice.
inline void validate_packing(const PinInstance& pin, const TreePacking& packing) {
  const int m = pin.m();
  std::vector<bool> used(pin.column_count(), false);
  for (std::size_t t = 0; t < packing.trees.size(); ++t) {
    const auto& tree = packing.trees[t];
    const std::string name = "tree " + std::to_string(t + 1);
    if (tree.size() != static_cast<std::size_t>(m - 1)) throw StructureError(name + " does not have m-1 edges");
    std::vector<int> parent(static_cast<std::size_t>(m) + 1);
    for (int v = 0; v <= m; ++v) parent[v] = v;
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (std::size_t c : tree) {
      if (c >= pin.column_count()) throw StructureError(name + " uses an unknown column");
      if (used[c]) throw StructureError("edge instance " + pin.space()->label(c) + " appears in two trees");
      used[c] = true;
      const auto& e = pin.instance(c);
      const int a = find(e.u), b = find(e.v);
      if (a == b) throw StructureError(name + " contains a cycle");
      parent[a] = b;
    }
  }
}

namespace detail {

/// k forests over the edge instances, grown by matroid-partition augmenting paths.
class ForestPartition {
 public:
  ForestPartition(const PinInstance& pin, std::size_t k) : pin_(pin), owner_(pin.column_count(), -1), k_(k) {}

  std::size_t forest_count() const { return k_; }
  void add_forest() { ++k_; }
  int owner(std::size_t c) const { return owner_[c]; }
  std::size_t assigned() const {
    return static_cast<std::size_t>(std::count_if(owner_.begin(), owner_.end(), [](int o) { return o >= 0; }));
  }

  /// Columns of forest f on the path between u and v, or nothing when u and v
  /// are in different components of f.
  std::optional<std::vector<std::size_t>> forest_path(std::size_t f, int u, int v) const {
    const int m = pin_.m();
    std::vector<std::vector<std::pair<int, std::size_t>>> adj(static_cast<std::size_t>(m) + 1);
    for (std::size_t c = 0; c < owner_.size(); ++c) {
      if (owner_[c] == static_cast<int>(f)) {
        const auto& e = pin_.instance(c);
        adj[e.u].emplace_back(e.v, c);
        adj[e.v].emplace_back(e.u, c);
      }
    }
    std::vector<std::pair<int, std::size_t>> via(static_cast<std::size_t>(m) + 1, {-1, 0});
    std::deque<int> queue{u};
    via[u] = {u, 0};
    while (!queue.empty()) {
      const int x = queue.front();
      queue.pop_front();
      if (x == v) break;
      for (const auto& [y, c] : adj[x]) {
        if (via[y].first == -1) {
          via[y] = {x, c};
          queue.push_back(y);
        }
      }
    }
    if (via[v].first == -1) return std::nullopt;
    std::vector<std::size_t> path;
    for (int x = v; x != u; x = via[x].first) path.push_back(via[x].second);
    return path;
  }

  /// Tries to add column `start` to the union of the forests, reshuffling
  /// along a shortest exchange path. Returns false when no path exists.
  bool augment(std::size_t start) {
    struct Step {
      std::size_t from;
      std::size_t forest;
    };
    std::map<std::size_t, Step> reached;  // y reached from x by "put x into forest, take y out"
    std::deque<std::size_t> queue{start};
    std::vector<bool> seen(owner_.size(), false);
    seen[start] = true;
    while (!queue.empty()) {
      const std::size_t x = queue.front();
      queue.pop_front();
      const auto& e = pin_.instance(x);
      for (std::size_t f = 0; f < k_; ++f) {
        if (owner_[x] == static_cast<int>(f)) continue;
        auto path = forest_path(f, e.u, e.v);
        if (!path) {
          // x fits into f directly; unwind the exchanges back to the start.
          std::size_t cur = x;
          std::size_t target = f;
          for (;;) {
            owner_[cur] = static_cast<int>(target);
            if (cur == start) return true;
            const Step s = reached.at(cur);
            cur = s.from;
            target = s.forest;
          }
        }
        for (std::size_t y : *path) {
          if (seen[y]) continue;
          seen[y] = true;
          reached.emplace(y, Step{x, f});
          queue.push_back(y);
        }
      }
    }
    return false;
  }

  TreePacking packing() const {
    TreePacking out;
    out.trees.assign(k_, {});
    for (std::size_t c = 0; c < owner_.size(); ++c) {
      if (owner_[c] >= 0) out.trees[static_cast<std::size_t>(owner_[c])].push_back(c);
    }
    return out;
  }

 private:
  const PinInstance& pin_;
  std::vector<int> owner_;
  std::size_t k_;
};

}  // namespace detail

/// A maximum set of edge-disjoint spanning trees of G^(n), found by matroid
/// union over k graphic matroids with k raised one at a time until the union
/// can no longer hold k spanning trees. Empty for disconnected graphs.
inline TreePacking pack_spanning_trees(const PinInstance& pin) {
  const std::size_t tree_size = static_cast<std::size_t>(pin.m() - 1);
  if (!pin.graph().is_connected()) return {};
  const std::size_t max_trees = pin.column_count() / tree_size;
  TreePacking best;
  detail::ForestPartition forests(pin, 0);
  for (std::size_t k = 1; k <= max_trees; ++k) {
    forests.add_forest();
    for (std::size_t c = 0; c < pin.column_count(); ++c) {
      if (forests.owner(c) < 0) forests.augment(c);
    }
    if (forests.assigned() != k * tree_size) break;
    best = forests.packing();
  }
  return best;
}

/// Spanning-tree packing rate |packing of G^(n)| / n.
inline Rational packing_rate(const Graph& graph, int n) {
  PinInstance pin(graph, n);
  return Rational(pack_spanning_trees(pin).size()) / n;
}

struct PartitionBound {
  /// min over vertex partitions P (|P| ≥ 2) of ⌊crossing(P) / (|P| - 1)⌋
  std::size_t bound = 0;
  /// Block index of each vertex (1-based vertices; entry 0 unused) in a minimizing partition.
  std::vector<int> witness;
  bool exhaustive = false;
};

/// Upper bound on the number of edge-disjoint spanning trees of G^(n) from
/// vertex partitions: every tree crosses a partition into p blocks at least
/// p-1 times. Exhaustive over all partitions for m ≤ 9, otherwise over
/// `samples` random partitions (plus the all-singletons partition).
inline PartitionBound partition_tree_bound(const PinInstance& pin, std::size_t samples = 20000,
                                           std::uint64_t seed = 1) {
  const int m = pin.m();
  PartitionBound out;
  out.bound = pin.column_count();
  auto consider = [&](const std::vector<int>& block) {
    const int parts = *std::max_element(block.begin() + 1, block.end()) + 1;
    if (parts < 2) return;
    std::size_t crossing = 0;
    for (const auto& e : pin.instances()) {
      if (block[e.u] != block[e.v]) ++crossing;
    }
    const std::size_t value = crossing / static_cast<std::size_t>(parts - 1);
    if (value < out.bound || out.witness.empty()) {
      out.bound = value;
      out.witness = block;
    }
  };
  std::vector<int> block(static_cast<std::size_t>(m) + 1, 0);
  if (m <= 9) {
    out.exhaustive = true;
    // Restricted growth strings enumerate every set partition exactly once.
    std::function<void(int, int)> rec = [&](int v, int used) {
      if (v > m) {
        consider(block);
        return;
      }
      for (int b = 0; b <= used; ++b) {
        block[v] = b;
        rec(v + 1, std::max(used, b + 1));
      }
    };
    block[1] = 0;
    rec(2, 1);
  } else {
    std::mt19937_64 rng(seed);
    for (int v = 1; v <= m; ++v) block[v] = v - 1;
    consider(block);
    for (std::size_t s = 0; s < samples; ++s) {
      std::uniform_int_distribution<int> parts_dist(2, m);
      const int parts = parts_dist(rng);
      std::uniform_int_distribution<int> pick(0, parts - 1);
      for (int v = 1; v <= m; ++v) block[v] = pick(rng);
      // Relabel to consecutive block ids.
      std::map<int, int> relabel;
      for (int v = 1; v <= m; ++v) block[v] = relabel.emplace(block[v], static_cast<int>(relabel.size())).first->second;
      consider(block);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tree protocol

struct PinProtocol {
  std::shared_ptr<const PinInstance> pin;
  TreePacking packing;
  LinearTranscript transcript;
  /// Secret key K, one row per tree.
  BitMatrix key;
  /// Omniscience common randomness J (the identity).
  BitMatrix cr;
};

/// Linear key agreement from a spanning-tree packing. For each tree, rooted at
/// its lowest vertex: the key bit is the root's incident tree edge with the
/// smallest column; every other tree edge (p, c), visited in BFS order, is
/// published XORed with the edge through which p was reached (the key edge
/// when p is the root), sent by p. Each tree yields one key row and m-2
/// transmissions.
inline PinProtocol compile_tree_protocol(std::shared_ptr<const PinInstance> pin, const TreePacking& packing) {
  if (!pin) throw ArgumentError("protocol needs a PIN instance");
  detail::require_complete(*pin);
  validate_packing(*pin, packing);
  const int m = pin->m();
  const std::size_t p = pin->column_count();

  LinearTranscript transcript(pin);
  BitMatrix key(pin->space());
  for (const auto& tree : packing.trees) {
    std::vector<std::vector<std::pair<int, std::size_t>>> adj(static_cast<std::size_t>(m) + 1);
    int root = m;
    for (std::size_t c : tree) {
      const auto& e = pin->instance(c);
      adj[e.u].emplace_back(e.v, c);
      adj[e.v].emplace_back(e.u, c);
      root = std::min(root, e.u);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end(), [](const auto& x, const auto& y) { return x.second < y.second; });
    const std::size_t key_edge = adj[root].front().second;
    key.append(BitVector::unit(p, key_edge));

    std::vector<std::optional<std::size_t>> parent_edge(static_cast<std::size_t>(m) + 1);
    std::vector<bool> visited(static_cast<std::size_t>(m) + 1, false);
    std::deque<int> queue{root};
    visited[root] = true;
    while (!queue.empty()) {
      const int x = queue.front();
      queue.pop_front();
      for (const auto& [y, c] : adj[x]) {
        if (visited[y]) continue;
        visited[y] = true;
        parent_edge[y] = c;
        queue.push_back(y);
        if (c == key_edge) continue;
        const std::size_t reference = (x == root) ? key_edge : *parent_edge[x];
        transcript.append(x, BitVector::unit(p, c) ^ BitVector::unit(p, reference));
      }
    }
  }
  BitMatrix cr = BitMatrix::identity(pin->space());
  return PinProtocol{pin, packing, std::move(transcript), std::move(key), std::move(cr)};
}

}  // namespace skc
