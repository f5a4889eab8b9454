#pragma once

// Brute-force references used only by the tests. None of them share code with
// the routines under test beyond the basic value types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "skc/gf2.hpp"
#include "skc/partition_lp.hpp"
#include "skc/pin_instance.hpp"
#include "skc/random.hpp"
#include "skc/rational.hpp"
#include "skc/source_model.hpp"
#include "skc/subset.hpp"

namespace skc::reference {

/// log2 of the number of distinct vectors in the row span, by enumerating all
/// 2^rows combinations.
inline std::size_t span_rank(const std::vector<BitVector>& rows, std::size_t p) {
  std::set<BitVector> span;
  const std::size_t count = std::size_t{1} << rows.size();
  for (std::size_t mask = 0; mask < count; ++mask) {
    BitVector v(p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if ((mask >> i) & 1u) v ^= rows[i];
    }
    span.insert(v);
  }
  std::size_t r = 0;
  while ((std::size_t{1} << r) < span.size()) ++r;
  return r;
}

inline std::size_t span_rank(const BitMatrix& m) { return span_rank(m.rows(), m.column_count()); }

/// Rank of m with the columns outside `keep` zeroed, via span_rank.
inline std::size_t span_rank_masked(const BitMatrix& m, const BitVector& keep) {
  std::vector<BitVector> rows;
  for (const auto& r : m.rows()) rows.push_back(r & keep);
  return span_rank(rows, m.column_count());
}

/// Shannon entropy in bits of a list of probabilities (doubles).
inline double shannon(const std::vector<double>& ps) {
  double h = 0;
  for (double p : ps) {
    if (p > 0) h -= p * std::log2(p);
  }
  return h;
}

/// Solves the square rational system a·x = b; nullopt when singular.
inline std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

/// max over Λ of Σ λ_B c_B by enumerating every basic feasible solution.
/// Practical for m ≤ 4.
inline Rational lp_vertex_max(const std::map<SubsetMask, Rational>& coefficients, int m) {
  const std::vector<SubsetMask> vars = proper_nonempty_subsets(m);
  const std::size_t nv = vars.size();
  std::optional<Rational> best;
  std::vector<std::size_t> pick(static_cast<std::size_t>(m));
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
    if (depth == pick.size()) {
      std::vector<std::vector<Rational>> a(pick.size(), std::vector<Rational>(pick.size()));
      for (std::size_t r = 0; r < pick.size(); ++r) {
        for (std::size_t c = 0; c < pick.size(); ++c) a[r][c] = vars[pick[c]].contains(static_cast<int>(r) + 1) ? 1 : 0;
      }
      auto x = solve_square(a, std::vector<Rational>(pick.size(), Rational(1)));
      if (!x) return;
      Rational obj = 0;
      for (std::size_t c = 0; c < pick.size(); ++c) {
        if ((*x)[c] < 0) return;
        obj += (*x)[c] * coefficients.at(vars[pick[c]]);
      }
      if (!best || obj > *best) best = obj;
      return;
    }
    for (std::size_t v = start; v < nv; ++v) {
      pick[depth] = v;
      rec(v + 1, depth + 1);
    }
  };
  rec(0, 0);
  return *best;
}

/// Conditional entropy coefficients H(X_M) - H(X_{B^c}) from a subset entropy map.
inline std::map<SubsetMask, Rational> lp_coefficients(const EntropyMap& h, int m) {
  std::map<SubsetMask, Rational> out;
  const Rational joint = h.at(SubsetMask::full(m));
  for (SubsetMask b : proper_nonempty_subsets(m)) out[b] = joint - h.at(b.complement(m));
  return out;
}

/// Largest number of edge-disjoint spanning trees by exhaustive assignment of
/// edges to trees. Practical for about ten edges.
inline std::size_t exhaustive_tree_count(int m, const std::vector<Edge>& edges) {
  if (m == 1) return 0;
  const std::size_t tree_size = static_cast<std::size_t>(m - 1);
  auto spans = [&](const std::vector<std::size_t>& ids) {
    std::vector<int> parent(static_cast<std::size_t>(m) + 1);
    for (int v = 0; v <= m; ++v) parent[static_cast<std::size_t>(v)] = v;
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    std::size_t joined = 0;
    for (std::size_t id : ids) {
      int a = find(edges[id].u), b = find(edges[id].v);
      if (a == b) return false;
      parent[a] = b;
      ++joined;
    }
    return joined == tree_size;
  };
  for (std::size_t k = edges.size() / tree_size; k >= 1; --k) {
    // Assign each edge to one of k trees or to none.
    std::vector<std::vector<std::size_t>> trees(k);
    std::function<bool(std::size_t)> rec = [&](std::size_t e) -> bool {
      if (e == edges.size()) {
        for (const auto& t : trees) {
          if (!spans(t)) return false;
        }
        return true;
      }
      for (std::size_t t = 0; t < k; ++t) {
        if (trees[t].size() == tree_size) continue;
        trees[t].push_back(e);
        if (rec(e + 1)) return true;
        trees[t].pop_back();
        if (trees[t].empty()) break;  // trees are interchangeable
      }
      return rec(e + 1);
    };
    if (rec(0)) return k;
  }
  return 0;
}

/// Random point of Λ: a convex combination of random partitions of [m], each
/// partition being a vertex of Λ.
inline FractionalPartition random_fractional_partition(int m, Rng& rng) {
  std::map<SubsetMask, Rational> weights;
  const std::size_t parts = uniform_index(rng, 1, 4);
  std::vector<Rational> coef(parts);
  Rational total = 0;
  for (auto& c : coef) {
    c = Rational(static_cast<long long>(uniform_index(rng, 1, 6)));
    total += c;
  }
  for (std::size_t k = 0; k < parts; ++k) {
    std::map<std::size_t, SubsetMask> blocks;
    const std::size_t nblocks = uniform_index(rng, 2, static_cast<std::size_t>(m));
    for (int v = 1; v <= m; ++v) {
      auto& b = blocks[uniform_index(rng, 0, nblocks - 1)];
      b = b.with(v);
    }
    if (blocks.size() < 2) {
      // Every vertex landed in one block; split off vertex 1.
      blocks.clear();
      blocks[0] = SubsetMask::singleton(1);
      blocks[1] = SubsetMask::singleton(1).complement(m);
    }
    for (const auto& [id, b] : blocks) weights[b] += coef[k] / total;
  }
  return FractionalPartition(m, weights);
}

/// Source whose terminals observe random GF(2) linear maps of k uniform bits.
/// Every marginal is uniform on a subspace image, so all entropies are exact.
inline JointPMF random_linear_pmf(Rng& rng, int m, std::size_t max_bits = 3, std::size_t max_view = 2) {
  const std::size_t k = uniform_index(rng, 1, max_bits);
  std::vector<std::vector<BitVector>> views(static_cast<std::size_t>(m));
  std::vector<Symbol> sizes;
  for (auto& v : views) {
    const std::size_t d = uniform_index(rng, 1, max_view);
    for (std::size_t r = 0; r < d; ++r) v.push_back(random_row(k, rng));
    sizes.push_back(Symbol{1} << d);
  }
  std::map<Outcome, Rational> mass;
  const std::size_t count = std::size_t{1} << k;
  for (std::size_t x = 0; x < count; ++x) {
    BitVector xi(k);
    for (std::size_t c = 0; c < k; ++c) {
      if ((x >> c) & 1u) xi.set(c);
    }
    Outcome o;
    for (const auto& v : views) {
      Symbol s = 0;
      for (std::size_t r = 0; r < v.size(); ++r) s |= static_cast<Symbol>(v[r].dot(xi)) << r;
      o.push_back(s);
    }
    mass[o] += Rational(1, static_cast<long long>(count));
  }
  std::vector<JointPMF::Entry> entries(mass.begin(), mass.end());
  return JointPMF(sizes, entries);
}

}  // namespace skc::reference
