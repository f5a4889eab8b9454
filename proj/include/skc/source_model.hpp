#pragma once

// Explicit finite joint distributions over m terminals and brute-force
// entropy evaluation. Probabilities are exact rationals; entropies are
// reported in double precision, and additionally as exact rationals when
// every probability involved is a power of two.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "skc/error.hpp"
#include "skc/gf2.hpp"
#include "skc/pin_instance.hpp"
#include "skc/rational.hpp"
#include "skc/subset.hpp"

namespace skc {

using Symbol = std::uint64_t;
using Outcome = std::vector<Symbol>;

inline constexpr std::size_t default_oracle_edge_cap = 20;
inline constexpr std::size_t default_outcome_cap = std::size_t{1} << 20;

class JointPMF {
 public:
  using Entry = std::pair<Outcome, Rational>;

  JointPMF(std::vector<Symbol> alphabet_sizes, std::vector<Entry> entries) : alphabet_sizes_(std::move(alphabet_sizes)) {
    const std::size_t m = alphabet_sizes_.size();
    if (m < 1 || m > static_cast<std::size_t>(SubsetMask::max_terminals)) {
      throw ArgumentError("terminal count " + std::to_string(m) + " out of range");
    }
    for (Symbol a : alphabet_sizes_) {
      if (a == 0) throw ArgumentError("alphabet sizes must be positive");
    }
    std::map<Outcome, Rational> merged;
    Rational total = 0;
    for (auto& [outcome, p] : entries) {
      if (outcome.size() != m) throw ArgumentError("outcome tuple has the wrong number of symbols");
      for (std::size_t i = 0; i < m; ++i) {
        if (outcome[i] >= alphabet_sizes_[i]) {
          throw ArgumentError("symbol " + std::to_string(outcome[i]) + " outside the alphabet of terminal " +
                              std::to_string(i + 1));
        }
      }
      if (p < 0) throw ArgumentError("negative probability");
      if (!merged.emplace(outcome, p).second) throw ArgumentError("duplicate outcome in pmf");
      total += p;
    }
    if (total != 1) throw ArgumentError("probabilities sum to " + to_string(total) + ", not 1");
    for (auto& [outcome, p] : merged) {
      if (p != 0) entries_.emplace_back(outcome, p);
    }
  }

  int terminal_count() const { return static_cast<int>(alphabet_sizes_.size()); }
  const std::vector<Symbol>& alphabet_sizes() const { return alphabet_sizes_; }
  /// Support entries sorted by outcome.
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }

 private:
  std::vector<Symbol> alphabet_sizes_;
  std::vector<Entry> entries_;
};

namespace detail {

template <class T>
struct unwrap_optional {
  using type = T;
};
template <class T>
struct unwrap_optional<std::optional<T>> {
  using type = T;
};

template <class Dist>
Bits entropy_of_distribution(const Dist& dist) {
  double h = 0.0;
  Rational exact = 0;
  bool dyadic = true;
  for (const auto& [key, p] : dist) {
    if (p == 0) continue;
    const double pd = to_double(p);
    h -= pd * std::log2(pd);
    if (dyadic) {
      if (auto k = exact_log2(p)) {
        exact -= p * Rational(*k);
      } else {
        dyadic = false;
      }
    }
  }
  if (h < 0) h = 0;  // -0.0 and rounding residue for point masses
  Bits out{h, std::nullopt};
  if (dyadic) out.exact = exact;
  return out;
}

inline Outcome project(const Outcome& x, SubsetMask set) {
  Outcome out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (set.contains(static_cast<int>(i) + 1)) out.push_back(x[i]);
  }
  return out;
}

inline void check_subset(const JointPMF& p, SubsetMask set) {
  if (!set.subset_of(SubsetMask::full(p.terminal_count()))) throw ArgumentError("subset mentions a terminal outside the model");
}

/// H(f(X), X_C) for a function f of the full outcome.
template <class F>
Bits joint_entropy_with(const JointPMF& p, F&& f, SubsetMask conditioning) {
  check_subset(p, conditioning);
  using Result = std::decay_t<std::invoke_result_t<F&, const Outcome&>>;
  using Key = typename unwrap_optional<Result>::type;
  std::map<std::pair<Key, Outcome>, Rational> dist;
  for (const auto& [x, px] : p.entries()) {
    Result value = f(x);
    if constexpr (std::is_same_v<Result, Key>) {
      dist[{std::move(value), project(x, conditioning)}] += px;
    } else {
      if (!value) throw ArgumentError("function is undefined on an outcome in the support");
      dist[{std::move(*value), project(x, conditioning)}] += px;
    }
  }
  return entropy_of_distribution(dist);
}

}  // namespace detail

/// H(X_A) with H(X_∅) = 0.
inline Bits subset_entropy_bits(const JointPMF& p, SubsetMask set) {
  detail::check_subset(p, set);
  if (set.empty()) return Bits::from_exact(0);
  std::map<Outcome, Rational> dist;
  for (const auto& [x, px] : p.entries()) dist[detail::project(x, set)] += px;
  return detail::entropy_of_distribution(dist);
}

inline double subset_entropy(const JointPMF& p, SubsetMask set) { return subset_entropy_bits(p, set).value; }
inline std::optional<Rational> subset_entropy_exact(const JointPMF& p, SubsetMask set) {
  return subset_entropy_bits(p, set).exact;
}

/// H(X_A | X_C) = H(X_{A∪C}) - H(X_C); A and C must be disjoint.
inline Bits conditional_subset_entropy_bits(const JointPMF& p, SubsetMask a, SubsetMask c) {
  if (!(a & c).empty()) throw ArgumentError("conditional entropy needs disjoint subsets");
  return subset_entropy_bits(p, a | c) - subset_entropy_bits(p, c);
}

inline double conditional_subset_entropy(const JointPMF& p, SubsetMask a, SubsetMask c) {
  return conditional_subset_entropy_bits(p, a, c).value;
}

/// H(X_A) for every A ⊆ {1..m}.
inline std::map<SubsetMask, Bits> all_subset_entropies(const JointPMF& p) {
  std::map<SubsetMask, Bits> out;
  for (SubsetMask a : all_subsets(p.terminal_count())) out.emplace(a, subset_entropy_bits(p, a));
  return out;
}

/// H(f(X) | X_C). `f` maps an outcome to any ordered value; returning an
/// empty std::optional marks it undefined there, which is an error on the support.
template <class F>
Bits function_entropy_bits(const JointPMF& p, F&& f, SubsetMask conditioning = {}) {
  Bits joint = detail::joint_entropy_with(p, f, conditioning);
  return joint - subset_entropy_bits(p, conditioning);
}

template <class F>
double entropy_of_function(const JointPMF& p, F&& f, SubsetMask conditioning = {}) {
  return function_entropy_bits(p, std::forward<F>(f), conditioning).value;
}

/// n i.i.d. copies of p as a single pmf: terminal i's symbol is the base-|X_i|
/// number whose k-th digit is the k-th copy's symbol.
inline JointPMF power(const JointPMF& p, int n, std::size_t outcome_cap = default_outcome_cap) {
  if (n < 1) throw ArgumentError("power needs n >= 1");
  double support = std::pow(static_cast<double>(p.support_size()), n);
  if (support > static_cast<double>(outcome_cap)) {
    throw OracleScaleError("i.i.d. extension would have " + std::to_string(static_cast<long double>(support)) +
                           " outcomes (cap " + std::to_string(outcome_cap) + ")");
  }
  const std::size_t m = p.alphabet_sizes().size();
  std::vector<Symbol> sizes(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (int k = 0; k < n; ++k) sizes[i] *= p.alphabet_sizes()[i];
  }
  std::vector<JointPMF::Entry> entries{{Outcome(m, 0), Rational(1)}};
  std::vector<Symbol> place(m, 1);
  for (int k = 0; k < n; ++k) {
    std::vector<JointPMF::Entry> next;
    next.reserve(entries.size() * p.support_size());
    for (const auto& [x, px] : entries) {
      for (const auto& [y, py] : p.entries()) {
        Outcome z = x;
        for (std::size_t i = 0; i < m; ++i) z[i] += y[i] * place[i];
        next.emplace_back(std::move(z), px * py);
      }
    }
    entries = std::move(next);
    for (std::size_t i = 0; i < m; ++i) place[i] *= p.alphabet_sizes()[i];
  }
  return JointPMF(std::move(sizes), std::move(entries));
}

/// p independent fair bits, one per terminal.
inline JointPMF uniform_bits(int p) {
  if (p < 1 || p > SubsetMask::max_terminals || static_cast<std::size_t>(1) << p > default_outcome_cap) {
    throw OracleScaleError("uniform_bits supports 1.." + std::to_string(20) + " bits");
  }
  const std::size_t count = std::size_t{1} << p;
  const Rational prob(BigInt(1), BigInt(count));
  std::vector<JointPMF::Entry> entries;
  entries.reserve(count);
  for (std::size_t x = 0; x < count; ++x) {
    Outcome o(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) o[i] = (x >> i) & 1u;
    entries.emplace_back(std::move(o), prob);
  }
  return JointPMF(std::vector<Symbol>(static_cast<std::size_t>(p), 2), std::move(entries));
}

/// Recovers the edge-instance bit vector ξ from the terminals' symbols of a
/// pmf produced by pin_to_pmf.
class PinDecoder {
 public:
  explicit PinDecoder(const PinInstance& pin) : columns_(pin.column_count()) {
    for (std::size_t c = 0; c < pin.column_count(); ++c) {
      const int u = pin.instance(c).u;
      const auto& inc = pin.incident(u);
      const auto pos = static_cast<unsigned>(std::lower_bound(inc.begin(), inc.end(), c) - inc.begin());
      slots_.push_back({static_cast<std::size_t>(u - 1), pos});
    }
  }

  BitVector operator()(const Outcome& x) const {
    BitVector xi(columns_);
    for (std::size_t c = 0; c < columns_; ++c) {
      if ((x[slots_[c].first] >> slots_[c].second) & 1u) xi.set(c);
    }
    return xi;
  }

 private:
  std::size_t columns_;
  std::vector<std::pair<std::size_t, unsigned>> slots_;
};

/// The PIN source as an explicit pmf: each of the 2^|E^(n)| edge assignments
/// is equiprobable, and terminal i's symbol packs its incident bits (bit k is
/// the k-th column of E_i).
inline JointPMF pin_to_pmf(const PinInstance& pin, std::size_t edge_cap = default_oracle_edge_cap) {
  const std::size_t p = pin.column_count();
  if (p > edge_cap) {
    throw OracleScaleError("PIN model has " + std::to_string(p) + " edge instances; oracle cap is " +
                           std::to_string(edge_cap));
  }
  const int m = pin.m();
  std::vector<Symbol> sizes;
  for (int i = 1; i <= m; ++i) sizes.push_back(Symbol{1} << pin.incident(i).size());
  const std::size_t count = std::size_t{1} << p;
  const Rational prob(BigInt(1), BigInt(count));
  std::vector<JointPMF::Entry> entries;
  entries.reserve(count);
  for (std::size_t xi = 0; xi < count; ++xi) {
    Outcome o(static_cast<std::size_t>(m), 0);
    for (int i = 1; i <= m; ++i) {
      const auto& inc = pin.incident(i);
      for (std::size_t k = 0; k < inc.size(); ++k) {
        if ((xi >> inc[k]) & 1u) o[i - 1] |= Symbol{1} << k;
      }
    }
    entries.emplace_back(std::move(o), prob);
  }
  return JointPMF(std::move(sizes), std::move(entries));
}

/// The outcome map X ↦ Lξ for a matrix over the pin's column space.
inline auto linear_function(const PinInstance& pin, const BitMatrix& l) {
  if (!same_space(pin.space(), l.space_ptr())) throw DimensionError("matrix is not over the PIN column space");
  return [decode = PinDecoder(pin), l](const Outcome& x) { return l.apply(decode(x)); };
}

}  // namespace skc
