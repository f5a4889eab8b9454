#pragma once

// Secret-key capacity as a fractional-partition linear program:
//
//   I(X_M) = H(X_M) - max_{λ ∈ Λ} Σ_B λ_B H(X_B | X_{B^c})
//
// where B ranges over the non-empty proper subsets of {1..m} and Λ holds the
// non-negative weightings in which every terminal's incident weights sum to 1.
// Solved exactly over the rationals by a dense tableau simplex with Bland's rule.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "skc/error.hpp"
#include "skc/rational.hpp"
#include "skc/subset.hpp"

namespace skc {

class FractionalPartition {
 public:
  FractionalPartition() = default;
  FractionalPartition(int m, std::map<SubsetMask, Rational> weights) : m_(m) {
    SubsetMask::check_m(m);
    for (auto& [b, w] : weights) {
      if (!b.is_proper_nonempty(m)) throw ArgumentError("partition weight on " + to_string(b) + " which is not a non-empty proper subset");
      if (w != 0) weights_.emplace(b, std::move(w));
    }
  }

  /// Weight 1/(m-1) on every (m-1)-subset.
  static FractionalPartition co_singletons(int m) {
    if (m < 2) throw ArgumentError("need at least two terminals");
    std::map<SubsetMask, Rational> w;
    for (int i = 1; i <= m; ++i) w.emplace(SubsetMask::singleton(i).complement(m), Rational(1, m - 1));
    return FractionalPartition(m, std::move(w));
  }

  /// Weight 1 on every singleton.
  static FractionalPartition singletons(int m) {
    std::map<SubsetMask, Rational> w;
    for (int i = 1; i <= m; ++i) w.emplace(SubsetMask::singleton(i), Rational(1));
    return FractionalPartition(m, std::move(w));
  }

  int m() const { return m_; }
  /// Non-zero weights only.
  const std::map<SubsetMask, Rational>& weights() const { return weights_; }
  Rational weight(SubsetMask b) const {
    auto it = weights_.find(b);
    return it == weights_.end() ? Rational(0) : it->second;
  }

  /// Description of the first violated constraint of Λ, if any.
  std::optional<std::string> violation() const {
    for (const auto& [b, w] : weights_) {
      if (w < 0) return "negative weight " + to_string(w) + " on " + to_string(b);
    }
    for (int i = 1; i <= m_; ++i) {
      Rational sum = 0;
      for (const auto& [b, w] : weights_) {
        if (b.contains(i)) sum += w;
      }
      if (sum != 1) return "weights incident to terminal " + std::to_string(i) + " sum to " + to_string(sum);
    }
    return std::nullopt;
  }

  bool is_feasible() const { return !violation().has_value(); }

  void validate() const {
    if (auto v = violation()) throw ConstraintViolation(*v);
  }

  /// Σ_B λ_B c_B for per-subset coefficients c (missing coefficients count as 0).
  Rational objective(const std::map<SubsetMask, Rational>& coefficients) const {
    Rational sum = 0;
    for (const auto& [b, w] : weights_) {
      auto it = coefficients.find(b);
      if (it != coefficients.end()) sum += w * it->second;
    }
    return sum;
  }

  friend bool operator==(const FractionalPartition&, const FractionalPartition&) = default;

 private:
  int m_ = 0;
  std::map<SubsetMask, Rational> weights_;
};

struct CapacityResult {
  int m = 0;
  /// I(X_M) in bits per source symbol of the supplied entropies.
  Rational capacity;
  Rational joint_entropy;
  /// max over Λ of Σ λ_B H(X_B | X_{B^c}).
  Rational optimum;
  FractionalPartition lambda_star;
  /// H(X_B | X_{B^c}) for every B.
  std::map<SubsetMask, Rational> objective_terms;
  /// Optimal dual prices, one per terminal: Σ_{i∈B} y_i ≥ c_B and Σ y_i = optimum.
  std::vector<Rational> dual;
  /// False when the entropies were rounded from floating point.
  bool exact = true;
  /// Some non-basic variable has zero reduced cost at the optimum.
  bool alternate_optima_possible = false;
  std::size_t pivots = 0;
};

/// c_B = H(X_B | X_{B^c}) = H(X_M) - H(X_{B^c}); throws when a subset is missing.
inline std::map<SubsetMask, Rational> conditional_terms(const EntropyMap& entropies, int m) {
  auto lookup = [&](SubsetMask s) -> const Rational& {
    auto it = entropies.find(s);
    if (it == entropies.end()) throw ArgumentError("entropy map is missing subset " + to_string(s));
    return it->second;
  };
  const Rational& joint = lookup(SubsetMask::full(m));
  std::map<SubsetMask, Rational> terms;
  for (SubsetMask b : proper_nonempty_subsets(m)) terms.emplace(b, joint - lookup(b.complement(m)));
  return terms;
}

namespace detail {

/// Dual prices certify the primal optimum: y must cover every c_B and sum to the optimum.
inline bool dual_certifies(const std::vector<Rational>& y, const std::map<SubsetMask, Rational>& terms,
                           const Rational& optimum) {
  Rational total = 0;
  for (const auto& v : y) total += v;
  if (total != optimum) return false;
  for (const auto& [b, c] : terms) {
    Rational cover = 0;
    for (int i : b.members()) cover += y[static_cast<std::size_t>(i - 1)];
    if (cover < c) return false;
  }
  return true;
}

}  // namespace detail

/// Solves the capacity LP from the entropies H(X_A) of every A ⊆ {1..m}.
///
/// The singleton partition is the starting basis (its columns form an
/// identity), entering and leaving variables follow Bland's rule over the
/// mask order of B, and the returned λ* is the final basic solution.
inline CapacityResult solve_capacity(const EntropyMap& entropies, int m) {
  if (m < 2) throw ArgumentError("capacity needs at least two terminals");
  if (m > 16) throw ArgumentError("capacity LP supports at most 16 terminals");
  CapacityResult result;
  result.m = m;
  result.objective_terms = conditional_terms(entropies, m);
  result.joint_entropy = entropies.at(SubsetMask::full(m));

  const std::vector<SubsetMask> vars = proper_nonempty_subsets(m);
  const std::size_t nvar = vars.size();
  const auto rows = static_cast<std::size_t>(m);
  std::vector<Rational> cost(nvar);
  for (std::size_t j = 0; j < nvar; ++j) cost[j] = result.objective_terms.at(vars[j]);

  // Variable j is the subset with mask j+1.
  auto var_of = [](SubsetMask s) { return static_cast<std::size_t>(s.bits()) - 1; };

  std::vector<std::vector<Rational>> tab(rows, std::vector<Rational>(nvar));
  std::vector<Rational> rhs(rows, Rational(1));
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < nvar; ++j) {
      if (vars[j].contains(static_cast<int>(i) + 1)) tab[i][j] = 1;
    }
    basis[i] = var_of(SubsetMask::singleton(static_cast<int>(i) + 1));
  }

  std::vector<Rational> reduced(nvar);
  auto recompute_reduced = [&] {
    for (std::size_t j = 0; j < nvar; ++j) {
      Rational r = cost[j];
      for (std::size_t i = 0; i < rows; ++i) {
        if (tab[i][j] != 0) r -= cost[basis[i]] * tab[i][j];
      }
      reduced[j] = std::move(r);
    }
  };
  recompute_reduced();

  for (;;) {
    std::size_t entering = nvar;
    for (std::size_t j = 0; j < nvar; ++j) {
      if (reduced[j] > 0) {
        entering = j;
        break;
      }
    }
    if (entering == nvar) break;

    std::size_t leave = rows;
    Rational best_ratio;
    for (std::size_t i = 0; i < rows; ++i) {
      if (tab[i][entering] <= 0) continue;
      Rational ratio = rhs[i] / tab[i][entering];
      if (leave == rows || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = std::move(ratio);
      }
    }
    if (leave == rows) throw std::logic_error("capacity LP reported unbounded over a bounded polytope");

    const Rational pivot = tab[leave][entering];
    for (auto& v : tab[leave]) v /= pivot;
    rhs[leave] /= pivot;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave || tab[i][entering] == 0) continue;
      const Rational factor = tab[i][entering];
      for (std::size_t j = 0; j < nvar; ++j) {
        if (tab[leave][j] != 0) tab[i][j] -= factor * tab[leave][j];
      }
      rhs[i] -= factor * rhs[leave];
    }
    const Rational factor = reduced[entering];
    for (std::size_t j = 0; j < nvar; ++j) {
      if (tab[leave][j] != 0) reduced[j] -= factor * tab[leave][j];
    }
    basis[leave] = entering;
    ++result.pivots;
  }

  std::map<SubsetMask, Rational> lambda;
  Rational optimum = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (rhs[i] != 0) lambda.emplace(vars[basis[i]], rhs[i]);
    optimum += cost[basis[i]] * rhs[i];
  }
  result.lambda_star = FractionalPartition(m, std::move(lambda));
  result.optimum = optimum;
  result.capacity = result.joint_entropy - optimum;

  result.dual.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t s = var_of(SubsetMask::singleton(static_cast<int>(i) + 1));
    result.dual[i] = cost[s] - reduced[s];
  }
  std::vector<bool> in_basis(nvar, false);
  for (std::size_t b : basis) in_basis[b] = true;
  for (std::size_t j = 0; j < nvar; ++j) {
    if (!in_basis[j] && reduced[j] == 0) result.alternate_optima_possible = true;
  }

  if (!result.lambda_star.is_feasible() || !detail::dual_certifies(result.dual, result.objective_terms, optimum)) {
    throw std::logic_error("capacity LP finished without a primal/dual optimality certificate");
  }
  return result;
}

/// Floating-point entropies are rounded to the best rational with denominator
/// at most `max_denominator` before solving; the result is marked inexact.
inline CapacityResult solve_capacity(const std::map<SubsetMask, double>& entropies, int m,
                                     const BigInt& max_denominator = BigInt(1) << 40) {
  EntropyMap rounded;
  for (const auto& [s, h] : entropies) rounded.emplace(s, approximate(h, max_denominator));
  CapacityResult r = solve_capacity(rounded, m);
  r.exact = false;
  return r;
}

struct OptimalityCertificate {
  bool optimal = false;
  Rational objective;
  Rational optimum;
  /// Dual prices proving `optimum` is an upper bound on every λ ∈ Λ.
  std::vector<Rational> dual;
};

/// Checks λ ∈ Λ and compares its objective with the LP optimum.
inline OptimalityCertificate verify_partition_optimal(const EntropyMap& entropies, const FractionalPartition& lambda) {
  lambda.validate();
  const int m = lambda.m();
  CapacityResult r = solve_capacity(entropies, m);
  OptimalityCertificate cert;
  cert.objective = lambda.objective(r.objective_terms);
  cert.optimum = r.optimum;
  cert.dual = r.dual;
  cert.optimal = cert.objective == cert.optimum;
  return cert;
}

struct CanonicalLambda {
  FractionalPartition lambda;
  /// True when λ is the uniform (m-1)-subset partition.
  bool canonical = false;
  bool alternate_optima_possible = false;
};

/// The λ* used for conditional multipartite information: the uniform
/// (m-1)-subset partition when it attains the optimum, the solver's vertex otherwise.
inline CanonicalLambda canonical_lambda_star(const CapacityResult& result, int m) {
  if (m != result.m) throw ArgumentError("terminal count does not match the capacity result");
  FractionalPartition tilde = FractionalPartition::co_singletons(m);
  if (tilde.objective(result.objective_terms) == result.optimum) {
    return CanonicalLambda{tilde, true, result.alternate_optima_possible};
  }
  return CanonicalLambda{result.lambda_star, false, result.alternate_optima_possible};
}

}  // namespace skc
