#pragma once

// Conditional multipartite information
//
//   I(X^n | L) = H(X^n | L) - Σ_B λ*_B H(X_B^n | X_{B^c}^n, L)
//
// evaluated by brute-force enumeration of an explicit pmf. The rank
// evaluation for PIN models lives in pin.hpp and returns the same report type.

#include <cmath>
#include <utility>
#include <vector>

#include "skc/error.hpp"
#include "skc/partition_lp.hpp"
#include "skc/rational.hpp"
#include "skc/source_model.hpp"
#include "skc/subset.hpp"

namespace skc {

enum class Backend { oracle, rank };

inline const char* to_string(Backend b) { return b == Backend::oracle ? "oracle" : "rank"; }

struct CmiTerm {
  SubsetMask block;
  Rational weight;
  /// H(X_B^n | X_{B^c}^n, L)
  Bits conditional;
};

struct CmiReport {
  Backend backend = Backend::oracle;
  Bits value;
  FractionalPartition lambda_used;
  /// H(X^n | L)
  Bits joint_given_l;
  std::vector<CmiTerm> terms;
};

namespace detail {

inline void check_lambda(const FractionalPartition& lambda, int m) {
  if (lambda.m() != m) throw ArgumentError("partition is over a different number of terminals");
  lambda.validate();
}

inline CmiReport assemble_cmi(Backend backend, const FractionalPartition& lambda, Bits joint_given_l,
                              std::vector<CmiTerm> terms) {
  CmiReport r{backend, joint_given_l, lambda, joint_given_l, std::move(terms)};
  for (const auto& t : r.terms) r.value = r.value - t.weight * t.conditional;
  return r;
}

}  // namespace detail

/// I(X^n | L) for L = f(X^n), where `p` is already the pmf of X^n.
template <class F>
CmiReport cmi_oracle(const JointPMF& p, F&& f, const FractionalPartition& lambda) {
  const int m = p.terminal_count();
  detail::check_lambda(lambda, m);
  const SubsetMask full = SubsetMask::full(m);
  const Bits h_joint = subset_entropy_bits(p, full);
  // L is a function of X^n, so H(X^n | L) = H(X^n) - H(L) and
  // H(X_B | X_{B^c}, L) = H(X^n) - H(L, X_{B^c}).
  const Bits h_l = detail::joint_entropy_with(p, f, SubsetMask{});
  std::vector<CmiTerm> terms;
  for (const auto& [b, w] : lambda.weights()) {
    terms.push_back(CmiTerm{b, w, h_joint - detail::joint_entropy_with(p, f, b.complement(m))});
  }
  return detail::assemble_cmi(Backend::oracle, lambda, h_joint - h_l, std::move(terms));
}

/// n·I(X_M) evaluated at λ from the pmf of X^n: H(X^n) - Σ λ_B H(X_B^n | X_{B^c}^n).
inline Bits weighted_capacity_oracle(const JointPMF& p, const FractionalPartition& lambda) {
  const int m = p.terminal_count();
  Bits out = subset_entropy_bits(p, SubsetMask::full(m));
  for (const auto& [b, w] : lambda.weights()) out = out - w * conditional_subset_entropy_bits(p, b, b.complement(m));
  return out;
}

struct Lemma1Check {
  /// n·I(X_M) - [I(X^n|L) + H(L) - Σ λ_B H(L | X_{B^c}^n)]; zero when the identity holds.
  Bits residual;
  Bits n_capacity;
  Bits cmi;
  Bits h_l;
  /// Σ λ_B H(L | X_{B^c}^n)
  Bits weighted_conditional;
};

template <class F>
Lemma1Check verify_lemma1(const JointPMF& p, F&& f, const FractionalPartition& lambda) {
  const int m = p.terminal_count();
  CmiReport cmi = cmi_oracle(p, f, lambda);
  Lemma1Check out;
  out.n_capacity = weighted_capacity_oracle(p, lambda);
  out.cmi = cmi.value;
  out.h_l = function_entropy_bits(p, f);
  out.weighted_conditional = Bits::from_exact(0);
  for (const auto& [b, w] : lambda.weights()) {
    out.weighted_conditional = out.weighted_conditional + w * function_entropy_bits(p, f, b.complement(m));
  }
  out.residual = out.n_capacity - (out.cmi + out.h_l - out.weighted_conditional);
  return out;
}

struct WynerBound {
  /// H(L) - (n·I(X_M) - I(X^n | L)); non-negative for every L.
  Bits margin;
  Bits h_l;
  Bits n_capacity;
  Bits cmi;
  bool holds(double tolerance = 1e-9) const {
    return margin.exact ? *margin.exact >= 0 : margin.value >= -tolerance;
  }
};

template <class F>
WynerBound wyner_bound_check(const JointPMF& p, F&& f, const FractionalPartition& lambda) {
  WynerBound out;
  out.cmi = cmi_oracle(p, f, lambda).value;
  out.h_l = function_entropy_bits(p, f);
  out.n_capacity = weighted_capacity_oracle(p, lambda);
  out.margin = out.h_l - (out.n_capacity - out.cmi);
  return out;
}

}  // namespace skc
