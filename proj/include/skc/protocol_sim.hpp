#pragma once

// Exact (zero-error) checkers for linear interactive communication over a PIN
// model: interactivity of a transcript, common randomness, secret keys,
// interactive common information, and the communication entropy inequality.

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "skc/error.hpp"
#include "skc/gf2.hpp"
#include "skc/partition_lp.hpp"
#include "skc/pin.hpp"
#include "skc/pin_instance.hpp"
#include "skc/rational.hpp"
#include "skc/transcript.hpp"

namespace skc {

struct TranscriptVerdict {
  bool valid = true;
  /// 1-based index of the first transmission its sender could not have computed.
  std::optional<std::size_t> first_violation;
  std::string detail;
};

/// Each transmission must lie in the span of the sender's own edge bits and
/// all earlier transmissions.
inline TranscriptVerdict validate_transcript(const LinearTranscript& t) {
  const PinInstance& pin = t.pin();
  const std::size_t p = pin.column_count();
  RowBasis history(p);
  const auto& txs = t.transmissions();
  for (std::size_t j = 0; j < txs.size(); ++j) {
    RowBasis allowed = history;
    for (std::size_t c : pin.incident(txs[j].sender)) allowed.insert(BitVector::unit(p, c));
    if (!allowed.contains(txs[j].row)) {
      return TranscriptVerdict{false, j + 1,
                               "transmission " + std::to_string(j + 1) + " is not computable by terminal " +
                                   std::to_string(txs[j].sender)};
    }
    history.insert(txs[j].row);
  }
  return {};
}

namespace detail {

/// Span of what terminal i knows after the public discussion: its own edge bits and F.
inline RowBasis knowledge_of(const LinearTranscript& t, int terminal) {
  const PinInstance& pin = t.pin();
  const std::size_t p = pin.column_count();
  RowBasis known(p);
  for (std::size_t c : pin.incident(terminal)) known.insert(BitVector::unit(p, c));
  for (const auto& tx : t.transmissions()) known.insert(tx.row);
  return known;
}

inline void check_over(const LinearTranscript& t, const BitMatrix& m) {
  if (!same_space(t.pin().space(), m.space_ptr())) throw DimensionError("matrix is not over the transcript's column space");
}

}  // namespace detail

struct CrVerdict {
  bool ok = true;
  /// Terminals that cannot reconstruct every row of J.
  std::vector<int> failing_terminals;
};

/// J is common randomness when every terminal can compute every row of J
/// from its own observations and the transcript.
inline CrVerdict is_common_randomness(const BitMatrix& j, const LinearTranscript& t) {
  detail::check_over(t, j);
  CrVerdict out;
  for (int i = 1; i <= t.pin().m(); ++i) {
    RowBasis known = detail::knowledge_of(t, i);
    for (const auto& row : j.rows()) {
      if (!known.contains(row)) {
        out.ok = false;
        out.failing_terminals.push_back(i);
        break;
      }
    }
  }
  return out;
}

struct SkVerdict {
  bool ok = false;
  bool is_common_randomness = false;
  /// I(K; F) = 0
  bool secret = false;
  bool rate_achieved = false;
  std::size_t leakage = 0;
  Rational key_rate;
  /// (1/n)·rank(F)
  Rational comm_rank_rate;
  /// (1/n)·(number of transmitted bits)
  Rational comm_bit_rate;
  /// Some transmission is linearly redundant (bit rate exceeds rank rate).
  bool redundant = false;
};

/// Exact secret key: K is a common randomness, I(K;F) = 0, and
/// (1/n)·rank(K) ≥ capacity (per-symbol).
inline SkVerdict is_secret_key(const BitMatrix& k, const LinearTranscript& t, const Rational& capacity) {
  detail::check_over(t, k);
  const int n = t.pin().n();
  const BitMatrix f = t.matrix();
  SkVerdict out;
  out.is_common_randomness = is_common_randomness(k, t).ok;
  out.leakage = mutual_information_linear(k, f);
  out.secret = out.leakage == 0;
  out.key_rate = Rational(rank(k)) / n;
  out.comm_rank_rate = Rational(rank(f)) / n;
  out.comm_bit_rate = Rational(t.r()) / n;
  out.redundant = out.comm_bit_rate != out.comm_rank_rate;
  out.rate_achieved = out.key_rate >= capacity;
  out.ok = out.is_common_randomness && out.secret && out.rate_achieved;
  return out;
}

struct CiVerdict {
  bool ok = false;
  bool is_common_randomness = false;
  /// I(X^n | J, F) on the rank backend.
  Rational cmi;
};

/// (J, F) is an exact interactive common information when J is a CR and the
/// conditional multipartite information given (J, F) vanishes.
inline CiVerdict is_interactive_ci(const BitMatrix& j, const LinearTranscript& t, const FractionalPartition& lambda) {
  detail::check_over(t, j);
  CiVerdict out;
  out.is_common_randomness = is_common_randomness(j, t).ok;
  out.cmi = *detail::cmi_rank_auto(t.pin(), stack(j, t.matrix()), lambda).value.exact;
  out.ok = out.is_common_randomness && out.cmi == 0;
  return out;
}

struct CommInequality {
  /// H(F) = rank(F)
  Rational lhs;
  /// Σ_B λ_B H(F | X_{B^c}) = Σ_B λ_B rank(F restricted to E(B))
  Rational rhs;
  Rational margin() const { return lhs - rhs; }
};

/// Both sides of H(F) ≥ Σ_B λ_B H(F | X_{B^c}) for an arbitrary matrix F. No
/// interactivity check: invalid transcripts may give a negative margin.
inline CommInequality comm_inequality(const PinInstance& pin, const BitMatrix& f, const FractionalPartition& lambda) {
  detail::check_matrix(pin, f);
  detail::check_lambda(lambda, pin.m());
  CommInequality out;
  out.lhs = Rational(rank(f));
  for (const auto& [b, w] : lambda.weights()) out.rhs += w * Rational(masked_rank(f, pin.within_mask(b)));
  return out;
}

/// The inequality for an interactive transcript; throws PreconditionError when
/// the transcript is not interactive, since the inequality is then not guaranteed.
inline CommInequality verify_comm_inequality(const LinearTranscript& t, const FractionalPartition& lambda) {
  TranscriptVerdict v = validate_transcript(t);
  if (!v.valid) throw PreconditionError("communication inequality needs an interactive transcript: " + v.detail);
  return comm_inequality(t.pin(), t.matrix(), lambda);
}

/// Finite-n instantiation of the lower-bound argument for a key K obtained
/// from F. All quantities are per source symbol (divided by n).
struct Theorem1Report {
  /// I(X_M) evaluated at λ.
  Rational capacity;
  /// (1/n) I(X^n | K, F)
  Rational cmi;
  /// I(X_M) - (1/n)H(K,F) + (1/n)Σλ H(F|X_{B^c}) + (1/n)Σλ H(K|X_{B^c},F)
  Rational chain_rhs;
  /// cmi - chain_rhs; the identity holds when this is zero.
  Rational chain_residual;
  Rational joint_rate;              // (1/n) H(K, F)
  Rational comm_conditional_rate;   // (1/n) Σλ H(F | X_{B^c})
  Rational key_conditional_rate;    // (1/n) Σλ H(K | X_{B^c}, F)
  Rational comm_entropy_rate;       // (1/n) H(F)
  Rational comm_bit_rate;           // (1/n) |transmissions|
  /// (1/n)H(K,F) ≤ I(X_M) + (1/n)H(F)
  bool joint_rate_bound_holds = false;
  /// C(m,2) for complete graphs: the smallest linear CI rate.
  std::optional<Rational> lci_rate;
  /// comm bit-rate ≥ lci_rate - I(X_M)
  std::optional<bool> comm_bound_holds;
  std::optional<bool> comm_bound_tight;
  /// (K, F) is an exact interactive CI: cmi = 0.
  bool exact_ci = false;
};

inline Theorem1Report theorem1_report(const BitMatrix& k, const LinearTranscript& t, const FractionalPartition& lambda) {
  detail::check_over(t, k);
  const PinInstance& pin = t.pin();
  detail::check_lambda(lambda, pin.m());
  const int n = pin.n();
  const BitMatrix f = t.matrix();
  const BitMatrix kf = stack(k, f);

  Theorem1Report out;
  out.capacity = weighted_capacity_rank(pin, lambda) / n;
  out.cmi = *detail::cmi_rank_auto(pin, kf, lambda).value.exact / n;
  out.joint_rate = Rational(rank(kf)) / n;
  for (const auto& [b, w] : lambda.weights()) {
    const BitVector inside = pin.within_mask(b);
    const std::size_t f_in = masked_rank(f, inside);
    const std::size_t kf_in = masked_rank(kf, inside);
    out.comm_conditional_rate += w * Rational(f_in) / n;
    out.key_conditional_rate += w * Rational(kf_in - f_in) / n;
  }
  out.chain_rhs = out.capacity - out.joint_rate + out.comm_conditional_rate + out.key_conditional_rate;
  out.chain_residual = out.cmi - out.chain_rhs;
  out.comm_entropy_rate = Rational(rank(f)) / n;
  out.comm_bit_rate = Rational(t.r()) / n;
  out.joint_rate_bound_holds = out.joint_rate <= out.capacity + out.comm_entropy_rate;
  out.exact_ci = out.cmi == 0;
  if (pin.is_complete()) {
    const int m = pin.m();
    out.lci_rate = Rational(m * (m - 1), 2);
    out.comm_bound_holds = out.comm_bit_rate >= *out.lci_rate - out.capacity;
    out.comm_bound_tight = out.comm_bit_rate == *out.lci_rate - out.capacity;
  }
  return out;
}

}  // namespace skc
