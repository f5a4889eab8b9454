#pragma once

// Randomized invariant campaigns. Each trial draws from its own generator
// (seed, trial index), so results do not depend on execution order.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "skc/gf2.hpp"
#include "skc/io.hpp"
#include "skc/multipartite_info.hpp"
#include "skc/partition_lp.hpp"
#include "skc/pin.hpp"
#include "skc/protocol_sim.hpp"
#include "skc/random.hpp"
#include "skc/source_model.hpp"

namespace skc::suites {

using json = io::json;

inline constexpr double oracle_tolerance = 1e-9;

struct SuiteResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t violations = 0;
  json records = json::array();
  /// Fixed cases run once per campaign (negative controls, equality witnesses).
  json fixed = json::array();
};

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> all{"rank-lemma", "lemma1", "cmi-formula", "comm-ineq", "lci-bound", "incidence"};
  return all;
}

namespace detail {

/// Oracle pmfs are deterministic and reused across trials.
class PmfCache {
 public:
  const JointPMF& bits(int p) {
    auto it = bits_.find(p);
    if (it == bits_.end()) it = bits_.emplace(p, uniform_bits(p)).first;
    return it->second;
  }
  const JointPMF& pin(const PinInstance& instance) {
    const auto key = std::make_pair(instance.m(), instance.n());
    auto it = pins_.find(key);
    if (it == pins_.end()) it = pins_.emplace(key, pin_to_pmf(instance)).first;
    return it->second;
  }

 private:
  std::map<int, JointPMF> bits_;
  std::map<std::pair<int, int>, JointPMF> pins_;
};

inline std::string instance_name(const PinInstance& pin) {
  return "K" + std::to_string(pin.m()) + ",n=" + std::to_string(pin.n());
}

inline bool exact_match(const Bits& b, const Rational& expected) {
  return std::fabs(b.value - to_double(expected)) <= oracle_tolerance && (!b.exact || *b.exact == expected);
}

inline std::shared_ptr<const PinInstance> complete_pin(int m, int n) {
  return std::make_shared<const PinInstance>(Graph::complete(m), n);
}

}  // namespace detail

/// Brute-force entropy of Mξ (and given ξ_S) equals the rank formulas.
inline SuiteResult rank_lemma(std::size_t trials, std::uint64_t seed) {
  SuiteResult out{"rank-lemma"};
  detail::PmfCache cache;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = trial_rng(seed, t);
    const auto p = uniform_index(rng, 1, 12);
    const auto space = ColumnSpace::numbered(p);
    const BitMatrix m = random_matrix(space, uniform_index(rng, 0, p + 1), rng);
    std::vector<std::string> conditioned;
    SubsetMask s;
    for (std::size_t c = 0; c < p; ++c) {
      if (rng() & 1u) {
        conditioned.push_back(space->label(c));
        s = s.with(static_cast<int>(c) + 1);
      }
    }
    const JointPMF& pmf = cache.bits(static_cast<int>(p));
    auto f = [&m, p](const Outcome& x) {
      BitVector xi(p);
      for (std::size_t c = 0; c < p; ++c) {
        if (x[c]) xi.set(c);
      }
      return m.apply(xi);
    };
    const Bits h = function_entropy_bits(pmf, f);
    const Bits h_cond = function_entropy_bits(pmf, f, s);
    const std::size_t r = entropy_of_linear(m);
    const std::size_t r_cond = conditional_entropy_of_linear(m, conditioned);
    const bool ok = detail::exact_match(h, Rational(r)) && detail::exact_match(h_cond, Rational(r_cond)) && h.exact &&
                    h_cond.exact;
    if (!ok) ++out.violations;
    out.records.push_back(json{{"trial", t},
                               {"columns", p},
                               {"rows", m.row_count()},
                               {"conditioned", conditioned.size()},
                               {"rank", r},
                               {"oracle_entropy", h.value},
                               {"conditional_rank", r_cond},
                               {"oracle_conditional_entropy", h_cond.value},
                               {"ok", ok}});
  }
  out.trials = trials;
  return out;
}

/// The identity n·I(X_M) = I(X^n|L) + H(L) - Σ λ_B H(L | X_{B^c}) on both backends.
inline SuiteResult lemma1(std::size_t trials, std::uint64_t seed) {
  SuiteResult out{"lemma1"};
  detail::PmfCache cache;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = trial_rng(seed, t);
    const auto pin = detail::complete_pin(rng() & 1u ? 4 : 3, 1);
    const auto lambda = FractionalPartition::co_singletons(pin->m());
    const BitMatrix l = random_matrix(pin->space(), uniform_index(rng, 0, pin->column_count() + 1), rng);
    const Lemma1Check rank_check = verify_lemma1(*pin, l, lambda);
    const Lemma1Check oracle_check = verify_lemma1(cache.pin(*pin), linear_function(*pin, l), lambda);
    const bool ok = rank_check.residual.exact && *rank_check.residual.exact == 0 &&
                    std::fabs(oracle_check.residual.value) <= oracle_tolerance;
    if (!ok) ++out.violations;
    out.records.push_back(json{{"trial", t},
                               {"instance", detail::instance_name(*pin)},
                               {"rows", l.row_count()},
                               {"rank", rank(l)},
                               {"rank_residual", to_string(*rank_check.residual.exact)},
                               {"oracle_residual", oracle_check.residual.value},
                               {"ok", ok}});
  }
  out.trials = trials;
  return out;
}

/// Closed-form rank evaluation of I(X^n|L) on K_m against brute force.
inline SuiteResult cmi_formula(std::size_t trials, std::uint64_t seed) {
  SuiteResult out{"cmi-formula"};
  detail::PmfCache cache;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = trial_rng(seed, t);
    const auto pin = detail::complete_pin(rng() & 1u ? 4 : 3, 1);
    const auto lambda = FractionalPartition::co_singletons(pin->m());
    const BitMatrix l = random_matrix(pin->space(), uniform_index(rng, 0, pin->column_count() + 1), rng);
    const CmiReport by_rank = cmi_rank(*pin, l);
    const CmiReport by_oracle = cmi_oracle(cache.pin(*pin), linear_function(*pin, l), lambda);
    const bool ok = detail::exact_match(by_oracle.value, *by_rank.value.exact) && by_oracle.value.exact.has_value();
    if (!ok) ++out.violations;
    out.records.push_back(json{{"trial", t},
                               {"instance", detail::instance_name(*pin)},
                               {"rows", l.row_count()},
                               {"cmi_rank", to_string(*by_rank.value.exact)},
                               {"cmi_oracle", by_oracle.value.value},
                               {"ok", ok}});
  }
  out.trials = trials;
  return out;
}

/// An invalid transcript on K_3 whose communication inequality margin is negative:
/// terminal 1 publishes the XOR of all three edge bits, which it cannot compute.
inline LinearTranscript negative_control_transcript() {
  auto pin = detail::complete_pin(3, 1);
  LinearTranscript t(pin);
  t.append(1, BitVector::from_string("111"));
  return t;
}

/// H(F) ≥ Σ λ_B H(F | X_{B^c}) for random interactive transcripts.
inline SuiteResult comm_ineq(std::size_t trials, std::uint64_t seed) {
  SuiteResult out{"comm-ineq"};
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = trial_rng(seed, t);
    const auto pin = detail::complete_pin(rng() & 1u ? 4 : 3, 1);
    const auto lambda = FractionalPartition::co_singletons(pin->m());
    const LinearTranscript tr = random_valid_transcript(pin, uniform_index(rng, 0, pin->column_count() + 2), rng);
    const CommInequality ineq = verify_comm_inequality(tr, lambda);
    const bool ok = ineq.margin() >= 0;
    if (!ok) ++out.violations;
    out.records.push_back(json{{"trial", t},
                               {"instance", detail::instance_name(*pin)},
                               {"transmissions", tr.r()},
                               {"h_f", to_string(ineq.lhs)},
                               {"weighted_conditional", to_string(ineq.rhs)},
                               {"margin", to_string(ineq.margin())},
                               {"ok", ok}});
  }
  const LinearTranscript control = negative_control_transcript();
  const bool control_invalid = !validate_transcript(control).valid;
  const CommInequality c =
      comm_inequality(control.pin(), control.matrix(), FractionalPartition::co_singletons(3));
  const bool control_ok = control_invalid && c.margin() < 0;
  if (!control_ok) ++out.violations;
  out.fixed.push_back(json{{"case", "negative control: terminal 1 sends e12+e13+e23 on K3"},
                           {"valid_transcript", !control_invalid},
                           {"margin", to_string(c.margin())},
                           {"ok", control_ok}});
  out.trials = trials;
  return out;
}

/// Linear CI lower bound on K_m: I(X^n|L) = 0 forces rank(L) ≥ n·C(m,2).
inline SuiteResult lci_bound(std::size_t trials, std::uint64_t seed) {
  SuiteResult out{"lci-bound"};
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = trial_rng(seed, t);
    const auto pin = detail::complete_pin(rng() & 1u ? 4 : 3, 1);
    const std::size_t full = pin->column_count();
    // Fewer rows than columns keeps rank(L) < n·C(m,2).
    BitMatrix l = random_matrix(pin->space(), uniform_index(rng, 0, full - 1), rng);
    const Rational cmi = *cmi_rank(*pin, l).value.exact;
    const bool deficient_ok = cmi > 0;

    // Grow L with random rows until the conditional information vanishes.
    BitMatrix grown = l;
    while (*cmi_rank(*pin, grown).value.exact != 0) grown.append(random_row(full, rng));
    const std::size_t grown_rank = rank(grown);
    const bool grown_ok = grown_rank >= full;

    const bool ok = deficient_ok && grown_ok;
    if (!ok) ++out.violations;
    out.records.push_back(json{{"trial", t},
                               {"instance", detail::instance_name(*pin)},
                               {"rank", rank(l)},
                               {"cmi", to_string(cmi)},
                               {"stacked_rows", grown.row_count()},
                               {"stacked_rank_at_zero_cmi", grown_rank},
                               {"required_rank", full},
                               {"ok", ok}});
  }
  out.trials = trials;
  return out;
}

/// Σ_i rank(L|E_i^c) ≥ (m-2)·rank(L) and I(X^n|L) ≥ nm/2 - rank(L)/(m-1).
inline SuiteResult incidence(std::size_t trials, std::uint64_t seed) {
  SuiteResult out{"incidence"};
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = trial_rng(seed, t);
    const int m = static_cast<int>(uniform_index(rng, 3, 5));
    const int n = static_cast<int>(uniform_index(rng, 1, 2));
    const auto pin = detail::complete_pin(m, n);
    const BitMatrix l = random_matrix(pin->space(), uniform_index(rng, 0, pin->column_count() + 1), rng);
    const IncidenceCheck inc = incidence_rank_inequality(*pin, l);
    const Rational cmi = *cmi_rank(*pin, l).value.exact;
    const Rational bound = cmi_rank_lower_bound(*pin, l);
    const bool ok = inc.margin() >= 0 && cmi >= bound;
    if (!ok) ++out.violations;
    out.records.push_back(json{{"trial", t},
                               {"instance", detail::instance_name(*pin)},
                               {"rank", rank(l)},
                               {"restricted_rank_sum", inc.restricted_rank_sum},
                               {"scaled_rank", inc.scaled_rank},
                               {"cmi", to_string(cmi)},
                               {"bound", to_string(bound)},
                               {"ok", ok}});
  }
  // Single-edge and identity L meet both bounds with equality.
  for (int m = 3; m <= 5; ++m) {
    for (int n = 1; n <= 2; ++n) {
      const auto pin = detail::complete_pin(m, n);
      const std::size_t p = pin->column_count();
      const std::pair<std::string, BitMatrix> witnesses[] = {
          {"single edge", BitMatrix(pin->space(), {BitVector::unit(p, 0)})},
          {"identity", BitMatrix::identity(pin->space())}};
      for (const auto& [name, l] : witnesses) {
        const IncidenceCheck inc = incidence_rank_inequality(*pin, l);
        const Rational cmi = *cmi_rank(*pin, l).value.exact;
        const Rational bound = cmi_rank_lower_bound(*pin, l);
        const bool ok = inc.margin() == 0 && cmi == bound;
        if (!ok) ++out.violations;
        out.fixed.push_back(json{{"case", name + " on " + detail::instance_name(*pin)},
                                 {"incidence_margin", inc.margin()},
                                 {"cmi", to_string(cmi)},
                                 {"bound", to_string(bound)},
                                 {"ok", ok}});
      }
    }
  }
  out.trials = trials;
  return out;
}

/// Runs a suite by name; throws ArgumentError for unknown names.
inline SuiteResult run(const std::string& name, std::size_t trials, std::uint64_t seed) {
  if (name == "rank-lemma") return rank_lemma(trials, seed);
  if (name == "lemma1") return lemma1(trials, seed);
  if (name == "cmi-formula") return cmi_formula(trials, seed);
  if (name == "comm-ineq") return comm_ineq(trials, seed);
  if (name == "lci-bound") return lci_bound(trials, seed);
  if (name == "incidence") return incidence(trials, seed);
  throw ArgumentError("unknown suite '" + name + "'");
}

}  // namespace skc::suites
