#pragma once

// Subcommand bodies for the skc binary. Each returns a JSON run report and an
// exit code; argument parsing and printing live in tools/skc.cpp.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "skc/error.hpp"
#include "skc/gf2.hpp"
#include "skc/io.hpp"
#include "skc/multipartite_info.hpp"
#include "skc/partition_lp.hpp"
#include "skc/pin.hpp"
#include "skc/pin_instance.hpp"
#include "skc/protocol_sim.hpp"
#include "skc/source_model.hpp"
#include "skc/suites.hpp"

namespace skc::cli {

using json = io::json;

inline constexpr const char* version = "0.1.0";

inline constexpr int exit_ok = 0;
inline constexpr int exit_verification_failure = 1;
inline constexpr int exit_input_error = 2;

struct RunOutcome {
  json report;
  int exit_code = exit_ok;
  std::vector<std::string> warnings;
};

inline json make_report(const std::string& command, json input, std::optional<std::uint64_t> seed, json results) {
  return json{{"command", command},
              {"version", version},
              {"input", std::move(input)},
              {"seed", seed ? json(*seed) : json(nullptr)},
              {"results", std::move(results)}};
}

// -- inputs ---------------------------------------------------------------------

struct PinInput {
  std::shared_ptr<const PinInstance> pin;
  json description;
};

inline PinInput complete_input(int m, int n) {
  PinInput out;
  try {
    out.pin = std::make_shared<const PinInstance>(Graph::complete(m), n);
  } catch (const GraphError& e) {
    throw ParseError(std::string("--complete: ") + e.what());
  }
  const std::string canonical = "complete m=" + std::to_string(m) + " n=" + std::to_string(n);
  out.description = json{{"kind", "complete"}, {"m", m}, {"n", n}, {"digest", io::digest(canonical)}};
  return out;
}

/// Graph file (JSON or edge list). `n` overrides a count stored in the file; default 1.
inline PinInput pin_file_input(const std::string& path, std::optional<int> n) {
  const std::string text = io::read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  Graph graph(1);
  int copies = n.value_or(1);
  try {
    if (first != std::string::npos && text[first] == '{') {
      const json j = io::parse_json(text, path);
      graph = io::graph_from_json(j);
      if (!n && j.contains("n")) copies = io::with_schema_errors(path, [&] { return j.at("n").get<int>(); });
    } else {
      graph = io::graph_from_text(text);
    }
  } catch (const GraphError& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const ParseError& e) {
    const std::string what = e.what();
    throw ParseError(what.rfind(path, 0) == 0 ? what : path + ": " + what);
  }
  PinInput out;
  try {
    out.pin = std::make_shared<const PinInstance>(graph, copies);
  } catch (const GraphError& e) {
    throw ParseError(path + ": " + e.what());
  }
  out.description = json{{"kind", "pin"}, {"path", path}, {"n", copies}, {"digest", io::digest(text)}};
  return out;
}

// -- capacity -------------------------------------------------------------------

inline RunOutcome capacity_for_pin(const PinInput& input) {
  const PinInstance& pin = *input.pin;
  const int n = pin.n();
  const CapacityResult r = pin_capacity(pin);
  const CanonicalLambda lambda = canonical_lambda_star(r, pin.m());
  const TreePacking packing = pack_spanning_trees(pin);
  const Rational capacity = r.capacity / n;
  const Rational rate = Rational(packing.size()) / n;

  json results{{"terminals", pin.m()},
               {"n", n},
               {"edges", pin.graph().edges().size()},
               {"capacity", io::rational_json(capacity)},
               {"joint_entropy", io::rational_json(r.joint_entropy / n)},
               {"r_co", io::rational_json(r_co(pin))},
               {"lambda", io::partition_to_json(lambda.lambda)},
               {"lambda_canonical", lambda.canonical},
               {"alternate_optima_possible", lambda.alternate_optima_possible},
               {"packing_trees", packing.size()},
               {"packing_rate", io::rational_json(rate)},
               {"packing_matches_capacity", rate == capacity},
               {"exact", true}};
  RunOutcome out;
  out.report = make_report("capacity", input.description, std::nullopt, std::move(results));
  if (rate != capacity) {
    out.warnings.push_back("packing rate " + to_string(rate) + " is below the capacity " + to_string(capacity) +
                           " at this n");
  }
  return out;
}

inline RunOutcome capacity_for_model(const std::string& path) {
  const std::string text = io::read_file(path);
  const JointPMF pmf = io::pmf_from_json(io::parse_json(text, path));
  const int m = static_cast<int>(pmf.terminal_count());
  if (m < 2) throw ParseError(path + ": capacity needs at least two terminals");

  const auto entropies = all_subset_entropies(pmf);
  bool exact = true;
  for (const auto& [a, h] : entropies) exact = exact && h.exact.has_value();

  CapacityResult r;
  if (exact) {
    EntropyMap em;
    for (const auto& [a, h] : entropies) em.emplace(a, *h.exact);
    r = solve_capacity(em, m);
  } else {
    std::map<SubsetMask, double> dm;
    for (const auto& [a, h] : entropies) dm.emplace(a, h.value);
    r = solve_capacity(dm, m);
  }
  const CanonicalLambda lambda = canonical_lambda_star(r, m);

  json results{{"terminals", m},
               {"capacity", io::rational_json(r.capacity)},
               {"capacity_value", to_double(r.capacity)},
               {"joint_entropy", io::rational_json(r.joint_entropy)},
               {"r_co", io::rational_json(r.joint_entropy - r.capacity)},
               {"lambda", io::partition_to_json(lambda.lambda)},
               {"lambda_canonical", lambda.canonical},
               {"alternate_optima_possible", lambda.alternate_optima_possible},
               {"exact", exact}};
  RunOutcome out;
  out.report = make_report("capacity", json{{"kind", "model"}, {"path", path}, {"digest", io::digest(text)}},
                           std::nullopt, std::move(results));
  if (!exact) out.warnings.push_back("pmf is not dyadic; entropies were rounded and the capacity is approximate");
  return out;
}

// -- protocol -------------------------------------------------------------------

struct ProtocolRun {
  RunOutcome outcome;
  std::optional<PinProtocol> protocol;
};

namespace detail {

inline json theorem1_json(const Theorem1Report& t) {
  json out{{"capacity", io::rational_json(t.capacity)},
           {"cmi", io::rational_json(t.cmi)},
           {"chain_rhs", io::rational_json(t.chain_rhs)},
           {"chain_residual", io::rational_json(t.chain_residual)},
           {"joint_rate", io::rational_json(t.joint_rate)},
           {"comm_conditional_rate", io::rational_json(t.comm_conditional_rate)},
           {"key_conditional_rate", io::rational_json(t.key_conditional_rate)},
           {"comm_entropy_rate", io::rational_json(t.comm_entropy_rate)},
           {"comm_bit_rate", io::rational_json(t.comm_bit_rate)},
           {"joint_rate_bound_holds", t.joint_rate_bound_holds},
           {"exact_ci", t.exact_ci}};
  if (t.lci_rate) {
    out["lci_rate"] = io::rational_json(*t.lci_rate);
    out["comm_bound_holds"] = *t.comm_bound_holds;
    out["comm_bound_tight"] = *t.comm_bound_tight;
  }
  return out;
}

inline json failing_json(const std::vector<int>& terminals) {
  json a = json::array();
  for (int i : terminals) a.push_back(i);
  return a;
}

}  // namespace detail

/// Runs every verdict on a transcript and an optional key. `target_rate` is the
/// per-symbol key rate the key must reach; `tight` additionally requires the
/// communication bit-rate to meet the linear CI bound with equality.
inline RunOutcome evaluate_protocol(const LinearTranscript& t, const std::optional<BitMatrix>& key,
                                    const Rational& target_rate, bool tight, json input) {
  const PinInstance& pin = t.pin();
  const CapacityResult cap = pin_capacity(pin);
  const CanonicalLambda lambda = canonical_lambda_star(cap, pin.m());
  const BitMatrix everything = BitMatrix::identity(pin.space());

  const TranscriptVerdict valid = validate_transcript(t);
  const CrVerdict omniscience = is_common_randomness(everything, t);
  const CommInequality ineq = comm_inequality(pin, t.matrix(), lambda.lambda);

  const Rational capacity = cap.capacity / pin.n();
  // Omniscience and the communication lower bound are only implied for a key at capacity.
  const bool full_rate = key && Rational(rank(*key)) / pin.n() >= capacity;

  std::vector<std::string> failures;
  if (!valid.valid) failures.push_back("transcript");
  if (full_rate && !omniscience.ok) failures.push_back("omniscience");
  if (valid.valid && ineq.margin() < 0) failures.push_back("communication inequality");

  json results{{"terminals", pin.m()},
               {"n", pin.n()},
               {"capacity", io::rational_json(capacity)},
               {"target_key_rate", io::rational_json(target_rate)},
               {"transmissions", t.r()},
               {"transcript_valid", valid.valid},
               {"omniscience", omniscience.ok},
               {"omniscience_failing_terminals", detail::failing_json(omniscience.failing_terminals)},
               {"comm_inequality_margin", io::rational_json(ineq.margin())}};
  if (valid.first_violation) {
    results["first_violation"] = *valid.first_violation;
    results["violation_detail"] = valid.detail;
  }

  if (key) {
    const CrVerdict recovery = is_common_randomness(*key, t);
    const SkVerdict sk = is_secret_key(*key, t, target_rate);
    const CiVerdict ci = is_interactive_ci(*key, t, lambda.lambda);
    const Theorem1Report th = theorem1_report(*key, t, lambda.lambda);
    results["key_rows"] = key->row_count();
    results["key_rate"] = io::rational_json(sk.key_rate);
    results["comm_bit_rate"] = io::rational_json(sk.comm_bit_rate);
    results["comm_rank_rate"] = io::rational_json(sk.comm_rank_rate);
    results["redundant_transmissions"] = sk.redundant;
    results["key_recovery"] = recovery.ok;
    results["key_recovery_failing_terminals"] = detail::failing_json(recovery.failing_terminals);
    results["leakage_bits"] = sk.leakage;
    results["secret"] = sk.secret;
    results["rate_achieved"] = sk.rate_achieved;
    results["secret_key"] = sk.ok;
    results["interactive_ci"] = ci.ok;
    results["interactive_ci_cmi"] = io::rational_json(ci.cmi);
    results["lower_bound"] = detail::theorem1_json(th);

    if (!recovery.ok) failures.push_back("key recovery");
    if (!sk.secret) failures.push_back("secrecy");
    if (!sk.rate_achieved) failures.push_back("key rate");
    if (th.chain_residual != 0) failures.push_back("chain identity");
    if (!th.joint_rate_bound_holds) failures.push_back("joint rate bound");
    if (full_rate && th.comm_bound_holds && !*th.comm_bound_holds) failures.push_back("communication lower bound");
    if (tight) {
      if (sk.key_rate != target_rate) failures.push_back("key rate equals capacity");
      if (th.comm_bound_tight && !*th.comm_bound_tight) failures.push_back("communication rate meets the bound");
      if (sk.redundant) failures.push_back("independent transmissions");
    }
  }

  json failed = json::array();
  for (const auto& f : failures) failed.push_back(f);
  results["failed_checks"] = failed;
  results["all_verdicts_pass"] = failures.empty();

  RunOutcome out;
  out.report = make_report("protocol", std::move(input), std::nullopt, std::move(results));
  out.exit_code = failures.empty() ? exit_ok : exit_verification_failure;
  return out;
}

/// Compiles the spanning-tree protocol on K_m^(n) and checks it.
inline ProtocolRun protocol_complete(int m, int n) {
  PinInput input = complete_input(m, n);
  const TreePacking packing = pack_spanning_trees(*input.pin);
  PinProtocol proto = compile_tree_protocol(input.pin, packing);
  const bool tight = (static_cast<long long>(n) * m) % 2 == 0;
  const Rational target = tight ? Rational(m, 2) : Rational(packing.size()) / n;

  ProtocolRun run;
  run.outcome = evaluate_protocol(proto.transcript, proto.key, target, tight, input.description);
  run.outcome.report["results"]["packing_trees"] = packing.size();
  run.outcome.report["results"]["tight"] = tight;
  if (!tight) {
    run.outcome.warnings.push_back("n*m is odd: the packing has " + std::to_string(packing.size()) +
                                   " trees and the key rate " + to_string(target) + " is below m/2");
  }
  run.protocol = std::move(proto);
  return run;
}

/// Checks an existing transcript file against the capacity of its PIN.
inline RunOutcome protocol_check(const std::string& path) {
  const std::string text = io::read_file(path);
  const io::TranscriptFile file = io::transcript_from_json(io::parse_json(text, path));
  const Rational capacity = pin_capacity(*file.pin).capacity / file.pin->n();
  RunOutcome out = evaluate_protocol(file.transcript, file.key, capacity, false,
                                     json{{"kind", "transcript"}, {"path", path}, {"digest", io::digest(text)}});
  if (!file.key) out.warnings.push_back("transcript has no key; only transcript and omniscience checks ran");
  return out;
}

// -- verify ---------------------------------------------------------------------

inline RunOutcome verify(const std::string& suite, std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw ArgumentError("--trials must be at least 1");
  const suites::SuiteResult r = suites::run(suite, trials, seed);
  json results{{"suite", r.name},
               {"trials", r.trials},
               {"violations", r.violations},
               {"fixed_cases", r.fixed},
               {"records", r.records}};
  RunOutcome out;
  out.report = make_report("verify", json{{"kind", "suite"}, {"suite", suite}, {"trials", trials}}, seed,
                           std::move(results));
  out.exit_code = r.violations == 0 ? exit_ok : exit_verification_failure;
  return out;
}

// -- cmi ------------------------------------------------------------------------

inline RunOutcome cmi(const PinInput& input, const std::string& matrix_path,
                      const std::optional<std::string>& lambda_path, bool with_oracle) {
  const PinInstance& pin = *input.pin;
  const std::string text = io::read_file(matrix_path);
  const BitMatrix l = io::matrix_from_json(io::parse_json(text, matrix_path), pin.space());

  json description = input.description;
  description["matrix"] = json{{"path", matrix_path}, {"digest", io::digest(text)}};

  FractionalPartition lambda = FractionalPartition::singletons(pin.m());
  bool canonical = false;
  if (lambda_path) {
    const std::string ltext = io::read_file(*lambda_path);
    lambda = io::partition_from_json(io::parse_json(ltext, *lambda_path), pin.m());
    description["lambda"] = json{{"path", *lambda_path}, {"digest", io::digest(ltext)}};
  } else {
    const CanonicalLambda c = canonical_lambda_star(pin_capacity(pin), pin.m());
    lambda = c.lambda;
    canonical = c.canonical;
  }

  const CmiReport by_rank = skc::detail::cmi_rank_auto(pin, l, lambda);
  json results{{"rank", rank(l)},
               {"lambda_canonical", canonical},
               {"cmi", io::rational_json(*by_rank.value.exact)},
               {"report", io::cmi_report_to_json(by_rank)}};
  if (pin.is_complete()) {
    const IncidenceCheck inc = incidence_rank_inequality(pin, l);
    results["lower_bound"] = io::rational_json(cmi_rank_lower_bound(pin, l));
    results["restricted_rank_sum"] = inc.restricted_rank_sum;
    results["scaled_rank"] = inc.scaled_rank;
  }
  bool agree = true;
  if (with_oracle) {
    const JointPMF pmf = pin_to_pmf(pin);
    const CmiReport by_oracle = cmi_oracle(pmf, linear_function(pin, l), lambda);
    results["oracle"] = io::bits_json(by_oracle.value);
    agree = by_oracle.value.exact ? *by_oracle.value.exact == *by_rank.value.exact
                                  : std::fabs(by_oracle.value.value - to_double(*by_rank.value.exact)) <= 1e-9;
    results["backends_agree"] = agree;
  }
  RunOutcome out;
  out.report = make_report("cmi", std::move(description), std::nullopt, std::move(results));
  if (!agree) out.exit_code = exit_verification_failure;
  return out;
}

// -- text rendering -------------------------------------------------------------

namespace detail {

inline bool is_fraction(const std::string& s) {
  static const std::regex pattern("^-?[0-9]+/[0-9]+$");
  return std::regex_match(s, pattern);
}

inline std::string scalar_text(const json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (is_fraction(s)) {
      std::ostringstream os;
      os << s << " (" << std::fixed << std::setprecision(6) << to_double(parse_rational(s)) << ")";
      return os.str();
    }
    return s;
  }
  if (v.is_number_float()) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << v.get<double>();
    return os.str();
  }
  return v.dump();
}

inline void flatten(const json& v, const std::string& prefix, std::ostream& os) {
  if (v.is_object()) {
    if (v.empty()) os << prefix << " = {}\n";
    for (const auto& [k, x] : v.items()) flatten(x, prefix.empty() ? k : prefix + "." + k, os);
    return;
  }
  if (v.is_array()) {
    bool scalars = true;
    for (const auto& x : v) scalars = scalars && !x.is_structured();
    if (scalars) {
      os << prefix << " = [";
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << scalar_text(v[i]);
      os << "]\n";
      return;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      const json& x = v[i];
      if (x.is_object()) {
        os << prefix << "[" << i << "]";
        for (const auto& [k, y] : x.items()) os << " " << k << "=" << (y.is_structured() ? y.dump() : scalar_text(y));
        os << "\n";
      } else {
        flatten(x, prefix + "[" + std::to_string(i) + "]", os);
      }
    }
    return;
  }
  os << prefix << " = " << scalar_text(v) << "\n";
}

}  // namespace detail

/// Human-readable rendering: one "key = value" line per field, rationals with
/// a 6-place decimal alongside.
inline std::string render_text(const json& report) {
  std::ostringstream os;
  os << report.at("command").get<std::string>() << " (skc " << report.at("version").get<std::string>() << ")\n";
  detail::flatten(report.at("input"), "input", os);
  if (!report.at("seed").is_null()) os << "seed = " << report.at("seed").dump() << "\n";
  detail::flatten(report.at("results"), "", os);
  return os.str();
}

inline std::string render_json(const json& report) { return report.dump(2) + "\n"; }

}  // namespace skc::cli
