// skc: secret-key capacity, PIN protocols and invariant campaigns.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "skc/commands.hpp"

namespace {

using skc::cli::RunOutcome;

struct Common {
  std::string format = "text";
};

void emit(const RunOutcome& out, const Common& common) {
  for (const auto& w : out.warnings) std::cerr << "warning: " << w << "\n";
  if (common.format == "json") {
    std::cout << skc::cli::render_json(out.report);
  } else {
    std::cout << skc::cli::render_text(out.report);
  }
}

void add_format(CLI::App* cmd, Common& common) {
  cmd->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"text", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secret-key capacity and PIN protocol toolkit"};
  app.set_version_flag("--version", std::string(skc::cli::version));
  app.require_subcommand(1);
  Common common;

  // capacity
  auto* capacity = app.add_subcommand("capacity", "SK capacity, optimal fractional partition, R_CO, packing rate");
  std::optional<int> cap_complete;
  std::optional<std::string> cap_pin;
  std::optional<std::string> cap_model;
  std::optional<int> cap_n;
  auto* cc = capacity->add_option("--complete", cap_complete, "PIN on the complete graph K_m");
  auto* cp = capacity->add_option("--pin", cap_pin, "PIN graph file (JSON or edge list)")->check(CLI::ExistingFile);
  auto* cmod = capacity->add_option("--model", cap_model, "Joint pmf JSON file")->check(CLI::ExistingFile);
  capacity->add_option("-n", cap_n, "Number of copies of each edge")->check(CLI::PositiveNumber);
  cc->excludes(cp)->excludes(cmod);
  cp->excludes(cmod);
  capacity->require_option(1, 2);
  add_format(capacity, common);

  // protocol
  auto* protocol = app.add_subcommand("protocol", "Compile and check the spanning-tree key protocol");
  std::optional<int> pr_complete;
  int pr_n = 1;
  std::optional<std::string> pr_out;
  std::optional<std::string> pr_in;
  auto* pc = protocol->add_option("--complete", pr_complete, "Complete graph K_m");
  protocol->add_option("-n", pr_n, "Number of copies of each edge")->check(CLI::PositiveNumber);
  protocol->add_option("--out", pr_out, "Write the compiled transcript JSON here");
  auto* pi = protocol->add_option("--in", pr_in, "Check an existing transcript JSON instead")->check(CLI::ExistingFile);
  pc->excludes(pi);
  add_format(protocol, common);

  // verify
  auto* verify = app.add_subcommand("verify", "Run a seeded randomized invariant suite");
  std::string suite;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  verify->add_option("--suite", suite, "Suite name")->required()->check(CLI::IsMember(skc::suites::names()));
  verify->add_option("--trials", trials, "Number of trials")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "Campaign seed");
  add_format(verify, common);

  // cmi
  auto* cmi = app.add_subcommand("cmi", "Conditional multipartite information of a linear function");
  std::optional<int> cmi_complete;
  std::optional<std::string> cmi_pin;
  std::optional<int> cmi_n;
  std::string cmi_matrix;
  std::optional<std::string> cmi_lambda;
  bool cmi_oracle = false;
  auto* mc = cmi->add_option("--complete", cmi_complete, "Complete graph K_m");
  auto* mp = cmi->add_option("--pin", cmi_pin, "PIN graph file")->check(CLI::ExistingFile);
  mc->excludes(mp);
  cmi->add_option("-n", cmi_n, "Number of copies of each edge")->check(CLI::PositiveNumber);
  cmi->add_option("--matrix", cmi_matrix, "Matrix JSON: {\"labels\"?, \"rows\": [hex...]}")
      ->required()
      ->check(CLI::ExistingFile);
  cmi->add_option("--lambda", cmi_lambda, "Fractional partition JSON (default: optimal)")->check(CLI::ExistingFile);
  cmi->add_flag("--oracle", cmi_oracle, "Also evaluate by brute force over the joint pmf");
  add_format(cmi, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : skc::cli::exit_input_error;
  }

  try {
    RunOutcome out;
    if (capacity->parsed()) {
      if (cap_complete) {
        out = skc::cli::capacity_for_pin(skc::cli::complete_input(*cap_complete, cap_n.value_or(1)));
      } else if (cap_pin) {
        out = skc::cli::capacity_for_pin(skc::cli::pin_file_input(*cap_pin, cap_n));
      } else if (cap_model) {
        out = skc::cli::capacity_for_model(*cap_model);
      } else {
        std::cerr << "error: capacity needs one of --complete, --pin, --model\n";
        return skc::cli::exit_input_error;
      }
    } else if (protocol->parsed()) {
      if (pr_in) {
        out = skc::cli::protocol_check(*pr_in);
      } else if (pr_complete) {
        auto run = skc::cli::protocol_complete(*pr_complete, pr_n);
        if (pr_out) {
          std::ofstream file(*pr_out);
          if (!file) {
            std::cerr << "error: cannot write '" << *pr_out << "'\n";
            return skc::cli::exit_input_error;
          }
          file << skc::io::transcript_to_json(run.protocol->transcript, run.protocol->key).dump(2) << "\n";
        }
        out = std::move(run.outcome);
      } else {
        std::cerr << "error: protocol needs --complete or --in\n";
        return skc::cli::exit_input_error;
      }
    } else if (verify->parsed()) {
      out = skc::cli::verify(suite, trials, seed);
    } else if (cmi->parsed()) {
      skc::cli::PinInput input;
      if (cmi_complete) {
        input = skc::cli::complete_input(*cmi_complete, cmi_n.value_or(1));
      } else if (cmi_pin) {
        input = skc::cli::pin_file_input(*cmi_pin, cmi_n);
      } else {
        std::cerr << "error: cmi needs --complete or --pin\n";
        return skc::cli::exit_input_error;
      }
      out = skc::cli::cmi(input, cmi_matrix, cmi_lambda, cmi_oracle);
    }
    emit(out, common);
    return out.exit_code;
  } catch (const skc::OracleScaleError& e) {
    std::cerr << "scale error: " << e.what() << "\n";
  } catch (const skc::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
  } catch (const skc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return skc::cli::exit_input_error;
}
