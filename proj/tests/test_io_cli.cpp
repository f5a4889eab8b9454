#include <gtest/gtest.h>

#include <string>

#include "skc/commands.hpp"
#include "skc/io.hpp"
#include "skc/random.hpp"

using namespace skc;

namespace {

std::string data(const std::string& name) { return std::string(SKC_DATA_DIR) + "/" + name; }

}  // namespace

TEST(Hex, KnownEncodings) {
  EXPECT_EQ(io::to_hex(BitVector::from_string("1000")), "8");
  EXPECT_EQ(io::to_hex(BitVector::from_string("100")), "8");
  EXPECT_EQ(io::to_hex(BitVector::from_string("000011111")), "0f8");
  EXPECT_EQ(io::from_hex("8", 3), BitVector::from_string("100"));
  EXPECT_THROW(io::from_hex("88", 3), ParseError);
  EXPECT_THROW(io::from_hex("9", 3), ParseError);
  EXPECT_THROW(io::from_hex("g", 3), ParseError);
}

TEST(Hex, RoundTripProperty) {
  for (std::uint64_t t = 0; t < 500; ++t) {
    Rng rng = trial_rng(71, t);
    const BitVector v = random_row(uniform_index(rng, 0, 200), rng);
    ASSERT_EQ(io::from_hex(io::to_hex(v), v.size()), v);
  }
}

TEST(Json, ParseErrorsCarryPosition) {
  try {
    io::parse_json("{\n  \"a\": [1, 2,\n}", "broken.json");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("broken.json"), std::string::npos);
    EXPECT_NE(what.find("line 3"), std::string::npos);
  }
}

TEST(Json, GraphTextFormat) {
  const Graph g = io::graph_from_text("# comment\nvertices 4\n1 2\n2 3 # trailing\n");
  EXPECT_EQ(g.vertex_count(), 4);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_THROW(io::graph_from_text("1 2\n2 x\n"), ParseError);
  EXPECT_THROW(io::graph_from_text("1 1\n"), ParseError);
  try {
    io::graph_from_text("1 2\n3\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Json, PmfRoundTrip) {
  const JointPMF p({2, 3}, {{{0, 0}, Rational(1, 4)}, {{1, 2}, Rational(3, 4)}});
  const JointPMF q = io::pmf_from_json(io::pmf_to_json(p));
  EXPECT_EQ(q.entries(), p.entries());
  EXPECT_EQ(q.alphabet_sizes(), p.alphabet_sizes());
  EXPECT_THROW(io::pmf_from_json(io::json::parse(R"({"terminals":1,"alphabet_sizes":[2],"pmf":[[[0],"1/3"]]})")),
               ParseError);
  EXPECT_THROW(io::pmf_from_json(io::json::parse(R"({"terminals":1})")), ParseError);
}

TEST(Json, MatrixRoundTripAndLabelCheck) {
  auto space = ColumnSpace::numbered(5);
  const BitMatrix m = BitMatrix::from_strings(space, {"10110", "00001"});
  EXPECT_EQ(io::matrix_from_json(io::matrix_to_json(m), space), m);
  io::json wrong = io::matrix_to_json(m);
  wrong["labels"][0] = "other";
  EXPECT_THROW(io::matrix_from_json(wrong, space), LabelError);
}

TEST(Json, TranscriptRoundTrip) {
  const cli::ProtocolRun run = cli::protocol_complete(4, 2);
  const io::json j = io::transcript_to_json(run.protocol->transcript, run.protocol->key);
  const io::TranscriptFile f = io::transcript_from_json(io::json::parse(j.dump()));
  EXPECT_EQ(f.transcript.transmissions(), run.protocol->transcript.transmissions());
  EXPECT_EQ(*f.key, run.protocol->key);
  EXPECT_EQ(io::transcript_to_json(f.transcript, f.key), j);
}

TEST(Json, PartitionRoundTrip) {
  const FractionalPartition tilde = FractionalPartition::co_singletons(4);
  EXPECT_EQ(io::partition_from_json(io::partition_to_json(tilde), 4), tilde);
  EXPECT_THROW(io::partition_from_json(io::json::parse(R"({"[1,5]":"1"})"), 4), ParseError);
}

TEST(Commands, CapacityComplete) {
  const cli::RunOutcome out = cli::capacity_for_pin(cli::complete_input(5, 1));
  const auto& r = out.report.at("results");
  EXPECT_EQ(r.at("capacity"), "5/2");
  EXPECT_EQ(r.at("r_co"), "15/2");
  EXPECT_EQ(r.at("lambda_canonical"), true);
  EXPECT_EQ(out.exit_code, 0);
}

TEST(Commands, CapacityModelAndPinFiles) {
  const cli::RunOutcome xy = cli::capacity_for_model(data("xy.json"));
  EXPECT_EQ(xy.report.at("results").at("capacity"), "1");
  EXPECT_EQ(xy.report.at("results").at("exact"), true);

  const cli::RunOutcome path = cli::capacity_for_pin(cli::pin_file_input(data("path3.json"), std::nullopt));
  EXPECT_EQ(path.report.at("results").at("capacity"), "1");
  EXPECT_EQ(path.report.at("results").at("packing_rate"), "1");

  const cli::RunOutcome tri = cli::capacity_for_pin(cli::pin_file_input(data("triangle.txt"), 2));
  EXPECT_EQ(tri.report.at("results").at("capacity"), "3/2");
}

TEST(Commands, NonDyadicModelIsApproximate) {
  const cli::RunOutcome out = cli::capacity_for_model(data("third.json"));
  EXPECT_EQ(out.report.at("results").at("exact"), false);
  EXPECT_FALSE(out.warnings.empty());
  EXPECT_NEAR(out.report.at("results").at("capacity_value").get<double>(), std::log2(3.0), 1e-9);
}

TEST(Commands, ProtocolVerdicts) {
  const cli::ProtocolRun k4 = cli::protocol_complete(4, 1);
  const auto& r = k4.outcome.report.at("results");
  EXPECT_EQ(r.at("key_rate"), "2");
  EXPECT_EQ(r.at("comm_bit_rate"), "4");
  EXPECT_EQ(r.at("all_verdicts_pass"), true);
  EXPECT_EQ(k4.outcome.exit_code, 0);

  const cli::ProtocolRun odd = cli::protocol_complete(3, 1);
  EXPECT_FALSE(odd.outcome.warnings.empty());
  EXPECT_EQ(odd.outcome.report.at("results").at("key_rate"), "1");
  EXPECT_EQ(odd.outcome.exit_code, 0);
}

TEST(Commands, ProtocolCheckFlagsInvalidTranscript) {
  const cli::RunOutcome out = cli::protocol_check(data("invalid_transcript.json"));
  EXPECT_EQ(out.exit_code, cli::exit_verification_failure);
  EXPECT_EQ(out.report.at("results").at("transcript_valid"), false);
}

TEST(Commands, VerifyIsDeterministic) {
  for (const auto& suite : suites::names()) {
    const std::string a = cli::render_json(cli::verify(suite, 20, 5).report);
    const std::string b = cli::render_json(cli::verify(suite, 20, 5).report);
    EXPECT_EQ(a, b) << suite;
    EXPECT_NE(a, cli::render_json(cli::verify(suite, 20, 6).report)) << suite;
  }
  EXPECT_THROW(cli::verify("nope", 1, 1), ArgumentError);
  EXPECT_THROW(cli::verify("lemma1", 0, 1), ArgumentError);
}

TEST(Commands, TextRenderingShowsDecimals) {
  const std::string text = cli::render_text(cli::capacity_for_pin(cli::complete_input(3, 1)).report);
  EXPECT_NE(text.find("capacity = 3/2 (1.500000)"), std::string::npos);
}

TEST(Commands, CmiWithOracle) {
  const cli::RunOutcome out = cli::cmi(cli::complete_input(3, 1), data("k3_e12.json"), std::nullopt, true);
  EXPECT_EQ(out.report.at("results").at("cmi"), "1");
  EXPECT_EQ(out.report.at("results").at("backends_agree"), true);
  EXPECT_EQ(out.exit_code, 0);
  EXPECT_THROW(cli::cmi(cli::complete_input(7, 1), data("k3_e12.json"), std::nullopt, false), LabelError);
}
