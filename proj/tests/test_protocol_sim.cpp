#include <gtest/gtest.h>

#include <memory>

#include "skc/pin.hpp"
#include "skc/protocol_sim.hpp"
#include "skc/random.hpp"
#include "skc/suites.hpp"

using namespace skc;

namespace {

std::shared_ptr<const PinInstance> complete(int m, int n) {
  return std::make_shared<const PinInstance>(Graph::complete(m), n);
}

PinProtocol compiled(int m, int n) {
  auto pin = complete(m, n);
  return compile_tree_protocol(pin, pack_spanning_trees(*pin));
}

BitVector unit(const PinInstance& pin, const std::string& label) {
  return BitVector::unit(pin.column_count(), pin.space()->index_of(label));
}

}  // namespace

TEST(ValidateTranscript, Examples) {
  const PinProtocol p = compiled(3, 1);
  EXPECT_TRUE(validate_transcript(p.transcript).valid);

  auto k3 = complete(3, 1);
  LinearTranscript bad(k3);
  bad.append(1, unit(*k3, "2-3#0"));
  const TranscriptVerdict v = validate_transcript(bad);
  EXPECT_FALSE(v.valid);
  EXPECT_EQ(v.first_violation, std::optional<std::size_t>(1));

  LinearTranscript echo(k3);
  echo.append(2, unit(*k3, "2-3#0"));
  echo.append(1, unit(*k3, "2-3#0"));
  EXPECT_TRUE(validate_transcript(echo).valid);
}

TEST(ValidateTranscript, AppendChecksShapeAndSender) {
  auto k3 = complete(3, 1);
  LinearTranscript t(k3);
  EXPECT_THROW(t.append(4, BitVector(3)), ArgumentError);
  EXPECT_THROW(t.append(1, BitVector(4)), DimensionError);
}

TEST(IsCommonRandomness, Examples) {
  const PinProtocol k3 = compiled(3, 1);
  EXPECT_TRUE(is_common_randomness(k3.key, k3.transcript).ok);

  const PinProtocol k3n2 = compiled(3, 2);
  EXPECT_TRUE(is_common_randomness(BitMatrix::identity(k3n2.pin->space()), k3n2.transcript).ok);

  auto pin = complete(3, 1);
  const CrVerdict empty = is_common_randomness(BitMatrix::identity(pin->space()), LinearTranscript(pin));
  EXPECT_FALSE(empty.ok);
  EXPECT_EQ(empty.failing_terminals, (std::vector<int>{1, 2, 3}));
}

TEST(IsSecretKey, Examples) {
  const PinProtocol k4 = compiled(4, 1);
  const SkVerdict ok = is_secret_key(k4.key, k4.transcript, Rational(2));
  EXPECT_TRUE(ok.ok);
  EXPECT_EQ(ok.key_rate, Rational(2));
  EXPECT_EQ(ok.comm_bit_rate, Rational(4));
  EXPECT_EQ(ok.comm_rank_rate, Rational(4));

  const BitMatrix leaked(k4.pin->space(), {k4.transcript.transmissions().front().row});
  const SkVerdict leak = is_secret_key(leaked, k4.transcript, Rational(1));
  EXPECT_FALSE(leak.ok);
  EXPECT_EQ(leak.leakage, 1u);

  auto k2 = complete(2, 3);
  const SkVerdict two = is_secret_key(BitMatrix::identity(k2->space()), LinearTranscript(k2), Rational(1));
  EXPECT_TRUE(two.ok);
  EXPECT_EQ(two.key_rate, Rational(1));
  EXPECT_EQ(two.comm_bit_rate, Rational(0));
}

TEST(IsSecretKey, NonCommonRandomnessFails) {
  auto k3 = complete(3, 1);
  const SkVerdict v = is_secret_key(BitMatrix(k3->space(), {unit(*k3, "2-3#0")}), LinearTranscript(k3), Rational(1));
  EXPECT_FALSE(v.ok);
  EXPECT_FALSE(v.is_common_randomness);
}

TEST(IsInteractiveCi, Examples) {
  const PinProtocol k3n2 = compiled(3, 2);
  const auto tilde3 = FractionalPartition::co_singletons(3);
  EXPECT_TRUE(is_interactive_ci(BitMatrix::identity(k3n2.pin->space()), k3n2.transcript, tilde3).ok);

  const PinProtocol k4 = compiled(4, 1);
  EXPECT_TRUE(is_interactive_ci(k4.key, k4.transcript, FractionalPartition::co_singletons(4)).ok);

  auto pin = complete(3, 1);
  const CiVerdict none = is_interactive_ci(BitMatrix(pin->space()), LinearTranscript(pin), tilde3);
  EXPECT_FALSE(none.ok);
  EXPECT_EQ(none.cmi, Rational(3, 2));
}

TEST(CommInequality, Examples) {
  const PinProtocol k3n2 = compiled(3, 2);
  const CommInequality c = verify_comm_inequality(k3n2.transcript, FractionalPartition::co_singletons(3));
  EXPECT_EQ(c.lhs, Rational(3));
  EXPECT_EQ(c.rhs, Rational(3));
  EXPECT_EQ(c.margin(), 0);

  auto pin = complete(3, 1);
  EXPECT_EQ(verify_comm_inequality(LinearTranscript(pin), FractionalPartition::co_singletons(3)).margin(), 0);
}

TEST(CommInequality, InvalidTranscriptIsAPreconditionFailure) {
  const LinearTranscript control = suites::negative_control_transcript();
  EXPECT_THROW(verify_comm_inequality(control, FractionalPartition::co_singletons(3)), PreconditionError);
  const CommInequality c = comm_inequality(control.pin(), control.matrix(), FractionalPartition::co_singletons(3));
  EXPECT_EQ(c.margin(), Rational(-1, 2));
}

TEST(Theorem1Report, Examples) {
  const PinProtocol k4 = compiled(4, 1);
  const Theorem1Report r4 = theorem1_report(k4.key, k4.transcript, FractionalPartition::co_singletons(4));
  EXPECT_EQ(r4.comm_bit_rate, Rational(4));
  EXPECT_EQ(*r4.lci_rate - r4.capacity, Rational(4));
  EXPECT_TRUE(*r4.comm_bound_tight);
  EXPECT_EQ(r4.chain_residual, 0);

  const PinProtocol k3 = compiled(3, 2);
  const Theorem1Report r3 = theorem1_report(k3.key, k3.transcript, FractionalPartition::co_singletons(3));
  EXPECT_EQ(r3.comm_bit_rate, Rational(3, 2));
  EXPECT_TRUE(*r3.comm_bound_tight);

  const PinProtocol k2 = compiled(2, 1);
  const Theorem1Report r2 = theorem1_report(k2.key, k2.transcript, FractionalPartition::co_singletons(2));
  EXPECT_EQ(r2.comm_bit_rate, Rational(0));
  EXPECT_EQ(*r2.lci_rate - r2.capacity, Rational(0));
  EXPECT_TRUE(*r2.comm_bound_tight);
}

// -- properties -------------------------------------------------------------

TEST(ProtocolProperty, ValidityIsPrefixClosed) {
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng = trial_rng(61, t);
    auto pin = complete(static_cast<int>(uniform_index(rng, 2, 5)), 1);
    const LinearTranscript tr = random_valid_transcript(pin, uniform_index(rng, 0, 10), rng);
    for (std::size_t k = 0; k <= tr.r(); ++k) ASSERT_TRUE(validate_transcript(tr.prefix(k)).valid);
  }
}

TEST(ProtocolProperty, BitRateDominatesRankRate) {
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng = trial_rng(62, t);
    auto pin = complete(static_cast<int>(uniform_index(rng, 2, 5)), static_cast<int>(uniform_index(rng, 1, 2)));
    const LinearTranscript tr = random_valid_transcript(pin, uniform_index(rng, 0, 12), rng);
    const SkVerdict v = is_secret_key(BitMatrix(pin->space()), tr, Rational(0));
    ASSERT_GE(v.comm_bit_rate, v.comm_rank_rate);
    ASSERT_EQ(v.redundant, v.comm_bit_rate != v.comm_rank_rate);
  }
}

TEST(ProtocolProperty, CommInequalityHoldsForValidTranscripts) {
  for (std::uint64_t t = 0; t < 200; ++t) {
    Rng rng = trial_rng(63, t);
    const int m = static_cast<int>(uniform_index(rng, 2, 5));
    auto pin = complete(m, static_cast<int>(uniform_index(rng, 1, 2)));
    const LinearTranscript tr = random_valid_transcript(pin, uniform_index(rng, 0, pin->column_count() + 2), rng);
    ASSERT_GE(verify_comm_inequality(tr, FractionalPartition::co_singletons(m)).margin(), 0);
  }
}

TEST(ProtocolProperty, EveryCompiledProtocolPassesAllVerdicts) {
  for (int m = 2; m <= 6; ++m) {
    for (int n = 1; n <= 3; ++n) {
      const PinProtocol p = compiled(m, n);
      const auto tilde = FractionalPartition::co_singletons(m);
      const Rational rate = Rational(p.packing.size()) / n;
      ASSERT_TRUE(validate_transcript(p.transcript).valid);
      ASSERT_TRUE(is_common_randomness(p.key, p.transcript).ok);
      ASSERT_TRUE(is_secret_key(p.key, p.transcript, rate).ok);
      ASSERT_EQ(is_secret_key(p.key, p.transcript, rate).key_rate, rate);
      if ((n * m) % 2 == 0) {
        ASSERT_TRUE(is_interactive_ci(BitMatrix::identity(p.pin->space()), p.transcript, tilde).ok);
        ASSERT_TRUE(is_common_randomness(BitMatrix::identity(p.pin->space()), p.transcript).ok);
        const Theorem1Report r = theorem1_report(p.key, p.transcript, tilde);
        ASSERT_TRUE(*r.comm_bound_tight);
        ASSERT_EQ(r.chain_residual, 0);
      }
    }
  }
}
