#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "skc/gf2.hpp"
#include "skc/random.hpp"
#include "skc/source_model.hpp"
#include "support.hpp"

using namespace skc;

namespace {

BitMatrix mat(std::size_t p, std::initializer_list<std::string_view> rows) {
  return BitMatrix::from_strings(ColumnSpace::numbered(p), rows);
}

}  // namespace

TEST(BitVector, StringRoundTripAndOps) {
  const BitVector v = BitVector::from_string("1101");
  EXPECT_EQ(v.size(), 4u);
  EXPECT_EQ(v.count(), 3u);
  EXPECT_EQ(v.to_string(), "1101");
  EXPECT_EQ((v ^ BitVector::from_string("0110")).to_string(), "1011");
  EXPECT_EQ((~v).to_string(), "0010");
  EXPECT_EQ(v.lowest(), 0u);
  EXPECT_TRUE(v.dot(BitVector::from_string("1100")) == false);
  EXPECT_THROW(BitVector::from_string("10x"), ArgumentError);
  EXPECT_THROW(v ^ BitVector(5), DimensionError);
}

TEST(BitVector, WideVectorsCrossWordBoundaries) {
  BitVector v(130);
  v.set(0);
  v.set(64);
  v.set(129);
  EXPECT_EQ(v.count(), 3u);
  EXPECT_EQ((~v).count(), 127u);
  EXPECT_EQ(BitVector::ones(130).count(), 130u);
}

TEST(Rank, Examples) {
  EXPECT_EQ(rank(BitMatrix::identity(ColumnSpace::numbered(3))), 3u);
  EXPECT_EQ(rank(mat(3, {"110", "011", "101"})), 2u);
  EXPECT_EQ(rank(BitMatrix(ColumnSpace::numbered(5))), 0u);
}

TEST(Rank, RowWidthMismatchIsRejected) {
  BitMatrix m(ColumnSpace::numbered(3));
  EXPECT_THROW(m.append(BitVector(4)), DimensionError);
}

TEST(RestrictColumns, Examples) {
  const BitMatrix i2 = BitMatrix::identity(ColumnSpace::numbered(2));
  const BitMatrix r = restrict_columns(i2, {"col2"});
  EXPECT_EQ(r.column_count(), 1u);
  EXPECT_EQ(rank(r), 1u);

  const BitMatrix ones = mat(2, {"11"});
  const BitMatrix r1 = restrict_columns(ones, {"col1"});
  EXPECT_EQ(r1.column_count(), 1u);
  EXPECT_EQ(r1.row(0).to_string(), "1");

  const BitMatrix m = mat(3, {"101", "011"});
  const BitMatrix all = restrict_columns(m, m.space().labels());
  EXPECT_EQ(all, m);
  EXPECT_THROW(restrict_columns(m, {"col9"}), LabelError);
}

TEST(EntropyOfLinear, Examples) {
  EXPECT_EQ(entropy_of_linear(mat(2, {"11"})), 1u);
  EXPECT_EQ(entropy_of_linear(BitMatrix::identity(ColumnSpace::numbered(3))), 3u);
  EXPECT_EQ(entropy_of_linear(mat(2, {"10", "10"})), 1u);
}

TEST(ConditionalEntropyOfLinear, Examples) {
  const BitMatrix i2 = BitMatrix::identity(ColumnSpace::numbered(2));
  EXPECT_EQ(conditional_entropy_of_linear(i2, {"col1"}), 1u);
  EXPECT_EQ(conditional_entropy_of_linear(mat(2, {"11"}), {"col1"}), 1u);
  const BitMatrix m = mat(3, {"111", "010"});
  EXPECT_EQ(conditional_entropy_of_linear(m, m.space().labels()), 0u);
  EXPECT_THROW(conditional_entropy_of_linear(m, {"nope"}), LabelError);
}

TEST(MutualInformationLinear, Examples) {
  auto space = ColumnSpace::numbered(2);
  const BitMatrix a = BitMatrix::from_strings(space, {"10"});
  EXPECT_EQ(mutual_information_linear(a, a), 1u);
  EXPECT_EQ(mutual_information_linear(a, BitMatrix::from_strings(space, {"01"})), 0u);
  EXPECT_EQ(mutual_information_linear(a, BitMatrix::from_strings(space, {"11"})), 0u);
  EXPECT_THROW(mutual_information_linear(a, mat(3, {"100"})), DimensionError);
}

TEST(InRowSpan, Examples) {
  const BitMatrix m = mat(3, {"100", "010"});
  EXPECT_TRUE(in_row_span(BitVector::from_string("110"), m));
  EXPECT_FALSE(in_row_span(BitVector::from_string("001"), m));
  EXPECT_TRUE(in_row_span(BitVector(3), BitMatrix(ColumnSpace::numbered(3))));
  EXPECT_THROW(in_row_span(BitVector(4), m), DimensionError);
}

TEST(ColumnSpace, DuplicateLabelsRejected) {
  EXPECT_THROW(ColumnSpace(std::vector<std::string>{"a", "a"}), LabelError);
}

// -- properties -------------------------------------------------------------

TEST(RankProperty, MatchesSpanEnumeration) {
  for (std::uint64_t t = 0; t < 300; ++t) {
    Rng rng = trial_rng(11, t);
    const std::size_t p = uniform_index(rng, 1, 70);
    const BitMatrix m = random_matrix(ColumnSpace::numbered(p), uniform_index(rng, 0, 10), rng);
    ASSERT_EQ(rank(m), reference::span_rank(m)) << "trial " << t;
  }
}

TEST(RankProperty, InvariantUnderRowSwapAndRowAddition) {
  for (std::uint64_t t = 0; t < 300; ++t) {
    Rng rng = trial_rng(12, t);
    const std::size_t p = uniform_index(rng, 1, 40);
    const std::size_t rows = uniform_index(rng, 2, 12);
    const BitMatrix m = random_matrix(ColumnSpace::numbered(p), rows, rng);
    std::vector<BitVector> r = m.rows();
    for (int k = 0; k < 20; ++k) {
      const std::size_t i = uniform_index(rng, 0, rows - 1);
      const std::size_t j = uniform_index(rng, 0, rows - 1);
      if (rng() & 1u) {
        std::swap(r[i], r[j]);
      } else if (i != j) {
        r[i] ^= r[j];
      }
    }
    ASSERT_EQ(rank(BitMatrix(m.space_ptr(), r)), rank(m)) << "trial " << t;
  }
}

TEST(RankProperty, StackIsSubadditiveAndMutualInformationNonNegative) {
  for (std::uint64_t t = 0; t < 300; ++t) {
    Rng rng = trial_rng(13, t);
    auto space = ColumnSpace::numbered(uniform_index(rng, 1, 20));
    const BitMatrix a = random_matrix(space, uniform_index(rng, 0, 8), rng);
    const BitMatrix b = random_matrix(space, uniform_index(rng, 0, 8), rng);
    const std::size_t rs = rank(stack(a, b));
    ASSERT_LE(rs, rank(a) + rank(b));
    ASSERT_GE(rs, std::max(rank(a), rank(b)));
    ASSERT_EQ(mutual_information_linear(a, b), rank(a) + rank(b) - rs);
  }
}

TEST(RankProperty, RestrictionIsMonotone) {
  for (std::uint64_t t = 0; t < 300; ++t) {
    Rng rng = trial_rng(14, t);
    const std::size_t p = uniform_index(rng, 1, 16);
    auto space = ColumnSpace::numbered(p);
    const BitMatrix m = random_matrix(space, uniform_index(rng, 0, 10), rng);
    std::vector<std::string> s, tt;
    for (std::size_t c = 0; c < p; ++c) {
      if (rng() & 1u) {
        s.push_back(space->label(c));
        if (rng() & 1u) tt.push_back(space->label(c));
      }
    }
    ASSERT_LE(rank(restrict_columns(m, tt)), rank(restrict_columns(m, s)));
  }
}

TEST(RankProperty, EntropyEqualsBruteForceEntropy) {
  // Independent route: tabulate the distribution of Mξ over all 2^p inputs in
  // the test itself and take its Shannon entropy.
  for (std::uint64_t t = 0; t < 150; ++t) {
    Rng rng = trial_rng(15, t);
    const std::size_t p = uniform_index(rng, 1, 10);
    auto space = ColumnSpace::numbered(p);
    const BitMatrix m = random_matrix(space, uniform_index(rng, 0, p + 2), rng);
    std::map<BitVector, double> dist;
    const std::size_t count = std::size_t{1} << p;
    for (std::size_t x = 0; x < count; ++x) {
      BitVector xi(p);
      for (std::size_t c = 0; c < p; ++c) {
        if ((x >> c) & 1u) xi.set(c);
      }
      dist[m.apply(xi)] += 1.0 / static_cast<double>(count);
    }
    std::vector<double> ps;
    for (const auto& [k, v] : dist) ps.push_back(v);
    ASSERT_NEAR(reference::shannon(ps), static_cast<double>(entropy_of_linear(m)), 1e-12) << "trial " << t;
  }
}

TEST(RowBasis, ReducedRowsSpanTheSameSpace) {
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng = trial_rng(16, t);
    auto space = ColumnSpace::numbered(uniform_index(rng, 1, 30));
    const BitMatrix m = random_matrix(space, uniform_index(rng, 0, 10), rng);
    const BitMatrix e = echelon_form(m);
    ASSERT_EQ(e.row_count(), rank(m));
    for (const auto& row : m.rows()) ASSERT_TRUE(in_row_span(row, e));
    for (const auto& row : e.rows()) ASSERT_TRUE(in_row_span(row, m));
  }
}
