#pragma once

// Bit-packed GF(2) vectors and matrices over labeled column spaces, plus the
// rank calculus for linear functions of independent fair bits: the entropy of
// Z = A*Y is rank(A), and conditioning on Y_S deletes the columns in S.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "skc/error.hpp"

namespace skc {

class BitVector {
 public:
  using word_type = std::uint64_t;
  static constexpr std::size_t word_bits = 64;

  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_((size + word_bits - 1) / word_bits, 0) {}

  /// Parses a string of '0'/'1' characters; position 0 is column 0.
  static BitVector from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] == '1') {
        v.set(i);
      } else if (bits[i] != '0') {
        throw ArgumentError("bit string may only contain 0 and 1");
      }
    }
    return v;
  }

  static BitVector unit(std::size_t size, std::size_t index) {
    BitVector v(size);
    v.set(index);
    return v;
  }

  static BitVector ones(std::size_t size) {
    BitVector v(size);
    for (std::size_t i = 0; i < size; ++i) v.set(i);
    return v;
  }

  std::size_t size() const { return size_; }

  bool test(std::size_t i) const { return (words_[i / word_bits] >> (i % word_bits)) & 1u; }
  void set(std::size_t i, bool value = true) {
    check_index(i);
    const word_type mask = word_type{1} << (i % word_bits);
    if (value) {
      words_[i / word_bits] |= mask;
    } else {
      words_[i / word_bits] &= ~mask;
    }
  }
  void flip(std::size_t i) {
    check_index(i);
    words_[i / word_bits] ^= word_type{1} << (i % word_bits);
  }

  bool any() const {
    return std::any_of(words_.begin(), words_.end(), [](word_type w) { return w != 0; });
  }
  bool none() const { return !any(); }

  std::size_t count() const {
    std::size_t c = 0;
    for (word_type w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  /// Index of the lowest set bit, or size() when the vector is zero.
  std::size_t lowest() const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if (words_[w] != 0) return w * word_bits + static_cast<std::size_t>(std::countr_zero(words_[w]));
    }
    return size_;
  }

  std::span<const word_type> words() const { return words_; }

  BitVector& operator^=(const BitVector& other) {
    check_same_size(other);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    return *this;
  }
  BitVector& operator&=(const BitVector& other) {
    check_same_size(other);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
    return *this;
  }
  BitVector& operator|=(const BitVector& other) {
    check_same_size(other);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
    return *this;
  }
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
  friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }

  BitVector operator~() const {
    BitVector out(size_);
    for (std::size_t i = 0; i < size_; ++i) {
      if (!test(i)) out.set(i);
    }
    return out;
  }

  /// Inner product over GF(2).
  bool dot(const BitVector& other) const {
    check_same_size(other);
    word_type acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
    return std::popcount(acc) % 2 == 1;
  }

  std::string to_string() const {
    std::string out(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) {
      if (test(i)) out[i] = '1';
    }
    return out;
  }

  friend bool operator==(const BitVector&, const BitVector&) = default;
  friend std::strong_ordering operator<=>(const BitVector& a, const BitVector& b) {
    if (auto c = a.size_ <=> b.size_; c != 0) return c;
    return a.words_ <=> b.words_;
  }

 private:
  void check_index(std::size_t i) const {
    if (i >= size_) throw DimensionError("bit index " + std::to_string(i) + " out of range");
  }
  void check_same_size(const BitVector& other) const {
    if (other.size_ != size_) {
      throw DimensionError("bit vectors of length " + std::to_string(size_) + " and " +
                           std::to_string(other.size_));
    }
  }

  std::size_t size_ = 0;
  std::vector<word_type> words_;
};

/// Ordered, distinct column labels. Labels are opaque strings; every set
/// operation on columns resolves through index_of().
class ColumnSpace {
 public:
  explicit ColumnSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
    index_.reserve(labels_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (!index_.emplace(labels_[i], i).second) throw LabelError("duplicate column label '" + labels_[i] + "'");
    }
  }

  /// Columns labeled col1..colp.
  static std::shared_ptr<const ColumnSpace> numbered(std::size_t p) {
    std::vector<std::string> labels;
    labels.reserve(p);
    for (std::size_t i = 1; i <= p; ++i) labels.push_back("col" + std::to_string(i));
    return std::make_shared<const ColumnSpace>(std::move(labels));
  }

  std::size_t dimension() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  bool contains(const std::string& label) const { return index_.count(label) != 0; }

  std::size_t index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw LabelError("unknown column label '" + label + "'");
    return it->second;
  }

  /// Bit mask over this space selecting the given labels.
  BitVector mask_of(std::span<const std::string> labels) const {
    BitVector mask(dimension());
    for (const auto& l : labels) mask.set(index_of(l));
    return mask;
  }

  friend bool operator==(const ColumnSpace& a, const ColumnSpace& b) { return a.labels_ == b.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

using SpacePtr = std::shared_ptr<const ColumnSpace>;

inline bool same_space(const SpacePtr& a, const SpacePtr& b) { return a == b || (a && b && *a == *b); }

class BitMatrix {
 public:
  explicit BitMatrix(SpacePtr space, std::vector<BitVector> rows = {})
      : space_(std::move(space)), rows_(std::move(rows)) {
    if (!space_) throw ArgumentError("bit matrix needs a column space");
    for (const auto& r : rows_) check_row(r);
  }

  static BitMatrix identity(SpacePtr space) {
    const std::size_t p = space->dimension();
    std::vector<BitVector> rows;
    rows.reserve(p);
    for (std::size_t i = 0; i < p; ++i) rows.push_back(BitVector::unit(p, i));
    return BitMatrix(std::move(space), std::move(rows));
  }

  static BitMatrix from_strings(SpacePtr space, std::initializer_list<std::string_view> rows) {
    std::vector<BitVector> out;
    for (auto r : rows) out.push_back(BitVector::from_string(r));
    return BitMatrix(std::move(space), std::move(out));
  }

  const ColumnSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  std::size_t row_count() const { return rows_.size(); }
  std::size_t column_count() const { return space_->dimension(); }
  bool empty() const { return rows_.empty(); }
  const std::vector<BitVector>& rows() const { return rows_; }
  const BitVector& row(std::size_t i) const { return rows_.at(i); }

  void append(BitVector row) {
    check_row(row);
    rows_.push_back(std::move(row));
  }

  BitMatrix with_row(BitVector row) const {
    BitMatrix out = *this;
    out.append(std::move(row));
    return out;
  }

  /// Zeroes every column outside `mask` (same column space, same rank as the
  /// column restriction to `mask`).
  BitMatrix masked(const BitVector& mask) const {
    std::vector<BitVector> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r & mask);
    return BitMatrix(space_, std::move(out));
  }

  /// Matrix-vector product over GF(2).
  BitVector apply(const BitVector& x) const {
    if (x.size() != column_count()) throw DimensionError("operand length does not match column count");
    BitVector out(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (rows_[i].dot(x)) out.set(i);
    }
    return out;
  }

  friend bool operator==(const BitMatrix& a, const BitMatrix& b) {
    return same_space(a.space_, b.space_) && a.rows_ == b.rows_;
  }

 private:
  void check_row(const BitVector& r) const {
    if (r.size() != space_->dimension()) {
      throw DimensionError("row of length " + std::to_string(r.size()) + " in a space of dimension " +
                           std::to_string(space_->dimension()));
    }
  }

  SpacePtr space_;
  std::vector<BitVector> rows_;
};

/// Incrementally built row-echelon basis. Each stored row has a distinct
/// pivot (its lowest set column), and rows are kept in pivot order so that
/// reduction against them is a single left-to-right pass.
class RowBasis {
 public:
  explicit RowBasis(std::size_t dimension) : dimension_(dimension) {}

  std::size_t dimension() const { return dimension_; }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<BitVector>& rows() const { return rows_; }

  /// Residue of `v` after elimination against the basis; zero iff v is in the span.
  BitVector reduce(BitVector v) const {
    check(v);
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      if (v.test(pivots_[k])) v ^= rows_[k];
    }
    return v;
  }

  bool contains(const BitVector& v) const { return reduce(v).none(); }

  /// Adds `v` to the span; returns false when it was already dependent.
  bool insert(const BitVector& v) {
    BitVector r = reduce(v);
    const std::size_t pivot = r.lowest();
    if (pivot == r.size()) return false;
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), pivot);
    const auto offset = pos - pivots_.begin();
    pivots_.insert(pos, pivot);
    rows_.insert(rows_.begin() + offset, std::move(r));
    return true;
  }

  /// Fully reduced echelon rows (each pivot column appears in exactly one row).
  std::vector<BitVector> reduced_rows() const {
    std::vector<BitVector> out = rows_;
    for (std::size_t k = out.size(); k-- > 0;) {
      for (std::size_t j = 0; j < k; ++j) {
        if (out[j].test(pivots_[k])) out[j] ^= out[k];
      }
    }
    return out;
  }

 private:
  void check(const BitVector& v) const {
    if (v.size() != dimension_) throw DimensionError("vector length does not match basis dimension");
  }

  std::size_t dimension_;
  std::vector<std::size_t> pivots_;
  std::vector<BitVector> rows_;
};

inline RowBasis basis_of(const BitMatrix& m) {
  RowBasis b(m.column_count());
  for (const auto& r : m.rows()) b.insert(r);
  return b;
}

inline std::size_t rank(const BitMatrix& m) { return basis_of(m).rank(); }

/// Rank of the submatrix on the columns selected by `mask`.
inline std::size_t masked_rank(const BitMatrix& m, const BitVector& mask) {
  RowBasis b(m.column_count());
  for (const auto& r : m.rows()) b.insert(r & mask);
  return b.rank();
}

/// Canonical reduced row-echelon form (zero rows dropped).
inline BitMatrix echelon_form(const BitMatrix& m) { return BitMatrix(m.space_ptr(), basis_of(m).reduced_rows()); }

inline BitMatrix stack(const BitMatrix& top, const BitMatrix& bottom) {
  if (!same_space(top.space_ptr(), bottom.space_ptr())) throw DimensionError("cannot stack matrices over different column spaces");
  std::vector<BitVector> rows = top.rows();
  rows.insert(rows.end(), bottom.rows().begin(), bottom.rows().end());
  return BitMatrix(top.space_ptr(), std::move(rows));
}

/// Submatrix keeping exactly the columns in `labels`, in their original relative order.
inline BitMatrix restrict_columns(const BitMatrix& m, std::span<const std::string> labels) {
  const BitVector keep = m.space().mask_of(labels);
  std::vector<std::size_t> cols;
  std::vector<std::string> kept_labels;
  for (std::size_t c = 0; c < m.column_count(); ++c) {
    if (keep.test(c)) {
      cols.push_back(c);
      kept_labels.push_back(m.space().label(c));
    }
  }
  auto space = std::make_shared<const ColumnSpace>(std::move(kept_labels));
  std::vector<BitVector> rows;
  rows.reserve(m.row_count());
  for (const auto& r : m.rows()) {
    BitVector out(cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (r.test(cols[k])) out.set(k);
    }
    rows.push_back(std::move(out));
  }
  return BitMatrix(std::move(space), std::move(rows));
}

inline BitMatrix restrict_columns(const BitMatrix& m, std::initializer_list<std::string> labels) {
  return restrict_columns(m, std::span<const std::string>(labels.begin(), labels.size()));
}

/// H(Mξ) in bits for ξ uniform on the column space.
inline std::size_t entropy_of_linear(const BitMatrix& m) { return rank(m); }

/// H(Mξ | ξ_S) in bits: the rank of the columns outside S.
inline std::size_t conditional_entropy_of_linear(const BitMatrix& m, std::span<const std::string> conditioned) {
  const BitVector s = m.space().mask_of(conditioned);
  return masked_rank(m, ~s);
}

inline std::size_t conditional_entropy_of_linear(const BitMatrix& m, std::initializer_list<std::string> conditioned) {
  return conditional_entropy_of_linear(m, std::span<const std::string>(conditioned.begin(), conditioned.size()));
}

/// I(M1ξ; M2ξ) = rank(M1) + rank(M2) - rank([M1; M2]).
inline std::size_t mutual_information_linear(const BitMatrix& a, const BitMatrix& b) {
  if (!same_space(a.space_ptr(), b.space_ptr())) throw DimensionError("mutual information needs a shared column space");
  return rank(a) + rank(b) - rank(stack(a, b));
}

inline bool in_row_span(const BitVector& row, const BitMatrix& m) {
  if (row.size() != m.column_count()) throw DimensionError("row length does not match column count");
  return basis_of(m).contains(row);
}

}  // namespace skc
