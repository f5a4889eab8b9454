#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "skc/error.hpp"
#include "skc/rational.hpp"

namespace skc {

/// A subset of the terminals {1..m}, stored as a bitmask (terminal i is bit i-1).
class SubsetMask {
 public:
  using value_type = std::uint32_t;
  static constexpr int max_terminals = 30;

  constexpr SubsetMask() = default;
  constexpr explicit SubsetMask(value_type bits) : bits_(bits) {}

  static SubsetMask of(std::initializer_list<int> terminals) {
    SubsetMask out;
    for (int t : terminals) out = out.with(t);
    return out;
  }
  static SubsetMask of(const std::vector<int>& terminals) {
    SubsetMask out;
    for (int t : terminals) out = out.with(t);
    return out;
  }
  static SubsetMask full(int m) {
    check_m(m);
    return SubsetMask(m == 0 ? 0u : ((value_type{1} << m) - 1));
  }
  static SubsetMask singleton(int i) { return SubsetMask().with(i); }

  constexpr value_type bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  int size() const { return std::popcount(bits_); }
  bool contains(int terminal) const {
    return terminal >= 1 && terminal <= max_terminals && ((bits_ >> (terminal - 1)) & 1u);
  }
  SubsetMask with(int terminal) const {
    if (terminal < 1 || terminal > max_terminals) {
      throw ArgumentError("terminal index " + std::to_string(terminal) + " out of range");
    }
    return SubsetMask(bits_ | (value_type{1} << (terminal - 1)));
  }
  SubsetMask complement(int m) const { return SubsetMask(full(m).bits_ & ~bits_); }
  bool subset_of(SubsetMask other) const { return (bits_ & ~other.bits_) == 0; }
  bool is_proper_nonempty(int m) const { return !empty() && subset_of(full(m)) && bits_ != full(m).bits_; }

  std::vector<int> members() const {
    std::vector<int> out;
    for (int i = 1; i <= max_terminals; ++i) {
      if (contains(i)) out.push_back(i);
    }
    return out;
  }

  friend constexpr SubsetMask operator|(SubsetMask a, SubsetMask b) { return SubsetMask(a.bits_ | b.bits_); }
  friend constexpr SubsetMask operator&(SubsetMask a, SubsetMask b) { return SubsetMask(a.bits_ & b.bits_); }
  friend constexpr bool operator==(SubsetMask, SubsetMask) = default;
  friend constexpr auto operator<=>(SubsetMask, SubsetMask) = default;

  static void check_m(int m) {
    if (m < 0 || m > max_terminals) {
      throw ArgumentError("terminal count " + std::to_string(m) + " out of range");
    }
  }

 private:
  value_type bits_ = 0;
};

/// Every subset of {1..m}, including the empty and full sets, in mask order.
inline std::vector<SubsetMask> all_subsets(int m) {
  SubsetMask::check_m(m);
  std::vector<SubsetMask> out;
  out.reserve(std::size_t{1} << m);
  for (SubsetMask::value_type b = 0; b < (SubsetMask::value_type{1} << m); ++b) out.emplace_back(b);
  return out;
}

/// The non-empty proper subsets of {1..m}, in mask order.
inline std::vector<SubsetMask> proper_nonempty_subsets(int m) {
  SubsetMask::check_m(m);
  std::vector<SubsetMask> out;
  if (m < 1) return out;
  const auto full = SubsetMask::full(m).bits();
  for (SubsetMask::value_type b = 1; b < full; ++b) out.emplace_back(b);
  return out;
}

/// Sorted member list, e.g. "[1,3]".
inline std::string to_string(SubsetMask s) {
  std::string out = "[";
  bool first = true;
  for (int i : s.members()) {
    if (!first) out += ",";
    out += std::to_string(i);
    first = false;
  }
  return out + "]";
}

/// Subset entropies H(X_A) keyed by A, in bits.
using EntropyMap = std::map<SubsetMask, Rational>;

}  // namespace skc
