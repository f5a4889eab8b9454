#pragma once

// Seeded generators for randomized invariant checks.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "skc/gf2.hpp"
#include "skc/pin_instance.hpp"
#include "skc/transcript.hpp"

namespace skc {

using Rng = std::mt19937_64;

/// Generator for trial `trial` of a campaign seeded with `seed`; independent
/// of the order in which trials run.
inline Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return Rng(seq);
}

inline std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline BitVector random_row(std::size_t p, Rng& rng) {
  BitVector v(p);
  for (std::size_t i = 0; i < p; ++i) {
    if (rng() & 1u) v.set(i);
  }
  return v;
}

inline BitMatrix random_matrix(const SpacePtr& space, std::size_t rows, Rng& rng) {
  std::vector<BitVector> out;
  out.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) out.push_back(random_row(space->dimension(), rng));
  return BitMatrix(space, std::move(out));
}

/// Random row in the span of `generators`.
inline BitVector random_combination(const std::vector<BitVector>& generators, std::size_t p, Rng& rng) {
  BitVector v(p);
  for (const auto& g : generators) {
    if (rng() & 1u) v ^= g;
  }
  return v;
}

/// A random interactive transcript: at each step a uniformly chosen sender
/// publishes a non-zero random combination of its own edge bits and the
/// transmissions so far.
inline LinearTranscript random_valid_transcript(std::shared_ptr<const PinInstance> pin, std::size_t steps, Rng& rng) {
  const std::size_t p = pin->column_count();
  LinearTranscript t(pin);
  std::vector<BitVector> history;
  for (std::size_t s = 0; s < steps; ++s) {
    for (;;) {
      const int sender = static_cast<int>(uniform_index(rng, 1, static_cast<std::size_t>(pin->m())));
      std::vector<BitVector> gens = history;
      for (std::size_t c : pin->incident(sender)) gens.push_back(BitVector::unit(p, c));
      if (gens.empty()) continue;
      BitVector row = random_combination(gens, p, rng);
      if (row.none()) continue;
      history.push_back(row);
      t.append(sender, std::move(row));
      break;
    }
  }
  return t;
}

}  // namespace skc
