#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "skc/error.hpp"
#include "skc/gf2.hpp"
#include "skc/pin_instance.hpp"

namespace skc {

struct Transmission {
  int sender = 0;
  BitVector row;
  friend bool operator==(const Transmission&, const Transmission&) = default;
};

/// An ordered sequence of linear public transmissions over a PIN model.
/// Construction only checks shapes; interactivity is checked by validate_transcript().
class LinearTranscript {
 public:
  explicit LinearTranscript(std::shared_ptr<const PinInstance> pin, std::vector<Transmission> transmissions = {})
      : pin_(std::move(pin)) {
    if (!pin_) throw ArgumentError("transcript needs a PIN instance");
    for (auto& t : transmissions) append(t.sender, std::move(t.row));
  }

  const PinInstance& pin() const { return *pin_; }
  const std::shared_ptr<const PinInstance>& pin_ptr() const { return pin_; }
  const std::vector<Transmission>& transmissions() const { return transmissions_; }
  /// Number of transmissions.
  std::size_t r() const { return transmissions_.size(); }

  void append(int sender, BitVector row) {
    if (sender < 1 || sender > pin_->m()) throw ArgumentError("sender " + std::to_string(sender) + " is not a terminal");
    if (row.size() != pin_->column_count()) throw DimensionError("transmission row does not match the PIN column count");
    transmissions_.push_back(Transmission{sender, std::move(row)});
  }

  /// F as a matrix, one row per transmission.
  BitMatrix matrix() const {
    std::vector<BitVector> rows;
    rows.reserve(transmissions_.size());
    for (const auto& t : transmissions_) rows.push_back(t.row);
    return BitMatrix(pin_->space(), std::move(rows));
  }

  LinearTranscript prefix(std::size_t count) const {
    if (count > transmissions_.size()) throw ArgumentError("prefix longer than transcript");
    return LinearTranscript(pin_, std::vector<Transmission>(transmissions_.begin(), transmissions_.begin() + count));
  }

 private:
  std::shared_ptr<const PinInstance> pin_;
  std::vector<Transmission> transmissions_;
};

}  // namespace skc
