#include "ssnmg/partition.hpp"

#include <algorithm>

#include "ssnmg/error.hpp"

namespace ssnmg {

ActivePartition::ActivePartition(int n)
    : n_(n), states_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), CellState::inactive) {
  require(n >= 1, "partition: n must be positive");
}

ActivePartition::ActivePartition(const InactiveMask& inactive, const InactiveMask& lower, const InactiveMask& upper)
    : ActivePartition(inactive.n()) {
  if (lower.n() != n_ || upper.n() != n_) fail(ErrorCode::level_mismatch, "partition: masks differ in level");
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const int hits = int(inactive[i]) + int(lower[i]) + int(upper[i]);
    if (hits != 1) fail(ErrorCode::invalid_argument, "partition: masks do not partition the cells");
    states_[i] = inactive[i] ? CellState::inactive : lower[i] ? CellState::lower : CellState::upper;
  }
}

InactiveMask ActivePartition::mask_of(CellState s) const {
  InactiveMask m(n_);
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i] == s) m.set(i, true);
  return m;
}

InactiveMask ActivePartition::active_mask() const {
  InactiveMask m(n_);
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i] != CellState::inactive) m.set(i, true);
  return m;
}

std::size_t ActivePartition::count(CellState s) const {
  return static_cast<std::size_t>(std::count(states_.begin(), states_.end(), s));
}

}  // namespace ssnmg
