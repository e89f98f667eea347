#pragma once

#include <cstdint>
#include <span>

#include "jmm/types.hpp"

namespace jmm {

enum class State : std::uint8_t { far, trial, valid };

/// Read-only view of the nodal 1-jets and marching states, indexed by flat node index.
struct JetView {
  std::span<const double> T;
  std::span<const Vec2> grad;
  std::span<const State> state;

  bool valid(int n) const { return state[n] == State::valid; }
};

}  // namespace jmm
