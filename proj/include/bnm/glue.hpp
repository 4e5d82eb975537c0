#pragma once

#include <cstdint>

#include "bnm/core.hpp"
#include "bnm/rng.hpp"

namespace bnm
{

/// One input port of one node in the receiving machine.
struct GlueSlot
{
  std::uint32_t node = 0;
  std::uint32_t port = 0;

  auto operator<=>( const GlueSlot& ) const = default;
};

bool slot_valid( const Bnm& b, GlueSlot slot ) noexcept;

/// Feeds the output of `a` into one input port of `b`.
///
/// The result lists a's nodes unchanged, then b's nodes with every input
/// index shifted by |a|. The input at `slot` of the shifted copy of b is
/// rewired to a's output node, and the result's output is b's output
/// shifted by |a|. Both operands are copied, so `glue(x, x, slot)` is fine.
/// Throws std::invalid_argument if `slot` is not a port of `b` or either
/// operand is malformed.
Bnm glue( const Bnm& a, const Bnm& b, GlueSlot slot );

/// Uniform over the 2|b| ports: node first, then port.
GlueSlot random_slot( const Bnm& b, RngStream& rng );

} // namespace bnm
