#pragma once

#include <cstdint>
#include <vector>

#include "bnm/core.hpp"
#include "bnm/rng.hpp"

namespace bnm
{

/// Uniform random machine of `size` nodes. For each node in order the
/// stream is drawn exactly three times: truth table on [0, 15], then
/// input 0 and input 1 on [0, size - 1]. The output node is node 0.
/// Throws std::invalid_argument when `size` is 0.
Bnm sample_bnm( std::size_t size, RngStream& rng );

/// `count` machines; machine t is drawn from RngStream(derive_seed(master_seed, t)),
/// so the result does not depend on `threads` and prefixes are stable.
std::vector<Bnm> sample_batch( std::size_t size, std::size_t count, std::uint64_t master_seed, unsigned threads = 1 );

} // namespace bnm
