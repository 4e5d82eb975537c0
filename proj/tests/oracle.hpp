#pragma once

// Reference implementations for tests. They share only the Bnm data layout
// with the library: stepping, cycle detection and canonicalization are
// written independently, as plainly as possible.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bnm/core.hpp"

namespace oracle
{

using State = std::vector<bool>;

inline State naive_step( const bnm::Bnm& m, const State& s )
{
  State next( s.size() );
  for ( std::size_t i = 0; i < m.nodes.size(); ++i )
  {
    const unsigned a = s[m.nodes[i].inputs[0]];
    const unsigned b = s[m.nodes[i].inputs[1]];
    next[i] = ( m.nodes[i].tt.bits() >> ( 2 * a + b ) ) & 1u;
  }
  return next;
}

struct NaiveCycle
{
  std::uint64_t mu = 0;
  std::uint64_t lambda = 0;
  std::string raw;
};

/* records every visited state until the first repeat */
inline NaiveCycle naive_cycle( const bnm::Bnm& m )
{
  std::map<State, std::uint64_t> seen;
  std::vector<State> trajectory;
  State s( m.nodes.size(), false );
  while ( !seen.count( s ) )
  {
    seen[s] = trajectory.size();
    trajectory.push_back( s );
    s = naive_step( m, s );
  }
  NaiveCycle result;
  result.mu = seen[s];
  result.lambda = trajectory.size() - result.mu;
  for ( auto t = result.mu; t < trajectory.size(); ++t )
  {
    result.raw.push_back( trajectory[t][m.output] ? '1' : '0' );
  }
  return result;
}

inline std::string brute_primitive( const std::string& s )
{
  for ( std::size_t p = 1; p <= s.size(); ++p )
  {
    if ( s.size() % p )
    {
      continue;
    }
    bool repeats = true;
    for ( std::size_t i = p; i < s.size() && repeats; ++i )
    {
      repeats = s[i] == s[i - p];
    }
    if ( repeats )
    {
      return s.substr( 0, p );
    }
  }
  return s;
}

inline std::string brute_min_rotation( const std::string& s )
{
  auto best = s;
  for ( std::size_t r = 1; r < s.size(); ++r )
  {
    best = std::min( best, s.substr( r ) + s.substr( 0, r ) );
  }
  return best;
}

inline std::string brute_canonical( const std::string& s )
{
  return brute_min_rotation( brute_primitive( s ) );
}

inline std::string rotate( const std::string& s, std::size_t r )
{
  r %= s.size();
  return s.substr( r ) + s.substr( 0, r );
}

/* the 64 (truth table, input pair) choices for one node of a size-2 machine */
inline std::vector<bnm::Bnm> all_size2_machines()
{
  std::vector<bnm::NodeSpec> specs;
  for ( unsigned tt = 0; tt < 16; ++tt )
  {
    for ( std::uint32_t a = 0; a < 2; ++a )
    {
      for ( std::uint32_t b = 0; b < 2; ++b )
      {
        specs.push_back( { bnm::TruthTable( tt ), { a, b } } );
      }
    }
  }
  std::vector<bnm::Bnm> machines;
  for ( const auto& n0 : specs )
  {
    for ( const auto& n1 : specs )
    {
      machines.push_back( bnm::Bnm{ { n0, n1 }, 0 } );
    }
  }
  return machines;
}

} // namespace oracle
