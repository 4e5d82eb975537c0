#include "bnm/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bnm
{

TruthTable::TruthTable( unsigned bits )
{
  if ( bits > 15u )
  {
    throw std::invalid_argument( "truth table out of range: " + std::to_string( bits ) );
  }
  bits_ = static_cast<std::uint8_t>( bits );
}

bool eval_node( TruthTable tt, bool a, bool b ) noexcept
{
  return tt.eval( a, b );
}

std::vector<std::string> validate( const Bnm& m )
{
  std::vector<std::string> violations;
  const auto n = m.size();
  if ( n == 0 )
  {
    violations.emplace_back( "machine has no nodes" );
  }
  if ( m.output >= n )
  {
    violations.push_back( "output out of range (output " + std::to_string( m.output ) + ", size " +
                          std::to_string( n ) + ")" );
  }
  for ( std::size_t i = 0; i < n; ++i )
  {
    const auto& node = m.nodes[i];
    if ( node.tt.bits() > 15u )
    {
      violations.push_back( "truth table out of range (node " + std::to_string( i ) + ")" );
    }
    for ( std::size_t port = 0; port < 2; ++port )
    {
      if ( node.inputs[port] >= n )
      {
        violations.push_back( "edge target out of range (node " + std::to_string( i ) + ", port " +
                              std::to_string( port ) + " -> " + std::to_string( node.inputs[port] ) + ")" );
      }
    }
  }
  return violations;
}

void require_valid( const Bnm& m )
{
  const auto violations = validate( m );
  if ( violations.empty() )
  {
    return;
  }
  std::string message = "invalid machine: ";
  for ( std::size_t i = 0; i < violations.size(); ++i )
  {
    if ( i )
    {
      message += "; ";
    }
    message += violations[i];
  }
  throw std::invalid_argument( message );
}

StateVector::StateVector( std::size_t size ) : size_( size ), words_( ( size + 63 ) / 64, 0u )
{
}

void StateVector::set( std::size_t i, bool value ) noexcept
{
  const std::uint64_t mask = std::uint64_t{ 1 } << ( i & 63 );
  if ( value )
  {
    words_[i >> 6] |= mask;
  }
  else
  {
    words_[i >> 6] &= ~mask;
  }
}

void StateVector::clear() noexcept
{
  std::fill( words_.begin(), words_.end(), 0u );
}

std::string StateVector::to_string() const
{
  std::string out( size_, '0' );
  for ( std::size_t i = 0; i < size_; ++i )
  {
    if ( test( i ) )
    {
      out[i] = '1';
    }
  }
  return out;
}

void step_into( const Bnm& m, const StateVector& s, StateVector& next )
{
  next.clear();
  const auto n = m.size();
  for ( std::size_t i = 0; i < n; ++i )
  {
    const auto& node = m.nodes[i];
    if ( node.tt.eval( s.test( node.inputs[0] ), s.test( node.inputs[1] ) ) )
    {
      next.set( i, true );
    }
  }
}

StateVector step( const Bnm& m, const StateVector& s )
{
  if ( s.size() != m.size() )
  {
    throw std::invalid_argument( "state length does not match machine size" );
  }
  StateVector next( m.size() );
  step_into( m, s, next );
  return next;
}

namespace
{

/* steps `state` forward in place, using `scratch` as the write buffer */
void advance( const Bnm& m, StateVector& state, StateVector& scratch )
{
  step_into( m, state, scratch );
  std::swap( state, scratch );
}

} // namespace

CycleSummary find_cycle( const Bnm& m )
{
  require_valid( m );
  const auto n = m.size();
  StateVector scratch( n );

  /* Brent: the tortoise teleports to the hare at every power of two */
  std::uint64_t power = 1;
  std::uint64_t lambda = 1;
  StateVector tortoise( n );
  StateVector hare( n );
  advance( m, hare, scratch );
  while ( tortoise != hare )
  {
    if ( power == lambda )
    {
      tortoise = hare;
      power <<= 1;
      lambda = 0;
    }
    advance( m, hare, scratch );
    ++lambda;
  }

  /* hare leads the tortoise by lambda; they first meet at cycle entry */
  tortoise.clear();
  hare.clear();
  for ( std::uint64_t i = 0; i < lambda; ++i )
  {
    advance( m, hare, scratch );
  }
  std::uint64_t mu = 0;
  while ( tortoise != hare )
  {
    advance( m, tortoise, scratch );
    advance( m, hare, scratch );
    ++mu;
  }
  return { mu, lambda };
}

CycleTrace trace_cycle( const Bnm& m )
{
  CycleTrace trace;
  trace.cycle = find_cycle( m );

  const auto n = m.size();
  StateVector state( n );
  StateVector scratch( n );
  for ( std::uint64_t i = 0; i < trace.cycle.transient_len; ++i )
  {
    advance( m, state, scratch );
  }
  trace.raw_output.resize( trace.cycle.cycle_len );
  for ( std::uint64_t i = 0; i < trace.cycle.cycle_len; ++i )
  {
    trace.raw_output[i] = state.test( m.output ) ? '1' : '0';
    advance( m, state, scratch );
  }
  return trace;
}

std::size_t primitive_period( std::string_view s )
{
  const auto n = s.size();
  if ( n == 0 )
  {
    return 0;
  }
  /* prefix function; the longest proper border gives the smallest period */
  std::vector<std::size_t> border( n, 0 );
  for ( std::size_t i = 1; i < n; ++i )
  {
    auto k = border[i - 1];
    while ( k > 0 && s[i] != s[k] )
    {
      k = border[k - 1];
    }
    if ( s[i] == s[k] )
    {
      ++k;
    }
    border[i] = k;
  }
  const auto p = n - border[n - 1];
  return n % p == 0 ? p : n;
}

std::size_t least_rotation( std::string_view s )
{
  const auto n = static_cast<std::ptrdiff_t>( s.size() );
  if ( n == 0 )
  {
    return 0;
  }
  std::vector<std::ptrdiff_t> failure( 2 * n, -1 );
  std::ptrdiff_t k = 0;
  for ( std::ptrdiff_t j = 1; j < 2 * n; ++j )
  {
    const char sj = s[j % n];
    auto i = failure[j - k - 1];
    while ( i != -1 && sj != s[( k + i + 1 ) % n] )
    {
      if ( sj < s[( k + i + 1 ) % n] )
      {
        k = j - i - 1;
      }
      i = failure[i];
    }
    if ( i == -1 && sj != s[( k + i + 1 ) % n] )
    {
      if ( sj < s[( k + i + 1 ) % n] )
      {
        k = j;
      }
      failure[j - k] = -1;
    }
    else
    {
      failure[j - k] = i + 1;
    }
  }
  return static_cast<std::size_t>( k );
}

CanonicalCString canonicalize( std::string_view raw )
{
  if ( raw.empty() )
  {
    throw std::invalid_argument( "empty string" );
  }
  for ( const char c : raw )
  {
    if ( c != '0' && c != '1' )
    {
      throw std::invalid_argument( "invalid character in bit string: '" + std::string( 1, c ) + "'" );
    }
  }
  const auto primitive = raw.substr( 0, primitive_period( raw ) );
  const auto start = least_rotation( primitive );
  std::string bits;
  bits.reserve( primitive.size() );
  bits.append( primitive.substr( start ) );
  bits.append( primitive.substr( 0, start ) );
  return CanonicalCString( std::move( bits ) );
}

CanonicalCString CanonicalCString::from_canonical( std::string bits )
{
  auto canonical = canonicalize( bits );
  if ( canonical.str() != bits )
  {
    throw std::invalid_argument( "bit string '" + bits + "' is not canonical (expected '" + canonical.str() + "')" );
  }
  return canonical;
}

CanonicalCString output_cstring( const Bnm& m )
{
  return canonicalize( trace_cycle( m ).raw_output );
}

double efficiency_ratio( std::size_t size, std::uint64_t out_len )
{
  if ( size == 0 || out_len == 0 )
  {
    throw std::invalid_argument( "efficiency ratio needs size >= 1 and length >= 1" );
  }
  return std::log2( static_cast<double>( out_len ) ) / static_cast<double>( size );
}

} // namespace bnm
