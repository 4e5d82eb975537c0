#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

/// Zero-input single-output 2-input boolean network machines (2BNMs):
/// representation, synchronous simulation, state-cycle detection and the
/// canonical c-string read from the output node.
namespace bnm
{

/// A 2-input boolean function. Output for inputs (a, b) is bit (2a + b).
class TruthTable
{
public:
  constexpr TruthTable() = default;
  explicit TruthTable( unsigned bits );

  constexpr std::uint8_t bits() const noexcept { return bits_; }

  constexpr bool eval( bool a, bool b ) const noexcept
  {
    return ( bits_ >> ( 2u * unsigned( a ) + unsigned( b ) ) ) & 1u;
  }

  auto operator<=>( const TruthTable& ) const = default;

private:
  std::uint8_t bits_ = 0;
};

bool eval_node( TruthTable tt, bool a, bool b ) noexcept;

struct NodeSpec
{
  TruthTable tt;
  std::array<std::uint32_t, 2> inputs{ 0, 0 };

  auto operator<=>( const NodeSpec& ) const = default;
};

/// A machine is its ordered node list plus the designated output node.
/// There are no input nodes; every node reads two node states.
struct Bnm
{
  std::vector<NodeSpec> nodes;
  std::uint32_t output = 0;

  std::size_t size() const noexcept { return nodes.size(); }

  auto operator<=>( const Bnm& ) const = default;
};

/// Every invariant violation of `m`, empty when the machine is well formed.
std::vector<std::string> validate( const Bnm& m );

/// Throws std::invalid_argument listing the violations, if any.
void require_valid( const Bnm& m );

/// One bit per node, packed into 64-bit words.
class StateVector
{
public:
  explicit StateVector( std::size_t size );

  std::size_t size() const noexcept { return size_; }
  bool test( std::size_t i ) const noexcept { return ( words_[i >> 6] >> ( i & 63 ) ) & 1u; }
  void set( std::size_t i, bool value ) noexcept;
  void clear() noexcept;
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  /// Node 0 first, as '0'/'1' characters.
  std::string to_string() const;

  auto operator<=>( const StateVector& ) const = default;

private:
  std::size_t size_;
  std::vector<std::uint64_t> words_;
};

/// Synchronous update: every node reads the old state.
StateVector step( const Bnm& m, const StateVector& s );

/// Same as step, writing into `next` (which must not alias `s`).
void step_into( const Bnm& m, const StateVector& s, StateVector& next );

struct CycleSummary
{
  std::uint64_t transient_len = 0;
  std::uint64_t cycle_len = 1;

  auto operator<=>( const CycleSummary& ) const = default;
};

/// Transient length and period of the trajectory that starts from the
/// all-zero state. Uses Brent's power-of-two probing so only a constant
/// number of states is held at any time.
CycleSummary find_cycle( const Bnm& m );

/// Cycle summary plus the output-node bits over one period, starting at
/// cycle entry. `raw_output.size() == cycle.cycle_len`.
struct CycleTrace
{
  CycleSummary cycle;
  std::string raw_output;
};

CycleTrace trace_cycle( const Bnm& m );

/// A bit string reduced to its primitive period and rotated to the
/// lexicographically least rotation ('0' < '1').
class CanonicalCString
{
public:
  CanonicalCString() = default;

  /// Accepts `bits` only if it is already canonical; throws otherwise.
  static CanonicalCString from_canonical( std::string bits );

  const std::string& str() const noexcept { return bits_; }
  std::size_t size() const noexcept { return bits_.size(); }

  auto operator<=>( const CanonicalCString& ) const = default;

private:
  friend CanonicalCString canonicalize( std::string_view raw );
  explicit CanonicalCString( std::string bits ) : bits_( std::move( bits ) ) {}

  std::string bits_;
};

/// Length of the shortest prefix whose repetition reproduces `s`.
std::size_t primitive_period( std::string_view s );

/// Start index of the least rotation of `s` (Booth's algorithm).
std::size_t least_rotation( std::string_view s );

/// Throws std::invalid_argument on an empty string or a character other
/// than '0' and '1'.
CanonicalCString canonicalize( std::string_view raw );

CanonicalCString output_cstring( const Bnm& m );

/// log2(out_len) / size. Lies in [0, 1] for these machines since the
/// output length never exceeds 2^size.
double efficiency_ratio( std::size_t size, std::uint64_t out_len );

} // namespace bnm
