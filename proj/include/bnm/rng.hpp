#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace bnm
{

/// SplitMix64 output finalizer.
constexpr std::uint64_t splitmix64_mix( std::uint64_t z ) noexcept
{
  z = ( z ^ ( z >> 30 ) ) * 0xBF58476D1CE4E5B9ull;
  z = ( z ^ ( z >> 27 ) ) * 0x94D049BB133111EBull;
  return z ^ ( z >> 31 );
}

/// Seed of stream `index` under `master`: the (index + 1)-th output of a
/// SplitMix64 generator whose state starts at `master`.
constexpr std::uint64_t derive_seed( std::uint64_t master, std::uint64_t index ) noexcept
{
  return splitmix64_mix( master + ( index + 1 ) * 0x9E3779B97F4A7C15ull );
}

/// Single-owner random stream. The engine sequence is fixed by the
/// standard; bounded draws are done here because the std distributions
/// differ between standard library implementations.
class RngStream
{
public:
  explicit RngStream( std::uint64_t seed ) : engine_( seed ) {}

  RngStream( const RngStream& ) = delete;
  RngStream& operator=( const RngStream& ) = delete;
  RngStream( RngStream&& ) = default;
  RngStream& operator=( RngStream&& ) = default;

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, bound), by rejection. `bound` must be nonzero.
  std::uint64_t uniform_below( std::uint64_t bound )
  {
    const std::uint64_t threshold = ( 0 - bound ) % bound;
    for ( ;; )
    {
      const auto r = engine_();
      if ( r >= threshold )
      {
        return r % bound;
      }
    }
  }

  /// Fisher-Yates, back to front.
  template<typename T>
  void shuffle( std::span<T> items )
  {
    for ( auto i = items.size(); i > 1; --i )
    {
      const auto j = uniform_below( i );
      using std::swap;
      swap( items[i - 1], items[j] );
    }
  }

private:
  std::mt19937_64 engine_;
};

} // namespace bnm
