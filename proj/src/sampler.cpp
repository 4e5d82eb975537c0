#include "bnm/sampler.hpp"

#include <stdexcept>

#include "bnm/parallel.hpp"

namespace bnm
{

Bnm sample_bnm( std::size_t size, RngStream& rng )
{
  if ( size == 0 )
  {
    throw std::invalid_argument( "machine size must be at least 1" );
  }
  Bnm m;
  m.nodes.resize( size );
  for ( auto& node : m.nodes )
  {
    node.tt = TruthTable( static_cast<unsigned>( rng.uniform_below( 16 ) ) );
    node.inputs[0] = static_cast<std::uint32_t>( rng.uniform_below( size ) );
    node.inputs[1] = static_cast<std::uint32_t>( rng.uniform_below( size ) );
  }
  m.output = 0;
  return m;
}

std::vector<Bnm> sample_batch( std::size_t size, std::size_t count, std::uint64_t master_seed, unsigned threads )
{
  if ( size == 0 && count > 0 )
  {
    throw std::invalid_argument( "machine size must be at least 1" );
  }
  std::vector<Bnm> batch( count );
  parallel_chunks( count, threads, [&]( std::size_t begin, std::size_t end ) {
    for ( auto t = begin; t < end; ++t )
    {
      RngStream rng( derive_seed( master_seed, t ) );
      batch[t] = sample_bnm( size, rng );
    }
  } );
  return batch;
}

} // namespace bnm
