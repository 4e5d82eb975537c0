#include "bnm/search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bnm/parallel.hpp"
#include "bnm/sampler.hpp"

namespace bnm
{

namespace
{

/* bounds memory when evaluating large trial ranges */
constexpr std::uint64_t block_trials = 1u << 16;

std::vector<BagEntry> evaluate_random_block( std::size_t size, std::uint64_t first, std::uint64_t count,
                                             std::uint64_t seed, unsigned threads )
{
  std::vector<BagEntry> entries( count );
  parallel_chunks( count, threads, [&]( std::size_t begin, std::size_t end ) {
    for ( auto i = begin; i < end; ++i )
    {
      RngStream rng( derive_seed( seed, first + i ) );
      entries[i] = make_entry( sample_bnm( size, rng ), first + i );
    }
  } );
  return entries;
}

} // namespace

BagEntry make_entry( Bnm machine, std::uint64_t trial, std::optional<Lineage> lineage )
{
  BagEntry entry;
  entry.out = output_cstring( machine );
  entry.out_len = entry.out.size();
  entry.ratio = efficiency_ratio( machine.size(), entry.out_len );
  entry.machine = std::move( machine );
  entry.lineage = lineage;
  entry.trial = trial;
  return entry;
}

bool entry_consistent( const BagEntry& entry )
{
  if ( !validate( entry.machine ).empty() )
  {
    return false;
  }
  const auto out = output_cstring( entry.machine );
  return out == entry.out && entry.out_len == out.size() &&
         std::abs( entry.ratio - efficiency_ratio( entry.machine.size(), out.size() ) ) <= 1e-12;
}

std::optional<std::size_t> Bag::insert( BagEntry entry )
{
  auto key = std::make_pair( entry.machine.size(), entry.out.str() );
  if ( !keys_.insert( std::move( key ) ).second )
  {
    return std::nullopt;
  }
  entries_.push_back( std::move( entry ) );
  return entries_.size() - 1;
}

bool Bag::contains( std::size_t size, const CanonicalCString& out ) const
{
  return keys_.count( { size, out.str() } ) > 0;
}

void AcceptRule::check() const
{
  if ( !( min_ratio >= 0.0 && min_ratio <= 1.0 ) )
  {
    throw std::invalid_argument( "min ratio must lie in [0, 1]" );
  }
}

std::size_t SearchStats::accepted_count() const
{
  return static_cast<std::size_t>(
      std::count_if( trials.begin(), trials.end(), []( const auto& r ) { return r.accepted; } ) );
}

Bag seed_bag( std::size_t size, const std::set<std::uint64_t>& allowed_lengths, std::uint64_t budget,
              std::uint64_t seed, unsigned threads )
{
  Bag bag;
  for ( std::uint64_t first = 0; first < budget; first += block_trials )
  {
    const auto count = std::min( block_trials, budget - first );
    for ( auto& entry : evaluate_random_block( size, first, count, seed, threads ) )
    {
      if ( allowed_lengths.count( entry.out_len ) )
      {
        bag.insert( std::move( entry ) );
      }
    }
  }
  return bag;
}

GluePick draw_pick( const Bag& bag, RngStream& rng )
{
  if ( bag.empty() )
  {
    throw std::invalid_argument( "cannot recombine from an empty bag" );
  }
  GluePick pick;
  pick.feeder = static_cast<std::size_t>( rng.uniform_below( bag.size() ) );
  pick.receiver = static_cast<std::size_t>( rng.uniform_below( bag.size() ) );
  pick.slot = random_slot( bag[pick.receiver].machine, rng );
  return pick;
}

Bnm glue_pick( const Bag& bag, const GluePick& pick )
{
  return glue( bag[pick.feeder].machine, bag[pick.receiver].machine, pick.slot );
}

StepResult recombine_step( Bag& bag, RngStream& rng, const AcceptRule& rule, std::uint64_t trial )
{
  const auto pick = draw_pick( bag, rng );
  const Lineage parents{ pick.feeder, pick.receiver };
  auto glued = glue_pick( bag, pick );

  StepResult result;
  if ( !rule.size_allowed( glued.size() ) )
  {
    result.candidate.machine = std::move( glued );
    result.candidate.lineage = parents;
    result.candidate.trial = trial;
    return result;
  }

  result.evaluated = true;
  result.candidate = make_entry( std::move( glued ), trial, parents );
  if ( result.candidate.ratio >= rule.min_ratio )
  {
    result.accepted = bag.insert( result.candidate ).has_value();
  }
  return result;
}

SearchResult run_recombination( Bag initial, std::uint64_t budget, const AcceptRule& rule, std::uint64_t seed )
{
  rule.check();
  if ( initial.empty() )
  {
    throw std::invalid_argument( "cannot recombine from an empty bag" );
  }
  SearchResult result{ std::move( initial ), {} };
  result.stats.trials.reserve( budget );
  for ( std::uint64_t t = 0; t < budget; ++t )
  {
    RngStream rng( derive_seed( seed, t ) );
    const auto step = recombine_step( result.bag, rng, rule, t );
    result.stats.trials.push_back( { t, step.candidate.machine.size(), step.candidate.out_len, step.accepted } );
  }
  return result;
}

SearchResult run_random_search( std::size_t size, std::uint64_t budget, const AcceptRule& rule, std::uint64_t seed,
                                unsigned threads )
{
  rule.check();
  SearchResult result;
  if ( budget == 0 )
  {
    return result;
  }
  if ( size == 0 )
  {
    throw std::invalid_argument( "machine size must be at least 1" );
  }
  result.stats.trials.reserve( budget );
  const bool size_ok = rule.size_allowed( size );
  for ( std::uint64_t first = 0; first < budget; first += block_trials )
  {
    const auto count = std::min( block_trials, budget - first );
    for ( auto& entry : evaluate_random_block( size, first, count, seed, threads ) )
    {
      TrialRecord record{ entry.trial, size, entry.out_len, false };
      if ( size_ok && entry.ratio >= rule.min_ratio )
      {
        record.accepted = result.bag.insert( std::move( entry ) ).has_value();
      }
      result.stats.trials.push_back( record );
    }
  }
  return result;
}

std::size_t neighborhood_size( std::size_t size ) noexcept
{
  return 4 * size + ( size ? 2 * size * ( size - 1 ) : 0 );
}

std::vector<Move> neighborhood( const Bnm& m )
{
  const auto n = static_cast<std::uint32_t>( m.size() );
  std::vector<Move> moves;
  moves.reserve( neighborhood_size( n ) );
  for ( std::uint32_t node = 0; node < n; ++node )
  {
    for ( std::uint32_t bit = 0; bit < 4; ++bit )
    {
      moves.push_back( { Move::Kind::flip_bit, node, bit, 0 } );
    }
    for ( std::uint32_t port = 0; port < 2; ++port )
    {
      for ( std::uint32_t target = 0; target < n; ++target )
      {
        if ( target != m.nodes[node].inputs[port] )
        {
          moves.push_back( { Move::Kind::rewire, node, port, target } );
        }
      }
    }
  }
  return moves;
}

Bnm apply_move( const Bnm& m, const Move& move )
{
  if ( move.node >= m.size() )
  {
    throw std::invalid_argument( "move targets a missing node" );
  }
  auto next = m;
  auto& node = next.nodes[move.node];
  switch ( move.kind )
  {
  case Move::Kind::flip_bit:
    if ( move.index > 3 )
    {
      throw std::invalid_argument( "truth table bit index out of range" );
    }
    node.tt = TruthTable( node.tt.bits() ^ ( 1u << move.index ) );
    break;
  case Move::Kind::rewire:
    if ( move.index > 1 || move.target >= m.size() )
    {
      throw std::invalid_argument( "rewire move out of range" );
    }
    node.inputs[move.index] = move.target;
    break;
  }
  return next;
}

HillClimbResult hill_climb( const Bnm& start, std::uint64_t budget, RngStream& rng )
{
  HillClimbResult result;
  result.best = make_entry( start, 0 );
  result.trajectory.push_back( result.best.out_len );

  while ( result.evaluations < budget )
  {
    auto moves = neighborhood( result.best.machine );
    rng.shuffle( std::span<Move>( moves ) );
    bool improved = false;
    for ( const auto& move : moves )
    {
      if ( result.evaluations >= budget )
      {
        return result;
      }
      ++result.evaluations;
      auto candidate = make_entry( apply_move( result.best.machine, move ), 0 );
      if ( candidate.out_len > result.best.out_len )
      {
        result.best = std::move( candidate );
        result.trajectory.push_back( result.best.out_len );
        improved = true;
        break;
      }
    }
    if ( !improved )
    {
      result.local_optimum = true;
      return result;
    }
  }
  return result;
}

} // namespace bnm
