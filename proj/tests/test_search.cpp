#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "bnm/sampler.hpp"
#include "bnm/search.hpp"
#include "oracle.hpp"

using namespace bnm;

namespace
{

void check_bag_invariants( const Bag& bag )
{
  std::set<std::pair<std::size_t, std::string>> keys;
  for ( std::size_t i = 0; i < bag.size(); ++i )
  {
    const auto& e = bag[i];
    CHECK( keys.insert( { e.machine.size(), e.out.str() } ).second );
    CHECK( entry_consistent( e ) );
    if ( e.lineage )
    {
      CHECK( e.lineage->first < i );
      CHECK( e.lineage->second < i );
    }
  }
}

Bag small_seed_bag()
{
  return seed_bag( 3, { 6, 7 }, 20000, 17 );
}

} // namespace

TEST_CASE( "seed_bag keeps distinct machines of the allowed lengths" )
{
  const auto bag = seed_bag( 3, { 6, 7 }, 100000, 1 );
  REQUIRE_FALSE( bag.empty() );
  for ( const auto& e : bag.entries() )
  {
    CHECK( ( e.out_len == 6 || e.out_len == 7 ) );
    CHECK( e.machine.size() == 3 );
    CHECK( validate( e.machine ).empty() );
  }
  check_bag_invariants( bag );

  CHECK( seed_bag( 3, { 6, 7 }, 0, 1 ).empty() );
  CHECK( seed_bag( 3, { 6, 7 }, 5000, 1, 1 ) == seed_bag( 3, { 6, 7 }, 5000, 1, 4 ) );
}

TEST_CASE( "bag rejects duplicate keys" )
{
  Bag bag;
  const Bnm m{ { { TruthTable( 1 ), { 0, 0 } } }, 0 };
  CHECK( bag.insert( make_entry( m, 0 ) ) == std::optional<std::size_t>( 0 ) );
  CHECK_FALSE( bag.insert( make_entry( m, 1 ) ) );
  CHECK( bag.size() == 1 );
  CHECK( bag.contains( 1, canonicalize( "10" ) ) );
}

TEST_CASE( "recombine_step" )
{
  Bag empty;
  RngStream rng( 1 );
  CHECK_THROWS_AS( recombine_step( empty, rng, AcceptRule{}, 0 ), std::invalid_argument );

  Bag one;
  one.insert( make_entry( seed_bag( 3, { 6 }, 20000, 2 )[0].machine, 0 ) );
  auto bag = one;
  const auto step = recombine_step( bag, rng, AcceptRule{}, 0 );
  CHECK( step.candidate.machine.size() == 6 );
  CHECK( step.evaluated );
  CHECK( step.candidate.lineage == Lineage{ 0, 0 } );
}

TEST_CASE( "ratio 1.0 accepts only maximal-length outputs" )
{
  auto bag = small_seed_bag();
  AcceptRule rule{ 1.0, 6 };
  for ( std::uint64_t t = 0; t < 3000; ++t )
  {
    RngStream rng( derive_seed( 5, t ) );
    const auto step = recombine_step( bag, rng, rule, t );
    if ( step.accepted )
    {
      CHECK( step.candidate.out_len == 64 );
      CHECK( entry_consistent( step.candidate ) );
    }
  }
}

TEST_CASE( "candidates over the size cap are not simulated" )
{
  auto bag = small_seed_bag();
  AcceptRule rule{ 0.0, 5 };
  RngStream rng( 3 );
  const auto step = recombine_step( bag, rng, rule, 0 );
  CHECK_FALSE( step.evaluated );
  CHECK_FALSE( step.accepted );
  CHECK( step.candidate.out_len == 0 );
  CHECK( bag.size() == small_seed_bag().size() );
}

TEST_CASE( "run_recombination" )
{
  const auto initial = small_seed_bag();
  AcceptRule rule{ 0.8, 12 };

  const auto none = run_recombination( initial, 0, rule, 9 );
  CHECK( none.bag == initial );
  CHECK( none.stats.trials.empty() );

  const auto a = run_recombination( initial, 2000, rule, 9 );
  const auto b = run_recombination( initial, 2000, rule, 9 );
  CHECK( a.bag == b.bag );
  CHECK( a.stats == b.stats );
  CHECK( a.stats.trials.size() == 2000 );
  CHECK( a.bag.size() == initial.size() + a.stats.accepted_count() );
  check_bag_invariants( a.bag );

  CHECK_THROWS_AS( run_recombination( Bag{}, 1, rule, 9 ), std::invalid_argument );
  CHECK_THROWS_AS( run_recombination( initial, 1, AcceptRule{ 1.5, {} }, 9 ), std::invalid_argument );
}

TEST_CASE( "glued candidates outrun random machines of the same size" )
{
  const auto initial = seed_bag( 3, { 6, 7 }, 100000, 21 );
  const auto glued = run_recombination( initial, 10000, AcceptRule{ 0.8, 6 }, 22 );
  const auto random = run_random_search( 6, 10000, AcceptRule{}, 23 );

  double glued_sum = 0, random_sum = 0;
  std::size_t glued_count = 0;
  for ( const auto& t : glued.stats.trials )
  {
    if ( t.size == 6 )
    {
      glued_sum += t.out_len;
      ++glued_count;
    }
  }
  for ( const auto& t : random.stats.trials )
  {
    random_sum += t.out_len;
  }
  REQUIRE( glued_count > 0 );
  CHECK( glued_sum / glued_count > random_sum / random.stats.trials.size() );
}

TEST_CASE( "run_random_search" )
{
  const auto none = run_random_search( 6, 0, AcceptRule{}, 1 );
  CHECK( none.bag.empty() );
  CHECK( none.stats.trials.empty() );

  const auto a = run_random_search( 6, 3000, AcceptRule{ 0.5, {} }, 1, 1 );
  const auto b = run_random_search( 6, 3000, AcceptRule{ 0.5, {} }, 1, 4 );
  CHECK( a.bag == b.bag );
  CHECK( a.stats == b.stats );
  check_bag_invariants( a.bag );
}

TEST_CASE( "random search acceptance at size 6 matches an independent count" )
{
  constexpr std::uint64_t trials = 100000;
  constexpr std::uint64_t seed = 12345;
  const auto result = run_random_search( 6, trials, AcceptRule{ 0.8, {} }, seed );

  /* ratio >= 0.8 at size 6 means out_len >= 2^4.8, i.e. >= 28 */
  std::uint64_t qualifying = 0;
  std::set<std::string> distinct;
  const auto machines = sample_batch( 6, trials, seed );
  for ( const auto& m : machines )
  {
    const auto out = oracle::brute_canonical( oracle::naive_cycle( m ).raw );
    if ( out.size() >= 28 )
    {
      ++qualifying;
      distinct.insert( out );
    }
  }

  std::uint64_t observed = 0;
  for ( const auto& t : result.stats.trials )
  {
    observed += t.out_len >= 28;
  }
  CHECK( observed == qualifying );
  CHECK( result.stats.accepted_count() == distinct.size() );

  /* regression values from the committed oracle run */
  CHECK( qualifying == 35 );
  CHECK( distinct.size() == 14 );
}

TEST_CASE( "neighborhood" )
{
  CHECK( neighborhood_size( 6 ) == 84 );
  CHECK( neighborhood_size( 1 ) == 4 );

  RngStream rng( 8 );
  const auto m = sample_bnm( 6, rng );
  const auto moves = neighborhood( m );
  CHECK( moves.size() == 84 );
  std::set<Bnm> neighbors;
  for ( const auto& move : moves )
  {
    const auto n = apply_move( m, move );
    CHECK( validate( n ).empty() );
    CHECK( n != m );
    neighbors.insert( n );
  }
  CHECK( neighbors.size() == 84 );
}

TEST_CASE( "hill_climb returns a start whose neighborhood cannot improve" )
{
  /* both reach the 2^N maximum, so nothing is strictly better */
  const Bnm flip{ { { TruthTable( 1 ), { 0, 0 } } }, 0 };
  const Bnm counter{ { { TruthTable( 1 ), { 1, 1 } }, { TruthTable( 8 ), { 0, 0 } } }, 0 };
  for ( const auto& start : { flip, counter } )
  {
    for ( std::uint64_t budget : { 0ull, 5ull, 1000ull } )
    {
      RngStream rng( 4 );
      const auto r = hill_climb( start, budget, rng );
      CHECK( r.best.machine == start );
      CHECK( r.trajectory.size() == 1 );
      CHECK( r.evaluations <= budget );
    }
  }
}

TEST_CASE( "hill_climb trajectories are monotone and respect the budget" )
{
  for ( std::uint64_t k = 0; k < 100; ++k )
  {
    RngStream start( derive_seed( 40, k ) );
    RngStream rng( derive_seed( 41, k ) );
    const auto r = hill_climb( sample_bnm( 6, start ), 300, rng );
    CHECK( r.evaluations <= 300 );
    for ( std::size_t i = 1; i < r.trajectory.size(); ++i )
    {
      CHECK( r.trajectory[i] > r.trajectory[i - 1] );
    }
    CHECK( r.trajectory.back() == r.best.out_len );
    CHECK( entry_consistent( r.best ) );
    if ( !r.local_optimum )
    {
      CHECK( r.evaluations == 300 );
    }
  }

  RngStream s1( 1 ), s2( 1 ), c1( 2 ), c2( 2 );
  const auto a = hill_climb( sample_bnm( 6, s1 ), 500, c1 );
  const auto b = hill_climb( sample_bnm( 6, s2 ), 500, c2 );
  CHECK( a.best == b.best );
  CHECK( a.trajectory == b.trajectory );
}
