#include "bnm/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <set>
#include <stdexcept>

#include "bnm/parallel.hpp"
#include "bnm/rng.hpp"
#include "bnm/sampler.hpp"
#include "bnm/search.hpp"

namespace bnm
{

void Histogram::add( std::uint64_t length, std::uint64_t count )
{
  if ( length == 0 )
  {
    throw std::invalid_argument( "histogram lengths start at 1" );
  }
  if ( count == 0 )
  {
    return;
  }
  bins_[length] += count;
  total_ += count;
}

double Histogram::mean() const
{
  if ( total_ == 0 )
  {
    return 0.0;
  }
  long double sum = 0;
  for ( const auto& [length, count] : bins_ )
  {
    sum += static_cast<long double>( length ) * count;
  }
  return static_cast<double>( sum / total_ );
}

double Histogram::tail_mass( std::uint64_t threshold ) const
{
  if ( total_ == 0 )
  {
    return 0.0;
  }
  std::uint64_t tail = 0;
  for ( auto it = bins_.lower_bound( threshold ); it != bins_.end(); ++it )
  {
    tail += it->second;
  }
  return static_cast<double>( tail ) / static_cast<double>( total_ );
}

std::uint64_t Histogram::modal_length() const
{
  std::uint64_t best = 0;
  std::uint64_t best_count = 0;
  for ( const auto& [length, count] : bins_ )
  {
    if ( count > best_count )
    {
      best = length;
      best_count = count;
    }
  }
  return best;
}

Histogram merge_histograms( const Histogram& a, const Histogram& b )
{
  Histogram merged = a;
  for ( const auto& [length, count] : b.bins() )
  {
    merged.add( length, count );
  }
  return merged;
}

std::vector<std::uint64_t> octave_counts( const Histogram& h )
{
  std::vector<std::uint64_t> octaves;
  for ( const auto& [length, count] : h.bins() )
  {
    const auto octave = static_cast<std::size_t>( std::bit_width( length ) - 1 );
    if ( octaves.size() <= octave )
    {
      octaves.resize( octave + 1, 0 );
    }
    octaves[octave] += count;
  }
  return octaves;
}

bool octaves_nonincreasing( const Histogram& h )
{
  const auto octaves = octave_counts( h );
  for ( std::size_t k = 1; k < octaves.size(); ++k )
  {
    if ( octaves[k] > octaves[k - 1] )
    {
      return false;
    }
  }
  return true;
}

double loglog_slope( const Histogram& h )
{
  if ( h.bins().size() < 2 )
  {
    return std::numeric_limits<double>::quiet_NaN();
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>( h.bins().size() );
  for ( const auto& [length, count] : h.bins() )
  {
    const auto x = std::log( static_cast<double>( length ) );
    const auto y = std::log( static_cast<double>( count ) );
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return ( n * sxy - sx * sy ) / ( n * sxx - sx * sx );
}

std::string to_string( LengthMode mode )
{
  return mode == LengthMode::canonical ? "canonical" : "raw_cycle";
}

std::uint64_t output_length( const Bnm& m, LengthMode mode )
{
  if ( mode == LengthMode::raw_cycle )
  {
    return find_cycle( m ).cycle_len;
  }
  return output_cstring( m ).size();
}

void summarize( ExperimentReport& report )
{
  report.means.clear();
  report.tail_mass.clear();
  report.loglog_slope.clear();
  for ( const auto& [name, h] : report.histograms )
  {
    report.means[name] = h.mean();
    report.tail_mass[name] = h.tail_mass( report.config.tail_threshold );
    report.loglog_slope[name] = loglog_slope( h );
  }
}

namespace
{

/* histogram of `length_of(t)` for t in [0, trials), merged across chunks */
template<typename LengthOf>
Histogram count_lengths( std::uint64_t trials, unsigned threads, LengthOf&& length_of )
{
  Histogram total;
  std::mutex total_mutex;
  parallel_chunks( trials, threads, [&]( std::size_t begin, std::size_t end ) {
    Histogram local;
    for ( auto t = begin; t < end; ++t )
    {
      local.add( length_of( t ) );
    }
    std::lock_guard lock( total_mutex );
    total = merge_histograms( total, local );
  } );
  return total;
}

} // namespace

ExperimentReport fig3( const Fig3Options& options )
{
  if ( options.trials == 0 )
  {
    throw std::invalid_argument( "fig3 needs at least one trial" );
  }
  ExperimentReport report;
  report.experiment = "fig3";
  report.config.sizes = options.sizes;
  report.config.trials = options.trials;
  report.config.master_seed = options.master_seed;
  report.config.tail_threshold = options.tail_threshold;
  report.config.mode = options.mode;

  for ( const auto size : options.sizes )
  {
    if ( size == 0 )
    {
      throw std::invalid_argument( "machine size must be at least 1" );
    }
    const auto size_seed = derive_seed( options.master_seed, size );
    report.histograms["size" + std::to_string( size )] =
        count_lengths( options.trials, options.threads, [&]( std::uint64_t t ) {
          RngStream rng( derive_seed( size_seed, t ) );
          return output_length( sample_bnm( size, rng ), options.mode );
        } );
  }
  summarize( report );
  return report;
}

ExperimentReport fig4( const Fig4Options& options )
{
  if ( options.trials == 0 )
  {
    throw std::invalid_argument( "fig4 needs at least one trial" );
  }
  const auto bag = seed_bag( 3, { 6, 7 }, options.seed_bag_budget, derive_seed( options.master_seed, 0 ),
                             options.threads );
  if ( bag.empty() )
  {
    throw std::runtime_error( "seed bag empty; increase budget" );
  }

  ExperimentReport report;
  report.experiment = "fig4";
  report.config.sizes = { 6 };
  report.config.trials = options.trials;
  report.config.master_seed = options.master_seed;
  report.config.tail_threshold = options.tail_threshold;
  report.config.seed_bag_budget = options.seed_bag_budget;
  report.config.seed_bag_entries = bag.size();

  const auto glued_seed = derive_seed( options.master_seed, 1 );
  report.histograms["glued"] = count_lengths( options.trials, options.threads, [&]( std::uint64_t t ) {
    RngStream rng( derive_seed( glued_seed, t ) );
    return output_cstring( glue_pick( bag, draw_pick( bag, rng ) ) ).size();
  } );

  const auto random_seed = derive_seed( options.master_seed, 2 );
  report.histograms["random"] = count_lengths( options.trials, options.threads, [&]( std::uint64_t t ) {
    RngStream rng( derive_seed( random_seed, t ) );
    return output_cstring( sample_bnm( 6, rng ) ).size();
  } );

  summarize( report );
  return report;
}

HillClimbComparison compare_hill_climb( const HillClimbOptions& options )
{
  if ( options.size == 0 )
  {
    throw std::invalid_argument( "machine size must be at least 1" );
  }
  HillClimbComparison report;
  report.options = options;

  const auto start_seed = derive_seed( options.master_seed, 0 );
  const auto climb_seed = derive_seed( options.master_seed, 1 );
  std::vector<HillClimbResult> climbs( options.starts );
  parallel_chunks( options.starts, options.threads, [&]( std::size_t begin, std::size_t end ) {
    for ( auto k = begin; k < end; ++k )
    {
      RngStream start_rng( derive_seed( start_seed, k ) );
      RngStream climb_rng( derive_seed( climb_seed, k ) );
      climbs[k] = hill_climb( sample_bnm( options.size, start_rng ), options.budget, climb_rng );
    }
  } );

  double ratio_sum = 0.0;
  for ( const auto& climb : climbs )
  {
    report.hill_evaluations += climb.evaluations;
    report.local_optima += climb.local_optimum ? 1 : 0;
    for ( std::size_t i = 1; i < climb.trajectory.size(); ++i )
    {
      if ( climb.trajectory[i] < climb.trajectory[i - 1] )
      {
        report.trajectories_monotone = false;
      }
    }
    report.hill_final_lengths.add( climb.best.out_len );
    report.hill_best_length = std::max( report.hill_best_length, climb.best.out_len );
    ratio_sum += climb.best.ratio;
    report.hill_bests.push_back( climb.best );
  }
  if ( !climbs.empty() )
  {
    report.hill_mean_ratio = ratio_sum / static_cast<double>( climbs.size() );
    report.hill_best_ratio = efficiency_ratio( options.size, report.hill_best_length );
  }

  const auto half = std::max<std::size_t>( 1, options.size / 2 );
  std::set<std::uint64_t> lengths;
  for ( std::uint64_t len = 1; len <= ( std::uint64_t{ 1 } << half ); ++len )
  {
    if ( efficiency_ratio( half, len ) >= options.min_ratio )
    {
      lengths.insert( len );
    }
  }
  auto bag = seed_bag( half, lengths, options.seed_bag_budget, derive_seed( options.master_seed, 2 ),
                       options.threads );
  report.seed_bag_entries = bag.size();
  if ( bag.empty() )
  {
    return report;
  }

  AcceptRule rule;
  rule.min_ratio = options.min_ratio;
  rule.max_size = options.size;
  report.recombination_steps = report.hill_evaluations;
  const auto run =
      run_recombination( std::move( bag ), report.recombination_steps, rule, derive_seed( options.master_seed, 3 ) );
  report.recombination_accepted = run.stats.accepted_count();
  for ( const auto& trial : run.stats.trials )
  {
    if ( trial.size == options.size && trial.out_len > 0 )
    {
      report.recombination_lengths.add( trial.out_len );
      report.recombination_best_length = std::max( report.recombination_best_length, trial.out_len );
    }
  }
  if ( report.recombination_best_length > 0 )
  {
    report.recombination_best_ratio = efficiency_ratio( options.size, report.recombination_best_length );
  }
  report.recombination_bag = run.bag;
  return report;
}

} // namespace bnm
