#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bnm/core.hpp"
#include "bnm/search.hpp"

namespace bnm
{

/// Counts of output lengths.
class Histogram
{
public:
  void add( std::uint64_t length, std::uint64_t count = 1 );

  const std::map<std::uint64_t, std::uint64_t>& bins() const noexcept { return bins_; }
  std::uint64_t total() const noexcept { return total_; }
  bool empty() const noexcept { return total_ == 0; }

  double mean() const;
  /// Fraction of the total with length >= threshold.
  double tail_mass( std::uint64_t threshold ) const;
  /// Length with the highest count (smallest such length on ties); 0 when empty.
  std::uint64_t modal_length() const;

  bool operator==( const Histogram& ) const = default;

private:
  std::map<std::uint64_t, std::uint64_t> bins_;
  std::uint64_t total_ = 0;
};

Histogram merge_histograms( const Histogram& a, const Histogram& b );

/// Counts summed over lengths [2^k, 2^(k+1)), for k = 0 up to the octave of
/// the largest length.
std::vector<std::uint64_t> octave_counts( const Histogram& h );

bool octaves_nonincreasing( const Histogram& h );

/// Least-squares slope of ln(count) against ln(length) over nonzero bins;
/// NaN with fewer than two bins.
double loglog_slope( const Histogram& h );

/// Which length a trial contributes: the canonical c-string length or the
/// unreduced state-cycle period.
enum class LengthMode
{
  canonical,
  raw_cycle
};

std::string to_string( LengthMode mode );

/// Output length of `m` under `mode`.
std::uint64_t output_length( const Bnm& m, LengthMode mode );

struct ReportConfig
{
  std::vector<std::size_t> sizes;
  std::uint64_t trials = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t tail_threshold = 16;
  LengthMode mode = LengthMode::canonical;
  std::optional<std::uint64_t> seed_bag_budget;
  std::optional<std::size_t> seed_bag_entries;

  bool operator==( const ReportConfig& ) const = default;
};

struct ExperimentReport
{
  std::string experiment;
  std::map<std::string, Histogram> histograms;
  std::map<std::string, double> means;
  std::map<std::string, double> tail_mass;
  std::map<std::string, double> loglog_slope;
  ReportConfig config;
};

/// Recomputes the per-histogram statistics of `report` from its histograms.
void summarize( ExperimentReport& report );

struct Fig3Options
{
  std::vector<std::size_t> sizes{ 3, 6, 9 };
  std::uint64_t trials = 100000;
  std::uint64_t master_seed = 0;
  std::uint64_t tail_threshold = 16;
  LengthMode mode = LengthMode::canonical;
  unsigned threads = 1;
};

/// Output-length histogram of random machines at each size. Histogram keys
/// are "size<N>"; machine t of size N is drawn from
/// derive_seed(derive_seed(master_seed, N), t).
ExperimentReport fig3( const Fig3Options& options );

struct Fig4Options
{
  std::uint64_t trials = 100000;
  std::uint64_t master_seed = 0;
  std::uint64_t seed_bag_budget = 100000;
  std::uint64_t tail_threshold = 16;
  unsigned threads = 1;
};

/// Glued versus random size-6 machines. The seed bag holds distinct
/// size-3 machines with output length 6 or 7 (stream derive_seed(seed, 0)).
/// Histogram "glued" counts unfiltered pick-and-glue candidates (stream
/// derive_seed(seed, 1)); "random" counts random size-6 machines (stream
/// derive_seed(seed, 2)). Throws std::runtime_error when the seed bag is empty.
ExperimentReport fig4( const Fig4Options& options );

struct HillClimbOptions
{
  std::size_t size = 6;
  std::uint64_t starts = 1000;
  std::uint64_t budget = 1000;
  std::uint64_t master_seed = 0;
  std::uint64_t seed_bag_budget = 100000;
  double min_ratio = 0.8;
  unsigned threads = 1;

  bool operator==( const HillClimbOptions& ) const = default;
};

/// Hill climbing from random starts next to a recombination run with the
/// same number of candidate evaluations. The recombination bag is seeded
/// with distinct machines of half the size whose ratio meets min_ratio,
/// and candidates are capped at `size`.
struct HillClimbComparison
{
  HillClimbOptions options;
  std::uint64_t hill_evaluations = 0;
  std::size_t local_optima = 0;
  bool trajectories_monotone = true;
  Histogram hill_final_lengths;
  std::uint64_t hill_best_length = 0;
  double hill_best_ratio = 0.0;
  double hill_mean_ratio = 0.0;
  /// Best entry of each start, in start order.
  std::vector<BagEntry> hill_bests;

  std::size_t seed_bag_entries = 0;
  std::uint64_t recombination_steps = 0;
  std::size_t recombination_accepted = 0;
  Histogram recombination_lengths;
  std::uint64_t recombination_best_length = 0;
  double recombination_best_ratio = 0.0;
  Bag recombination_bag;
};

HillClimbComparison compare_hill_climb( const HillClimbOptions& options );

} // namespace bnm
