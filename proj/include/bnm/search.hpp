#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bnm/core.hpp"
#include "bnm/glue.hpp"
#include "bnm/rng.hpp"

namespace bnm
{

/// Parent entry indices (first operand feeds the second).
using Lineage = std::pair<std::size_t, std::size_t>;

struct BagEntry
{
  Bnm machine;
  CanonicalCString out;
  std::uint64_t out_len = 0;
  double ratio = 0.0;
  std::optional<Lineage> lineage;
  std::uint64_t trial = 0;

  bool operator==( const BagEntry& ) const = default;
};

/// Simulates `machine` and fills in the output fields.
BagEntry make_entry( Bnm machine, std::uint64_t trial, std::optional<Lineage> lineage = std::nullopt );

/// True if the stored output fields equal a fresh evaluation of the machine.
bool entry_consistent( const BagEntry& entry );

/// A set of machines keyed by (size, canonical output). Entry identifiers
/// are insertion indices.
class Bag
{
public:
  /// Adds `entry` unless an entry with the same key exists. Returns the new
  /// entry's index on success.
  std::optional<std::size_t> insert( BagEntry entry );

  bool contains( std::size_t size, const CanonicalCString& out ) const;

  const std::vector<BagEntry>& entries() const noexcept { return entries_; }
  const BagEntry& operator[]( std::size_t i ) const { return entries_.at( i ); }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  bool operator==( const Bag& other ) const { return entries_ == other.entries_; }

private:
  std::vector<BagEntry> entries_;
  std::set<std::pair<std::size_t, std::string>> keys_;
};

/// Acceptance metric for new bag entries: ratio at least `min_ratio` and,
/// when set, size at most `max_size`.
struct AcceptRule
{
  double min_ratio = 0.8;
  std::optional<std::size_t> max_size;

  /// Throws std::invalid_argument when min_ratio is outside [0, 1].
  void check() const;
  bool size_allowed( std::size_t size ) const noexcept { return !max_size || size <= *max_size; }
};

struct TrialRecord
{
  std::uint64_t trial = 0;
  std::size_t size = 0;
  /// 0 when the candidate was over the size cap and never simulated.
  std::uint64_t out_len = 0;
  bool accepted = false;

  bool operator==( const TrialRecord& ) const = default;
};

struct SearchStats
{
  std::vector<TrialRecord> trials;

  std::size_t accepted_count() const;
  bool operator==( const SearchStats& ) const = default;
};

struct SearchResult
{
  Bag bag;
  SearchStats stats;
};

/// Samples `budget` random machines of `size` (trial t seeded by
/// derive_seed(seed, t)) and keeps the distinct ones whose output length
/// is in `allowed_lengths`.
Bag seed_bag( std::size_t size, const std::set<std::uint64_t>& allowed_lengths, std::uint64_t budget,
              std::uint64_t seed, unsigned threads = 1 );

struct StepResult
{
  BagEntry candidate;
  bool accepted = false;
  /// False when the candidate exceeded the size cap; its output fields are then empty.
  bool evaluated = false;
};

/// Operands and slot for one gluing: feeder and receiver are drawn
/// uniformly with replacement from the bag (in that order), then the slot
/// in the receiver.
struct GluePick
{
  std::size_t feeder = 0;
  std::size_t receiver = 0;
  GlueSlot slot;
};

/// Throws std::invalid_argument when the bag is empty.
GluePick draw_pick( const Bag& bag, RngStream& rng );

/// Glues the picked entries: the feeder's output drives the receiver.
Bnm glue_pick( const Bag& bag, const GluePick& pick );

/// Draws a pick and glues it. A candidate within the size cap is simulated
/// and inserted when its ratio meets `rule` and its key is new.
/// Throws std::invalid_argument when the bag is empty.
StepResult recombine_step( Bag& bag, RngStream& rng, const AcceptRule& rule, std::uint64_t trial );

/// `budget` recombination steps; step t draws from RngStream(derive_seed(seed, t)).
SearchResult run_recombination( Bag initial, std::uint64_t budget, const AcceptRule& rule, std::uint64_t seed );

/// `budget` random machines of `size`, accepted under `rule` in trial order.
SearchResult run_random_search( std::size_t size, std::uint64_t budget, const AcceptRule& rule, std::uint64_t seed,
                                unsigned threads = 1 );

/// A single-edit neighbor: flip truth-table bit `index` of `node`, or
/// point input port `index` of `node` at `target`.
struct Move
{
  enum class Kind : std::uint8_t
  {
    flip_bit,
    rewire
  };
  Kind kind = Kind::flip_bit;
  std::uint32_t node = 0;
  std::uint32_t index = 0;
  std::uint32_t target = 0;

  auto operator<=>( const Move& ) const = default;
};

/// 4N bit flips plus 2N(N-1) rewires.
std::size_t neighborhood_size( std::size_t size ) noexcept;
std::vector<Move> neighborhood( const Bnm& m );
Bnm apply_move( const Bnm& m, const Move& move );

struct HillClimbResult
{
  BagEntry best;
  /// out_len of the start, then of every accepted improvement.
  std::vector<std::uint64_t> trajectory;
  std::uint64_t evaluations = 0;
  bool local_optimum = false;
};

/// First-improvement hill climbing on out_len. Each iteration visits the
/// neighborhood in random order and moves to the first strictly better
/// neighbor. Stops at a local optimum or after `budget` neighbor evaluations.
HillClimbResult hill_climb( const Bnm& start, std::uint64_t budget, RngStream& rng );

} // namespace bnm
