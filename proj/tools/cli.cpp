#include "cli.hpp"

#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "bnm/core.hpp"
#include "bnm/experiments.hpp"
#include "bnm/glue.hpp"
#include "bnm/io.hpp"
#include "bnm/parallel.hpp"
#include "bnm/rng.hpp"
#include "bnm/sampler.hpp"
#include "bnm/search.hpp"

namespace bnm::cli
{

namespace
{

/* bad arguments that CLI11 cannot catch by itself */
struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct Globals
{
  unsigned threads = 0;
  bool quiet = false;

  unsigned resolved_threads() const { return threads ? threads : default_threads(); }
};

HistogramFormat parse_format( const std::string& name )
{
  if ( name == "csv" )
  {
    return HistogramFormat::csv;
  }
  if ( name == "json" )
  {
    return HistogramFormat::json;
  }
  throw UsageError( "unknown format '" + name + "' (expected csv or json)" );
}

GlueSlot parse_slot( const std::string& text )
{
  const auto colon = text.find( ':' );
  if ( colon == std::string::npos )
  {
    throw UsageError( "slot must be NODE:PORT" );
  }
  try
  {
    std::size_t used = 0;
    GlueSlot slot;
    const auto node = std::stoul( text.substr( 0, colon ), &used );
    if ( used != colon )
    {
      throw UsageError( "slot must be NODE:PORT" );
    }
    const auto port_text = text.substr( colon + 1 );
    const auto port = std::stoul( port_text, &used );
    if ( used != port_text.size() || port > 1 )
    {
      throw UsageError( "slot port must be 0 or 1" );
    }
    slot.node = static_cast<std::uint32_t>( node );
    slot.port = static_cast<std::uint32_t>( port );
    return slot;
  }
  catch ( const std::logic_error& )
  {
    throw UsageError( "slot must be NODE:PORT" );
  }
}

void write_output( const std::filesystem::path& path, std::string_view text )
{
  if ( path.has_parent_path() )
  {
    std::filesystem::create_directories( path.parent_path() );
  }
  write_file( path, text );
}

std::string extension( HistogramFormat format )
{
  return format == HistogramFormat::csv ? ".csv" : ".json";
}

void write_report( const ExperimentReport& report, const std::filesystem::path& dir, HistogramFormat format )
{
  std::filesystem::create_directories( dir );
  for ( const auto& [name, h] : report.histograms )
  {
    write_file( dir / ( name + extension( format ) ), emit_histogram( h, format ) );
  }
  write_file( dir / "report.json", serialize_report( report ) );
}

void print_summary( const ExperimentReport& report, std::ostream& out )
{
  for ( const auto& [name, h] : report.histograms )
  {
    out << name << ": total " << h.total() << ", mean " << report.means.at( name ) << ", tail(>="
        << report.config.tail_threshold << ") " << report.tail_mass.at( name ) << ", loglog slope "
        << report.loglog_slope.at( name ) << "\n";
  }
}

} // namespace

int run( const std::vector<std::string>& args, std::ostream& out, std::ostream& err )
{
  CLI::App app{ "Boolean network machines: simulation, gluing, search and experiments", "bnm" };
  app.fallthrough();
  app.require_subcommand( 1 );

  Globals globals;
  app.add_option( "--threads", globals.threads, "Worker threads (0: hardware concurrency)" );
  app.add_flag( "--quiet", globals.quiet, "Suppress progress and summaries" );

  /* gen */
  std::size_t gen_size = 0;
  std::uint64_t gen_count = 0, gen_seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand( "gen", "Sample random machines into a bag file" );
  gen->add_option( "--size", gen_size, "Machine size" )->required()->check( CLI::PositiveNumber );
  gen->add_option( "--count", gen_count, "Number of draws" )->required();
  gen->add_option( "--seed", gen_seed, "Master seed" )->required();
  gen->add_option( "--out", gen_out, "Output bag file" )->required();

  /* run */
  std::string run_in;
  std::size_t run_index = 0;
  bool run_raw = false;
  auto* run_cmd = app.add_subcommand( "run", "Simulate a machine and print its cycle and output" );
  run_cmd->add_option( "--in", run_in, "Machine or bag file" )->required();
  run_cmd->add_option( "--machine", run_index, "Entry index within a bag file" );
  run_cmd->add_flag( "--raw-cycle", run_raw, "Report the unreduced cycle-period output" );

  /* canon */
  std::string canon_bits;
  auto* canon = app.add_subcommand( "canon", "Print the canonical c-string of a bit string" );
  canon->add_option( "--bits", canon_bits, "Bit string of 0 and 1" )->required();

  /* glue */
  std::string glue_a, glue_b, glue_slot, glue_out;
  std::size_t glue_a_index = 0, glue_b_index = 0;
  std::optional<std::uint64_t> glue_seed;
  auto* glue_cmd = app.add_subcommand( "glue", "Feed the output of machine A into one input of machine B" );
  glue_cmd->add_option( "--a", glue_a, "Feeding machine (machine or bag file)" )->required();
  glue_cmd->add_option( "--b", glue_b, "Receiving machine (machine or bag file)" )->required();
  glue_cmd->add_option( "--a-index", glue_a_index, "Entry of --a when it is a bag file" );
  glue_cmd->add_option( "--b-index", glue_b_index, "Entry of --b when it is a bag file" );
  auto* slot_opt = glue_cmd->add_option( "--slot", glue_slot, "Input port of B as NODE:PORT" );
  auto* seed_opt = glue_cmd->add_option( "--seed", glue_seed, "Draw the slot at random" );
  slot_opt->excludes( seed_opt );
  glue_cmd->add_option( "--out", glue_out, "Output machine file" )->required();

  /* search */
  std::string search_mode, search_bag, search_out, search_stats;
  std::size_t search_size = 0;
  std::uint64_t search_budget = 0, search_seed = 0, search_seed_budget = 100000, search_starts = 1;
  double search_ratio = 0.8;
  std::optional<std::size_t> search_max_size;
  auto* search = app.add_subcommand( "search", "Recombination, random or hill-climbing search" );
  search->add_option( "--mode", search_mode, "recombine, random or hillclimb" )
      ->required()
      ->check( CLI::IsMember( { "recombine", "random", "hillclimb" } ) );
  search->add_option( "--size", search_size, "Machine size (seed size for recombine)" )->check( CLI::PositiveNumber );
  search->add_option( "--budget", search_budget, "Trials (recombine, random) or evaluations per start (hillclimb)" )
      ->required();
  search->add_option( "--seed", search_seed, "Master seed" )->required();
  search->add_option( "--min-ratio", search_ratio, "Acceptance threshold on log2(out_len)/size" )
      ->check( CLI::Range( 0.0, 1.0 ) );
  search->add_option( "--max-size", search_max_size, "Largest machine size to evaluate and accept" )
      ->check( CLI::PositiveNumber );
  search->add_option( "--bag", search_bag, "Initial bag for recombine" );
  search->add_option( "--seed-budget", search_seed_budget, "Random draws for the initial bag when --bag is absent" );
  search->add_option( "--starts", search_starts, "Random starts for hillclimb" )->check( CLI::PositiveNumber );
  search->add_option( "--out", search_out, "Output bag file" )->required();
  search->add_option( "--stats", search_stats, "Per-trial CSV statistics" );

  /* experiment */
  auto* experiment = app.add_subcommand( "experiment", "Regenerate the output-length distributions" );
  experiment->require_subcommand( 1 );

  std::string fig3_sizes = "3,6,9", fig3_format = "csv", fig3_out;
  std::uint64_t fig3_trials = 100000, fig3_seed = 0, fig3_tail = 16;
  bool fig3_raw = false;
  auto* fig3_cmd = experiment->add_subcommand( "fig3", "Output lengths of random machines per size" );
  fig3_cmd->add_option( "--sizes", fig3_sizes, "Comma-separated sizes" );
  fig3_cmd->add_option( "--trials", fig3_trials, "Machines per size" )->check( CLI::PositiveNumber );
  fig3_cmd->add_option( "--seed", fig3_seed, "Master seed" );
  fig3_cmd->add_option( "--tail-threshold", fig3_tail, "Tail mass threshold" );
  fig3_cmd->add_option( "--format", fig3_format, "Histogram format: csv or json" );
  fig3_cmd->add_flag( "--raw-cycle", fig3_raw, "Count raw cycle periods instead of canonical lengths" );
  fig3_cmd->add_option( "--out", fig3_out, "Output directory" )->required();

  std::string fig4_format = "csv", fig4_out;
  std::uint64_t fig4_trials = 100000, fig4_seed = 0, fig4_bag_budget = 100000, fig4_tail = 16;
  auto* fig4_cmd = experiment->add_subcommand( "fig4", "Glued versus random size-6 machines" );
  fig4_cmd->add_option( "--trials", fig4_trials, "Machines per ensemble" )->check( CLI::PositiveNumber );
  fig4_cmd->add_option( "--seed-bag-budget", fig4_bag_budget, "Random draws for the size-3 seed bag" );
  fig4_cmd->add_option( "--seed", fig4_seed, "Master seed" );
  fig4_cmd->add_option( "--tail-threshold", fig4_tail, "Tail mass threshold" );
  fig4_cmd->add_option( "--format", fig4_format, "Histogram format: csv or json" );
  fig4_cmd->add_option( "--out", fig4_out, "Output directory" )->required();

  HillClimbOptions hc;
  std::string hc_out;
  auto* hc_cmd = experiment->add_subcommand( "hillclimb", "Hill climbing against equal-budget recombination" );
  hc_cmd->add_option( "--size", hc.size, "Machine size" )->check( CLI::PositiveNumber );
  hc_cmd->add_option( "--starts", hc.starts, "Random starts" );
  hc_cmd->add_option( "--budget", hc.budget, "Evaluations per start" );
  hc_cmd->add_option( "--seed", hc.master_seed, "Master seed" );
  hc_cmd->add_option( "--seed-bag-budget", hc.seed_bag_budget, "Random draws for the recombination seed bag" );
  hc_cmd->add_option( "--min-ratio", hc.min_ratio, "Acceptance threshold" )->check( CLI::Range( 0.0, 1.0 ) );
  hc_cmd->add_option( "--out", hc_out, "Output directory" )->required();

  std::vector<const char*> argv{ "bnm" };
  for ( const auto& a : args )
  {
    argv.push_back( a.c_str() );
  }

  try
  {
    app.parse( static_cast<int>( argv.size() ), argv.data() );
  }
  catch ( const CLI::ParseError& e )
  {
    const auto code = app.exit( e, out, err );
    return code == 0 ? exit_ok : exit_bad_arguments;
  }

  std::ostringstream sink;
  std::ostream& log = globals.quiet ? sink : out;
  const auto threads = globals.resolved_threads();

  try
  {
    if ( *gen )
    {
      const auto entries = [&] {
        Bag bag;
        std::vector<Bnm> machines = sample_batch( gen_size, gen_count, gen_seed, threads );
        std::vector<BagEntry> evaluated( machines.size() );
        parallel_chunks( machines.size(), threads, [&]( std::size_t begin, std::size_t end ) {
          for ( auto t = begin; t < end; ++t )
          {
            evaluated[t] = make_entry( std::move( machines[t] ), t );
          }
        } );
        for ( auto& entry : evaluated )
        {
          bag.insert( std::move( entry ) );
        }
        return bag;
      }();
      write_output( gen_out, serialize_bag( entries ) );
      log << "wrote " << entries.size() << " distinct machines from " << gen_count << " draws to " << gen_out << "\n";
    }
    else if ( *run_cmd )
    {
      const auto m = parse_machine( read_file( run_in ), run_index );
      const auto trace = trace_cycle( m );
      const std::string output = run_raw ? trace.raw_output : canonicalize( trace.raw_output ).str();
      out << "size: " << m.size() << "\n";
      out << "transient: " << trace.cycle.transient_len << "\n";
      out << "cycle: " << trace.cycle.cycle_len << "\n";
      out << "output: " << output << "\n";
      out << "out_len: " << output.size() << "\n";
      out << "ratio: " << std::setprecision( 6 ) << efficiency_ratio( m.size(), output.size() ) << "\n";
    }
    else if ( *canon )
    {
      try
      {
        out << canonicalize( canon_bits ).str() << "\n";
      }
      catch ( const std::invalid_argument& e )
      {
        throw UsageError( e.what() );
      }
    }
    else if ( *glue_cmd )
    {
      if ( !slot_opt->count() && !glue_seed )
      {
        throw UsageError( "glue needs --slot or --seed" );
      }
      const auto a = parse_machine( read_file( glue_a ), glue_a_index );
      const auto b = parse_machine( read_file( glue_b ), glue_b_index );
      GlueSlot slot;
      if ( glue_seed )
      {
        RngStream rng( *glue_seed );
        slot = random_slot( b, rng );
      }
      else
      {
        slot = parse_slot( glue_slot );
        if ( !slot_valid( b, slot ) )
        {
          throw UsageError( "slot " + glue_slot + " is not an input of a machine of size " + std::to_string( b.size() ) );
        }
      }
      const auto glued = glue( a, b, slot );
      write_output( glue_out, serialize_bnm( glued ) );
      log << "glued slot " << slot.node << ":" << slot.port << ", size " << glued.size() << ", output "
          << output_cstring( glued ).str() << "\n";
    }
    else if ( *search )
    {
      AcceptRule rule;
      rule.min_ratio = search_ratio;
      rule.max_size = search_max_size;
      SearchResult result;

      if ( search_mode == "recombine" )
      {
        Bag initial;
        if ( !search_bag.empty() )
        {
          initial = parse_bag( read_file( search_bag ) );
        }
        else
        {
          if ( search_size == 0 )
          {
            throw UsageError( "recombine needs --bag or --size" );
          }
          std::set<std::uint64_t> lengths;
          for ( std::uint64_t len = 1; len <= ( std::uint64_t{ 1 } << std::min<std::size_t>( search_size, 24 ) ); ++len )
          {
            if ( efficiency_ratio( search_size, len ) >= rule.min_ratio )
            {
              lengths.insert( len );
            }
          }
          initial = seed_bag( search_size, lengths, search_seed_budget, derive_seed( search_seed, 0 ), threads );
        }
        if ( initial.empty() )
        {
          throw std::runtime_error( "initial bag is empty; increase --seed-budget or lower --min-ratio" );
        }
        if ( !rule.max_size )
        {
          std::size_t largest = 0;
          for ( const auto& e : initial.entries() )
          {
            largest = std::max( largest, e.machine.size() );
          }
          rule.max_size = 4 * largest;
        }
        log << "initial bag: " << initial.size() << " entries, size cap " << *rule.max_size << "\n";
        result = run_recombination( std::move( initial ), search_budget, rule, derive_seed( search_seed, 1 ) );
      }
      else if ( search_mode == "random" )
      {
        if ( search_size == 0 )
        {
          throw UsageError( "random search needs --size" );
        }
        result = run_random_search( search_size, search_budget, rule, search_seed, threads );
      }
      else
      {
        if ( search_size == 0 )
        {
          throw UsageError( "hillclimb needs --size" );
        }
        const auto start_seed = derive_seed( search_seed, 0 );
        const auto climb_seed = derive_seed( search_seed, 1 );
        std::vector<HillClimbResult> climbs( search_starts );
        parallel_chunks( search_starts, threads, [&]( std::size_t begin, std::size_t end ) {
          for ( auto k = begin; k < end; ++k )
          {
            RngStream start_rng( derive_seed( start_seed, k ) );
            RngStream climb_rng( derive_seed( climb_seed, k ) );
            climbs[k] = hill_climb( sample_bnm( search_size, start_rng ), search_budget, climb_rng );
          }
        } );
        for ( std::size_t k = 0; k < climbs.size(); ++k )
        {
          auto best = climbs[k].best;
          best.trial = k;
          TrialRecord record{ k, best.machine.size(), best.out_len, false };
          if ( rule.size_allowed( best.machine.size() ) && best.ratio >= rule.min_ratio )
          {
            record.accepted = result.bag.insert( std::move( best ) ).has_value();
          }
          result.stats.trials.push_back( record );
          log << "start " << k << ": trajectory";
          for ( const auto len : climbs[k].trajectory )
          {
            log << " " << len;
          }
          log << ( climbs[k].local_optimum ? " (local optimum)" : " (budget exhausted)" ) << "\n";
        }
      }

      write_output( search_out, serialize_bag( result.bag ) );
      if ( !search_stats.empty() )
      {
        write_output( search_stats, serialize_stats_csv( result.stats ) );
      }
      std::uint64_t best = 0;
      for ( const auto& t : result.stats.trials )
      {
        best = std::max( best, t.out_len );
      }
      log << search_mode << ": " << result.stats.trials.size() << " trials, " << result.stats.accepted_count()
          << " accepted, bag " << result.bag.size() << " entries, longest output " << best << "\n";
    }
    else if ( *fig3_cmd )
    {
      Fig3Options options;
      options.sizes.clear();
      std::stringstream list( fig3_sizes );
      for ( std::string item; std::getline( list, item, ',' ); )
      {
        try
        {
          std::size_t used = 0;
          const auto v = std::stoul( item, &used );
          if ( used != item.size() || v == 0 )
          {
            throw std::invalid_argument( item );
          }
          options.sizes.push_back( v );
        }
        catch ( const std::logic_error& )
        {
          throw UsageError( "bad size '" + item + "' in --sizes" );
        }
      }
      if ( options.sizes.empty() )
      {
        throw UsageError( "--sizes is empty" );
      }
      options.trials = fig3_trials;
      options.master_seed = fig3_seed;
      options.tail_threshold = fig3_tail;
      options.mode = fig3_raw ? LengthMode::raw_cycle : LengthMode::canonical;
      options.threads = threads;
      const auto format = parse_format( fig3_format );
      const auto report = fig3( options );
      write_report( report, fig3_out, format );
      print_summary( report, log );
    }
    else if ( *fig4_cmd )
    {
      Fig4Options options;
      options.trials = fig4_trials;
      options.master_seed = fig4_seed;
      options.seed_bag_budget = fig4_bag_budget;
      options.tail_threshold = fig4_tail;
      options.threads = threads;
      const auto format = parse_format( fig4_format );
      const auto report = fig4( options );
      write_report( report, fig4_out, format );
      print_summary( report, log );
    }
    else if ( *hc_cmd )
    {
      hc.threads = threads;
      const auto comparison = compare_hill_climb( hc );
      std::filesystem::create_directories( hc_out );
      write_file( std::filesystem::path( hc_out ) / "report.json", serialize_comparison( comparison ) );
      log << "hill climbing: best ratio " << comparison.hill_best_ratio << " (length " << comparison.hill_best_length
          << "), " << comparison.local_optima << " of " << hc.starts << " starts ended at local optima\n";
      log << "recombination: best ratio " << comparison.recombination_best_ratio << " (length "
          << comparison.recombination_best_length << ") over " << comparison.recombination_steps << " steps\n";
    }
  }
  catch ( const UsageError& e )
  {
    err << "error: " << e.what() << "\n";
    return exit_bad_arguments;
  }
  catch ( const std::invalid_argument& e )
  {
    err << "error: " << e.what() << "\n";
    return exit_bad_arguments;
  }
  catch ( const std::exception& e )
  {
    err << "error: " << e.what() << "\n";
    return exit_bad_data;
  }
  return exit_ok;
}

} // namespace bnm::cli
