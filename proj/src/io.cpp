#include "bnm/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace bnm
{

using json = nlohmann::ordered_json;

namespace
{

[[noreturn]] void fail( const std::string& path, const std::string& what )
{
  throw FormatError( path.empty() ? what : path + ": " + what );
}

json parse_json( std::string_view text )
{
  try
  {
    return json::parse( text.begin(), text.end() );
  }
  catch ( const json::parse_error& e )
  {
    const auto upto = std::min<std::size_t>( e.byte == 0 ? 0 : e.byte - 1, text.size() );
    const auto line = 1 + std::count( text.begin(), text.begin() + upto, '\n' );
    throw FormatError( "line " + std::to_string( line ) + ": malformed JSON (" + e.what() + ")" );
  }
}

const json& field( const json& object, const char* key, const std::string& path )
{
  if ( !object.is_object() )
  {
    fail( path, "expected an object" );
  }
  const auto it = object.find( key );
  if ( it == object.end() )
  {
    fail( path, std::string( "missing field '" ) + key + "'" );
  }
  return *it;
}

std::uint64_t as_uint( const json& value, const std::string& path )
{
  if ( !value.is_number_unsigned() )
  {
    fail( path, "expected a non-negative integer" );
  }
  return value.get<std::uint64_t>();
}

std::uint32_t as_index( const json& value, const std::string& path )
{
  const auto v = as_uint( value, path );
  if ( v > std::numeric_limits<std::uint32_t>::max() )
  {
    fail( path, "index too large" );
  }
  return static_cast<std::uint32_t>( v );
}

void check_version( const json& document, const std::string& path )
{
  const auto version = as_uint( field( document, "version", path ), path.empty() ? "version" : path + ".version" );
  if ( version != static_cast<std::uint64_t>( format_version ) )
  {
    fail( path, "unsupported version " + std::to_string( version ) );
  }
}

json bnm_body( const Bnm& m )
{
  json body;
  body["size"] = m.size();
  body["output"] = m.output;
  json nodes = json::array();
  for ( const auto& node : m.nodes )
  {
    nodes.push_back( json{ { "tt", node.tt.bits() }, { "in", { node.inputs[0], node.inputs[1] } } } );
  }
  body["nodes"] = std::move( nodes );
  return body;
}

Bnm bnm_from_body( const json& body, const std::string& path )
{
  const auto at = [&]( const std::string& key ) { return path.empty() ? key : path + "." + key; };
  const auto size = as_uint( field( body, "size", path ), at( "size" ) );
  const auto& nodes = field( body, "nodes", path );
  if ( !nodes.is_array() )
  {
    fail( at( "nodes" ), "expected an array" );
  }
  if ( nodes.size() != size )
  {
    fail( at( "nodes" ), "has " + std::to_string( nodes.size() ) + " nodes but size is " + std::to_string( size ) );
  }

  Bnm m;
  m.output = as_index( field( body, "output", path ), at( "output" ) );
  m.nodes.reserve( nodes.size() );
  for ( std::size_t i = 0; i < nodes.size(); ++i )
  {
    const auto node_path = at( "nodes[" + std::to_string( i ) + "]" );
    const auto tt = as_uint( field( nodes[i], "tt", node_path ), node_path + ".tt" );
    if ( tt > 15 )
    {
      fail( node_path + ".tt", "truth table out of range" );
    }
    const auto& inputs = field( nodes[i], "in", node_path );
    if ( !inputs.is_array() || inputs.size() != 2 )
    {
      fail( node_path + ".in", "expected two input indices" );
    }
    NodeSpec spec;
    spec.tt = TruthTable( static_cast<unsigned>( tt ) );
    spec.inputs[0] = as_index( inputs[0], node_path + ".in[0]" );
    spec.inputs[1] = as_index( inputs[1], node_path + ".in[1]" );
    m.nodes.push_back( spec );
  }

  const auto violations = validate( m );
  if ( !violations.empty() )
  {
    fail( path, violations.front() );
  }
  return m;
}

bool flat( const json& item )
{
  return item.is_primitive() ||
         ( item.is_array() && std::all_of( item.begin(), item.end(), []( const json& x ) { return x.is_primitive(); } ) );
}

/* arrays of flat items, and objects of flat items inside arrays, stay on one line */
bool inline_array( const json& value )
{
  return std::all_of( value.begin(), value.end(), flat );
}

bool inline_object( const json& value )
{
  return value.is_object() && std::all_of( value.begin(), value.end(), flat );
}

void pretty( const json& value, std::size_t depth, std::string& out )
{
  const std::string pad( 2 * ( depth + 1 ), ' ' );
  const std::string close_pad( 2 * depth, ' ' );
  if ( value.is_object() && !value.empty() )
  {
    out += "{\n";
    std::size_t i = 0;
    for ( const auto& [key, item] : value.items() )
    {
      out += pad + json( key ).dump() + ": ";
      pretty( item, depth + 1, out );
      out += ++i < value.size() ? ",\n" : "\n";
    }
    out += close_pad + "}";
  }
  else if ( value.is_array() && !value.empty() && !inline_array( value ) )
  {
    out += "[\n";
    for ( std::size_t i = 0; i < value.size(); ++i )
    {
      out += pad;
      if ( inline_object( value[i] ) )
      {
        out += value[i].dump();
      }
      else
      {
        pretty( value[i], depth + 1, out );
      }
      out += i + 1 < value.size() ? ",\n" : "\n";
    }
    out += close_pad + "]";
  }
  else
  {
    out += value.dump();
  }
}

std::string dump( const json& document )
{
  std::string out;
  pretty( document, 0, out );
  out += "\n";
  return out;
}

json histogram_json( const Histogram& h )
{
  json bins = json::array();
  for ( const auto& [length, count] : h.bins() )
  {
    bins.push_back( { length, count } );
  }
  return json{ { "bins", std::move( bins ) }, { "total", h.total() } };
}

/* NaN has no JSON form */
json number_or_null( double v )
{
  return std::isfinite( v ) ? json( v ) : json( nullptr );
}

} // namespace

std::string serialize_bnm( const Bnm& m )
{
  json document;
  document["version"] = format_version;
  const auto body = bnm_body( m );
  for ( const auto& [key, value] : body.items() )
  {
    document[key] = value;
  }
  return dump( document );
}

Bnm parse_bnm( std::string_view text )
{
  const auto document = parse_json( text );
  check_version( document, "" );
  return bnm_from_body( document, "" );
}

std::string serialize_bag( const Bag& bag )
{
  json entries = json::array();
  for ( const auto& entry : bag.entries() )
  {
    json e;
    e["bnm"] = bnm_body( entry.machine );
    e["out"] = entry.out.str();
    e["out_len"] = entry.out_len;
    e["ratio"] = entry.ratio;
    if ( entry.lineage )
    {
      e["lineage"] = { entry.lineage->first, entry.lineage->second };
    }
    e["trial"] = entry.trial;
    entries.push_back( std::move( e ) );
  }
  return dump( json{ { "version", format_version }, { "entries", std::move( entries ) } } );
}

Bag parse_bag( std::string_view text, BagCheck check )
{
  const auto document = parse_json( text );
  check_version( document, "" );
  const auto& entries = field( document, "entries", "" );
  if ( !entries.is_array() )
  {
    fail( "entries", "expected an array" );
  }

  Bag bag;
  for ( std::size_t i = 0; i < entries.size(); ++i )
  {
    const auto path = "entries[" + std::to_string( i ) + "]";
    const auto& e = entries[i];
    const auto& body = field( e, "bnm", path );
    if ( body.is_object() && body.contains( "version" ) )
    {
      check_version( body, path + ".bnm" );
    }

    BagEntry entry;
    entry.machine = bnm_from_body( body, path + ".bnm" );
    const auto& out = field( e, "out", path );
    if ( !out.is_string() )
    {
      fail( path + ".out", "expected a bit string" );
    }
    try
    {
      entry.out = CanonicalCString::from_canonical( out.get<std::string>() );
    }
    catch ( const std::invalid_argument& ex )
    {
      fail( path + ".out", ex.what() );
    }
    entry.out_len = as_uint( field( e, "out_len", path ), path + ".out_len" );
    if ( entry.out_len != entry.out.size() )
    {
      fail( path + ".out_len", "does not match the length of out" );
    }
    const auto& ratio = field( e, "ratio", path );
    if ( !ratio.is_number() )
    {
      fail( path + ".ratio", "expected a number" );
    }
    entry.ratio = ratio.get<double>();
    entry.trial = as_uint( field( e, "trial", path ), path + ".trial" );
    if ( const auto it = e.find( "lineage" ); it != e.end() && !it->is_null() )
    {
      if ( !it->is_array() || it->size() != 2 )
      {
        fail( path + ".lineage", "expected two entry ids" );
      }
      const auto first = as_uint( ( *it )[0], path + ".lineage[0]" );
      const auto second = as_uint( ( *it )[1], path + ".lineage[1]" );
      if ( first >= i || second >= i )
      {
        fail( path + ".lineage", "references an entry that does not precede it" );
      }
      entry.lineage = Lineage{ first, second };
    }

    if ( check == BagCheck::strict && !entry_consistent( entry ) )
    {
      fail( path, "stored output does not match the machine (recomputed '" + output_cstring( entry.machine ).str() +
                      "')" );
    }
    if ( !bag.insert( std::move( entry ) ) )
    {
      fail( path, "duplicate (size, output) entry" );
    }
  }
  return bag;
}

Bnm parse_machine( std::string_view text, std::size_t index )
{
  const auto document = parse_json( text );
  if ( document.is_object() && document.contains( "entries" ) )
  {
    const auto bag = parse_bag( text, BagCheck::structural );
    if ( index >= bag.size() )
    {
      fail( "entries", "machine index " + std::to_string( index ) + " out of range (" + std::to_string( bag.size() ) +
                           " entries)" );
    }
    return bag[index].machine;
  }
  if ( index != 0 )
  {
    fail( "", "machine index given for a single-machine file" );
  }
  return parse_bnm( text );
}

std::string emit_histogram( const Histogram& h, HistogramFormat format )
{
  if ( format == HistogramFormat::json )
  {
    return dump( histogram_json( h ) );
  }
  std::string out = "length,count\n";
  for ( const auto& [length, count] : h.bins() )
  {
    out += std::to_string( length ) + "," + std::to_string( count ) + "\n";
  }
  return out;
}

Histogram parse_histogram_json( std::string_view text )
{
  const auto document = parse_json( text );
  const auto& bins = field( document, "bins", "" );
  if ( !bins.is_array() )
  {
    fail( "bins", "expected an array" );
  }
  Histogram h;
  for ( std::size_t i = 0; i < bins.size(); ++i )
  {
    const auto path = "bins[" + std::to_string( i ) + "]";
    if ( !bins[i].is_array() || bins[i].size() != 2 )
    {
      fail( path, "expected [length, count]" );
    }
    const auto length = as_uint( bins[i][0], path + "[0]" );
    if ( length == 0 )
    {
      fail( path, "length must be at least 1" );
    }
    h.add( length, as_uint( bins[i][1], path + "[1]" ) );
  }
  if ( as_uint( field( document, "total", "" ), "total" ) != h.total() )
  {
    fail( "total", "does not equal the sum of counts" );
  }
  return h;
}

std::string serialize_report( const ExperimentReport& report )
{
  json config;
  config["sizes"] = report.config.sizes;
  config["trials"] = report.config.trials;
  config["master_seed"] = report.config.master_seed;
  config["tail_threshold"] = report.config.tail_threshold;
  config["length_mode"] = to_string( report.config.mode );
  if ( report.config.seed_bag_budget )
  {
    config["seed_bag_budget"] = *report.config.seed_bag_budget;
  }
  if ( report.config.seed_bag_entries )
  {
    config["seed_bag_entries"] = *report.config.seed_bag_entries;
  }

  json summary = json::object();
  json histograms = json::object();
  for ( const auto& [name, h] : report.histograms )
  {
    json s;
    s["total"] = h.total();
    s["mean"] = report.means.at( name );
    s["tail_mass"] = report.tail_mass.at( name );
    s["loglog_slope"] = number_or_null( report.loglog_slope.at( name ) );
    s["modal_length"] = h.modal_length();
    s["octave_counts"] = octave_counts( h );
    s["octaves_nonincreasing"] = octaves_nonincreasing( h );
    summary[name] = std::move( s );
    histograms[name] = histogram_json( h );
  }

  json document;
  document["experiment"] = report.experiment;
  document["config"] = std::move( config );
  document["summary"] = std::move( summary );
  if ( report.histograms.count( "glued" ) && report.histograms.count( "random" ) )
  {
    json comparison;
    comparison["mean_difference"] = report.means.at( "glued" ) - report.means.at( "random" );
    comparison["glued_mean_exceeds_random"] = report.means.at( "glued" ) > report.means.at( "random" );
    comparison["glued_tail_exceeds_random"] = report.tail_mass.at( "glued" ) > report.tail_mass.at( "random" );
    document["comparison"] = std::move( comparison );
  }
  document["histograms"] = std::move( histograms );
  return dump( document );
}

std::string serialize_comparison( const HillClimbComparison& c )
{
  json config;
  config["size"] = c.options.size;
  config["starts"] = c.options.starts;
  config["budget"] = c.options.budget;
  config["master_seed"] = c.options.master_seed;
  config["seed_bag_budget"] = c.options.seed_bag_budget;
  config["min_ratio"] = c.options.min_ratio;

  json hill;
  hill["evaluations"] = c.hill_evaluations;
  hill["local_optima"] = c.local_optima;
  hill["trajectories_monotone"] = c.trajectories_monotone;
  hill["best_length"] = c.hill_best_length;
  hill["best_ratio"] = c.hill_best_ratio;
  hill["mean_ratio"] = c.hill_mean_ratio;
  hill["final_lengths"] = histogram_json( c.hill_final_lengths );

  json recombination;
  recombination["seed_bag_entries"] = c.seed_bag_entries;
  recombination["steps"] = c.recombination_steps;
  recombination["accepted"] = c.recombination_accepted;
  recombination["best_length"] = c.recombination_best_length;
  recombination["best_ratio"] = c.recombination_best_ratio;
  recombination["candidate_lengths"] = histogram_json( c.recombination_lengths );

  json document;
  document["experiment"] = "hillclimb";
  document["config"] = std::move( config );
  document["hill_climb"] = std::move( hill );
  document["recombination"] = std::move( recombination );
  document["best_ratio_difference"] = c.recombination_best_ratio - c.hill_best_ratio;
  return dump( document );
}

std::string serialize_stats_csv( const SearchStats& stats )
{
  std::string out = "trial,size,out_len,accepted\n";
  for ( const auto& r : stats.trials )
  {
    out += std::to_string( r.trial ) + "," + std::to_string( r.size ) + "," + std::to_string( r.out_len ) + "," +
           ( r.accepted ? "1" : "0" ) + "\n";
  }
  return out;
}

std::string read_file( const std::filesystem::path& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
  {
    throw FormatError( "cannot open " + path.string() );
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file( const std::filesystem::path& path, std::string_view text )
{
  std::ofstream out( path, std::ios::binary | std::ios::trunc );
  if ( !out )
  {
    throw std::runtime_error( "cannot write " + path.string() );
  }
  out.write( text.data(), static_cast<std::streamsize>( text.size() ) );
  if ( !out )
  {
    throw std::runtime_error( "write failed: " + path.string() );
  }
}

} // namespace bnm
