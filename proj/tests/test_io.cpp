#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bnm/io.hpp"
#include "bnm/sampler.hpp"

using namespace bnm;

namespace
{

const Bnm counter{ { { TruthTable( 1 ), { 1, 1 } }, { TruthTable( 8 ), { 0, 0 } } }, 0 };

std::string replace( std::string text, const std::string& from, const std::string& to )
{
  const auto at = text.find( from );
  REQUIRE( at != std::string::npos );
  return text.replace( at, from.size(), to );
}

} // namespace

TEST_CASE( "machine file layout" )
{
  CHECK( serialize_bnm( counter ) == "{\n"
                                     "  \"version\": 1,\n"
                                     "  \"size\": 2,\n"
                                     "  \"output\": 0,\n"
                                     "  \"nodes\": [\n"
                                     "    {\"tt\":1,\"in\":[1,1]},\n"
                                     "    {\"tt\":8,\"in\":[0,0]}\n"
                                     "  ]\n"
                                     "}\n" );
  CHECK( parse_bnm( serialize_bnm( counter ) ) == counter );
}

TEST_CASE( "machine round trip over random machines" )
{
  for ( std::uint64_t t = 0; t < 200; ++t )
  {
    RngStream rng( derive_seed( 6, t ) );
    auto m = sample_bnm( 1 + rng.uniform_below( 40 ), rng );
    m.output = static_cast<std::uint32_t>( rng.uniform_below( m.size() ) );
    CHECK( parse_bnm( serialize_bnm( m ) ) == m );
  }
}

TEST_CASE( "machine parse errors" )
{
  const auto text = serialize_bnm( counter );
  CHECK_THROWS_WITH_AS( parse_bnm( replace( text, "\"output\": 0", "\"output\": 2" ) ),
                        doctest::Contains( "output out of range" ), FormatError );
  CHECK_THROWS_WITH_AS( parse_bnm( replace( text, "[1,1]", "[1,4]" ) ), doctest::Contains( "edge target out of range" ),
                        FormatError );
  CHECK_THROWS_WITH_AS( parse_bnm( replace( text, "\"tt\":8", "\"tt\":16" ) ), doctest::Contains( "nodes[1].tt" ),
                        FormatError );
  CHECK_THROWS_WITH_AS( parse_bnm( replace( text, "\"version\": 1", "\"version\": 2" ) ),
                        doctest::Contains( "unsupported version 2" ), FormatError );
  CHECK_THROWS_WITH_AS( parse_bnm( replace( text, "\"size\": 2", "\"size\": 3" ) ), doctest::Contains( "nodes" ),
                        FormatError );
  CHECK_THROWS_WITH_AS( parse_bnm( text.substr( 0, text.size() / 2 ) ), doctest::Contains( "line " ), FormatError );
  CHECK_THROWS_WITH_AS( parse_bnm( replace( text, "\"tt\":1,", "\"tt\":-1," ) ), doctest::Contains( "nodes[0].tt" ),
                        FormatError );
}

TEST_CASE( "malformed JSON reports the line" )
{
  const std::string text = "{\n  \"version\": 1,\n  \"size\": ,\n}";
  CHECK_THROWS_WITH_AS( parse_bnm( text ), doctest::Contains( "line 3" ), FormatError );
}

TEST_CASE( "bag round trip and checks" )
{
  Bag bag;
  bag.insert( make_entry( counter, 0 ) );
  bag.insert( make_entry( Bnm{ { { TruthTable( 1 ), { 0, 0 } } }, 0 }, 1 ) );
  bag.insert( make_entry( sample_batch( 4, 1, 9 )[0], 2, Lineage{ 0, 1 } ) );
  const auto text = serialize_bag( bag );
  CHECK( parse_bag( text ) == bag );
  CHECK( parse_bag( text, BagCheck::structural ) == bag );
  CHECK( text.find( "\"lineage\": [0,1]" ) != std::string::npos );

  CHECK_THROWS_WITH_AS( parse_bag( replace( text, "\"out\": \"0011\"", "\"out\": \"0111\"" ) ),
                        doctest::Contains( "entries[0]" ), FormatError );
  CHECK_NOTHROW( parse_bag( replace( text, "\"out\": \"0011\"", "\"out\": \"0111\"" ), BagCheck::structural ) );
  CHECK_THROWS_WITH_AS( parse_bag( replace( text, "\"out\": \"0011\"", "\"out\": \"0110\"" ) ),
                        doctest::Contains( "not canonical" ), FormatError );
  CHECK_THROWS_WITH_AS( parse_bag( replace( text, "\"lineage\": [0,1]", "\"lineage\": [0,2]" ) ),
                        doctest::Contains( "lineage" ), FormatError );
  CHECK_THROWS_WITH_AS( parse_bag( replace( text, "\"version\": 1", "\"version\": 7" ) ),
                        doctest::Contains( "unsupported version" ), FormatError );
  CHECK_THROWS_AS( parse_bag( text.substr( 0, text.size() - 10 ) ), FormatError );
}

TEST_CASE( "bag files reject duplicate keys" )
{
  Bag bag;
  bag.insert( make_entry( counter, 0 ) );
  auto text = serialize_bag( bag );
  const auto begin = text.find( "    {" );
  const auto end = text.rfind( "    }" ) + 5;
  const auto entry = text.substr( begin, end - begin );
  text.insert( end, ",\n" + entry );
  CHECK_THROWS_WITH_AS( parse_bag( text ), doctest::Contains( "duplicate" ), FormatError );
}

TEST_CASE( "parse_machine reads either file kind" )
{
  Bag bag;
  bag.insert( make_entry( counter, 0 ) );
  const auto other = sample_batch( 5, 1, 2 )[0];
  bag.insert( make_entry( other, 1 ) );
  CHECK( parse_machine( serialize_bag( bag ), 1 ) == other );
  CHECK( parse_machine( serialize_bnm( counter ) ) == counter );
  CHECK_THROWS_AS( parse_machine( serialize_bag( bag ), 2 ), FormatError );
}

TEST_CASE( "histogram emission" )
{
  Histogram h;
  h.add( 1, 5 );
  h.add( 3, 2 );
  CHECK( emit_histogram( h, HistogramFormat::csv ) == "length,count\n1,5\n3,2\n" );
  CHECK( emit_histogram( Histogram{}, HistogramFormat::csv ) == "length,count\n" );
  CHECK( parse_histogram_json( emit_histogram( h, HistogramFormat::json ) ) == h );
  CHECK( parse_histogram_json( emit_histogram( Histogram{}, HistogramFormat::json ) ) == Histogram{} );
  CHECK_THROWS_AS( parse_histogram_json( "{\"bins\": [[1,5]], \"total\": 4}" ), FormatError );
}

TEST_CASE( "report carries config, summary and histograms" )
{
  Fig4Options options;
  options.trials = 500;
  options.seed_bag_budget = 20000;
  options.master_seed = 2;
  const auto text = serialize_report( fig4( options ) );
  for ( const auto* key : { "\"experiment\": \"fig4\"", "\"trials\": 500", "\"tail_threshold\": 16",
                            "\"seed_bag_budget\": 20000", "\"glued_mean_exceeds_random\"", "\"histograms\"" } )
  {
    CHECK( text.find( key ) != std::string::npos );
  }
}
