#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bnm/core.hpp"
#include "bnm/experiments.hpp"
#include "bnm/search.hpp"

namespace bnm
{

/// Malformed file text, an unknown version, or a violated invariant. The
/// message carries the line or field path where the problem was found.
class FormatError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

inline constexpr int format_version = 1;

/// {"version": 1, "size": N, "output": o, "nodes": [{"tt": 0-15, "in": [a, b]}, ...]}
std::string serialize_bnm( const Bnm& m );
Bnm parse_bnm( std::string_view text );

/// {"version": 1, "entries": [{"bnm": {...}, "out", "out_len", "ratio", "lineage"?, "trial"}, ...]}
/// Lineage ids are zero-based entry indices and must precede the entry.
std::string serialize_bag( const Bag& bag );

enum class BagCheck
{
  /// Recompute every entry's output and compare with the stored fields.
  strict,
  /// Check structure, key uniqueness and lineage only.
  structural
};

Bag parse_bag( std::string_view text, BagCheck check = BagCheck::strict );

/// A machine from either file kind: the machine of a BnmFile, or entry
/// `index` of a BagFile.
Bnm parse_machine( std::string_view text, std::size_t index = 0 );

enum class HistogramFormat
{
  csv,
  json
};

/// CSV: header "length,count", ascending rows, LF endings.
/// JSON: {"bins": [[length, count], ...], "total": T}.
std::string emit_histogram( const Histogram& h, HistogramFormat format );
Histogram parse_histogram_json( std::string_view text );

std::string serialize_report( const ExperimentReport& report );
std::string serialize_comparison( const HillClimbComparison& comparison );

/// "trial,size,out_len,accepted" rows.
std::string serialize_stats_csv( const SearchStats& stats );

std::string read_file( const std::filesystem::path& path );
void write_file( const std::filesystem::path& path, std::string_view text );

} // namespace bnm
