#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "snrkit/archive.hpp"
#include "snrkit/bootstrap.hpp"

namespace snrkit {

// Ensemble tables have the header `time,y,x1,...,xK`, binary tables
// `time,y,p`. Fields are plain comma-separated values with `.` decimals;
// blank lines are ignored and CRLF line endings are accepted.

using Archive = std::variant<EnsembleArchive, BinaryArchive>;

/// Picks the schema from the header. Throws Error{ParseError} on an unknown
/// header or an unparseable number, plus the archive validation errors.
Archive read_archive(std::istream& in);
Archive read_archive_file(const std::filesystem::path& path);

EnsembleArchive read_ensemble_csv(std::istream& in);
BinaryArchive read_binary_csv(std::istream& in);

void write_ensemble_csv(std::ostream& out, const EnsembleArchive& archive);
void write_binary_csv(std::ostream& out, const BinaryArchive& archive);

/// `bin_low,bin_high,count`
void write_histogram_csv(std::ostream& out, std::span<const HistogramBin> bins);
/// One replicate per line, ascending, no header.
void write_replicates(std::ostream& out, const BootstrapDistribution& dist);

/// Shortest text that parses back to exactly `value`.
std::string format_double(double value);
/// Whole field must be a number. Throws Error{ParseError}.
double parse_double(std::string_view field);

}  // namespace snrkit
