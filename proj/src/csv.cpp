#include "snrkit/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "snrkit/error.hpp"

namespace snrkit {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

struct Table {
  std::vector<std::string_view> header;
  std::string header_line;
  std::vector<std::string> lines;  // non-blank data lines
  std::vector<std::size_t> line_numbers;
};

Table read_table(std::istream& in) {
  Table t;
  std::string line;
  std::size_t number = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    if (!have_header) {
      if (number == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
      t.header_line = line;
      have_header = true;
      continue;
    }
    t.lines.push_back(std::move(line));
    t.line_numbers.push_back(number);
  }
  if (in.bad()) throw Error(ErrorCode::IoError, "read failed");
  if (!have_header) throw Error(ErrorCode::ParseError, "missing header line");
  t.header = split(t.header_line);
  return t;
}

bool is_binary_header(const std::vector<std::string_view>& h) {
  return h.size() == 3 && h[0] == "time" && h[1] == "y" && h[2] == "p";
}

// time,y,x1,...,xK with consecutive member names.
bool is_ensemble_header(const std::vector<std::string_view>& h) {
  if (h.size() < 3 || h[0] != "time" || h[1] != "y") return false;
  for (std::size_t k = 2; k < h.size(); ++k)
    if (h[k] != "x" + std::to_string(k - 1)) return false;
  return true;
}

std::string at_line(std::size_t n) { return " (line " + std::to_string(n) + ")"; }

double parse_at(std::string_view field, std::size_t line) {
  try {
    return parse_double(field);
  } catch (const Error& e) {
    throw Error(e.code(), e.what() + at_line(line));
  }
}

EnsembleArchive ensemble_from(const Table& t) {
  const std::size_t width = t.header.size();
  std::vector<RawRow> rows;
  rows.reserve(t.lines.size());
  for (std::size_t i = 0; i < t.lines.size(); ++i) {
    const auto fields = split(t.lines[i]);
    if (fields.size() != width)
      throw Error(ErrorCode::RaggedRows, "expected " + std::to_string(width) + " fields, got " +
                                             std::to_string(fields.size()) +
                                             at_line(t.line_numbers[i]));
    RawRow row;
    row.time = std::string(fields[0]);
    row.values.reserve(width - 1);
    for (std::size_t j = 1; j < width; ++j)
      row.values.push_back(parse_at(fields[j], t.line_numbers[i]));
    rows.push_back(std::move(row));
  }
  return validate_ensemble_archive(rows);
}

BinaryArchive binary_from(const Table& t) {
  std::vector<std::string> times;
  std::vector<std::uint8_t> outcomes;
  std::vector<double> probs;
  for (std::size_t i = 0; i < t.lines.size(); ++i) {
    const auto fields = split(t.lines[i]);
    const std::size_t line = t.line_numbers[i];
    if (fields.size() != 3)
      throw Error(ErrorCode::RaggedRows,
                  "expected 3 fields, got " + std::to_string(fields.size()) + at_line(line));
    const double y = parse_at(fields[1], line);
    if (y != 0.0 && y != 1.0)
      throw Error(ErrorCode::InvalidArgument, "binary outcome must be 0 or 1" + at_line(line));
    times.emplace_back(fields[0]);
    outcomes.push_back(y == 1.0 ? 1 : 0);
    probs.push_back(parse_at(fields[2], line));
  }
  return BinaryArchive(std::move(times), std::move(outcomes), std::move(probs));
}

void check_time_label(const std::string& label) {
  if (label.find_first_of(",\n\r") != std::string::npos)
    throw Error(ErrorCode::InvalidArgument, "time label cannot contain commas or newlines");
}

}  // namespace

double parse_double(std::string_view field) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec == std::errc::invalid_argument || ptr != end)
    throw Error(ErrorCode::ParseError, "not a number: '" + std::string(field) + "'");
  if (ec == std::errc::result_out_of_range)
    throw Error(ErrorCode::NonFinite, "number out of range: '" + std::string(field) + "'");
  return value;
}

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

Archive read_archive(std::istream& in) {
  const Table t = read_table(in);
  if (is_binary_header(t.header)) return binary_from(t);
  if (is_ensemble_header(t.header)) return ensemble_from(t);
  throw Error(ErrorCode::ParseError,
              "unrecognised header '" + t.header_line + "', expected time,y,x1,...,xK or time,y,p");
}

Archive read_archive_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_archive(in);
}

EnsembleArchive read_ensemble_csv(std::istream& in) {
  const Table t = read_table(in);
  if (!is_ensemble_header(t.header))
    throw Error(ErrorCode::ParseError, "expected header time,y,x1,...,xK");
  return ensemble_from(t);
}

BinaryArchive read_binary_csv(std::istream& in) {
  const Table t = read_table(in);
  if (!is_binary_header(t.header)) throw Error(ErrorCode::ParseError, "expected header time,y,p");
  return binary_from(t);
}

void write_ensemble_csv(std::ostream& out, const EnsembleArchive& archive) {
  out << "time,y";
  for (std::size_t k = 1; k <= archive.ensemble_size(); ++k) out << ",x" << k;
  out << '\n';
  for (std::size_t n = 0; n < archive.size(); ++n) {
    check_time_label(archive.times()[n]);
    out << archive.times()[n] << ',' << format_double(archive.verification(n));
    for (double x : archive.row(n)) out << ',' << format_double(x);
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed");
}

void write_binary_csv(std::ostream& out, const BinaryArchive& archive) {
  out << "time,y,p\n";
  for (std::size_t n = 0; n < archive.size(); ++n) {
    check_time_label(archive.times()[n]);
    out << archive.times()[n] << ',' << int(archive.outcomes()[n]) << ','
        << format_double(archive.probabilities()[n]) << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed");
}

void write_histogram_csv(std::ostream& out, std::span<const HistogramBin> bins) {
  out << "bin_low,bin_high,count\n";
  for (const auto& b : bins)
    out << format_double(b.low) << ',' << format_double(b.high) << ',' << b.count << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed");
}

void write_replicates(std::ostream& out, const BootstrapDistribution& dist) {
  for (double v : dist.replicates) out << format_double(v) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed");
}

}  // namespace snrkit
