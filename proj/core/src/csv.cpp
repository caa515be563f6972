#include "bayescp/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <vector>

#include "bayescp/errors.hpp"

namespace bayescp {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_missing_token(std::string_view s) {
  if (s.empty()) return true;
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return lower == "nan" || lower == "na";
}

// Parsed cell: a value, kMissing, or nullopt when not a number at all.
std::optional<double> parse_cell(std::string_view cell) {
  cell = trim(cell);
  if (is_missing_token(cell)) return kMissing;
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

ObservedSequence parse_csv(std::istream& in) {
  std::vector<Track> tracks;
  std::string line;
  std::size_t line_no = 0;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto cells = split(line);

    std::vector<std::optional<double>> parsed;
    parsed.reserve(cells.size());
    for (auto cell : cells) parsed.push_back(parse_cell(cell));

    const bool has_text = std::any_of(parsed.begin(), parsed.end(),
                                      [](const auto& v) { return !v.has_value(); });
    if (first_row) {
      first_row = false;
      tracks.resize(cells.size());
      if (has_text) continue;
    }
    if (cells.size() != tracks.size())
      throw IngestError("expected " + std::to_string(tracks.size()) + " columns, found " +
                            std::to_string(cells.size()),
                        line_no);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!parsed[c]) throw IngestError("cannot parse '" + std::string(trim(cells[c])) + "'", line_no);
      if (std::isinf(*parsed[c])) throw IngestError("infinite value", line_no);
      tracks[c].push_back(*parsed[c]);
    }
  }
  if (tracks.empty() || tracks.front().empty()) throw IngestError("no data rows");
  for (std::size_t c = 0; c < tracks.size(); ++c) {
    if (std::all_of(tracks[c].begin(), tracks[c].end(), [](double v) { return is_missing(v); }))
      throw IngestError("column " + std::to_string(c + 1) + " has no observed values");
  }
  return ObservedSequence(std::move(tracks));
}

ObservedSequence read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open '" + path.string() + "'");
  return parse_csv(in);
}

void write_csv(std::ostream& out, const ObservedSequence& seq) {
  const std::size_t tracks = seq.num_tracks();
  if (tracks == 1) {
    out << "value\n";
  } else {
    for (std::size_t r = 0; r < tracks; ++r) out << (r ? "," : "") << "track" << r + 1;
    out << '\n';
  }
  char buf[64];
  for (std::size_t i = 0; i < seq.size(); ++i) {
    for (std::size_t r = 0; r < tracks; ++r) {
      if (r) out << ',';
      const double v = seq.track(r)[i];
      if (is_missing(v)) continue;
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
      out.write(buf, ptr - buf);
    }
    out << '\n';
  }
}

}  // namespace bayescp
