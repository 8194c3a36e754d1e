#include "entpca/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>
#include <system_error>

#include "entpca/errors.hpp"

namespace entpca {

std::string_view to_string(Orientation o) {
  return o == Orientation::items_as_rows ? "items-as-rows" : "items-as-columns";
}

Orientation parse_orientation(std::string_view text) {
  if (text == "items-as-rows") return Orientation::items_as_rows;
  if (text == "items-as-columns") return Orientation::items_as_columns;
  throw ContractViolation("unknown orientation '" + std::string(text) +
                          "' (expected items-as-rows or items-as-columns)");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_cell(std::string_view cell, std::size_t line) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw IngestionError(line, "non-numeric cell '" + std::string(cell) + "'");
  }
  if (!std::isfinite(value)) throw IngestionError(line, "non-finite cell");
  return value;
}

// Returns the numeric rows; blank lines are skipped.
std::vector<std::vector<double>> read_rows(std::istream& in, bool has_header) {
  std::vector<std::vector<double>> rows;
  std::string text;
  std::size_t line = 0;
  bool header_pending = has_header;
  while (std::getline(in, text)) {
    ++line;
    if (trim(text).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::vector<double> row;
    std::string_view rest(text);
    while (true) {
      const auto comma = rest.find(',');
      row.push_back(parse_cell(rest.substr(0, comma), line));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IngestionError(line, "ragged row: expected " + std::to_string(rows.front().size()) +
                                     " cells, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IngestionError(line, "no data rows");
  return rows;
}

}  // namespace

Dataset parse_csv(std::istream& in, Orientation orientation, bool has_header) {
  const auto rows = read_rows(in, has_header);
  try {
    DenseMatrix matrix = orientation == Orientation::items_as_rows
                             ? DenseMatrix::from_columns(rows)
                             : DenseMatrix::from_rows(rows);
    return Dataset(std::move(matrix));
  } catch (const ContractViolation& e) {
    throw IngestionError(0, e.what());
  }
}

Dataset load_csv(const std::filesystem::path& path, Orientation orientation, bool has_header) {
  std::ifstream in(path);
  if (!in) throw IngestionError(0, "cannot open " + path.string());
  return parse_csv(in, orientation, has_header);
}

std::vector<std::vector<double>> read_csv_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError(0, "cannot open " + path.string());
  return read_rows(in, false);
}

}  // namespace entpca
