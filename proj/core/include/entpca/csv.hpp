#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "entpca/dataset.hpp"

namespace entpca {

enum class Orientation { items_as_rows, items_as_columns };

std::string_view to_string(Orientation o);
// Accepts "items-as-rows" / "items-as-columns"; throws ContractViolation otherwise.
Orientation parse_orientation(std::string_view text);

// Numeric CSV. Items become matrix columns whatever the file orientation.
// Throws IngestionError (with the 1-based line) on ragged rows, non-numeric
// cells or an empty file.
Dataset load_csv(const std::filesystem::path& path, Orientation orientation, bool has_header);
Dataset parse_csv(std::istream& in, Orientation orientation, bool has_header);

// Rows of a plain numeric CSV, no orientation handling. Used for query and
// vector files.
std::vector<std::vector<double>> read_csv_rows(const std::filesystem::path& path);

}  // namespace entpca
