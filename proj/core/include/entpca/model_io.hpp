#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "entpca/pca.hpp"

namespace entpca {

// Binary model container, little-endian, layout in docs/model-format.md.
inline constexpr std::uint32_t kModelFormatVersion = 1;

void save_model(const PcaModel& model, std::ostream& sink);
PcaModel load_model(std::istream& source);

void save_model(const PcaModel& model, const std::filesystem::path& path);
PcaModel load_model(const std::filesystem::path& path);

}  // namespace entpca
