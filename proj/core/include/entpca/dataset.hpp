#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entpca/matrix.hpp"

namespace entpca {

enum class Preprocessing { none, centered };

std::string_view to_string(Preprocessing p);

// m x n data matrix; each of the n columns is one data item of size m.
class Dataset {
 public:
  explicit Dataset(DenseMatrix matrix, Preprocessing preprocessing = Preprocessing::none,
                   std::vector<std::string> item_labels = {});

  const DenseMatrix& matrix() const noexcept { return matrix_; }
  std::size_t m() const noexcept { return matrix_.rows(); }
  std::size_t n() const noexcept { return matrix_.cols(); }
  std::span<const double> item(std::size_t i) const { return matrix_.column(i); }
  Preprocessing preprocessing() const noexcept { return preprocessing_; }
  const std::vector<std::string>& item_labels() const noexcept { return item_labels_; }

 private:
  DenseMatrix matrix_;
  Preprocessing preprocessing_;
  std::vector<std::string> item_labels_;
};

// Per-feature mean over items (length m).
std::vector<double> feature_means(const Dataset& data);

// Subtracts the per-feature mean from every item.
Dataset center(const Dataset& data);

}  // namespace entpca
