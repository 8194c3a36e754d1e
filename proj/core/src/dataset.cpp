#include "entpca/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "entpca/errors.hpp"

namespace entpca {

std::string_view to_string(Preprocessing p) {
  return p == Preprocessing::centered ? "centered" : "none";
}

Dataset::Dataset(DenseMatrix matrix, Preprocessing preprocessing,
                 std::vector<std::string> item_labels)
    : matrix_(std::move(matrix)),
      preprocessing_(preprocessing),
      item_labels_(std::move(item_labels)) {
  if (m() < 2 || n() < 2) {
    throw ContractViolation("dataset needs m >= 2 and n >= 2, got " + std::to_string(m()) +
                            "x" + std::to_string(n()));
  }
  if (!item_labels_.empty() && item_labels_.size() != n()) {
    throw ContractViolation("dataset has " + std::to_string(n()) + " items but " +
                            std::to_string(item_labels_.size()) + " labels");
  }
  if (preprocessing_ == Preprocessing::centered) {
    const double tol = 1e-9 * static_cast<double>(n()) * max_abs_entry(matrix_);
    for (std::size_t r = 0; r < m(); ++r) {
      double sum = 0.0;
      for (std::size_t c = 0; c < n(); ++c) sum += matrix_(r, c);
      if (std::abs(sum) > tol) {
        throw ContractViolation("dataset marked centered but feature " + std::to_string(r) +
                                " sums to " + std::to_string(sum));
      }
    }
  }
}

std::vector<double> feature_means(const Dataset& data) {
  std::vector<double> mean(data.m(), 0.0);
  for (std::size_t c = 0; c < data.n(); ++c) {
    const auto col = data.item(c);
    for (std::size_t r = 0; r < data.m(); ++r) mean[r] += col[r];
  }
  for (double& v : mean) v /= static_cast<double>(data.n());
  return mean;
}

Dataset center(const Dataset& data) {
  const auto mean = feature_means(data);
  std::vector<double> values(data.matrix().values().begin(), data.matrix().values().end());
  for (std::size_t c = 0; c < data.n(); ++c) {
    for (std::size_t r = 0; r < data.m(); ++r) values[c * data.m() + r] -= mean[r];
  }
  return Dataset(DenseMatrix(data.m(), data.n(), std::move(values)), Preprocessing::centered,
                 data.item_labels());
}

}  // namespace entpca
