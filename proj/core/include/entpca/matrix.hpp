#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace entpca {

// Dense real matrix with finite entries, addressed by (row, col).
//
// Immutable once built. Storage is column-major so that column(c) is a
// contiguous span; data items live in columns throughout the library.
class DenseMatrix {
 public:
  // Zero-filled.
  DenseMatrix(std::size_t rows, std::size_t cols);
  // Takes ownership of `column_major` (size rows*cols). Rejects non-finite entries.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major);

  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static DenseMatrix from_columns(const std::vector<std::vector<double>>& columns);
  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t r, std::size_t c) const noexcept {
    return values_[c * rows_ + r];
  }
  // Bounds-checked element access.
  double at(std::size_t r, std::size_t c) const;

  std::span<const double> column(std::size_t c) const;
  std::span<const double> values() const noexcept { return values_; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& a);

// A * A^T, symmetric bit-for-bit (each off-diagonal pair is computed once).
DenseMatrix outer_gram(const DenseMatrix& a);

double frobenius_norm(const DenseMatrix& a);
double max_abs_entry(const DenseMatrix& a);

double dot(std::span<const double> x, std::span<const double> y);
double squared_norm(std::span<const double> x);

struct SymEigResult {
  std::vector<double> eigenvalues;  // non-increasing
  DenseMatrix eigenvectors;         // column i pairs with eigenvalues[i]
};

// Full eigendecomposition of a symmetric matrix: Householder tridiagonalization
// followed by implicit QL with Wilkinson-style shifts.
//
// Each eigenvector is sign-normalized so that its largest-magnitude component is
// positive (first such component on ties). Throws ContractViolation for
// non-square or asymmetric input (tolerance 1e-12 * max|entry|) and
// NumericFailure if the QL sweep does not converge.
SymEigResult sym_eig(const DenseMatrix& b);

}  // namespace entpca
