#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "entpca/dataset.hpp"
#include "entpca/matrix.hpp"

namespace entpca {

// Truncated PCA of an m x n dataset together with the side information the
// corrected estimators need: squared column norms, residual energies
// z_i = |a_i|^2 - |w1_i|^2 and delta = sum(z) / (m - k).
class PcaModel {
 public:
  struct Parts {
    DenseMatrix v1;                     // m x k, orthonormal columns
    DenseMatrix w1;                     // k x n, = v1^T A
    std::vector<double> col_sq_norms;   // n
    std::vector<double> z;              // n, non-negative
    double delta = 0.0;
    Preprocessing preprocessing = Preprocessing::none;
    std::vector<double> mean;           // m when fit() centered the data, else empty
  };

  // Checks shapes and value ranges; used by fit() and by load_model().
  explicit PcaModel(Parts parts);

  std::size_t m() const noexcept { return parts_.v1.rows(); }
  std::size_t n() const noexcept { return parts_.w1.cols(); }
  std::size_t k() const noexcept { return parts_.v1.cols(); }

  const DenseMatrix& v1() const noexcept { return parts_.v1; }
  const DenseMatrix& w1() const noexcept { return parts_.w1; }
  std::span<const double> w1_column(std::size_t i) const { return parts_.w1.column(i); }
  const std::vector<double>& col_sq_norms() const noexcept { return parts_.col_sq_norms; }
  const std::vector<double>& z() const noexcept { return parts_.z; }
  double delta() const noexcept { return parts_.delta; }
  Preprocessing preprocessing() const noexcept { return parts_.preprocessing; }
  const std::vector<double>& mean() const noexcept { return parts_.mean; }

  // sqrt(z_i), cached at construction.
  const std::vector<double>& sqrt_z() const noexcept { return sqrt_z_; }
  // |w1_i|^2, cached at construction.
  const std::vector<double>& w1_sq_norms() const noexcept { return w1_sq_norms_; }

  bool operator==(const PcaModel& other) const;

 private:
  Parts parts_;
  std::vector<double> sqrt_z_;
  std::vector<double> w1_sq_norms_;
};

// Coefficients and residual energy of a vector x relative to a model.
struct QueryProjection {
  std::vector<double> w1_x;  // v1^T x
  double z_x = 0.0;          // |x - V1 w1_x|^2
  double x_sq_norm = 0.0;
};

// Eigendecomposition of B = A A^T for a (possibly centered) dataset. Lets the
// caller cut models of any rank without repeating the m x m solve.
class PcaSpectrum {
 public:
  static PcaSpectrum compute(const Dataset& data, bool center);

  std::size_t m() const noexcept { return working_.m(); }
  std::size_t n() const noexcept { return working_.n(); }
  const std::vector<double>& eigenvalues() const noexcept { return eig_.eigenvalues; }

  // Rank-k model; identical to fit(data, k, center).
  PcaModel truncate(std::size_t k) const;

 private:
  PcaSpectrum(Dataset working, SymEigResult eig, std::vector<double> mean,
              std::vector<double> col_sq_norms);

  Dataset working_;  // centered copy when center was requested
  SymEigResult eig_;
  std::vector<double> mean_;
  std::vector<double> col_sq_norms_;
};

// Rank-k PCA with residual-energy side information. Throws RankOutOfRange
// unless 1 <= k < m.
PcaModel fit(const Dataset& data, std::size_t k, bool center = false);

// Projects an external vector. For a model fitted with center=true the stored
// mean is subtracted first.
QueryProjection project(const PcaModel& model, std::span<const double> x);

// Applies the z clamping rule: values in (-1e-9 * scale, 0) become 0, anything
// more negative raises NumericConsistencyError.
double clamp_residual(double z, double scale, const char* what, std::size_t index);

}  // namespace entpca
