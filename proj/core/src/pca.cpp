#include "entpca/pca.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "entpca/errors.hpp"

namespace entpca {

double clamp_residual(double z, double scale, const char* what, std::size_t index) {
  if (z >= 0.0) return z;
  if (z > -1e-9 * scale) return 0.0;
  throw NumericConsistencyError(std::string("negative residual energy for ") + what + " " +
                                std::to_string(index) + ": " + std::to_string(z) +
                                " (squared norm " + std::to_string(scale) + ")");
}

namespace {

// Residual energy of `a` outside span(v1), given its coefficients w = v1^T a.
//
// The value returned is |a - v1 w|^2. The textbook difference |a|^2 - |w|^2
// loses everything to cancellation when the residual is tiny, and sqrt(z)
// then magnifies that noise in the lower-bound cross term. The difference is
// still evaluated: it drives the clamping rule and cross-checks the basis.
double residual_energy(std::span<const double> a, const double* v1, std::size_t k,
                       std::span<const double> w, double sq_norm, const char* what,
                       std::size_t index) {
  const std::size_t m = a.size();
  double w_sq = 0.0;
  for (double c : w) w_sq += c * c;
  const double by_difference = clamp_residual(sq_norm - w_sq, sq_norm, what, index);

  double z = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    double resid = a[r];
    for (std::size_t c = 0; c < k; ++c) resid -= v1[c * m + r] * w[c];
    z += resid * resid;
  }
  if (std::abs(z - by_difference) > 1e-9 * sq_norm) {
    throw NumericConsistencyError(std::string("residual energy of ") + what + " " +
                                  std::to_string(index) + " disagrees with its norm split (" +
                                  std::to_string(z) + " vs " + std::to_string(by_difference) +
                                  "); basis is not orthonormal");
  }
  return z;
}

}  // namespace

PcaModel::PcaModel(Parts parts) : parts_(std::move(parts)) {
  const std::size_t m = parts_.v1.rows();
  const std::size_t k = parts_.v1.cols();
  const std::size_t n = parts_.w1.cols();
  if (k == 0 || k >= m) throw RankOutOfRange(k, m);
  if (parts_.w1.rows() != k) {
    throw ContractViolation("w1 has " + std::to_string(parts_.w1.rows()) +
                            " rows, expected k=" + std::to_string(k));
  }
  if (parts_.col_sq_norms.size() != n || parts_.z.size() != n) {
    throw ContractViolation("column norm / residual vectors must have length n=" +
                            std::to_string(n));
  }
  if (!parts_.mean.empty() && parts_.mean.size() != m) {
    throw ContractViolation("mean vector must have length m=" + std::to_string(m));
  }
  if (!parts_.mean.empty() && parts_.preprocessing != Preprocessing::centered) {
    throw ContractViolation("a stored mean requires centered preprocessing");
  }
  if (!(parts_.delta >= 0.0) || !std::isfinite(parts_.delta)) {
    throw ContractViolation("delta must be a finite non-negative number");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(parts_.z[i] >= 0.0) || !std::isfinite(parts_.z[i])) {
      throw ContractViolation("z[" + std::to_string(i) + "] must be finite and non-negative");
    }
    if (!(parts_.col_sq_norms[i] >= 0.0) || !std::isfinite(parts_.col_sq_norms[i])) {
      throw ContractViolation("col_sq_norms[" + std::to_string(i) + "] must be non-negative");
    }
  }
  for (double v : parts_.mean) {
    if (!std::isfinite(v)) throw ContractViolation("mean vector has a non-finite entry");
  }
  sqrt_z_.resize(n);
  w1_sq_norms_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    sqrt_z_[i] = std::sqrt(parts_.z[i]);
    w1_sq_norms_[i] = squared_norm(parts_.w1.column(i));
  }
}

bool PcaModel::operator==(const PcaModel& other) const {
  return parts_.v1 == other.parts_.v1 && parts_.w1 == other.parts_.w1 &&
         parts_.col_sq_norms == other.parts_.col_sq_norms && parts_.z == other.parts_.z &&
         parts_.delta == other.parts_.delta &&
         parts_.preprocessing == other.parts_.preprocessing && parts_.mean == other.parts_.mean;
}

PcaSpectrum::PcaSpectrum(Dataset working, SymEigResult eig, std::vector<double> mean,
                         std::vector<double> col_sq_norms)
    : working_(std::move(working)),
      eig_(std::move(eig)),
      mean_(std::move(mean)),
      col_sq_norms_(std::move(col_sq_norms)) {}

PcaSpectrum PcaSpectrum::compute(const Dataset& data, bool center_data) {
  std::vector<double> mean;
  Dataset working = data;
  if (center_data) {
    mean = feature_means(data);
    working = center(data);
  }
  std::vector<double> norms(working.n());
  for (std::size_t i = 0; i < working.n(); ++i) norms[i] = squared_norm(working.item(i));
  SymEigResult eig = sym_eig(outer_gram(working.matrix()));
  return PcaSpectrum(std::move(working), std::move(eig), std::move(mean), std::move(norms));
}

PcaModel PcaSpectrum::truncate(std::size_t k) const {
  const std::size_t m = working_.m();
  const std::size_t n = working_.n();
  if (k == 0 || k >= m) throw RankOutOfRange(k, m);

  const auto basis = eig_.eigenvectors.values();
  std::vector<double> v1(basis.begin(), basis.begin() + static_cast<std::ptrdiff_t>(m * k));

  // w1 = v1^T A, one k-vector per item.
  std::vector<double> w1(k * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = working_.item(i);
    for (std::size_t c = 0; c < k; ++c) {
      double s = 0.0;
      const double* v = v1.data() + c * m;
      for (std::size_t r = 0; r < m; ++r) s += v[r] * a[r];
      w1[i * k + c] = s;
    }
  }

  std::vector<double> z(n);
  double z_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::span<const double> w(w1.data() + i * k, k);
    z[i] = residual_energy(working_.item(i), v1.data(), k, w, col_sq_norms_[i], "column", i);
    z_sum += z[i];
  }

  PcaModel::Parts parts{
      .v1 = DenseMatrix(m, k, std::move(v1)),
      .w1 = DenseMatrix(k, n, std::move(w1)),
      .col_sq_norms = col_sq_norms_,
      .z = std::move(z),
      .delta = z_sum / static_cast<double>(m - k),
      .preprocessing = working_.preprocessing(),
      .mean = mean_,
  };
  return PcaModel(std::move(parts));
}

PcaModel fit(const Dataset& data, std::size_t k, bool center_data) {
  if (k == 0 || k >= data.m()) throw RankOutOfRange(k, data.m());
  return PcaSpectrum::compute(data, center_data).truncate(k);
}

QueryProjection project(const PcaModel& model, std::span<const double> x) {
  const std::size_t m = model.m();
  const std::size_t k = model.k();
  if (x.size() != m) {
    throw ContractViolation("query has length " + std::to_string(x.size()) + ", model expects m=" +
                            std::to_string(m));
  }
  std::vector<double> centered;
  if (!model.mean().empty()) {
    centered.assign(x.begin(), x.end());
    for (std::size_t r = 0; r < m; ++r) centered[r] -= model.mean()[r];
    x = centered;
  }
  for (std::size_t r = 0; r < m; ++r) {
    if (!std::isfinite(x[r])) {
      throw ContractViolation("query entry " + std::to_string(r) + " is not finite");
    }
  }
  QueryProjection q;
  q.w1_x.resize(k);
  const auto basis = model.v1().values();
  for (std::size_t c = 0; c < k; ++c) {
    const double* v = basis.data() + c * m;
    double s = 0.0;
    for (std::size_t r = 0; r < m; ++r) s += v[r] * x[r];
    q.w1_x[c] = s;
  }
  q.x_sq_norm = squared_norm(x);
  q.z_x = residual_energy(x, basis.data(), k, q.w1_x, q.x_sq_norm, "query", 0);
  return q;
}

}  // namespace entpca
