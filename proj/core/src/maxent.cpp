#include "entpca/maxent.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "entpca/errors.hpp"

namespace entpca {

MaxEntSummary summarize(std::span<const double> z, std::size_t k_resid) {
  if (k_resid == 0) throw ContractViolation("residual dimension must be positive");
  if (z.empty()) throw ContractViolation("summary needs at least one column");
  MaxEntSummary s;
  s.k_resid = k_resid;
  s.n = z.size();
  s.z.assign(z.begin(), z.end());

  const double kr = static_cast<double>(k_resid);
  double sum_log_z = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!(z[i] > 0.0)) throw DegenerateDistribution(i);
    sum_log_z += std::log(z[i]);
  }
  // Delta = prod(z_i^k) / k^(k n)
  s.log_delta = kr * sum_log_z - kr * static_cast<double>(s.n) * std::log(kr);
  const double dim = kr * static_cast<double>(s.n);
  s.entropy = 0.5 * dim * std::log(2.0 * std::numbers::pi * std::numbers::e) + 0.5 * s.log_delta;
  return s;
}

MaxEntSummary summarize(const PcaModel& model) {
  return summarize(model.z(), model.m() - model.k());
}

double log_density(const MaxEntSummary& summary, const DenseMatrix& w2_sample) {
  if (w2_sample.rows() != summary.k_resid || w2_sample.cols() != summary.n) {
    throw ContractViolation("residual sample must be " + std::to_string(summary.k_resid) + "x" +
                            std::to_string(summary.n) + ", got " +
                            std::to_string(w2_sample.rows()) + "x" +
                            std::to_string(w2_sample.cols()));
  }
  const double kr = static_cast<double>(summary.k_resid);
  double quad = 0.0;
  for (std::size_t i = 0; i < summary.n; ++i) {
    quad += squared_norm(w2_sample.column(i)) / summary.z[i];
  }
  const double dim = kr * static_cast<double>(summary.n);
  return -0.5 * dim * std::log(2.0 * std::numbers::pi) - 0.5 * summary.log_delta -
         0.5 * kr * quad;
}

DenseMatrix expected_gram(const PcaModel& model) {
  const std::size_t n = model.n();
  std::vector<double> out(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto wj = model.w1_column(j);
    for (std::size_t i = 0; i <= j; ++i) {
      const double g = dot(model.w1_column(i), wj);
      out[j * n + i] = g;
      out[i * n + j] = g;
    }
    out[j * n + j] += model.z()[j];
  }
  return DenseMatrix(n, n, std::move(out));
}

std::vector<double> expected_outer_apply(const PcaModel& model, std::span<const double> v) {
  const std::size_t m = model.m();
  const std::size_t k = model.k();
  const std::size_t n = model.n();
  if (v.size() != m) {
    throw ContractViolation("vector has length " + std::to_string(v.size()) + ", expected m=" +
                            std::to_string(m));
  }
  const auto basis = model.v1().values();

  // c = V1^T v
  std::vector<double> c(k);
  for (std::size_t p = 0; p < k; ++p) c[p] = dot(basis.subspan(p * m, m), v);

  // t = (W1 W1^T) c computed as W1 (W1^T c)
  std::vector<double> t(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto wi = model.w1_column(i);
    const double s = dot(wi, c);
    for (std::size_t p = 0; p < k; ++p) t[p] += wi[p] * s;
  }

  // V1 t + delta (v - V1 c)
  std::vector<double> out(m);
  for (std::size_t r = 0; r < m; ++r) out[r] = model.delta() * v[r];
  for (std::size_t p = 0; p < k; ++p) {
    const double coef = t[p] - model.delta() * c[p];
    const auto col = basis.subspan(p * m, m);
    for (std::size_t r = 0; r < m; ++r) out[r] += col[r] * coef;
  }
  return out;
}

}  // namespace entpca
