#include "entpca/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "entpca/errors.hpp"

namespace entpca {

namespace {

// Below this, a residual energy counts as zero for the cross term.
constexpr double kTinyResidual = 1e-300;

void check_index(const PcaModel& model, std::size_t i) {
  if (i >= model.n()) {
    throw ContractViolation("column index " + std::to_string(i) + " out of range for n=" +
                            std::to_string(model.n()));
  }
}

void check_query(const PcaModel& model, const QueryProjection& q) {
  if (q.w1_x.size() != model.k()) {
    throw ContractViolation("query projection has " + std::to_string(q.w1_x.size()) +
                            " coefficients, model rank is " + std::to_string(model.k()));
  }
}

double coeff_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p) {
    const double d = a[p] - b[p];
    s += d * d;
  }
  return s;
}

// (sqrt(za) - sqrt(zb))^2, capped at za + zb so that lower never passes ent.
// The factored form avoids cancellation and makes the self-distance exactly 0.
double lower_gap(double za, double sqrt_za, double zb, double sqrt_zb) {
  const double sum = za + zb;
  if (za <= kTinyResidual || zb <= kTinyResidual) return sum;
  const double d = sqrt_za - sqrt_zb;
  return std::min(d * d, sum);
}

DistanceEstimate combine(double classic, double za, double sqrt_za, double zb, double sqrt_zb) {
  // Adding non-negative corrections in this form keeps classic <= lower <= ent.
  return DistanceEstimate{
      .classic = classic,
      .lower = classic + lower_gap(za, sqrt_za, zb, sqrt_zb),
      .ent = classic + (za + zb),
  };
}

}  // namespace

DistanceEstimate estimate_cols(const PcaModel& model, std::size_t i, std::size_t j) {
  check_index(model, i);
  check_index(model, j);
  const double classic = coeff_distance(model.w1_column(i), model.w1_column(j));
  return combine(classic, model.z()[i], model.sqrt_z()[i], model.z()[j], model.sqrt_z()[j]);
}

double d_classic_cols(const PcaModel& model, std::size_t i, std::size_t j) {
  return estimate_cols(model, i, j).classic;
}

double d_lower_cols(const PcaModel& model, std::size_t i, std::size_t j) {
  return estimate_cols(model, i, j).lower;
}

double d_ent_cols(const PcaModel& model, std::size_t i, std::size_t j) {
  return estimate_cols(model, i, j).ent;
}

DistanceEstimate estimate_query(const PcaModel& model, const QueryProjection& q, std::size_t j) {
  check_query(model, q);
  check_index(model, j);
  const double classic = coeff_distance(q.w1_x, model.w1_column(j));
  return combine(classic, q.z_x, std::sqrt(q.z_x), model.z()[j], model.sqrt_z()[j]);
}

double d_classic_query(const PcaModel& model, const QueryProjection& q, std::size_t j) {
  return estimate_query(model, q, j).classic;
}

double d_lower_query(const PcaModel& model, const QueryProjection& q, std::size_t j) {
  return estimate_query(model, q, j).lower;
}

double d_ent_query(const PcaModel& model, const QueryProjection& q, std::size_t j) {
  return estimate_query(model, q, j).ent;
}

std::vector<DistanceEstimate> batch_query(const PcaModel& model, std::span<const double> x) {
  const QueryProjection q = project(model, x);
  const std::size_t n = model.n();
  const std::size_t k = model.k();
  const double sqrt_zx = std::sqrt(q.z_x);
  const auto w1 = model.w1().values();
  const auto& z = model.z();
  const auto& sqrt_z = model.sqrt_z();

  std::vector<DistanceEstimate> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double classic = coeff_distance(q.w1_x, w1.subspan(j * k, k));
    out[j] = combine(classic, q.z_x, sqrt_zx, z[j], sqrt_z[j]);
  }
  return out;
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ContractViolation("vectors have lengths " + std::to_string(x.size()) + " and " +
                            std::to_string(y.size()));
  }
  double s = 0.0;
  for (std::size_t r = 0; r < x.size(); ++r) {
    const double d = x[r] - y[r];
    s += d * d;
  }
  return s;
}

double exact_distance(const Dataset& data, std::size_t i, std::size_t j) {
  if (i >= data.n() || j >= data.n()) {
    throw ContractViolation("item index out of range for n=" + std::to_string(data.n()));
  }
  return squared_distance(data.item(i), data.item(j));
}

double exact_distance(const Dataset& data, std::span<const double> x, std::size_t j) {
  if (j >= data.n()) {
    throw ContractViolation("item index " + std::to_string(j) + " out of range for n=" +
                            std::to_string(data.n()));
  }
  if (x.size() != data.m()) {
    throw ContractViolation("vector has length " + std::to_string(x.size()) + ", expected m=" +
                            std::to_string(data.m()));
  }
  return squared_distance(x, data.item(j));
}

}  // namespace entpca
