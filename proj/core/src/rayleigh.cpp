#include "entpca/rayleigh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "entpca/errors.hpp"

namespace entpca {

std::string_view to_string(Space s) { return s == Space::column ? "column" : "row"; }

namespace {

double checked_sq_norm(std::span<const double> v, std::size_t expected, const char* what) {
  if (v.size() != expected) {
    throw ContractViolation(std::string(what) + " vector has length " + std::to_string(v.size()) +
                            ", expected " + std::to_string(expected));
  }
  const double s = squared_norm(v);
  if (!std::isfinite(s)) throw ContractViolation(std::string(what) + " vector is not finite");
  if (s == 0.0) throw ContractViolation("Rayleigh quotient of the zero vector is undefined");
  return s;
}

// V1^T x
std::vector<double> coefficients(const PcaModel& model, std::span<const double> x) {
  const std::size_t m = model.m();
  const auto basis = model.v1().values();
  std::vector<double> c(model.k());
  for (std::size_t p = 0; p < c.size(); ++p) c[p] = dot(basis.subspan(p * m, m), x);
  return c;
}

// |W1^T c|^2
double captured_column_energy(const PcaModel& model, std::span<const double> c) {
  double s = 0.0;
  for (std::size_t i = 0; i < model.n(); ++i) {
    const double t = dot(model.w1_column(i), c);
    s += t * t;
  }
  return s;
}

// |W1 y|^2
double captured_row_energy(const PcaModel& model, std::span<const double> y) {
  std::vector<double> t(model.k(), 0.0);
  for (std::size_t i = 0; i < model.n(); ++i) {
    const auto wi = model.w1_column(i);
    for (std::size_t p = 0; p < t.size(); ++p) t[p] += wi[p] * y[i];
  }
  return squared_norm(t);
}

}  // namespace

double rq_exact(const Dataset& data, std::span<const double> v, Space space) {
  const DenseMatrix& a = data.matrix();
  if (space == Space::column) {
    const double norm = checked_sq_norm(v, data.m(), "column-space");
    double s = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) {
      const double t = dot(a.column(i), v);
      s += t * t;
    }
    return s / norm;
  }
  const double norm = checked_sq_norm(v, data.n(), "row-space");
  std::vector<double> av(data.m(), 0.0);
  for (std::size_t i = 0; i < data.n(); ++i) {
    const auto col = a.column(i);
    for (std::size_t r = 0; r < av.size(); ++r) av[r] += col[r] * v[i];
  }
  return squared_norm(av) / norm;
}

RayleighEstimate rq_estimate(const PcaModel& model, std::span<const double> v, Space space) {
  if (space == Space::column) {
    const double norm = checked_sq_norm(v, model.m(), "column-space");
    const auto c = coefficients(model, v);
    const double classic = captured_column_energy(model, c) / norm;
    const double residual_share = std::clamp(1.0 - squared_norm(c) / norm, 0.0, 1.0);
    return {classic, classic + model.delta() * residual_share};
  }
  const double norm = checked_sq_norm(v, model.n(), "row-space");
  const double classic = captured_row_energy(model, v) / norm;
  double weighted = 0.0;
  for (std::size_t i = 0; i < model.n(); ++i) weighted += model.z()[i] * v[i] * v[i];
  return {classic, classic + weighted / norm};
}

double rq_classic_col(const PcaModel& model, std::span<const double> x) {
  return rq_estimate(model, x, Space::column).classic;
}

double rq_ent_col(const PcaModel& model, std::span<const double> x) {
  return rq_estimate(model, x, Space::column).ent;
}

double rq_classic_row(const PcaModel& model, std::span<const double> y) {
  return rq_estimate(model, y, Space::row).classic;
}

double rq_ent_row(const PcaModel& model, std::span<const double> y) {
  return rq_estimate(model, y, Space::row).ent;
}

}  // namespace entpca
