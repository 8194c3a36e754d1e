#pragma once

#include <span>
#include <string_view>

#include "entpca/dataset.hpp"
#include "entpca/pca.hpp"

namespace entpca {

// column: B = A A^T, vectors of length m.  row: B = A^T A, vectors of length n.
enum class Space { column, row };

std::string_view to_string(Space s);

struct RayleighEstimate {
  double classic = 0.0;
  double ent = 0.0;
};

// v^T B v / |v|^2 without forming B.
double rq_exact(const Dataset& data, std::span<const double> v, Space space);

double rq_classic_col(const PcaModel& model, std::span<const double> x);
double rq_ent_col(const PcaModel& model, std::span<const double> x);
double rq_classic_row(const PcaModel& model, std::span<const double> y);
double rq_ent_row(const PcaModel& model, std::span<const double> y);

RayleighEstimate rq_estimate(const PcaModel& model, std::span<const double> v, Space space);

}  // namespace entpca
