#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "entpca/dataset.hpp"
#include "entpca/pca.hpp"

namespace entpca {

// Three estimates of a squared Euclidean distance from PCA data.
//
//   classic = |w1_i - w1_j|^2
//   lower   = classic + (sqrt z_i - sqrt z_j)^2     (never above the true value)
//   ent     = classic + z_i + z_j                   (max-entropy expectation)
//
// classic <= lower <= ent holds exactly in floating point. Note that ent is an
// expectation rather than a metric: the self-distance ent(i, i) is 2 z_i.
struct DistanceEstimate {
  double classic = 0.0;
  double lower = 0.0;
  double ent = 0.0;

  bool operator==(const DistanceEstimate&) const = default;
};

double d_classic_cols(const PcaModel& model, std::size_t i, std::size_t j);
double d_lower_cols(const PcaModel& model, std::size_t i, std::size_t j);
double d_ent_cols(const PcaModel& model, std::size_t i, std::size_t j);
DistanceEstimate estimate_cols(const PcaModel& model, std::size_t i, std::size_t j);

double d_classic_query(const PcaModel& model, const QueryProjection& q, std::size_t j);
double d_lower_query(const PcaModel& model, const QueryProjection& q, std::size_t j);
double d_ent_query(const PcaModel& model, const QueryProjection& q, std::size_t j);
DistanceEstimate estimate_query(const PcaModel& model, const QueryProjection& q, std::size_t j);

// Estimates from x to every column: one projection, then O(k) per column.
std::vector<DistanceEstimate> batch_query(const PcaModel& model, std::span<const double> x);

// Exact squared distances, O(m).
double exact_distance(const Dataset& data, std::size_t i, std::size_t j);
double exact_distance(const Dataset& data, std::span<const double> x, std::size_t j);
double squared_distance(std::span<const double> x, std::span<const double> y);

}  // namespace entpca
