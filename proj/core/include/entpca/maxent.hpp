#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "entpca/matrix.hpp"
#include "entpca/pca.hpp"

namespace entpca {

// Maximum-entropy distribution of the unobserved residual coefficients W2
// ((m-k) x n) given only the per-column energies z_i.
//
// Under that distribution every entry of column i of W2 is an independent
// N(0, z_i / k_resid). Nothing here materializes V2 or W2; everything flows
// through z, delta and projector algebra.
struct MaxEntSummary {
  std::size_t k_resid = 0;  // residual dimension m - k
  std::size_t n = 0;
  std::vector<double> z;
  double log_delta = 0.0;   // ln det of the (diagonal) correlation matrix
  double entropy = 0.0;     // differential entropy, nats
};

// Throws DegenerateDistribution naming the first column with z_i == 0.
MaxEntSummary summarize(const PcaModel& model);
MaxEntSummary summarize(std::span<const double> z, std::size_t k_resid);

// Log-density of an explicit residual sample (k_resid x n). Test-scale only.
double log_density(const MaxEntSummary& summary, const DenseMatrix& w2_sample);

// E[A^T A] = W1^T W1 + Diag(z). n x n.
DenseMatrix expected_gram(const PcaModel& model);

// E[A A^T] v = V1 (W1 W1^T) V1^T v + delta (v - V1 V1^T v), without forming
// any m x m matrix.
std::vector<double> expected_outer_apply(const PcaModel& model, std::span<const double> v);

}  // namespace entpca
