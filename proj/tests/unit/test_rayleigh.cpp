#include <gtest/gtest.h>

#include <cmath>

#include "entpca/errors.hpp"
#include "entpca/pca.hpp"
#include "entpca/rayleigh.hpp"
#include "oracles.hpp"

using entpca::Dataset;
using entpca::DenseMatrix;
using entpca::Space;

namespace {

const Dataset& diag_data() {
  static const Dataset d(DenseMatrix::from_rows({{2, 0}, {0, 1}}));
  return d;
}

double quad_form(const Eigen::MatrixXd& b, const std::vector<double>& v) {
  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
  return x.dot(b * x) / x.squaredNorm();
}

}  // namespace

TEST(RqExact, Examples) {
  EXPECT_EQ(entpca::rq_exact(diag_data(), std::vector<double>{1, 0}, Space::column), 4.0);
  const Dataset data(oracle::gaussian_matrix(5, 7, 3));
  for (std::size_t i = 0; i < 7; ++i) {
    std::vector<double> e(7, 0.0);
    e[i] = 1.0;
    EXPECT_REL(entpca::rq_exact(data, e, Space::row), oracle::sq_norm(data.item(i)), 1e-14);
  }
}

TEST(RqExact, MatchesExplicitB) {
  const Dataset data(oracle::gaussian_matrix(6, 9, 4));
  const Eigen::MatrixXd a = oracle::to_eigen(data.matrix());
  entpca::SeededRng rng(1);
  for (int t = 0; t < 10; ++t) {
    const auto x = rng.gaussian_vector(6);
    EXPECT_REL(entpca::rq_exact(data, x, Space::column), quad_form(a * a.transpose(), x), 1e-12);
    const auto y = rng.gaussian_vector(9);
    EXPECT_REL(entpca::rq_exact(data, y, Space::row), quad_form(a.transpose() * a, y), 1e-12);
  }
}

TEST(RqExact, Contracts) {
  EXPECT_THROW(entpca::rq_exact(diag_data(), std::vector<double>{0, 0}, Space::column),
               entpca::ContractViolation);
  EXPECT_THROW(entpca::rq_exact(diag_data(), std::vector<double>{1, 0, 0}, Space::row),
               entpca::ContractViolation);
  const auto model = entpca::fit(diag_data(), 1);
  EXPECT_THROW(entpca::rq_classic_col(model, std::vector<double>{0, 0}), entpca::ContractViolation);
  EXPECT_THROW(entpca::rq_ent_col(model, std::vector<double>{1}), entpca::ContractViolation);
  EXPECT_THROW(entpca::rq_classic_row(model, std::vector<double>{0, 0}), entpca::ContractViolation);
  EXPECT_THROW(entpca::rq_ent_row(model, std::vector<double>{1, 2, 3}), entpca::ContractViolation);
}

TEST(RqColumn, DiagonalModelExamples) {
  const auto model = entpca::fit(diag_data(), 1);
  EXPECT_EQ(entpca::rq_classic_col(model, std::vector<double>{1, 0}), 4.0);
  EXPECT_EQ(entpca::rq_ent_col(model, std::vector<double>{1, 0}), 4.0);
  EXPECT_EQ(entpca::rq_classic_col(model, std::vector<double>{0, 1}), 0.0);
  EXPECT_EQ(entpca::rq_ent_col(model, std::vector<double>{0, 1}), 1.0);
  EXPECT_EQ(entpca::rq_exact(diag_data(), std::vector<double>{0, 1}, Space::column), 1.0);
}

TEST(RqColumn, MatchesExplicitProduct) {
  const auto model = entpca::fit(Dataset(oracle::gaussian_matrix(8, 20, 6)), 3);
  const Eigen::MatrixXd v1 = oracle::to_eigen(model.v1());
  const Eigen::MatrixXd w1 = oracle::to_eigen(model.w1());
  const Eigen::MatrixXd captured = v1 * w1 * w1.transpose() * v1.transpose();
  entpca::SeededRng rng(2);
  for (int t = 0; t < 10; ++t) {
    const auto x = rng.gaussian_vector(8);
    EXPECT_REL(entpca::rq_classic_col(model, x), quad_form(captured, x), 1e-10);
    // Orthogonal to span(v1): classic vanishes, ent is delta.
    Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x.data(), 8);
    xv -= v1 * (v1.transpose() * xv);
    const std::vector<double> perp(xv.data(), xv.data() + 8);
    EXPECT_NEAR(entpca::rq_classic_col(model, perp), 0.0, 1e-10 * captured.norm());
    EXPECT_NEAR(entpca::rq_ent_col(model, perp), model.delta(), 1e-10 * captured.norm());
  }
  // Inside span(v1) the correction vanishes.
  std::vector<double> inside(8);
  for (std::size_t r = 0; r < 8; ++r) inside[r] = model.v1()(r, 1);
  EXPECT_NEAR(entpca::rq_ent_col(model, inside), entpca::rq_classic_col(model, inside),
              1e-12 * captured.norm());
}

TEST(RqRow, Examples) {
  const auto model = entpca::fit(diag_data(), 1);
  EXPECT_EQ(entpca::rq_classic_row(model, std::vector<double>{1, 0}), 4.0);
  // y in the null space of W1 supported on z = 0 columns.
  const auto low = entpca::fit(Dataset(DenseMatrix::from_rows({{1, 1, 0}, {0, 0, 1}, {0, 0, 0}})),
                               2);
  const std::vector<double> y{1, -1, 0};
  EXPECT_NEAR(entpca::rq_classic_row(low, y), 0.0, 1e-14);
  EXPECT_NEAR(entpca::rq_ent_row(low, y), 0.0, 1e-14);
}

TEST(RqRow, MatchesExplicitProduct) {
  const auto model = entpca::fit(Dataset(oracle::gaussian_matrix(8, 20, 7)), 3);
  const Eigen::MatrixXd w1 = oracle::to_eigen(model.w1());
  entpca::SeededRng rng(3);
  for (int t = 0; t < 10; ++t) {
    const auto y = rng.gaussian_vector(20);
    EXPECT_REL(entpca::rq_classic_row(model, y), quad_form(w1.transpose() * w1, y), 1e-10);
  }
}

TEST(Rayleigh, InvariantsOnRandomModels) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    entpca::SeededRng dims(seed + 77);
    const std::size_t m = 2 + dims.uniform_index(15);
    const std::size_t n = 2 + dims.uniform_index(30);
    const Dataset data(oracle::decaying_matrix(m, n, seed, 0.6 + 0.4 * dims.uniform()));
    double energy = 0.0;
    for (std::size_t i = 0; i < n; ++i) energy += oracle::sq_norm(data.item(i));
    for (std::size_t k = 1; k < m; ++k) {
      const auto model = entpca::fit(data, k);
      entpca::SeededRng rng(seed * 100 + k);
      for (int t = 0; t < 5; ++t) {
        for (Space space : {Space::column, Space::row}) {
          const auto v = rng.gaussian_vector(space == Space::column ? m : n);
          const auto est = entpca::rq_estimate(model, v, space);
          const double exact = entpca::rq_exact(data, v, space);
          EXPECT_GE(est.ent, est.classic);
          if (space == Space::column) {
            EXPECT_LE(est.classic, exact * (1 + 1e-9));
          }
          // Scale invariance.
          for (double c : {-3.0, 1e-3, 250.0}) {
            std::vector<double> scaled(v);
            for (double& x : scaled) x *= c;
            const auto s = entpca::rq_estimate(model, scaled, space);
            EXPECT_REL(s.classic, est.classic, 1e-12);
            EXPECT_REL(s.ent, est.ent, 1e-12);
            EXPECT_REL(entpca::rq_exact(data, scaled, space), exact, 1e-12);
          }
        }
      }
      // Basis exactness in row space.
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> e(n, 0.0);
        e[i] = 1.0;
        EXPECT_REL(entpca::rq_ent_row(model, e), oracle::sq_norm(data.item(i)), 1e-9);
      }
      // Averaging rq_ent_col over an orthonormal basis times m is the total energy.
      const Eigen::MatrixXd basis = oracle::random_orthonormal(m, seed + k);
      double sum = 0.0;
      for (std::size_t c = 0; c < m; ++c) {
        const std::vector<double> u(basis.col(c).data(), basis.col(c).data() + m);
        sum += entpca::rq_ent_col(model, u);
      }
      EXPECT_REL(sum, energy, 1e-8);
    }
  }
}

TEST(Rayleigh, EntBeatsClassicOnAverage) {
  const Dataset data(oracle::gaussian_matrix(10, 40, 12));
  const auto model = entpca::fit(data, 3);
  for (Space space : {Space::column, Space::row}) {
    entpca::SeededRng rng(space == Space::column ? 1 : 2);
    double ent_err = 0.0;
    double classic_err = 0.0;
    for (int t = 0; t < 30; ++t) {
      const auto v = rng.gaussian_vector(space == Space::column ? 10 : 40);
      const double exact = entpca::rq_exact(data, v, space);
      const auto est = entpca::rq_estimate(model, v, space);
      ent_err += std::abs(est.ent - exact);
      classic_err += std::abs(est.classic - exact);
    }
    EXPECT_LT(ent_err, classic_err) << entpca::to_string(space);
  }
}
