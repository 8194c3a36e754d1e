#include "entpca/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "entpca/errors.hpp"

namespace entpca {

namespace {

std::string dims(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : DenseMatrix(rows, cols, std::vector<double>(rows * cols, 0.0)) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major)
    : rows_(rows), cols_(cols), values_(std::move(column_major)) {
  if (rows_ == 0 || cols_ == 0) {
    throw ContractViolation("matrix dimensions must be positive, got " + dims(rows_, cols_));
  }
  if (values_.size() != rows_ * cols_) {
    throw ContractViolation("matrix " + dims(rows_, cols_) + " given " +
                            std::to_string(values_.size()) + " values");
  }
  for (std::size_t idx = 0; idx < values_.size(); ++idx) {
    if (!std::isfinite(values_[idx])) {
      throw ContractViolation("non-finite matrix entry at (" + std::to_string(idx % rows_) +
                              ", " + std::to_string(idx / rows_) + ")");
    }
  }
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> copy;
  copy.reserve(rows.size());
  for (const auto& r : rows) copy.emplace_back(r);
  return from_rows(copy);
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    throw ContractViolation("matrix dimensions must be positive");
  }
  const std::size_t r = rows.size();
  const std::size_t c = rows.front().size();
  std::vector<double> values(r * c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) {
      throw ContractViolation("ragged row " + std::to_string(i) + ": expected " +
                              std::to_string(c) + " entries, got " +
                              std::to_string(rows[i].size()));
    }
    for (std::size_t j = 0; j < c; ++j) values[j * r + i] = rows[i][j];
  }
  return DenseMatrix(r, c, std::move(values));
}

DenseMatrix DenseMatrix::from_columns(const std::vector<std::vector<double>>& columns) {
  if (columns.empty() || columns.front().empty()) {
    throw ContractViolation("matrix dimensions must be positive");
  }
  const std::size_t r = columns.front().size();
  std::vector<double> values;
  values.reserve(r * columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != r) {
      throw ContractViolation("ragged column " + std::to_string(j));
    }
    values.insert(values.end(), columns[j].begin(), columns[j].end());
  }
  return DenseMatrix(r, columns.size(), std::move(values));
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  std::vector<double> values(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) values[i * n + i] = 1.0;
  return DenseMatrix(n, n, std::move(values));
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
  const std::size_t n = diag.size();
  std::vector<double> values(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) values[i * n + i] = diag[i];
  return DenseMatrix(n, n, std::move(values));
}

double DenseMatrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) {
    throw ContractViolation("index (" + std::to_string(r) + ", " + std::to_string(c) +
                            ") outside " + dims(rows_, cols_) + " matrix");
  }
  return (*this)(r, c);
}

std::span<const double> DenseMatrix::column(std::size_t c) const {
  if (c >= cols_) {
    throw ContractViolation("column " + std::to_string(c) + " outside " + dims(rows_, cols_) +
                            " matrix");
  }
  return std::span<const double>(values_).subspan(c * rows_, rows_);
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ContractViolation("matmul dimension mismatch: " + dims(a.rows(), a.cols()) + " * " +
                            dims(b.rows(), b.cols()));
  }
  const std::size_t m = a.rows();
  const std::size_t inner = a.cols();
  const std::size_t n = b.cols();
  std::vector<double> out(m * n, 0.0);
  const auto av = a.values();
  for (std::size_t j = 0; j < n; ++j) {
    double* dst = out.data() + j * m;
    for (std::size_t p = 0; p < inner; ++p) {
      const double s = b(p, j);
      if (s == 0.0) continue;
      const double* src = av.data() + p * m;
      for (std::size_t i = 0; i < m; ++i) dst[i] += src[i] * s;
    }
  }
  return DenseMatrix(m, n, std::move(out));
}

DenseMatrix transpose(const DenseMatrix& a) {
  std::vector<double> out(a.rows() * a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) out[i * a.cols() + j] = a(i, j);
  }
  return DenseMatrix(a.cols(), a.rows(), std::move(out));
}

DenseMatrix outer_gram(const DenseMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  // Accumulate the upper triangle column by column (rank-one updates), then mirror.
  std::vector<double> out(m * m, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    const auto col = a.column(c);
    for (std::size_t j = 0; j < m; ++j) {
      const double s = col[j];
      if (s == 0.0) continue;
      double* dst = out.data() + j * m;
      for (std::size_t i = 0; i <= j; ++i) dst[i] += col[i] * s;
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = j + 1; i < m; ++i) out[j * m + i] = out[i * m + j];
  }
  return DenseMatrix(m, m, std::move(out));
}

double frobenius_norm(const DenseMatrix& a) { return std::sqrt(squared_norm(a.values())); }

double max_abs_entry(const DenseMatrix& a) {
  double best = 0.0;
  for (double v : a.values()) best = std::max(best, std::abs(v));
  return best;
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ContractViolation("dot: length mismatch " + std::to_string(x.size()) + " vs " +
                            std::to_string(y.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double squared_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

namespace {

// Row-major n x n scratch matrix used by the eigen-solver.
class Square {
 public:
  explicit Square(std::size_t n) : n_(n), v_(n * n, 0.0) {}
  double& operator()(std::size_t r, std::size_t c) { return v_[r * n_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return v_[r * n_ + c]; }

 private:
  std::size_t n_;
  std::vector<double> v_;
};

// Householder reduction to tridiagonal form. On exit `v` holds the accumulated
// orthogonal transform, `d` the diagonal and `e` the sub-diagonal (e[0] = 0).
void tridiagonalize(Square& v, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = d.size();
  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (std::size_t k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit QL iteration on the tridiagonal form, accumulating into `v`.
void diagonalize(Square& v, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = d.size();
  constexpr int kMaxSweepsPerEigenvalue = 60;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    // e[n-1] == 0, so m < n here.
    if (m > l) {
      int sweeps = 0;
      do {
        if (++sweeps > kMaxSweepsPerEigenvalue) {
          throw NumericFailure("symmetric eigensolver did not converge for " +
                               std::to_string(n) + "x" + std::to_string(n) + " matrix");
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0;
        double c2 = c;
        double c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0;
        double s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          for (std::size_t k = 0; k < n; ++k) {
            h = v(k, ii + 1);
            v(k, ii + 1) = s * v(k, ii) + c * h;
            v(k, ii) = c * v(k, ii) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

}  // namespace

SymEigResult sym_eig(const DenseMatrix& b) {
  const std::size_t n = b.rows();
  if (b.cols() != n) {
    throw ContractViolation("sym_eig needs a square matrix, got " + dims(b.rows(), b.cols()));
  }
  const double tol = 1e-12 * max_abs_entry(b);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j + 1; i < n; ++i) {
      if (std::abs(b(i, j) - b(j, i)) > tol) {
        throw ContractViolation("sym_eig needs a symmetric matrix; entries (" +
                                std::to_string(i) + ", " + std::to_string(j) + ") differ");
      }
    }
  }

  Square v(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) v(i, j) = b(i, j);
  }
  std::vector<double> d(n);
  std::vector<double> e(n);
  tridiagonalize(v, d, e);
  diagonalize(v, d, e);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return d[x] > d[y]; });

  std::vector<double> eigenvalues(n);
  std::vector<double> vectors(n * n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    eigenvalues[c] = d[src];
    std::size_t pivot = 0;
    double pivot_abs = -1.0;
    for (std::size_t r = 0; r < n; ++r) {
      if (std::abs(v(r, src)) > pivot_abs) {
        pivot_abs = std::abs(v(r, src));
        pivot = r;
      }
    }
    const double sign = v(pivot, src) < 0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < n; ++r) vectors[c * n + r] = sign * v(r, src);
  }
  return SymEigResult{std::move(eigenvalues), DenseMatrix(n, n, std::move(vectors))};
}

}  // namespace entpca
