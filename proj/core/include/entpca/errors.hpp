#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace entpca {

// Root of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a precondition: wrong dimensions, bad index, bad config.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Requested PCA rank is outside [1, m-1].
class RankOutOfRange : public ContractViolation {
 public:
  RankOutOfRange(std::size_t k, std::size_t m)
      : ContractViolation("rank out of range: k=" + std::to_string(k) +
                          " must satisfy 1 <= k < m=" + std::to_string(m)),
        k_(k),
        m_(m) {}

  std::size_t k() const noexcept { return k_; }
  std::size_t m() const noexcept { return m_; }

 private:
  std::size_t k_;
  std::size_t m_;
};

// Iterative numerics did not converge or produced inconsistent output.
class NumericFailure : public Error {
 public:
  using Error::Error;
};

// A residual energy came out meaningfully negative; the model is broken.
class NumericConsistencyError : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

// The max-entropy density needs every z_i > 0.
class DegenerateDistribution : public Error {
 public:
  explicit DegenerateDistribution(std::size_t column)
      : Error("degenerate max-entropy distribution: residual energy z[" +
              std::to_string(column) + "] is zero"),
        column_(column) {}

  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class PersistenceError : public Error {
 public:
  PersistenceError(std::string field, const std::string& what)
      : Error("model persistence error at field '" + field + "': " + what),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IngestionError : public Error {
 public:
  IngestionError(std::size_t line, const std::string& what)
      : Error(line ? "ingestion error at line " + std::to_string(line) + ": " + what
                   : "ingestion error: " + what),
        line_(line) {}

  // 1-based; 0 when the problem is not tied to a line (e.g. unreadable file).
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace entpca
