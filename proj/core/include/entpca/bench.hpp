#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entpca/csv.hpp"
#include "entpca/dataset.hpp"
#include "entpca/pca.hpp"
#include "entpca/rayleigh.hpp"

namespace entpca {

enum class Formula { classic, lower, ent };

// pairs: column-column distances. queries: Gaussian vector to every column.
// rq_column / rq_row: Rayleigh quotients of Gaussian vectors.
enum class Population { pairs, queries, rq_column, rq_row };

std::string_view to_string(Formula f);
std::string_view to_string(Population p);
Population parse_population(std::string_view text);

// Mean and standard deviation of |estimate - exact|. The standard deviation
// uses the population convention (divide by count).
struct ErrorStats {
  Formula formula = Formula::classic;
  std::size_t k = 0;
  Population population = Population::pairs;
  std::size_t count = 0;
  double mean_abs_err = 0.0;
  double std_abs_err = 0.0;

  bool operator==(const ErrorStats&) const = default;
};

// Aggregates in index order so the result never depends on how the errors
// were produced.
ErrorStats aggregate_errors(Formula formula, std::size_t k, Population population,
                            std::span<const double> abs_errors);

struct SubsampleSpec {
  std::size_t size = 0;
  std::uint64_t seed = 0;
};

// One entry per formula (classic, lower, ent) over all unordered pairs i < j of
// the (optionally subsampled) columns.
std::vector<ErrorStats> pairwise_error_stats(const Dataset& data, const PcaModel& model,
                                             std::optional<SubsampleSpec> subsample = {},
                                             unsigned threads = 1);

// num_queries standard Gaussian vectors of length m against every column.
std::vector<ErrorStats> query_error_stats(const Dataset& data, const PcaModel& model,
                                          std::size_t num_queries, std::uint64_t seed,
                                          unsigned threads = 1);

// Rayleigh quotient errors (classic, ent) over seeded Gaussian vectors...
std::vector<ErrorStats> rq_error_stats(const Dataset& data, const PcaModel& model,
                                       std::size_t num_vectors, std::uint64_t seed, Space space,
                                       unsigned threads = 1);
// ...or over caller-supplied vectors.
std::vector<ErrorStats> rq_error_stats(const Dataset& data, const PcaModel& model,
                                       const std::vector<std::vector<double>>& vectors,
                                       Space space, unsigned threads = 1);

struct KSweepPoint {
  std::size_t k = 0;
  double mean_abs_err = 0.0;
};

struct KMatchEntry {
  Formula formula = Formula::classic;
  std::optional<std::size_t> k;     // empty: not reached at k = m-1
  std::vector<KSweepPoint> curve;   // mean error for every scanned k
};

struct KMatchResult {
  Formula target_formula = Formula::ent;
  std::size_t target_k = 0;
  Population population = Population::pairs;
  double target_err = 0.0;
  std::vector<KMatchEntry> matched;  // classic, lower
};

struct KMatchRequest {
  std::size_t target_k = 0;
  Population population = Population::pairs;
};

struct RunConfig {
  std::string dataset;                  // as written in the config
  std::filesystem::path dataset_path;   // resolved against the config's directory
  Orientation orientation = Orientation::items_as_rows;
  bool has_header = false;
  std::vector<std::size_t> k;
  bool center = false;
  std::size_t num_queries = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> subsample = 50;  // empty: all pairs
  bool subsample_from_default = true;
  std::size_t rq_vectors = 0;
  std::vector<KMatchRequest> kmatch;

  bool randomized() const noexcept;
};

inline constexpr std::size_t kDefaultSubsample = 50;

// JSON config. Throws ContractViolation on unknown keys, wrong types or a
// randomized run without a seed.
RunConfig parse_run_config(std::string_view json_text,
                           const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

// Subsample spec for a dataset of n items. A configured size >= n is only
// legal when it came from the default; an explicit size > n is a contract
// violation.
std::optional<SubsampleSpec> resolve_subsample(const RunConfig& config, std::size_t n);

// For the ent formula at target_k, finds the smallest k at which classic and
// lower reach the same mean error, scanning k = 1 .. m-1. The query/subsample
// population is drawn once and reused for every k.
KMatchResult k_match_sweep(const Dataset& data, std::size_t target_k, Population population,
                           const RunConfig& config, unsigned threads = 1);

struct BenchReport {
  RunConfig config;
  std::vector<ErrorStats> results;
  std::vector<KMatchResult> kmatch;
};

BenchReport run_bench(const RunConfig& config, unsigned threads = 1);
BenchReport run_bench(const RunConfig& config, const Dataset& data, unsigned threads = 1);

// { config, results, kmatch, metadata, versions: {format: 1} }
std::string render_report_json(const BenchReport& report);
// Rows: k x formula. Columns: population x {mean, std}.
std::string render_tables_csv(const BenchReport& report);
// One two-column "k mean_abs_err" file per k-match curve.
void write_kmatch_curves(const BenchReport& report, const std::filesystem::path& dir);

}  // namespace entpca
