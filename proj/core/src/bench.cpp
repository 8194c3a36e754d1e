#include "entpca/bench.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "entpca/errors.hpp"
#include "entpca/estimators.hpp"
#include "entpca/random.hpp"
#include "parallel.hpp"

namespace entpca {

std::string_view to_string(Formula f) {
  switch (f) {
    case Formula::classic: return "classic";
    case Formula::lower: return "lower";
    case Formula::ent: return "ent";
  }
  return "?";
}

std::string_view to_string(Population p) {
  switch (p) {
    case Population::pairs: return "pairs";
    case Population::queries: return "queries";
    case Population::rq_column: return "rq_column";
    case Population::rq_row: return "rq_row";
  }
  return "?";
}

Population parse_population(std::string_view text) {
  if (text == "pairs") return Population::pairs;
  if (text == "queries") return Population::queries;
  if (text == "rq_column") return Population::rq_column;
  if (text == "rq_row") return Population::rq_row;
  throw ContractViolation("unknown population '" + std::string(text) + "'");
}

ErrorStats aggregate_errors(Formula formula, std::size_t k, Population population,
                            std::span<const double> abs_errors) {
  if (abs_errors.empty()) throw ContractViolation("error population is empty");
  const double count = static_cast<double>(abs_errors.size());
  double sum = 0.0;
  for (double e : abs_errors) sum += e;
  const double mean = sum / count;
  double sq = 0.0;
  for (double e : abs_errors) sq += (e - mean) * (e - mean);
  return ErrorStats{
      .formula = formula,
      .k = k,
      .population = population,
      .count = abs_errors.size(),
      .mean_abs_err = mean,
      .std_abs_err = std::sqrt(sq / count),
  };
}

bool RunConfig::randomized() const noexcept {
  if (num_queries > 0 || rq_vectors > 0) return true;
  if (subsample.has_value() && !subsample_from_default) return true;
  for (const auto& request : kmatch) {
    if (request.population == Population::queries) return true;
  }
  return false;
}

namespace {

// Seed streams derived from the run seed, one per randomized step.
constexpr std::uint64_t kQueryStream = 0;
constexpr std::uint64_t kSubsampleStream = 1;
constexpr std::uint64_t kRqColumnStream = 2;
constexpr std::uint64_t kRqRowStream = 3;

std::uint64_t require_seed(const RunConfig& config, const char* step) {
  if (!config.seed) {
    throw ContractViolation(std::string("a seed is required for ") + step);
  }
  return *config.seed;
}

struct PairPopulation {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<double> exact;
};

struct QueryPopulation {
  std::vector<std::vector<double>> queries;
  std::vector<double> exact;  // query-major, n per query
};

struct RqPopulation {
  Space space = Space::column;
  std::vector<std::vector<double>> vectors;
  std::vector<double> exact;
};

PairPopulation make_pairs(const Dataset& data, std::optional<SubsampleSpec> subsample,
                          unsigned threads) {
  std::vector<std::size_t> items;
  if (subsample) {
    items = sample_without_replacement(data.n(), subsample->size, subsample->seed);
  } else {
    items.resize(data.n());
    for (std::size_t i = 0; i < items.size(); ++i) items[i] = i;
  }
  if (items.size() < 2) throw ContractViolation("pairwise statistics need at least two columns");
  PairPopulation pop;
  for (std::size_t a = 0; a < items.size(); ++a) {
    for (std::size_t b = a + 1; b < items.size(); ++b) pop.pairs.emplace_back(items[a], items[b]);
  }
  pop.exact.resize(pop.pairs.size());
  detail::parallel_for(pop.pairs.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      pop.exact[p] = exact_distance(data, pop.pairs[p].first, pop.pairs[p].second);
    }
  });
  return pop;
}

QueryPopulation make_queries(const Dataset& data, std::size_t num_queries, std::uint64_t seed,
                             unsigned threads) {
  if (num_queries == 0) throw ContractViolation("num_queries must be at least 1");
  QueryPopulation pop;
  SeededRng rng(seed);
  for (std::size_t q = 0; q < num_queries; ++q) pop.queries.push_back(rng.gaussian_vector(data.m()));
  const std::size_t n = data.n();
  pop.exact.resize(num_queries * n);
  detail::parallel_for(num_queries, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t q = begin; q < end; ++q) {
      for (std::size_t j = 0; j < n; ++j) pop.exact[q * n + j] = exact_distance(data, pop.queries[q], j);
    }
  });
  return pop;
}

// Rayleigh quotients of a centered model refer to the centered matrix.
const Dataset& rq_basis(const Dataset& data, const PcaModel& model, std::optional<Dataset>& holder) {
  if (model.preprocessing() == Preprocessing::centered &&
      data.preprocessing() != Preprocessing::centered) {
    holder.emplace(center(data));
    return *holder;
  }
  return data;
}

RqPopulation make_rq(const Dataset& basis, std::vector<std::vector<double>> vectors, Space space,
                     unsigned threads) {
  if (vectors.empty()) throw ContractViolation("Rayleigh statistics need at least one vector");
  RqPopulation pop{space, std::move(vectors), {}};
  pop.exact.resize(pop.vectors.size());
  detail::parallel_for(pop.vectors.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) pop.exact[t] = rq_exact(basis, pop.vectors[t], space);
  });
  return pop;
}

void check_model_matches(const Dataset& data, const PcaModel& model) {
  if (data.m() != model.m() || data.n() != model.n()) {
    throw ContractViolation("model (" + std::to_string(model.m()) + "x" +
                            std::to_string(model.n()) + ") does not match dataset (" +
                            std::to_string(data.m()) + "x" + std::to_string(data.n()) + ")");
  }
}

std::vector<ErrorStats> distance_stats(std::size_t k, Population population,
                                       const std::vector<double>& classic,
                                       const std::vector<double>& lower,
                                       const std::vector<double>& ent) {
  return {aggregate_errors(Formula::classic, k, population, classic),
          aggregate_errors(Formula::lower, k, population, lower),
          aggregate_errors(Formula::ent, k, population, ent)};
}

std::vector<ErrorStats> pair_stats(const PcaModel& model, const PairPopulation& pop,
                                   unsigned threads) {
  const std::size_t count = pop.pairs.size();
  std::vector<double> classic(count), lower(count), ent(count);
  detail::parallel_for(count, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const auto est = estimate_cols(model, pop.pairs[p].first, pop.pairs[p].second);
      classic[p] = std::abs(est.classic - pop.exact[p]);
      lower[p] = std::abs(est.lower - pop.exact[p]);
      ent[p] = std::abs(est.ent - pop.exact[p]);
    }
  });
  return distance_stats(model.k(), Population::pairs, classic, lower, ent);
}

std::vector<ErrorStats> query_stats(const PcaModel& model, const QueryPopulation& pop,
                                    unsigned threads) {
  const std::size_t n = model.n();
  const std::size_t count = pop.exact.size();
  std::vector<double> classic(count), lower(count), ent(count);
  detail::parallel_for(pop.queries.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t q = begin; q < end; ++q) {
      const auto estimates = batch_query(model, pop.queries[q]);
      for (std::size_t j = 0; j < n; ++j) {
        const double exact = pop.exact[q * n + j];
        classic[q * n + j] = std::abs(estimates[j].classic - exact);
        lower[q * n + j] = std::abs(estimates[j].lower - exact);
        ent[q * n + j] = std::abs(estimates[j].ent - exact);
      }
    }
  });
  return distance_stats(model.k(), Population::queries, classic, lower, ent);
}

std::vector<ErrorStats> rq_stats(const PcaModel& model, const RqPopulation& pop, unsigned threads) {
  const std::size_t count = pop.vectors.size();
  std::vector<double> classic(count), ent(count);
  detail::parallel_for(count, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const auto est = rq_estimate(model, pop.vectors[t], pop.space);
      classic[t] = std::abs(est.classic - pop.exact[t]);
      ent[t] = std::abs(est.ent - pop.exact[t]);
    }
  });
  const Population population =
      pop.space == Space::column ? Population::rq_column : Population::rq_row;
  return {aggregate_errors(Formula::classic, model.k(), population, classic),
          aggregate_errors(Formula::ent, model.k(), population, ent)};
}

std::vector<std::vector<double>> gaussian_vectors(std::size_t count, std::size_t length,
                                                  std::uint64_t seed) {
  SeededRng rng(seed);
  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (std::size_t t = 0; t < count; ++t) out.push_back(rng.gaussian_vector(length));
  return out;
}

double mean_error(const std::vector<ErrorStats>& stats, Formula formula) {
  for (const auto& s : stats) {
    if (s.formula == formula) return s.mean_abs_err;
  }
  throw ContractViolation("formula missing from statistics");
}

}  // namespace

std::vector<ErrorStats> pairwise_error_stats(const Dataset& data, const PcaModel& model,
                                             std::optional<SubsampleSpec> subsample,
                                             unsigned threads) {
  check_model_matches(data, model);
  return pair_stats(model, make_pairs(data, subsample, threads), threads);
}

std::vector<ErrorStats> query_error_stats(const Dataset& data, const PcaModel& model,
                                          std::size_t num_queries, std::uint64_t seed,
                                          unsigned threads) {
  check_model_matches(data, model);
  return query_stats(model, make_queries(data, num_queries, seed, threads), threads);
}

std::vector<ErrorStats> rq_error_stats(const Dataset& data, const PcaModel& model,
                                       std::size_t num_vectors, std::uint64_t seed, Space space,
                                       unsigned threads) {
  const std::size_t length = space == Space::column ? data.m() : data.n();
  return rq_error_stats(data, model, gaussian_vectors(num_vectors, length, seed), space, threads);
}

std::vector<ErrorStats> rq_error_stats(const Dataset& data, const PcaModel& model,
                                       const std::vector<std::vector<double>>& vectors,
                                       Space space, unsigned threads) {
  check_model_matches(data, model);
  std::optional<Dataset> holder;
  const Dataset& basis = rq_basis(data, model, holder);
  return rq_stats(model, make_rq(basis, vectors, space, threads), threads);
}

std::optional<SubsampleSpec> resolve_subsample(const RunConfig& config, std::size_t n) {
  if (!config.subsample) return std::nullopt;
  const std::size_t size = *config.subsample;
  if (size > n) {
    if (config.subsample_from_default) return std::nullopt;
    throw ContractViolation("subsample size " + std::to_string(size) + " exceeds n=" +
                            std::to_string(n));
  }
  if (size < 2) throw ContractViolation("subsample size must be at least 2");
  if (size == n) return std::nullopt;
  return SubsampleSpec{size, require_seed(config, "column subsampling") + kSubsampleStream};
}

namespace {

KMatchResult sweep(const PcaSpectrum& spectrum, const Dataset& data, std::size_t target_k,
                   Population population, const RunConfig& config, unsigned threads) {
  const std::size_t m = data.m();
  if (target_k < 1 || target_k + 1 >= m) {
    throw ContractViolation("k-match target rank must satisfy 1 <= target_k < m-1, got " +
                            std::to_string(target_k));
  }

  std::optional<PairPopulation> pairs;
  std::optional<QueryPopulation> queries;
  if (population == Population::pairs) {
    pairs = make_pairs(data, resolve_subsample(config, data.n()), threads);
  } else if (population == Population::queries) {
    queries = make_queries(data, config.num_queries,
                           require_seed(config, "Gaussian queries") + kQueryStream, threads);
  } else {
    throw ContractViolation("k-match sweeps run on pairs or queries populations");
  }
  auto stats_at = [&](std::size_t k) {
    const PcaModel model = spectrum.truncate(k);
    return pairs ? pair_stats(model, *pairs, threads) : query_stats(model, *queries, threads);
  };

  KMatchResult result;
  result.target_k = target_k;
  result.population = population;
  result.target_err = mean_error(stats_at(target_k), Formula::ent);
  result.matched = {KMatchEntry{.formula = Formula::classic, .k = std::nullopt, .curve = {}},
                    KMatchEntry{.formula = Formula::lower, .k = std::nullopt, .curve = {}}};
  for (std::size_t k = 1; k < m; ++k) {
    const auto stats = stats_at(k);
    for (auto& entry : result.matched) {
      const double err = mean_error(stats, entry.formula);
      entry.curve.push_back({k, err});
      if (!entry.k && err <= result.target_err) entry.k = k;
    }
  }
  return result;
}

}  // namespace

KMatchResult k_match_sweep(const Dataset& data, std::size_t target_k, Population population,
                           const RunConfig& config, unsigned threads) {
  const PcaSpectrum spectrum = PcaSpectrum::compute(data, config.center);
  return sweep(spectrum, data, target_k, population, config, threads);
}

BenchReport run_bench(const RunConfig& config, unsigned threads) {
  return run_bench(config, load_csv(config.dataset_path, config.orientation, config.has_header),
                   threads);
}

BenchReport run_bench(const RunConfig& config, const Dataset& data, unsigned threads) {
  if (config.k.empty() && config.kmatch.empty()) {
    throw ContractViolation("config lists no ranks and no k-match sweeps");
  }
  for (std::size_t k : config.k) {
    if (k == 0 || k >= data.m()) throw RankOutOfRange(k, data.m());
  }

  BenchReport report;
  report.config = config;
  const PcaSpectrum spectrum = PcaSpectrum::compute(data, config.center);

  std::optional<PairPopulation> pairs;
  if (!config.k.empty()) pairs = make_pairs(data, resolve_subsample(config, data.n()), threads);
  std::optional<QueryPopulation> queries;
  if (config.num_queries > 0 && !config.k.empty()) {
    queries = make_queries(data, config.num_queries,
                           require_seed(config, "Gaussian queries") + kQueryStream, threads);
  }
  std::optional<RqPopulation> rq_column;
  std::optional<RqPopulation> rq_row;
  std::optional<Dataset> centered;
  if (config.rq_vectors > 0 && !config.k.empty()) {
    const std::uint64_t seed = require_seed(config, "Rayleigh quotient vectors");
    const Dataset& basis = config.center ? centered.emplace(center(data)) : data;
    rq_column = make_rq(basis, gaussian_vectors(config.rq_vectors, data.m(), seed + kRqColumnStream),
                        Space::column, threads);
    rq_row = make_rq(basis, gaussian_vectors(config.rq_vectors, data.n(), seed + kRqRowStream),
                     Space::row, threads);
  }

  for (std::size_t k : config.k) {
    const PcaModel model = spectrum.truncate(k);
    auto append = [&](std::vector<ErrorStats> stats) {
      report.results.insert(report.results.end(), stats.begin(), stats.end());
    };
    if (queries) append(query_stats(model, *queries, threads));
    append(pair_stats(model, *pairs, threads));
    if (rq_column) {
      append(rq_stats(model, *rq_column, threads));
      append(rq_stats(model, *rq_row, threads));
    }
  }

  for (const auto& request : config.kmatch) {
    report.kmatch.push_back(
        sweep(spectrum, data, request.target_k, request.population, config, threads));
  }
  return report;
}

}  // namespace entpca
