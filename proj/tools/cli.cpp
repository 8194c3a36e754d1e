#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "entpca/bench.hpp"
#include "entpca/csv.hpp"
#include "entpca/errors.hpp"
#include "entpca/estimators.hpp"
#include "entpca/model_io.hpp"
#include "entpca/pca.hpp"
#include "entpca/random.hpp"
#include "entpca/rayleigh.hpp"

namespace entpca::cli {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// A row of named numeric/integer cells rendered as JSON-lines or CSV.
class TableWriter {
 public:
  TableWriter(std::ostream& out, bool csv) : out_(out), csv_(csv) {}

  void row(const std::vector<std::pair<std::string, std::string>>& cells) {
    if (csv_) {
      if (!header_written_) {
        for (std::size_t c = 0; c < cells.size(); ++c) out_ << (c ? "," : "") << cells[c].first;
        out_ << '\n';
        header_written_ = true;
      }
      for (std::size_t c = 0; c < cells.size(); ++c) out_ << (c ? "," : "") << cells[c].second;
      out_ << '\n';
      return;
    }
    out_ << '{';
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out_ << (c ? "," : "") << '"' << cells[c].first << "\":" << cells[c].second;
    }
    out_ << "}\n";
  }

 private:
  std::ostream& out_;
  bool csv_;
  bool header_written_ = false;
};

struct DataOptions {
  std::string input;
  std::string orientation = "items-as-rows";
  bool header = false;

  void add_to(CLI::App& cmd, bool required) {
    auto* opt = cmd.add_option("--input", input, "numeric CSV dataset");
    if (required) opt->required();
    cmd.add_option("--orientation", orientation, "items-as-rows | items-as-columns")
        ->check(CLI::IsMember({"items-as-rows", "items-as-columns"}));
    cmd.add_flag("--header", header, "first CSV line is a header");
  }

  Dataset load() const { return load_csv(input, parse_orientation(orientation), header); }
};

unsigned resolve_threads(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("ENTPCA_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    throw ContractViolation(std::string("ENTPCA_THREADS must be a positive integer, got '") + env +
                            "'");
  }
  return 1;
}

void check_dataset_matches(const Dataset& data, const PcaModel& model) {
  if (data.m() != model.m() || data.n() != model.n()) {
    throw ContractViolation("dataset is " + std::to_string(data.m()) + "x" +
                            std::to_string(data.n()) + " but the model was fitted on " +
                            std::to_string(model.m()) + "x" + std::to_string(model.n()));
  }
}

std::pair<std::size_t, std::size_t> parse_pair(const std::string& text) {
  const auto comma = text.find(',');
  std::size_t i = 0;
  std::size_t j = 0;
  try {
    if (comma == std::string::npos) throw std::invalid_argument(text);
    std::size_t used_i = 0;
    std::size_t used_j = 0;
    const std::string a = text.substr(0, comma);
    const std::string b = text.substr(comma + 1);
    if (a.empty() || b.empty() || a[0] == '-' || b[0] == '-') throw std::invalid_argument(text);
    i = std::stoul(a, &used_i);
    j = std::stoul(b, &used_j);
    if (used_i != a.size() || used_j != b.size()) throw std::invalid_argument(text);
  } catch (const std::logic_error&) {
    throw ContractViolation("pair '" + text + "' is not of the form i,j");
  }
  return {i, j};
}

std::vector<std::pair<std::string, std::string>> estimate_cells(const DistanceEstimate& e) {
  return {{"classic", num(e.classic)}, {"lower", num(e.lower)}, {"ent", num(e.ent)}};
}

std::string report_text(const BenchReport& report) { return render_report_json(report); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw IngestionError(0, "cannot write " + path);
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Truncated PCA with maximum-entropy corrected distance and Rayleigh quotient estimates"};
  app.name("entpca");
  app.require_subcommand(1);

  // fit
  DataOptions fit_data;
  std::size_t fit_k = 0;
  bool fit_center = false;
  std::string fit_output;
  auto* fit_cmd = app.add_subcommand("fit", "fit a PCA model and persist it");
  fit_data.add_to(*fit_cmd, true);
  fit_cmd->add_option("--k", fit_k, "rank, 1 <= k < m")->required();
  fit_cmd->add_flag("--center", fit_center, "subtract per-feature means before fitting");
  fit_cmd->add_option("--output-model", fit_output, "model file to write")->required();

  // dist
  std::string dist_model;
  DataOptions dist_data;
  std::vector<std::string> dist_pairs;
  std::string dist_queries;
  bool dist_all = false;
  std::string dist_format = "jsonl";
  auto* dist_cmd = app.add_subcommand("dist", "estimate squared distances");
  dist_cmd->add_option("--model", dist_model, "model file")->required();
  dist_data.add_to(*dist_cmd, false);
  auto* pairs_opt = dist_cmd->add_option("--pairs", dist_pairs, "column pairs i,j");
  auto* query_opt = dist_cmd->add_option("--query-file", dist_queries, "CSV, one query per row");
  auto* all_opt = dist_cmd->add_flag("--all-pairs", dist_all, "every pair i < j");
  pairs_opt->excludes(query_opt)->excludes(all_opt);
  query_opt->excludes(all_opt);
  dist_cmd->add_option("--format", dist_format, "jsonl | csv")
      ->check(CLI::IsMember({"jsonl", "csv"}));

  // rq
  std::string rq_model;
  DataOptions rq_data;
  std::string rq_space;
  std::string rq_vectors;
  std::size_t rq_random = 0;
  std::optional<std::uint64_t> rq_seed;
  std::string rq_format = "jsonl";
  auto* rq_cmd = app.add_subcommand("rq", "estimate Rayleigh quotients");
  rq_cmd->add_option("--model", rq_model, "model file")->required();
  rq_data.add_to(*rq_cmd, false);
  rq_cmd->add_option("--space", rq_space, "column | row")
      ->required()
      ->check(CLI::IsMember({"column", "row"}));
  auto* vec_opt = rq_cmd->add_option("--vectors-file", rq_vectors, "CSV, one vector per row");
  auto* rand_opt = rq_cmd->add_option("--random", rq_random, "number of Gaussian vectors");
  vec_opt->excludes(rand_opt);
  rq_cmd->add_option("--seed", rq_seed, "seed for --random");
  rq_cmd->add_option("--format", rq_format, "jsonl | csv")->check(CLI::IsMember({"jsonl", "csv"}));

  // bench
  std::string bench_config;
  std::string bench_output;
  std::string bench_tables;
  std::string bench_plots;
  unsigned bench_threads = 0;
  auto* bench_cmd = app.add_subcommand("bench", "run an error-statistics benchmark");
  bench_cmd->add_option("--config", bench_config, "JSON run config")->required();
  bench_cmd->add_option("--output", bench_output, "report file (default: stdout)");
  bench_cmd->add_option("--tables-csv", bench_tables, "also write flat CSV tables");
  bench_cmd->add_option("--plot-dir", bench_plots, "write k-match curves as two-column files");
  bench_cmd->add_option("--threads", bench_threads, "worker threads (env ENTPCA_THREADS)");

  // kmatch
  DataOptions km_data;
  bool km_center = false;
  std::size_t km_target = 0;
  std::string km_population = "pairs";
  std::size_t km_queries = 0;
  std::optional<std::uint64_t> km_seed;
  std::size_t km_subsample = 0;
  unsigned km_threads = 0;
  std::string km_plots;
  auto* km_cmd = app.add_subcommand("kmatch", "rank needed by classic/lower to match ent");
  km_data.add_to(*km_cmd, true);
  km_cmd->add_flag("--center", km_center, "subtract per-feature means before fitting");
  km_cmd->add_option("--target-k", km_target, "rank at which ent is evaluated")->required();
  km_cmd->add_option("--population", km_population, "pairs | queries")
      ->check(CLI::IsMember({"pairs", "queries"}));
  km_cmd->add_option("--num-queries", km_queries, "Gaussian queries for --population queries");
  km_cmd->add_option("--seed", km_seed, "seed for queries / subsampling");
  km_cmd->add_option("--subsample", km_subsample, "random column subset size (0: all pairs)");
  km_cmd->add_option("--threads", km_threads, "worker threads (env ENTPCA_THREADS)");
  km_cmd->add_option("--plot-dir", km_plots, "write k-match curves as two-column files");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("entpca");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "entpca: " << e.what() << '\n';
    return kContract;
  }

  try {
    if (fit_cmd->parsed()) {
      const Dataset data = fit_data.load();
      const PcaModel model = fit(data, fit_k, fit_center);
      save_model(model, std::filesystem::path(fit_output));
      double sum_z = 0.0;
      for (double z : model.z()) sum_z += z;
      out << "{\"m\":" << model.m() << ",\"n\":" << model.n() << ",\"k\":" << model.k()
          << ",\"sum_z\":" << num(sum_z) << ",\"delta\":" << num(model.delta()) << "}\n";
      return kOk;
    }

    if (dist_cmd->parsed()) {
      if (dist_pairs.empty() && dist_queries.empty() && !dist_all) {
        throw ContractViolation("dist needs one of --pairs, --query-file, --all-pairs");
      }
      const PcaModel model = load_model(std::filesystem::path(dist_model));
      std::optional<Dataset> data;
      if (!dist_data.input.empty()) {
        data = dist_data.load();
        check_dataset_matches(*data, model);
      }
      TableWriter table(out, dist_format == "csv");
      auto emit_pair = [&](std::size_t i, std::size_t j) {
        auto cells = estimate_cells(estimate_cols(model, i, j));
        cells.insert(cells.begin(), {{"i", std::to_string(i)}, {"j", std::to_string(j)}});
        if (data) cells.emplace_back("exact", num(exact_distance(*data, i, j)));
        table.row(cells);
      };
      if (dist_all) {
        for (std::size_t i = 0; i < model.n(); ++i) {
          for (std::size_t j = i + 1; j < model.n(); ++j) emit_pair(i, j);
        }
      } else if (!dist_pairs.empty()) {
        std::vector<std::pair<std::size_t, std::size_t>> parsed;
        for (const auto& p : dist_pairs) parsed.push_back(parse_pair(p));
        for (const auto& [i, j] : parsed) {
          if (i >= model.n() || j >= model.n()) {
            throw ContractViolation("pair " + std::to_string(i) + "," + std::to_string(j) +
                                    " out of range for n=" + std::to_string(model.n()));
          }
        }
        for (const auto& [i, j] : parsed) emit_pair(i, j);
      } else {
        const auto queries = read_csv_rows(dist_queries);
        for (std::size_t q = 0; q < queries.size(); ++q) {
          if (queries[q].size() != model.m()) {
            throw ContractViolation("query " + std::to_string(q) + " has length " +
                                    std::to_string(queries[q].size()) + ", model expects m=" +
                                    std::to_string(model.m()));
          }
        }
        for (std::size_t q = 0; q < queries.size(); ++q) {
          const auto estimates = batch_query(model, queries[q]);
          for (std::size_t j = 0; j < model.n(); ++j) {
            auto cells = estimate_cells(estimates[j]);
            cells.insert(cells.begin(), {{"query", std::to_string(q)}, {"j", std::to_string(j)}});
            if (data) cells.emplace_back("exact", num(exact_distance(*data, queries[q], j)));
            table.row(cells);
          }
        }
      }
      return kOk;
    }

    if (rq_cmd->parsed()) {
      const Space space = rq_space == "column" ? Space::column : Space::row;
      const PcaModel model = load_model(std::filesystem::path(rq_model));
      const std::size_t length = space == Space::column ? model.m() : model.n();
      std::vector<std::vector<double>> vectors;
      if (!rq_vectors.empty()) {
        vectors = read_csv_rows(rq_vectors);
      } else if (rq_random > 0) {
        if (!rq_seed) throw ContractViolation("--random requires --seed");
        SeededRng rng(*rq_seed);
        for (std::size_t t = 0; t < rq_random; ++t) vectors.push_back(rng.gaussian_vector(length));
      } else {
        throw ContractViolation("rq needs --vectors-file or --random N");
      }
      for (std::size_t t = 0; t < vectors.size(); ++t) {
        if (vectors[t].size() != length) {
          throw ContractViolation("vector " + std::to_string(t) + " has length " +
                                  std::to_string(vectors[t].size()) + ", expected " +
                                  std::to_string(length));
        }
        if (squared_norm(vectors[t]) == 0.0) {
          throw ContractViolation("vector " + std::to_string(t) + " is zero");
        }
      }
      std::optional<Dataset> data;
      if (!rq_data.input.empty()) {
        data = rq_data.load();
        check_dataset_matches(*data, model);
        if (model.preprocessing() == Preprocessing::centered) data = center(*data);
      }
      TableWriter table(out, rq_format == "csv");
      for (std::size_t t = 0; t < vectors.size(); ++t) {
        const auto est = rq_estimate(model, vectors[t], space);
        std::vector<std::pair<std::string, std::string>> cells = {
            {"vector", std::to_string(t)}, {"classic", num(est.classic)}, {"ent", num(est.ent)}};
        if (data) cells.emplace_back("exact", num(rq_exact(*data, vectors[t], space)));
        table.row(cells);
      }
      return kOk;
    }

    if (bench_cmd->parsed()) {
      const RunConfig config = load_run_config(bench_config);
      const BenchReport report = run_bench(config, resolve_threads(bench_threads));
      const std::string text = report_text(report);
      if (bench_output.empty()) {
        out << text;
      } else {
        write_text(bench_output, text);
      }
      if (!bench_tables.empty()) write_text(bench_tables, render_tables_csv(report));
      if (!bench_plots.empty()) write_kmatch_curves(report, bench_plots);
      return kOk;
    }

    if (km_cmd->parsed()) {
      RunConfig config;
      config.dataset = km_data.input;
      config.dataset_path = km_data.input;
      config.orientation = parse_orientation(km_data.orientation);
      config.has_header = km_data.header;
      config.center = km_center;
      config.num_queries = km_queries;
      config.seed = km_seed;
      config.subsample_from_default = false;
      if (km_subsample > 0) {
        config.subsample = km_subsample;
      } else {
        config.subsample.reset();
      }
      const Population population = parse_population(km_population);
      if (population == Population::queries && km_queries == 0) {
        throw ContractViolation("--population queries needs --num-queries >= 1");
      }
      config.kmatch.push_back({km_target, population});
      const BenchReport report = run_bench(config, resolve_threads(km_threads));
      out << report_text(report);
      if (!km_plots.empty()) write_kmatch_curves(report, km_plots);
      return kOk;
    }
  } catch (const ContractViolation& e) {
    err << "entpca: " << e.what() << '\n';
    return kContract;
  } catch (const IngestionError& e) {
    err << "entpca: " << e.what() << '\n';
    return kIngestion;
  } catch (const PersistenceError& e) {
    err << "entpca: " << e.what() << '\n';
    return kIngestion;
  } catch (const std::exception& e) {
    err << "entpca: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}

}  // namespace entpca::cli
