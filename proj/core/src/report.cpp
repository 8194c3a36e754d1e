#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "entpca/bench.hpp"
#include "entpca/errors.hpp"

namespace entpca {

namespace {

using nlohmann::ordered_json;

constexpr int kReportFormatVersion = 1;

[[noreturn]] void bad_config(const std::string& what) {
  throw ContractViolation("invalid bench config: " + what);
}

std::size_t get_count(const nlohmann::json& j, const char* key) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) bad_config(std::string(key) + " must be an integer");
  if (j.is_number_integer() && j.get<std::int64_t>() < 0) bad_config(std::string(key) + " must be non-negative");
  return j.get<std::size_t>();
}

bool get_bool(const nlohmann::json& j, const char* key) {
  if (!j.is_boolean()) bad_config(std::string(key) + " must be a boolean");
  return j.get<bool>();
}

std::string get_string(const nlohmann::json& j, const char* key) {
  if (!j.is_string()) bad_config(std::string(key) + " must be a string");
  return j.get<std::string>();
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["dataset"] = c.dataset;
  j["orientation"] = std::string(to_string(c.orientation));
  j["has_header"] = c.has_header;
  j["k"] = c.k;
  j["center"] = c.center;
  j["num_queries"] = c.num_queries;
  j["seed"] = c.seed ? ordered_json(*c.seed) : ordered_json(nullptr);
  j["subsample"] = c.subsample ? ordered_json(*c.subsample) : ordered_json(nullptr);
  j["rq_vectors"] = c.rq_vectors;
  ordered_json km = ordered_json::array();
  for (const auto& r : c.kmatch) {
    km.push_back({{"target_k", r.target_k}, {"population", std::string(to_string(r.population))}});
  }
  j["kmatch"] = km;
  return j;
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    bad_config(e.what());
  }
  if (!j.is_object()) bad_config("top level must be an object");

  static const std::set<std::string> known = {"dataset", "orientation", "has_header", "k",
                                              "center",  "num_queries", "seed",       "subsample",
                                              "rq_vectors", "kmatch"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) bad_config("unknown key '" + key + "'");
  }

  RunConfig c;
  if (!j.contains("dataset")) bad_config("missing 'dataset'");
  c.dataset = get_string(j["dataset"], "dataset");
  const std::filesystem::path dataset(c.dataset);
  c.dataset_path = dataset.is_absolute() || base_dir.empty() ? dataset : base_dir / dataset;

  if (j.contains("orientation")) c.orientation = parse_orientation(get_string(j["orientation"], "orientation"));
  if (j.contains("has_header")) c.has_header = get_bool(j["has_header"], "has_header");
  if (j.contains("center")) c.center = get_bool(j["center"], "center");
  if (j.contains("num_queries")) c.num_queries = get_count(j["num_queries"], "num_queries");
  if (j.contains("rq_vectors")) c.rq_vectors = get_count(j["rq_vectors"], "rq_vectors");
  if (j.contains("seed") && !j["seed"].is_null()) {
    c.seed = static_cast<std::uint64_t>(get_count(j["seed"], "seed"));
  }
  if (j.contains("subsample")) {
    c.subsample_from_default = false;
    if (j["subsample"].is_null()) {
      c.subsample.reset();
    } else {
      c.subsample = get_count(j["subsample"], "subsample");
    }
  } else {
    c.subsample = kDefaultSubsample;
  }
  if (j.contains("k")) {
    if (!j["k"].is_array()) bad_config("k must be an array of ranks");
    for (const auto& v : j["k"]) {
      const std::size_t k = get_count(v, "k");
      if (k == 0) bad_config("ranks in k must be positive");
      c.k.push_back(k);
    }
  }
  if (j.contains("kmatch")) {
    if (!j["kmatch"].is_array()) bad_config("kmatch must be an array");
    for (const auto& r : j["kmatch"]) {
      if (!r.is_object() || !r.contains("target_k")) bad_config("kmatch entries need target_k");
      for (const auto& [key, _] : r.items()) {
        if (key != "target_k" && key != "population") bad_config("unknown kmatch key '" + key + "'");
      }
      KMatchRequest req;
      req.target_k = get_count(r["target_k"], "target_k");
      req.population = r.contains("population")
                           ? parse_population(get_string(r["population"], "population"))
                           : Population::pairs;
      if (req.population != Population::pairs && req.population != Population::queries) {
        bad_config("kmatch population must be pairs or queries");
      }
      if (req.population == Population::queries && c.num_queries == 0) {
        bad_config("a queries k-match sweep needs num_queries >= 1");
      }
      c.kmatch.push_back(req);
    }
  }
  if (c.randomized() && !c.seed) bad_config("'seed' is required for randomized runs");
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError(0, "cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config(buffer.str(), path.parent_path());
}

std::string render_report_json(const BenchReport& report) {
  ordered_json j;
  j["config"] = config_json(report.config);

  ordered_json results = ordered_json::array();
  for (const auto& s : report.results) {
    results.push_back({{"formula", std::string(to_string(s.formula))},
                       {"k", s.k},
                       {"population", std::string(to_string(s.population))},
                       {"count", s.count},
                       {"mean_abs_err", s.mean_abs_err},
                       {"std_abs_err", s.std_abs_err}});
  }
  j["results"] = results;

  ordered_json kmatch = ordered_json::array();
  for (const auto& r : report.kmatch) {
    ordered_json matched = ordered_json::array();
    for (const auto& e : r.matched) {
      ordered_json curve = ordered_json::array();
      for (const auto& p : e.curve) curve.push_back({p.k, p.mean_abs_err});
      matched.push_back({{"formula", std::string(to_string(e.formula))},
                         {"k", e.k ? ordered_json(*e.k) : ordered_json(nullptr)},
                         {"reached", e.k.has_value()},
                         {"curve", curve}});
    }
    kmatch.push_back({{"target_formula", std::string(to_string(r.target_formula))},
                      {"target_k", r.target_k},
                      {"population", std::string(to_string(r.population))},
                      {"target_err", r.target_err},
                      {"matched", matched}});
  }
  j["kmatch"] = kmatch;

  const bool centered = report.config.center;
  j["metadata"] = {
      {"error_metric", "absolute error of squared distances / Rayleigh quotients"},
      {"std_convention", "population (divide by count)"},
      {"rng", "mt19937_64, 53-bit uniforms, Box-Muller normals"},
      {"seed_streams", {{"queries", 0}, {"subsample", 1}, {"rq_column", 2}, {"rq_row", 3}}},
      {"preprocessing", centered ? "centered" : "none"},
      {"preprocessing_assumed", true},
      {"preprocessing_assumption",
       centered ? "features mean-centered before fitting"
                : "data used as given, no mean subtraction or scaling"},
  };
  j["versions"] = {{"format", kReportFormatVersion}};
  return j.dump(2) + "\n";
}

std::string render_tables_csv(const BenchReport& report) {
  static constexpr Population kOrder[] = {Population::queries, Population::pairs,
                                          Population::rq_column, Population::rq_row};
  static constexpr Formula kFormulas[] = {Formula::classic, Formula::lower, Formula::ent};

  std::vector<Population> present;
  for (Population p : kOrder) {
    for (const auto& s : report.results) {
      if (s.population == p) {
        present.push_back(p);
        break;
      }
    }
  }
  auto find = [&](std::size_t k, Formula f, Population p) -> const ErrorStats* {
    for (const auto& s : report.results) {
      if (s.k == k && s.formula == f && s.population == p) return &s;
    }
    return nullptr;
  };

  std::ostringstream out;
  out << "k,formula";
  for (Population p : present) out << ',' << to_string(p) << "_mean," << to_string(p) << "_std";
  out << '\n';
  for (std::size_t k : report.config.k) {
    for (Formula f : kFormulas) {
      bool any = false;
      for (Population p : present) any = any || find(k, f, p) != nullptr;
      if (!any) continue;
      out << k << ',' << to_string(f);
      for (Population p : present) {
        const ErrorStats* s = find(k, f, p);
        if (s) {
          out << ',' << fmt17(s->mean_abs_err) << ',' << fmt17(s->std_abs_err);
        } else {
          out << ",,";
        }
      }
      out << '\n';
    }
  }
  return out.str();
}

void write_kmatch_curves(const BenchReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& r : report.kmatch) {
    for (const auto& e : r.matched) {
      const auto name = "kmatch_" + std::string(to_string(r.population)) + "_k" +
                        std::to_string(r.target_k) + "_" + std::string(to_string(e.formula)) +
                        ".dat";
      std::ofstream out(dir / name);
      if (!out) throw IngestionError(0, "cannot write " + (dir / name).string());
      out << "# k mean_abs_err; ent at k=" << r.target_k << " has error " << fmt17(r.target_err)
          << '\n';
      for (const auto& p : e.curve) out << p.k << ' ' << fmt17(p.mean_abs_err) << '\n';
    }
  }
}

}  // namespace entpca
