#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "entpca/csv.hpp"
#include "entpca/estimators.hpp"
#include "entpca/model_io.hpp"
#include "entpca/pca.hpp"
#include "entpca/random.hpp"
#include "entpca/rayleigh.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = entpca::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("entpca_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // diag(2,1) as items-as-columns, plus a third item for row-space tests.
  std::string fit_small(std::string csv = "2,0,1\n0,1,1\n0,0,1\n", std::size_t k = 1) {
    const auto input = write("small.csv", csv);
    const auto model = path("small.model");
    const auto r = run({"fit", "--input", input, "--orientation", "items-as-columns", "--k",
                        std::to_string(k), "--output-model", model});
    EXPECT_EQ(r.code, 0) << r.err;
    return model;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, FitSummary) {
  const auto input = write("diag.csv", "2,0\n0,1\n");
  const auto model = path("diag.model");
  const auto r = run({"fit", "--input", input, "--orientation", "items-as-columns", "--k", "1",
                      "--output-model", model});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["m"], 2);
  EXPECT_EQ(j["n"], 2);
  EXPECT_EQ(j["k"], 1);
  EXPECT_EQ(j["sum_z"], 1.0);
  EXPECT_EQ(j["delta"], 1.0);
  EXPECT_EQ(lines(r.out).size(), 1u);
  EXPECT_TRUE(fs::exists(model));
  EXPECT_EQ(entpca::load_model(fs::path(model)).delta(), 1.0);
}

TEST_F(Cli, FitRankOutOfRange) {
  const auto input = write("diag.csv", "2,0\n0,1\n");
  const auto r = run({"fit", "--input", input, "--k", "2", "--output-model", path("m")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("rank"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST_F(Cli, FitMalformedCsv) {
  const auto input = write("bad.csv", "1,2\n3,x\n");
  const auto r = run({"fit", "--input", input, "--k", "1", "--output-model", path("m")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  EXPECT_EQ(run({"fit", "--input", path("missing.csv"), "--k", "1", "--output-model", path("m")})
                .code,
            3);
}

TEST_F(Cli, ParseErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  const auto input = write("diag.csv", "2,0\n0,1\n");
  EXPECT_EQ(run({"fit", "--input", input, "--k", "1", "--output-model", path("m"), "--bogus"}).code,
            2);
  EXPECT_EQ(run({"fit", "--input", input, "--output-model", path("m")}).code, 2);
  EXPECT_EQ(run({"fit", "--input", input, "--k", "one", "--output-model", path("m")}).code, 2);
  EXPECT_EQ(run({"fit", "--input", input, "--k", "1", "--orientation", "diagonal",
                 "--output-model", path("m")})
                .code,
            2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, DistSelfPair) {
  const auto model = fit_small();
  const auto r = run({"dist", "--model", model, "--pairs", "0,0", "1,2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 2u);
  const auto m = entpca::load_model(fs::path(model));
  const auto j = nlohmann::json::parse(rows[0]);
  EXPECT_EQ(j["i"], 0);
  EXPECT_EQ(j["j"], 0);
  EXPECT_EQ(j["classic"], 0.0);
  EXPECT_EQ(j["lower"], 0.0);
  EXPECT_EQ(j["ent"], 2 * m.z()[0]);
  EXPECT_FALSE(j.contains("exact"));
}

TEST_F(Cli, DistAllPairsAndValuesMatchLibrary) {
  const auto model_path = fit_small();
  const auto input = path("small.csv");
  const auto r = run({"dist", "--model", model_path, "--all-pairs", "--input", input,
                      "--orientation", "items-as-columns"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 3u);
  const auto model = entpca::load_model(fs::path(model_path));
  const auto data = entpca::load_csv(input, entpca::Orientation::items_as_columns, false);
  const std::vector<std::pair<int, int>> want{{0, 1}, {0, 2}, {1, 2}};
  for (std::size_t r_i = 0; r_i < 3; ++r_i) {
    const auto j = nlohmann::json::parse(rows[r_i]);
    const auto [a, b] = want[r_i];
    EXPECT_EQ(j["i"], a);
    EXPECT_EQ(j["j"], b);
    const auto e = entpca::estimate_cols(model, a, b);
    EXPECT_EQ(j["classic"].get<double>(), e.classic);
    EXPECT_EQ(j["lower"].get<double>(), e.lower);
    EXPECT_EQ(j["ent"].get<double>(), e.ent);
    EXPECT_EQ(j["exact"].get<double>(), entpca::exact_distance(data, a, b));
  }
}

TEST_F(Cli, DistCsvFormat) {
  const auto model = fit_small();
  const auto r = run({"dist", "--model", model, "--pairs", "0,1", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], "i,j,classic,lower,ent");
}

TEST_F(Cli, DistQueries) {
  const auto model_path = fit_small();
  const auto queries = write("q.csv", "1,2,3\n-1,0.5,0\n");
  const auto r = run({"dist", "--model", model_path, "--query-file", queries});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 6u);
  const auto model = entpca::load_model(fs::path(model_path));
  const auto batch = entpca::batch_query(model, std::vector<double>{-1, 0.5, 0});
  const auto j = nlohmann::json::parse(rows[5]);
  EXPECT_EQ(j["query"], 1);
  EXPECT_EQ(j["j"], 2);
  EXPECT_EQ(j["ent"].get<double>(), batch[2].ent);
  EXPECT_EQ(j["lower"].get<double>(), batch[2].lower);
}

TEST_F(Cli, DistErrors) {
  const auto model = fit_small();
  const auto wrong = write("q.csv", "1,2\n");
  EXPECT_EQ(run({"dist", "--model", model, "--query-file", wrong}).code, 2);
  EXPECT_EQ(run({"dist", "--model", model, "--pairs", "0,3"}).code, 2);
  EXPECT_EQ(run({"dist", "--model", model, "--pairs", "0;1"}).code, 2);
  EXPECT_EQ(run({"dist", "--model", model, "--pairs", "-1,1"}).code, 2);
  EXPECT_EQ(run({"dist", "--model", model}).code, 2);
  EXPECT_EQ(run({"dist", "--model", model, "--pairs", "0,1", "--all-pairs"}).code, 2);
  EXPECT_EQ(run({"dist", "--model", path("nope.model"), "--all-pairs"}).code, 3);
  const auto garbage = write("garbage.model", "not a model");
  EXPECT_EQ(run({"dist", "--model", garbage, "--all-pairs"}).code, 3);
  const auto other = write("other.csv", "1,2\n3,4\n");
  EXPECT_EQ(run({"dist", "--model", model, "--all-pairs", "--input", other}).code, 2);
}

TEST_F(Cli, RqRowBasisVectorIsExact) {
  const auto model = fit_small();
  const auto vectors = write("v.csv", "0,0,1\n0,1,0\n");
  const auto r = run({"rq", "--model", model, "--space", "row", "--vectors-file", vectors,
                      "--input", path("small.csv"), "--orientation", "items-as-columns"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 2u);
  const auto first = nlohmann::json::parse(rows[0]);
  EXPECT_DOUBLE_EQ(first["ent"].get<double>(), 3.0);
  EXPECT_DOUBLE_EQ(first["exact"].get<double>(), 3.0);
  const auto second = nlohmann::json::parse(rows[1]);
  EXPECT_DOUBLE_EQ(second["ent"].get<double>(), second["exact"].get<double>());
}

TEST_F(Cli, RqRandomIsSeeded) {
  const auto model_path = fit_small();
  const auto a = run({"rq", "--model", model_path, "--space", "column", "--random", "4", "--seed",
                      "9", "--format", "csv"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, run({"rq", "--model", model_path, "--space", "column", "--random", "4",
                        "--seed", "9", "--format", "csv"})
                       .out);
  EXPECT_NE(a.out, run({"rq", "--model", model_path, "--space", "column", "--random", "4",
                        "--seed", "10", "--format", "csv"})
                       .out);
  const auto rows = lines(a.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "vector,classic,ent");
  // Same vectors through the library.
  const auto model = entpca::load_model(fs::path(model_path));
  entpca::SeededRng rng(9);
  const auto v = rng.gaussian_vector(3);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", entpca::rq_ent_col(model, v));
  EXPECT_NE(rows[1].find(buf), std::string::npos);
}

TEST_F(Cli, RqErrors) {
  const auto model = fit_small();
  const auto zero = write("zero.csv", "1,1,1\n0,0,0\n");
  EXPECT_EQ(run({"rq", "--model", model, "--space", "row", "--vectors-file", zero}).code, 2);
  EXPECT_EQ(run({"rq", "--model", model, "--space", "column", "--random", "3"}).code, 2);
  EXPECT_EQ(run({"rq", "--model", model, "--space", "diagonal", "--random", "3", "--seed", "1"})
                .code,
            2);
  const auto short_v = write("short.csv", "1,1\n");
  EXPECT_EQ(run({"rq", "--model", model, "--space", "row", "--vectors-file", short_v}).code, 2);
  const auto bad = write("bad.csv", "1,a,1\n");
  EXPECT_EQ(run({"rq", "--model", model, "--space", "row", "--vectors-file", bad}).code, 3);
}

TEST_F(Cli, BenchIsByteIdenticalAndWritesArtifacts) {
  const auto config = write("run.json", std::string(R"({"dataset": ")") + ENTPCA_DATA_DIR +
                                            R"(/ionosphere.csv", "k": [1, 3], "num_queries": 2,
      "seed": 4, "subsample": 40, "rq_vectors": 10, "kmatch": [{"target_k": 2}]})");
  const auto a = run({"bench", "--config", config});
  ASSERT_EQ(a.code, 0) << a.err;
  const auto b = run({"bench", "--config", config, "--threads", "3"});
  EXPECT_EQ(a.out, b.out);
  setenv("ENTPCA_THREADS", "5", 1);
  const auto c = run({"bench", "--config", config, "--output", path("report.json"), "--tables-csv",
                      path("tables.csv"), "--plot-dir", path("plots")});
  unsetenv("ENTPCA_THREADS");
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_TRUE(c.out.empty());
  std::stringstream file;
  file << std::ifstream(path("report.json")).rdbuf();
  EXPECT_EQ(file.str(), a.out);
  EXPECT_TRUE(fs::exists(path("tables.csv")));
  EXPECT_TRUE(fs::exists(fs::path(path("plots")) / "kmatch_pairs_k2_lower.dat"));
}

TEST_F(Cli, BenchErrors) {
  const auto too_big = write("big.json", std::string(R"({"dataset": ")") + ENTPCA_DATA_DIR +
                                             R"(/ionosphere.csv", "k": [1], "subsample": 400, "seed": 1})");
  EXPECT_EQ(run({"bench", "--config", too_big}).code, 2);
  const auto no_seed = write("noseed.json", R"({"dataset": "x.csv", "k": [1], "num_queries": 3})");
  EXPECT_EQ(run({"bench", "--config", no_seed}).code, 2);
  const auto missing = write("missing.json", R"({"dataset": "x.csv", "k": [1]})");
  EXPECT_EQ(run({"bench", "--config", missing}).code, 3);
  EXPECT_EQ(run({"bench", "--config", path("absent.json")}).code, 3);
  const auto ok = write("ok.json", std::string(R"({"dataset": ")") + ENTPCA_DATA_DIR +
                                       R"(/ionosphere.csv", "k": [1]})");
  setenv("ENTPCA_THREADS", "lots", 1);
  EXPECT_EQ(run({"bench", "--config", ok}).code, 2);
  unsetenv("ENTPCA_THREADS");
}

TEST_F(Cli, KMatch) {
  const std::string input = std::string(ENTPCA_DATA_DIR) + "/ionosphere.csv";
  const auto r = run({"kmatch", "--input", input, "--target-k", "2", "--population", "queries",
                      "--num-queries", "5", "--seed", "1", "--threads", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["kmatch"].size(), 1u);
  EXPECT_EQ(j["kmatch"][0]["target_k"], 2);
  EXPECT_EQ(j["results"].size(), 0u);
  EXPECT_EQ(run({"kmatch", "--input", input, "--target-k", "2", "--population", "queries",
                 "--num-queries", "5"})
                .code,
            2);
  EXPECT_EQ(run({"kmatch", "--input", input, "--target-k", "40"}).code, 2);
  EXPECT_EQ(run({"kmatch", "--input", input, "--target-k", "2", "--subsample", "30"}).code, 2);
  EXPECT_EQ(run({"kmatch", "--input", input, "--target-k", "2", "--subsample", "30", "--seed", "3"})
                .code,
            0);
}
