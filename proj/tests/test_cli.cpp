#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "exlab/experiments.hpp"
#include "exlab/states.hpp"

using namespace exlab;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmpdir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() / ("exlab_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace

TEST_CASE("config round-trips byte-identically") {
  ExperimentConfig cfg;
  cfg.kv = {{"d", "2"}, {"L", "8"}, {"rho", "0.5"}, {"x", "0,0;2,1"}};
  const auto text = cfg.serialize();
  CHECK(ExperimentConfig::parse(text).serialize() == text);
  CHECK(config_digest(cfg) == config_digest(ExperimentConfig::parse(text)));
  CHECK(config_digest(cfg).size() == 16);
}

TEST_CASE("parse helpers") {
  CHECK(parse_number_list("0.25,1,4") == std::vector<double>{0.25, 1, 4});
  CHECK(parse_int_range("3..6") == std::vector<int>{3, 4, 5, 6});
  CHECK(parse_int_range("2,5,9") == std::vector<int>{2, 5, 9});
  const Config c = parse_config("0,0;2,1", 2);
  CHECK(c.k() == 2);
  CHECK(c.pos[1] == Pt{2, 1});
  CHECK_THROWS_AS(parse_config("0,0;2", 2), std::invalid_argument);
  CHECK(parse_config_list("0;2|0;3", 1).size() == 2);
  CHECK(named_test_function("bump", 2)({{0.5, 0.5, 0}}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(named_test_function("nope", 2), std::invalid_argument);
}

TEST_CASE("number formatting is 17 significant digits") {
  CHECK(fmt_num(1.0) == "1");
  CHECK(fmt_num(0.1) == "0.10000000000000001");
  CHECK(fmt_int(-42) == "-42");
}

TEST_CASE("every experiment replays byte-identically") {
  for (const std::string& name : experiment_names()) {
    ExperimentConfig cfg = default_config(name);
    // shrink the stochastic ones so the whole sweep stays quick
    if (name == "simulate-ssep") cfg.kv["replicas"] = "3";
    if (name == "kernel-mc") cfg.kv["samples"] = "2000";
    if (name == "grad-bound") cfg.kv["L"] = "4", cfg.kv["t-grid"] = "0.25,1";
    if (name == "tv-sum") cfg.kv["L"] = "6", cfg.kv["t-grid"] = "1,4";
    if (name == "cumulants") cfg.kv["samples"] = "3000", cfg.kv["N"] = "2";
    if (name == "fluctuation") cfg.kv["samples"] = "2000", cfg.kv["N"] = "3";
    if (name == "renorm-const") cfg.kv["N"] = "2..4";
    if (name == "compare-rw") cfg.kv["t"] = "0.5";
    if (name == "diff-sum") cfg.kv["t-grid"] = "1,4";
    if (name == "pam") cfg.kv["N"] = "2", cfg.kv["T"] = "0.125";
    if (name == "probe-convergence")
      cfg.kv["N"] = "2", cfg.kv["T"] = "0.125", cfg.kv["replicas"] = "4";

    const std::string d1 = tmpdir(name + "_a"), d2 = tmpdir(name + "_b");
    const int rc1 = run_experiment(name, cfg, d1);
    const int rc2 = run_experiment(name, cfg, d2);
    CHECK(rc1 == rc2);
    const std::string csv1 = slurp(d1 + "/" + name + ".csv");
    CHECK(csv1 == slurp(d2 + "/" + name + ".csv"));
    CHECK(csv1.find("# digest ") != std::string::npos);
    CHECK(golden_compare(d1 + "/" + name + ".csv", d2 + "/" + name + ".csv").empty());
  }
}

TEST_CASE("golden comparator rejects tables without digests") {
  const std::string dir = tmpdir("golden");
  {
    std::ofstream a(dir + "/a.csv"), b(dir + "/b.csv");
    a << "x,y\n1,2\n";
    b << "x,y\n1,2\n";
  }
  CHECK(golden_compare(dir + "/a.csv", dir + "/b.csv") ==
        "no digest line in " + dir + "/a.csv");
}

TEST_CASE("check failures surface as exit code 2") {
  ExperimentConfig cfg = default_config("compare-rw");
  cfg.kv["threshold"] = "1e-30";  // unreachable
  cfg.kv["t"] = "0.5";
  CHECK(run_experiment("compare-rw", cfg, tmpdir("rc2")) == kCheckFailed);
}

TEST_CASE("capacity errors carry the required budget") {
  ExperimentConfig cfg = default_config("kernel-exact");
  cfg.kv["L"] = "64";
  cfg.kv["d"] = "2";
  cfg.kv["budget"] = "1000";
  CHECK_THROWS_AS(run_experiment("kernel-exact", cfg, tmpdir("cap")), CapacityError);
}

TEST_CASE("unknown experiment names are rejected") {
  CHECK_THROWS_AS(default_config("spectral-gap"), std::invalid_argument);
  CHECK_THROWS_AS(run_experiment("spectral-gap", ExperimentConfig{}, tmpdir("unk")),
                  std::invalid_argument);
}
