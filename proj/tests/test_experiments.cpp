#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "oddlab/errors.hpp"
#include "oddlab/experiments.hpp"

using namespace oddlab;

TEST_CASE("catalog carries the stable entries with documentation") {
  const auto& catalog = experiment_catalog();
  CHECK(catalog.size() >= 12);
  const std::set<std::string> required = {
      "hardy-symbol",    "hardy-toeplitz", "dirac-eta",      "dirac-d-equality",
      "thmn-properties", "oba-suite",      "gladk-suite",    "example6",
      "clifford-oddness", "gluing-check",  "transport-suite", "orthogonalize-suite"};
  std::set<std::string> names;
  for (const auto& entry : catalog) {
    names.insert(entry.name);
    CHECK(!entry.description.empty());
    CHECK(!entry.formula.empty());
    CHECK(!entry.config.checks.empty());
  }
  for (const auto& req : required) CHECK(names.count(req) == 1);
}

TEST_CASE("config validation") {
  ExperimentConfig c;
  c.name = "x";
  c.checks = {"no-such-check"};
  CHECK_THROWS_AS(run_experiment(c), ConfigError);

  c.checks = {"gluing-pauli"};
  c.manifold = "klein-bottle";
  CHECK_THROWS_AS(run_experiment(c), ConfigError);

  c.manifold = "t2";
  c.tol.rank_tol = 0.0;
  CHECK_THROWS_AS(run_experiment(c), ConfigError);

  c.tol.rank_tol = 1e-8;
  c.operator_spec = "dirac";
  c.truncation = 0;
  CHECK_THROWS_AS(run_experiment(c), ConfigError);  // dirac needs K >= 1

  c.truncation = 1;
  const auto rep = run_experiment(c);
  CHECK(rep.overall_pass);
}

TEST_CASE("config json round trip") {
  const auto& entry = experiment_catalog().front();
  const json j = entry.config.to_json();
  const auto back = ExperimentConfig::from_json(j);
  CHECK(back.name == entry.config.name);
  CHECK(back.manifold == entry.config.manifold);
  CHECK(back.truncation == entry.config.truncation);
  CHECK(back.checks == entry.config.checks);
  CHECK(back.tol.rank_tol == entry.config.tol.rank_tol);

  json missing = j;
  missing.erase("checks");
  CHECK_THROWS_AS(ExperimentConfig::from_json(missing), ConfigError);
}

TEST_CASE("reports are deterministic for a fixed config and seed") {
  ExperimentConfig c;
  c.name = "determinism";
  c.manifold = "t2";
  c.truncation = 1;
  c.seed = 42;
  c.checks = {"pauli-odd-projection", "gluing-pauli", "eta-hamiltonian-random"};
  const auto a = run_experiment(c).to_json(false).dump(2);
  const auto b = run_experiment(c).to_json(false).dump(2);
  CHECK(a == b);
}

TEST_CASE("small catalog entries run green") {
  for (const auto& entry : experiment_catalog()) {
    if (entry.name != "hardy-symbol" && entry.name != "gluing-check" &&
        entry.name != "orthogonalize-suite")
      continue;
    const auto rep = run_experiment(entry.config);
    CHECK(rep.overall_pass);
    for (const auto& check : rep.checks) {
      INFO(entry.name << "/" << check.name);
      CHECK(check.pass);
    }
  }
}

TEST_CASE("csv summary format") {
  ExperimentConfig c;
  c.name = "csv";
  c.manifold = "t2";
  c.truncation = 1;
  c.checks = {"gluing-pauli"};
  const auto rep = run_experiment(c);
  std::stringstream ss;
  write_report_csv(rep, ss);
  const std::string text = ss.str();
  CHECK(text.find("experiment,check,pass") != std::string::npos);
  CHECK(text.find("csv,gluing-pauli,true") != std::string::npos);
}

TEST_CASE("dimension payloads carry exact dyadic fields") {
  ExperimentConfig c;
  c.name = "dyadic";
  c.manifold = "t2";
  c.truncation = 1;
  c.checks = {"d-eta-dirac"};
  const auto rep = run_experiment(c);
  REQUIRE(rep.overall_pass);
  const auto& payload = rep.checks.front().payload;
  REQUIRE(payload.contains("value"));
  CHECK(payload["value"]["num"].is_number_integer());
  CHECK(payload["value"]["log2_den"].is_number_integer());
  CHECK(payload["value"]["num"].get<long>() == 1);
  CHECK(payload["value"]["log2_den"].get<int>() == 0);
}
