#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "oddlab/dyadic.hpp"

namespace oddlab {

using json = nlohmann::ordered_json;

struct Tolerances {
  double rank_tol = 1e-8;  // relative singular-value threshold
  double sym_tol = 1e-10;  // symbol parity / projection residual bound
  double pair_tol = 1e-9;  // relative eigenvalue pairing tolerance
};

struct ExperimentConfig {
  std::string name;
  std::string manifold = "t2";  // "s1" | "t2"
  int truncation = 2;
  std::uint64_t seed = 1;
  std::string operator_spec;
  std::string subspace_spec;
  std::vector<std::string> checks;
  Tolerances tol;

  static ExperimentConfig from_json(const json& j);  // validates; throws ConfigError
  json to_json() const;
};

struct CheckOutcome {
  std::string name;
  bool pass = false;
  json payload;       // kind-tagged result record
  double wall_ms = 0.0;
};

struct RunReport {
  ExperimentConfig config;
  json overrides;  // CLI overrides applied on top of the config, echoed
  std::vector<CheckOutcome> checks;
  bool overall_pass = false;

  // Timings vary run to run, so they are included only on request; without
  // them the serialized report is byte-identical for a fixed config and seed.
  json to_json(bool include_timings = false) const;
};

struct CatalogEntry {
  std::string name;
  std::string description;  // what is verified
  std::string formula;      // the identity, in ASCII math
  ExperimentConfig config;
};

// Stable built-in catalog (order fixed; names are part of the interface).
const std::vector<CatalogEntry>& experiment_catalog();

// All known check names (the config validator rejects anything else).
std::vector<std::string> known_check_names();

// Executes the checks in declared order. Throws ConfigError for invalid
// configs; check-level failures are recorded, not thrown.
RunReport run_experiment(const ExperimentConfig& config);

// Serialization helpers shared by the CLI and tests.
json dyadic_to_json(const Dyadic& d);
void write_report_csv(const RunReport& report, std::ostream& os);

// Runs the full catalog (ODDLAB_THREADS-capped concurrency; report order is
// catalog order regardless). Writes one report per entry into out_dir when
// non-empty, plus a combined summary. Returns 0 when everything passed, 1
// otherwise; prints one line per entry to `log`.
int verify_all(std::ostream& log, const std::string& out_dir);

}  // namespace oddlab
