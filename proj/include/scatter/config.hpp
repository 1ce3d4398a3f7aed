#pragma once

// Experiment configuration (JSON), task orchestration, and artifact
// serialization (result.json / amplitude.csv / report.txt).

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "scatter/potential.hpp"

namespace scatter {

// Full default configuration; every knob the engine reads appears here.
nlohmann::json default_config();

// Overlays user values onto the defaults (deep merge, user wins) and
// validates types/ranges. Throws EngineError(validation) on schema errors.
nlohmann::json materialize_config(const nlohmann::json& user);

// Builds the engine potential from the "potential" block.
PotentialModel potential_from_json(const nlohmann::json& spec);

// FNV-1a content hash of the canonical (sorted-key) config serialization.
std::string config_hash(const nlohmann::json& cfg);

// Executes the configured task and writes artifacts into output.dir.
// Returns the process exit status (0 ok; 2 validation; 3 engine refusal;
// 4 spectral singularity) and writes a machine-readable error JSON to
// `err` on failure.
int run_experiment(const nlohmann::json& user_config, std::ostream& out, std::ostream& err);

}  // namespace scatter
