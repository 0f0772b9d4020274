#pragma once

#include "helixlab/config.hpp"
#include "helixlab/manifest.hpp"

namespace helixlab {

/// Executes the configured experiment: writes every output file into
/// config.output_dir, then the manifest (always last). Errors from
/// validation, convergence, or hypothesis checks propagate to the caller.
RunManifest run_experiment(const ExperimentConfig& config);

}  // namespace helixlab
