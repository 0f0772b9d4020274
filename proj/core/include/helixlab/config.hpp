#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace helixlab {

/// A validated experiment description. `parameters` holds the
/// command-specific table exactly as given; `canonical` is the full config in
/// canonical (sorted-key) form, with top-level defaults filled in, and is what
/// the run manifest echoes (minus any output directory).
struct ExperimentConfig {
    std::string command;
    std::string output_dir = ".";
    std::uint64_t seed = 0;
    nlohmann::json parameters;
    nlohmann::json canonical;
};

/// Parses and validates a JSON config text: the command must be one of
/// {solve, flux, force, residue, barrier, height, area, census, scan}, every
/// key at every level must be known, and basic ranges are checked. Throws
/// ValidationError naming the offending field path.
ExperimentConfig validate_config(const std::string& text);

/// Reads the file and delegates to validate_config.
ExperimentConfig load_config(const std::string& path);

/// The canonical serialized form: sorted keys, two-space indent, trailing
/// newline. Identical configs serialize to identical bytes.
std::string canonical_dump(const nlohmann::json& j);

}  // namespace helixlab
