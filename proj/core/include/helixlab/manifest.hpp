#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace helixlab {

/// Record of one experiment run. Every file the run emitted is listed with
/// its content digest; the manifest itself is written last.
struct RunManifest {
    std::string artifact_version;
    std::string command;
    nlohmann::json config_echo;
    double wall_time_seconds = 0;
    std::map<std::string, bool> verdicts;
    std::vector<std::pair<std::string, std::string>> files;  ///< (name, sha256)
};

/// Serializes the manifest to canonical JSON.
std::string manifest_to_json(const RunManifest& manifest);

/// Writes <output_dir>/manifest.json; call only after all other outputs.
void write_manifest(const RunManifest& manifest, const std::string& output_dir);

}  // namespace helixlab
