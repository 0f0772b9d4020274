#include "helixlab/manifest.hpp"

#include <fstream>

#include "helixlab/config.hpp"
#include "helixlab/errors.hpp"

namespace helixlab {

std::string manifest_to_json(const RunManifest& manifest) {
    nlohmann::json files = nlohmann::json::array();
    for (const auto& [name, digest] : manifest.files)
        files.push_back({{"path", name}, {"sha256", digest}});
    nlohmann::json verdicts = nlohmann::json::object();
    for (const auto& [name, ok] : manifest.verdicts) verdicts[name] = ok;
    const nlohmann::json j{{"artifact_version", manifest.artifact_version},
                           {"command", manifest.command},
                           {"config", manifest.config_echo},
                           {"files", files},
                           {"verdicts", verdicts},
                           {"wall_time_seconds", manifest.wall_time_seconds}};
    return canonical_dump(j);
}

void write_manifest(const RunManifest& manifest, const std::string& output_dir) {
    const std::string path = output_dir + "/manifest.json";
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ValidationError("cannot open for writing: " + path);
    os << manifest_to_json(manifest);
    if (!os) throw ValidationError("write failed: " + path);
}

}  // namespace helixlab
