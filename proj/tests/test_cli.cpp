#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "helixlab/config.hpp"
#include "helixlab/errors.hpp"
#include "helixlab/manifest.hpp"
#include "helixlab/runner.hpp"
#include "helixlab/sha256.hpp"

using namespace helixlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

// ============================================================================
// Digests
// ============================================================================

TEST_CASE("sha256 matches the published test vectors") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    // a long input crosses many block boundaries
    CHECK(sha256_hex(std::string(1000000, 'a')) ==
          "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("file digests agree with in-memory digests") {
    const fs::path dir = fresh_dir("helixlab_digest_test");
    const fs::path file = dir / "payload.bin";
    std::ofstream(file, std::ios::binary) << "some bytes\nwith a newline";
    CHECK(sha256_file(file.string()) == sha256_hex("some bytes\nwith a newline"));
    CHECK_THROWS_AS((void)sha256_file((dir / "missing").string()), ValidationError);
    fs::remove_all(dir);
}

// ============================================================================
// Canonical serialization
// ============================================================================

TEST_CASE("canonical dumps are key-order independent") {
    const auto a = nlohmann::json::parse(R"({"b": 1, "a": {"d": 2, "c": 3}})");
    const auto b = nlohmann::json::parse(R"({"a": {"c": 3, "d": 2}, "b": 1})");
    CHECK(canonical_dump(a) == canonical_dump(b));
    CHECK(canonical_dump(a).back() == '\n');
}

// ============================================================================
// Config validation
// ============================================================================

TEST_CASE("a census config validates and canonicalizes") {
    const ExperimentConfig c = validate_config(R"({
        "command": "census",
        "output_dir": "/tmp/somewhere",
        "parameters": {"k": 6, "sweep_max": 24}
    })");
    CHECK(c.command == "census");
    CHECK(c.output_dir == "/tmp/somewhere");
    CHECK(c.seed == 0);
    CHECK(c.parameters.at("k") == 6);
    // the canonical form echoes command/parameters/seed but not the output dir
    CHECK(c.canonical.contains("command"));
    CHECK(c.canonical.contains("parameters"));
    CHECK(c.canonical.contains("seed"));
    CHECK_FALSE(c.canonical.contains("output_dir"));
}

TEST_CASE("identical configs canonicalize to identical bytes") {
    const char* spaced = R"({"parameters": {"sweep_max": 24, "k": 6}, "command": "census"})";
    const char* reordered = R"({"command":"census","parameters":{"k":6,"sweep_max":24}})";
    CHECK(canonical_dump(validate_config(spaced).canonical) ==
          canonical_dump(validate_config(reordered).canonical));
}

TEST_CASE("validation failures name the offending field") {
    auto message_of = [](const char* text) {
        try {
            (void)validate_config(text);
        } catch (const ValidationError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };

    CHECK(message_of(R"({"parameters": {}})") ==
          "config field 'command': missing required field");
    CHECK(message_of(R"({"command": "warp", "parameters": {}})").find(
              "unknown command 'warp'") != std::string::npos);
    CHECK(message_of(R"({"command": "census", "parameters": {"k": 6}, "extra": 1})") ==
          "config field 'extra': unknown key");
    CHECK(message_of(R"({"command": "census", "parameters": {"k": 6, "spin": 2}})") ==
          "config field 'parameters.spin': unknown key");
    CHECK(message_of(R"({"command": "census", "parameters": {"k": -2}})") ==
          "config field 'parameters.k': must be nonnegative");
    CHECK(message_of(R"({"command": "residue", "parameters":
            {"pole": {"modulus": -1, "argument": 0.5}}})") ==
          "config field 'parameters.pole.modulus': must be positive");
    CHECK(message_of("{not json") .find("config") != std::string::npos);
}

TEST_CASE("domain ranges and grids are checked") {
    const char* bad_range = R"({
        "command": "solve",
        "parameters": {
            "metric": {"kind": "flat"},
            "domain": {"sigma": [1.0, 0.0], "theta": [0.0, 6.0]},
            "grid": {"n_sigma": 8, "n_theta": 8},
            "boundary": {"all": "helicoid"},
            "pitch": 1.0
        }
    })";
    CHECK_THROWS_AS((void)validate_config(bad_range), ValidationError);

    const char* bad_grid = R"({
        "command": "solve",
        "parameters": {
            "metric": {"kind": "flat"},
            "domain": {"sigma": [0.0, 1.0], "theta": [0.0, 6.0]},
            "grid": {"n_sigma": 0, "n_theta": 8},
            "boundary": {"all": "helicoid"},
            "pitch": 1.0
        }
    })";
    CHECK_THROWS_AS((void)validate_config(bad_grid), ValidationError);
}

TEST_CASE("seeds ride along and files load") {
    const fs::path dir = fresh_dir("helixlab_config_file_test");
    const fs::path cfg = dir / "scan.json";
    std::ofstream(cfg) << R"({
        "command": "scan",
        "seed": 42,
        "parameters": {"n_necks": 2, "samples": 50}
    })";
    const ExperimentConfig c = load_config(cfg.string());
    CHECK(c.seed == 42);
    CHECK(c.canonical.at("seed") == 42);
    CHECK_THROWS_AS((void)load_config((dir / "absent.json").string()), ValidationError);
    fs::remove_all(dir);
}

// ============================================================================
// Experiment runs
// ============================================================================

TEST_CASE("a census run emits its report, sweep and manifest") {
    const fs::path dir = fresh_dir("helixlab_census_run");
    ExperimentConfig c = validate_config(R"({
        "command": "census",
        "parameters": {"k": 6, "sweep_max": 12}
    })");
    c.output_dir = dir.string();
    const RunManifest m = run_experiment(c);

    CHECK(m.command == "census");
    CHECK(m.verdicts.at("euler_identity"));
    REQUIRE(m.files.size() == 2);
    for (const auto& [name, digest] : m.files) {
        CHECK(fs::exists(dir / name));
        CHECK(sha256_file((dir / name).string()) == digest);
    }

    // genus-two surface with two ends, one component
    const auto report = nlohmann::json::parse(slurp(dir / "census_report.json"));
    CHECK(report.at("genus") == 2);
    CHECK(report.at("ends") == 2);
    CHECK(report.at("components") == 1);

    // the manifest on disk reproduces the returned record
    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest.at("command") == "census");
    CHECK(manifest.at("artifact_version") == m.artifact_version);
    CHECK(manifest.at("verdicts").at("euler_identity") == true);
    CHECK(manifest.at("files").size() == 2);
    CHECK(manifest.at("wall_time_seconds").is_number());
    fs::remove_all(dir);
}

TEST_CASE("seeded scans repeat byte for byte") {
    const fs::path dir_a = fresh_dir("helixlab_scan_a");
    const fs::path dir_b = fresh_dir("helixlab_scan_b");
    ExperimentConfig c = validate_config(R"({
        "command": "scan",
        "seed": 42,
        "parameters": {"n_necks": 2, "samples": 500}
    })");
    c.output_dir = dir_a.string();
    (void)run_experiment(c);
    c.output_dir = dir_b.string();
    (void)run_experiment(c);
    CHECK(slurp(dir_a / "scan_report.json") == slurp(dir_b / "scan_report.json"));
    // different seed, different exploration
    ExperimentConfig d = validate_config(R"({
        "command": "scan",
        "seed": 43,
        "parameters": {"n_necks": 2, "samples": 500}
    })");
    d.output_dir = dir_a.string();
    (void)run_experiment(d);
    CHECK(slurp(dir_a / "scan_report.json") != slurp(dir_b / "scan_report.json"));
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}

TEST_CASE("manifests serialize canonically") {
    RunManifest m;
    m.artifact_version = "0.1.0";
    m.command = "census";
    m.config_echo = nlohmann::json{{"command", "census"}};
    m.wall_time_seconds = 0.25;
    m.verdicts = {{"euler_identity", true}};
    m.files = {{"census_report.json", std::string(64, 'a')}};
    const std::string text = manifest_to_json(m);
    const auto j = nlohmann::json::parse(text);
    CHECK(j.at("artifact_version") == "0.1.0");
    CHECK(j.at("config").at("command") == "census");
    CHECK(j.at("files").at(0).at("path") == "census_report.json");
    CHECK(j.at("files").at(0).at("sha256") == std::string(64, 'a'));
    CHECK(text.back() == '\n');
}
