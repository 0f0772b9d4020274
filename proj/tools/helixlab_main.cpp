#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "helixlab/config.hpp"
#include "helixlab/errors.hpp"
#include "helixlab/manifest.hpp"
#include "helixlab/runner.hpp"

namespace {

constexpr const char* kCommandList =
    "solve, flux, force, residue, barrier, height, area, census, scan";

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"helixlab: numerical experiments on helicoidal minimal graphs"};

    std::string command;
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;

    app.add_option("command", command, std::string("experiment to run (") + kCommandList + ")")
        ->required();
    app.add_option("--config", config_path, "path to the JSON experiment description")
        ->required();
    CLI::Option* out_opt =
        app.add_option("--out", out_dir, "output directory (overrides the config)");
    CLI::Option* seed_opt =
        app.add_option("--seed", seed, "sampling seed (overrides the config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        helixlab::ExperimentConfig cfg = helixlab::load_config(config_path);
        if (cfg.command != command) {
            throw helixlab::ValidationError("command line asks for '" + command +
                                            "' but the config describes '" + cfg.command + "'");
        }
        if (out_opt->count() > 0) cfg.output_dir = out_dir;
        if (seed_opt->count() > 0) {
            cfg.seed = seed;
            cfg.canonical["seed"] = seed;
        }

        const helixlab::RunManifest manifest = helixlab::run_experiment(cfg);

        std::printf("%s: wrote %zu files + manifest.json to %s\n", manifest.command.c_str(),
                    manifest.files.size(), cfg.output_dir.c_str());
        bool all_ok = true;
        for (const auto& [name, ok] : manifest.verdicts) {
            std::printf("  %-28s %s\n", name.c_str(), ok ? "ok" : "FAILED");
            all_ok = all_ok && ok;
        }
        if (!all_ok) std::printf("some checks failed; see the reports in %s\n", cfg.output_dir.c_str());
        return 0;
    } catch (const helixlab::HypothesisError& e) {
        std::fprintf(stderr, "hypothesis failure: %s\n", e.what());
        return 4;
    } catch (const helixlab::ConvergenceError& e) {
        std::fprintf(stderr, "did not converge: %s (residual %.3g)\n", e.what(),
                     e.achieved_residual);
        return 3;
    } catch (const helixlab::ValidationError& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
