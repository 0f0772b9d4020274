#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#ifdef __unix__
#include <sys/wait.h>
#endif

#ifndef HELIXLAB_BIN
#define HELIXLAB_BIN "helixlab"
#endif
#ifndef HELIXLAB_CONFIG_DIR
#define HELIXLAB_CONFIG_DIR "configs"
#endif

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd =
        std::string("\"") + HELIXLAB_BIN + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
#ifdef __unix__
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -1;
#else
    return status;
#endif
}

fs::path fresh_dir(const char* leaf) {
    const fs::path p = fs::temp_directory_path() / "helixlab_cli_binary" / leaf;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

// ===========================================================================
// exit codes of the installed command-line tool
// ===========================================================================

TEST_CASE("help exits cleanly") {
    const fs::path dir = fresh_dir("help");
    CHECK(run_cli("--help", dir / "log.txt") == 0);
}

TEST_CASE("missing arguments exit with the validation code") {
    const fs::path dir = fresh_dir("noargs");
    CHECK(run_cli("", dir / "log.txt") == 2);
}

TEST_CASE("nonexistent config exits with the validation code") {
    const fs::path dir = fresh_dir("badpath");
    CHECK(run_cli("scan --config /nonexistent/helixlab.json", dir / "log.txt") == 2);
}

TEST_CASE("command and config disagreement is a validation error") {
    const fs::path dir = fresh_dir("mismatch");
    const std::string cfg = std::string(HELIXLAB_CONFIG_DIR) + "/census_y6.json";
    CHECK(run_cli("scan --config \"" + cfg + "\"", dir / "log.txt") == 2);
}

TEST_CASE("census experiment runs end to end") {
    const fs::path dir = fresh_dir("census");
    const std::string cfg = std::string(HELIXLAB_CONFIG_DIR) + "/census_y6.json";
    const int rc =
        run_cli("census --config \"" + cfg + "\" --out \"" + (dir / "out").string() + "\"",
                dir / "log.txt");
    CHECK(rc == 0);
    CHECK(fs::exists(dir / "out" / "census_report.json"));
    CHECK(fs::exists(dir / "out" / "manifest.json"));
}

TEST_CASE("stalled equilibrium search exits with the convergence code") {
    const fs::path dir = fresh_dir("stall");
    const fs::path cfg = dir / "force_stall.json";
    {
        std::ofstream os(cfg);
        os << R"({
  "command": "force",
  "parameters": {
    "heights": [1.0, 2.0],
    "masses": [1.0, 1.0],
    "find_equilibrium": true,
    "equilibrium": { "tol": 1e-10, "max_iter": 12 }
  }
})";
    }
    const int rc = run_cli("force --config \"" + cfg.string() + "\" --out \"" +
                               (dir / "out").string() + "\"",
                           dir / "log.txt");
    CHECK(rc == 3);
    // the report survives the failure; the manifest is only written on success
    CHECK(fs::exists(dir / "out" / "force_report.json"));
    CHECK_FALSE(fs::exists(dir / "out" / "manifest.json"));
}
