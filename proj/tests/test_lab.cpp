#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gasket/lab.hpp"
#include "gasket/rng.hpp"

using namespace gasket;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("gasketlab_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

long data_rows(const std::string& csv) {
    long rows = -1;  // discount the column-name row
    std::stringstream ss(csv);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty() && line[0] != '#') ++rows;
    return rows;
}

}  // namespace

TEST_CASE("config round trip") {
    TempDir dir("config");
    Config cfg;
    cfg.set("command", "spectrum");
    cfg.set_int("M", 2);
    cfg.set_num("a", 0.125);
    cfg.set("seed", "12345");
    cfg.write_file((dir.path / "m.txt").string());

    Config back = Config::parse_file((dir.path / "m.txt").string());
    CHECK(back.get("command", "") == "spectrum");
    CHECK(back.get_int("M", -1) == 2);
    CHECK(back.get_num("a", 0.0) == 0.125);
    CHECK(back.get_seed("seed", 0) == 12345);
    CHECK(back.has("M"));
    CHECK_FALSE(back.has("missing"));
    CHECK(back.get("missing", "fb") == "fb");
    CHECK_THROWS_AS(back.require("missing"), DomainError);
    CHECK_THROWS_AS(Config::parse_file("/nonexistent/path.txt"), ResourceError);

    Config tok = Config::parse_tokens({"alpha=1.5", "m=4", "alpha=0.5"});
    CHECK(tok.get_num("alpha", 0.0) == 0.5);  // later tokens win
    CHECK(tok.get_int("m", 0) == 4);
    CHECK_THROWS_AS(Config::parse_tokens({"no_equals_sign"}), DomainError);
}

TEST_CASE("shortest round-trip doubles") {
    for (double v : {0.1, 1.0 / 3.0, 1e-17, 123456.789, 5e300}) {
        const double back = std::stod(format_double(v));
        CHECK(back == v);
    }
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        const double v = (rng.uniform() - 0.5) * std::pow(10.0, 30.0 * (rng.uniform() - 0.5));
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("csv provenance header") {
    TempDir dir("csv");
    Config params;
    params.set("alpha", "1");
    params.set_int("M", 0);
    write_csv((dir.path / "x.csv").string(), params, {"a", "b"}, {{1.0, 2.0}, {3.0, 4.0}});
    const std::string text = slurp(dir.path / "x.csv");
    CHECK(text.find("# version=") == 0);
    CHECK(text.find("alpha=1") != std::string::npos);
    CHECK(text.find("M=0") != std::string::npos);
    CHECK(text.find("a,b\n") != std::string::npos);
    CHECK(data_rows(text) == 2);
}

TEST_CASE("spectrum command smoke test") {
    TempDir dir("spectrum");
    Config cfg = Config::parse_tokens({"M=0", "m=2", "alpha=1", "nu=0"});
    const std::string out = (dir.path / "run").string();
    CHECK(run_command("spectrum", cfg, out) == 0);
    CHECK(fs::exists(out + "/manifest.txt"));
    const std::string csv = slurp(out + "/eigenvalues.csv");
    // The unit gasket at depth 2 keeps its three inner-triangle vertices
    // after the outer-boundary kill, so three eigenvalues are listed.
    CHECK(data_rows(csv) == 3);
    Config manifest = Config::parse_file(out + "/manifest.txt");
    CHECK(manifest.get("command", "") == "spectrum");
    CHECK(manifest.get("version", "") == kLabVersion);
    CHECK(manifest.has("seed"));
}

TEST_CASE("manifest replay reproduces output byte-for-byte") {
    TempDir dir("replay");
    Config cfg = Config::parse_tokens(
        {"M=1", "m=3", "pad=1", "alpha=1", "nu=1", "a=0.25", "n_clouds=4", "seed=31415"});
    const std::string out1 = (dir.path / "run1").string();
    REQUIRE(run_command("ids", cfg, out1) == 0);

    Config replayed = Config::parse_file(out1 + "/manifest.txt");
    const std::string out2 = (dir.path / "run2").string();
    REQUIRE(run_command(replayed.require("command"), replayed, out2) == 0);
    for (const char* f : {"eigenvalues.csv", "ids.csv", "laplace.csv"})
        CHECK(slurp(dir.path / "run1" / f) == slurp(dir.path / "run2" / f));
}

TEST_CASE("failures leave a machine-readable error record") {
    TempDir dir("errors");
    Config fit = Config::parse_tokens({"input=/does/not/exist.csv"});
    const std::string out = (dir.path / "fitrun").string();
    CHECK(run_command("fit", fit, out) != 0);
    CHECK(fs::exists(out + "/error.txt"));
    CHECK(slurp(out + "/error.txt").find("not found") != std::string::npos);

    Config bad = Config::parse_tokens({"M=0", "m=2"});
    CHECK(run_command("no-such-command", bad, (dir.path / "badrun").string()) != 0);
}

TEST_CASE("selftest passes clean and fails under fault injection") {
    SelftestResult clean = run_selftest(1.0, 1);
    CHECK(clean.all_pass);
    CHECK(clean.checks.size() >= 15);

    // Seed independence of the distributional checks.
    SelftestResult reseeded = run_selftest(1.0, 987654321);
    CHECK(reseeded.all_pass);

    // Fault injection: a 1 percent perturbation of the 5^m renormalization
    // must break the exact scaling identities.
    SelftestResult broken = run_selftest(1.01, 1);
    CHECK_FALSE(broken.all_pass);
    bool ratio_failed = false, kernel_failed = false;
    for (const auto& [name, pass] : broken.checks) {
        if (name == "eigenvalue-ratio-5") ratio_failed = !pass;
        if (name == "kernel-scaling") kernel_failed = !pass;
    }
    CHECK(ratio_failed);
    CHECK(kernel_failed);
}
