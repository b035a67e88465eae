#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string read(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("continuum_trg_cli_" + name);
    fs::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("single free run writes trace and summary") {
    const fs::path dir = scratch("free");
    REQUIRE(run("--mass 1 --order 0 --chi-max 16 --emit csv,json --oracle --output-dir " + dir.string()) == 0);
    const auto j = nlohmann::json::parse(read(dir / "summary.json"));
    for (const char* key : {"config", "f0", "exact_f0", "delta_f0", "cdl_onset_level", "wall_time_s"})
        CHECK(j.contains(key));
    CHECK_FALSE(j.contains("f1"));
    CHECK(j["delta_f0"].get<double>() < 1e-9);
    CHECK(j["config"]["chi_max"].get<int>() == 16);

    const std::string csv = read(dir / "flow_trace.csv");
    CHECK(csv.rfind("level,chi_pre,chi_post,b_1,", 0) == 0);
    CHECK(csv.find("\r") == std::string::npos);
    std::size_t lines = 0;
    for (char ch : csv) lines += ch == '\n';
    CHECK(lines == 42);
}

TEST_CASE("first-order run reports f1") {
    const fs::path dir = scratch("pert");
    REQUIRE(run("--mass 0.5 --order 1 --chi-max 6 --sites-exponent 6 --emit json --output-dir " + dir.string()) == 0);
    const auto j = nlohmann::json::parse(read(dir / "summary.json"));
    CHECK(j.contains("f1"));
    CHECK(j.contains("delta_f1"));
    CHECK_FALSE(fs::exists(dir / "flow_trace.csv"));
}

TEST_CASE("diagnostics write omega files") {
    const fs::path dir = scratch("diag");
    REQUIRE(run("--mass 0.3 --order 1 --chi-max 6 --sites-exponent 5 --diagnostics --omega-matrix-level 4 "
                "--output-dir " +
                dir.string()) == 0);
    CHECK(read(dir / "omega_trace.csv").rfind("level,i,omega2,omega4\n", 0) == 0);
    CHECK(read(dir / "omega_matrix.csv").rfind("level,i,j,omega\n", 0) == 0);
    const auto j = nlohmann::json::parse(read(dir / "summary.json"));
    CHECK(j.contains("freeze_level"));
}

TEST_CASE("sweep keeps configuration order") {
    const fs::path dir = scratch("sweep");
    REQUIRE(run("--sweep-mass 0.1:1:log3 --sweep-chi 8,4 --order 0 --sites-exponent 8 --output-dir " +
                dir.string()) == 0);
    std::istringstream in(read(dir / "fig2_data.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "mass,chi_max,order,f0,delta_f0,f1,delta_f1");
    std::getline(in, line);
    CHECK(line.rfind("0.10000000000000001,8,0,", 0) == 0);
    std::getline(in, line);
    CHECK(line.rfind("0.10000000000000001,4,0,", 0) == 0);
    int rest = 0;
    while (std::getline(in, line)) ++rest;
    CHECK(rest == 4);
}

TEST_CASE("reruns are byte-identical") {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    const std::string args = "--mass 0.4 --order 1 --chi-max 8 --sites-exponent 8 --no-wall-time --output-dir ";
    REQUIRE(run(args + a.string()) == 0);
    REQUIRE(run(args + b.string()) == 0);
    CHECK(read(a / "summary.json") == read(b / "summary.json"));
    CHECK(read(a / "flow_trace.csv") == read(b / "flow_trace.csv"));
}

TEST_CASE("exit codes") {
    const fs::path dir = scratch("codes");
    CHECK(run("--mass -1 --output-dir " + dir.string()) == 2);
    CHECK(run("--order 2 --output-dir " + dir.string()) == 2);
    CHECK(run("--no-such-flag") == 2);
    CHECK(run("--emit xml --output-dir " + dir.string()) == 2);
    CHECK(run("--sweep-mass 0:1:log4 --output-dir " + dir.string()) == 2);
    CHECK(run("--order 1 --mass 0.5 --diagnostics --chi-max 32 --output-dir " + dir.string()) == 2);
    CHECK(run("--mass 1 --sites-exponent 2 --output-dir /proc/forbidden") == 4);
    CHECK(run("--help") == 0);
}
