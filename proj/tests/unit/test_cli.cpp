#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hypokol/cli.hpp"

using namespace hypokol;

namespace {

namespace fs = std::filesystem;

const std::string kProblems = HYPOKOL_SOURCE_DIR "/problems/";

int run(std::vector<std::string> args, std::string* out_text = nullptr) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    if (out_text) *out_text = out.str() + err.str();
    return code;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with 2") {
    CHECK(run({}) == kExitParse);
    CHECK(run({"frobnicate"}) == kExitParse);
    CHECK(run({"solve", "--bogus"}) == kExitParse);
    CHECK(run({"solve", "--problem", "no/such/file.json"}) == kExitParse);
    CHECK(run({"solve", "--grid", "4,x,8"}) == kExitParse);
    CHECK(run({"verify", "--suite", "nonsense", "--out", "cli_out"}) == kExitParse);
    CHECK(run({"--help"}) == kExitOk);
}

TEST_CASE("assumption violations exit with 3") {
    std::string text;
    CHECK(run({"solve", "--problem", kProblems + "kolmogorov.json", "--out", "cli_out"}, &text) ==
          kExitValidation);
    CHECK(text.find("b1") != std::string::npos);
}

TEST_CASE("oracle writes a deterministic CSV") {
    const std::vector<std::string> args = {"oracle", "--problem", kProblems + "kolmogorov.json",
                                           "--paths", "500", "--dt", "0.01", "--seed", "9"};
    auto a = args, b = args;
    a.insert(a.end(), {"--out", "cli_a"});
    b.insert(b.end(), {"--out", "cli_b", "--threads", "2"});
    REQUIRE(run(a) == kExitOk);
    REQUIRE(run(b) == kExitOk);
    const std::string ca = slurp("cli_a/oracle.csv");
    CHECK(ca.rfind("t,x,y,estimate,stderr\n", 0) == 0);
    CHECK(ca == slurp("cli_b/oracle.csv"));
    fs::remove_all("cli_a");
    fs::remove_all("cli_b");
}

TEST_CASE("solve writes the solution and diagnostics") {
    REQUIRE(run({"solve", "--problem", kProblems + "zero.json", "--grid", "3,6,6,6,8", "--out", "cli_s"}) == kExitOk);
    const std::string csv = slurp("cli_s/solution.csv");
    CHECK(csv.rfind("t,x,y,u,est_error\n", 0) == 0);
    CHECK(slurp("cli_s/diagnostics.txt").find("converged: true") != std::string::npos);
    fs::remove_all("cli_s");
}

TEST_CASE("verify runs selected suites") {
    std::string text;
    CHECK(run({"verify", "--suite", "matrix,projected", "--out", "cli_v"}, &text) == kExitOk);
    CHECK(text.find("PASS matrix") != std::string::npos);
    CHECK(slurp("cli_v/verify.txt").find("== matrix") != std::string::npos);
    fs::remove_all("cli_v");
    fs::remove_all("cli_out");
}

}
