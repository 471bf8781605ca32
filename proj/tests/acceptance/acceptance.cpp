// Acceptance run: one line per criterion, failing checks listed afterwards.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hypokol/report.hpp"
#include "hypokol/verify.hpp"

using namespace hypokol;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    int id;
    std::string title;
    std::vector<std::string> suites;
    double budget;  // seconds
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Runs the command-line tool twice per case and compares the CSV bytes.
bool cli_determinism(std::vector<std::string>& failures) {
    const std::string exe = HYPOKOL_CLI;
    const std::string problems = HYPOKOL_SOURCE_DIR "/problems/";
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"oracle --problem " + problems + "tanh_benchmark.json --paths 20000 --seed 11", "oracle.csv"},
        {"oracle --problem " + problems + "kolmogorov.json --paths 20000 --seed 3 --threads 2", "oracle.csv"},
        {"solve --problem " + problems + "tanh_benchmark.json --grid 4,8,8,8,12", "solution.csv"},
    };
    bool ok = true;
    int n = 0;
    for (const auto& [args, file] : cases) {
        std::string bytes[2];
        for (int r = 0; r < 2; ++r) {
            const fs::path dir = fs::path("acceptance_det") / (std::to_string(n) + "_" + std::to_string(r));
            fs::remove_all(dir);
            const std::string cmd = exe + " " + args + " --out " + dir.string() + " > /dev/null";
            const int rc = std::system(cmd.c_str());
            if (rc != 0) {
                failures.push_back("determinism: '" + args + "' exited with " + std::to_string(rc));
                ok = false;
            }
            bytes[r] = slurp(dir / file);
        }
        if (bytes[0].empty() || bytes[0] != bytes[1]) {
            failures.push_back("determinism: '" + args + "' produced different " + file);
            ok = false;
        }
        ++n;
    }
    fs::remove_all("acceptance_det");
    return ok;
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "matrix exactness", {"matrix"}, 1},
        {2, "projected-equation identity", {"projected"}, 1},
        {3, "kernel normalization", {"normalization"}, 10},
        {4, "linearized annihilation", {"annihilation"}, 10},
        {5, "correction efficacy", {"correction"}, 30},
        {6, "Dirac limit", {"dirac"}, 60},
        {7, "jump boundary", {"laplace", "jump"}, 120},
        {8, "Volterra decay", {"decay"}, 600},
        {9, "exact special solutions", {"special"}, 300},
        {10, "solver-oracle agreement", {"compare"}, 900},
        {11, "oracle statistics", {"statistics"}, 60},
        {12, "determinism", {"determinism"}, 600},
    };
    VerifyOptions opt;
    std::vector<std::string> failures;
    std::vector<std::string> lines;
    bool all = true;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        bool pass = true;
        std::size_t checks = 0, passed = 0;
        for (const auto& s : c.suites) {
            try {
                const SuiteResult r = run_suite(s, opt);
                for (const auto& row : r.rows) {
                    ++checks;
                    if (row.pass) {
                        ++passed;
                        continue;
                    }
                    pass = false;
                    failures.push_back(s + ": " + row.check + ": measured " + fmt17(row.measured) +
                                       ", expected " + fmt17(row.expected) + ", tolerance " +
                                       fmt17(row.tolerance) + (row.detail.empty() ? "" : " (" + row.detail + ")"));
                }
            } catch (const std::exception& e) {
                pass = false;
                failures.push_back(s + ": threw: " + e.what());
            }
        }
        if (c.id == 12) {
            ++checks;
            if (cli_determinism(failures)) ++passed;
            else pass = false;
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs >= c.budget) {
            pass = false;
            failures.push_back("criterion " + std::to_string(c.id) + ": runtime " + fmt17(secs) +
                               " s over the " + fmt17(c.budget) + " s budget");
        }
        all = all && pass;
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s criterion %2d  %-30s %zu/%zu checks  %7.1f s (budget %.0f s)",
                      pass ? "PASS" : "FAIL", c.id, c.title.c_str(), passed, checks, secs, c.budget);
        lines.push_back(buf);
        std::cout << buf << std::endl;
    }
    if (!failures.empty()) {
        std::cout << "\nfailing checks:\n";
        for (const auto& f : failures) std::cout << "  " << f << "\n";
    }
    std::cout << "\nsummary:\n";
    for (const auto& l : lines) std::cout << l << "\n";
    return all ? 0 : 1;
}
