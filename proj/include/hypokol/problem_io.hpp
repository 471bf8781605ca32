#pragma once

#include <string>
#include <vector>

#include "hypokol/mc.hpp"
#include "hypokol/volterra.hpp"

namespace hypokol {

// Everything a problem file can carry. Blocks other than the coefficients are optional.
struct ProblemFile {
    ProblemSpec spec;
    SolverConfig solver;
    PathConfig oracle;
    std::vector<Probe> probes;
    std::string path;
};

// Parse errors (bad JSON, unknown names, missing keys) throw Errc::Parse.
ProblemFile parse_problem(const std::string& text, const std::string& origin = "<string>");
ProblemFile load_problem(const std::string& path);

// Probe file: CSV with columns t,x,y; a header line and '#' comments are skipped.
std::vector<Probe> load_probes(const std::string& path);

// Names accepted for f, u_init and u_side.
std::vector<std::string> closure_names();

// Built-in problems used by the tests and the CLI defaults.
ProblemFile tanh_benchmark();
ProblemFile constant_problem();
ProblemFile zero_problem();

} // namespace hypokol
