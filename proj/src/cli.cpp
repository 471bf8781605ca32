#include "hypokol/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hypokol/problem_io.hpp"
#include "hypokol/report.hpp"
#include "hypokol/verify.hpp"

namespace hypokol {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string problem;
    std::string out = ".";
    std::string probes;
    std::string suite = "all";
    std::string grid;
    std::uint64_t seed = 1;
    std::int64_t paths = 0;  // 0: take it from the problem file
    double dt = 0.0;
    int threads = 0;
};

// Built-in names are accepted where a file would be, as long as no such file exists.
ProblemFile resolve_problem(const std::string& what) {
    if (what.empty()) return tanh_benchmark();
    if (fs::exists(what)) return load_problem(what);
    if (what == "tanh_benchmark") return tanh_benchmark();
    if (what == "constant") return constant_problem();
    if (what == "zero") return zero_problem();
    throw Error(Errc::Parse, "problem file '" + what + "' not found");
}

void apply_grid(SolverConfig& cfg, const std::string& grid) {
    if (grid.empty()) return;
    std::vector<int> v;
    std::stringstream ss(grid);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(Errc::Parse, "--grid expects integers, got '" + grid + "'");
        }
    }
    if (v.size() != 3 && v.size() != 5)
        throw Error(Errc::Parse, "--grid expects nt,nx,ny or nt,nx,ny,nt_side,ny_side");
    cfg.nt = v[0];
    cfg.nx = v[1];
    cfg.ny = v[2];
    if (v.size() == 5) {
        cfg.nt_side = v[3];
        cfg.ny_side = v[4];
    }
}

PathConfig path_config(const ProblemFile& pf, const Options& o, bool seed_given) {
    PathConfig pc = pf.oracle;
    if (o.paths > 0) pc.paths = o.paths;
    if (o.dt > 0.0) pc.dt = o.dt;
    if (seed_given) pc.seed = o.seed;
    if (o.threads > 0) pc.threads = o.threads;
    pc.validate();
    return pc;
}

fs::path prepare_out(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error(Errc::Parse, "cannot create output directory '" + dir + "'");
    return fs::path(dir);
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    f << text;
    if (!f) throw Error(Errc::Parse, "cannot write '" + p.string() + "'");
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

std::vector<Probe> probes_for(const ProblemFile& pf, const Options& o) {
    std::vector<Probe> p = o.probes.empty() ? pf.probes : load_probes(o.probes);
    if (p.empty()) throw Error(Errc::InvalidSpec, "no probe points: give --probes or a probes block");
    return p;
}

struct Solved {
    std::unique_ptr<VolterraSolver> solver;
    Solution sol;
    std::vector<SolutionRow> rows;
};

Solved solve_at(const ProblemFile& pf, const Options& o, const std::vector<Probe>& probes) {
    SolverConfig cfg = pf.solver;
    apply_grid(cfg, o.grid);
    cfg.probes = probes;
    cfg.throw_on_nonconvergence = false;
    if (o.threads > 0) cfg.threads = o.threads;
    Solved s;
    s.solver = std::make_unique<VolterraSolver>(pf.spec, cfg);
    s.sol = s.solver->solve();
    s.rows = evaluate_probes(*s.solver, s.sol, probes);
    return s;
}

int cmd_solve(const Options& o, std::ostream& out) {
    const ProblemFile pf = resolve_problem(o.problem);
    const auto probes = probes_for(pf, o);
    const fs::path dir = prepare_out(o.out);
    Solved s = solve_at(pf, o, probes);
    write_file(dir / "solution.csv", solution_csv(s.rows));
    write_file(dir / "diagnostics.txt", diagnostics_text(pf.spec, s.solver->config(), s.sol, s.rows));
    out << "solve " << pf.spec.name << ": " << s.sol.iterations << " iterations, tail "
        << fmt17(s.sol.tail) << (s.sol.converged ? "" : " (not converged)") << "\n";
    out << "wrote " << (dir / "solution.csv").string() << "\n";
    return s.sol.converged ? kExitOk : kExitNonConvergence;
}

int cmd_oracle(const Options& o, bool seed_given, std::ostream& out) {
    const ProblemFile pf = resolve_problem(o.problem);
    const auto probes = probes_for(pf, o);
    const fs::path dir = prepare_out(o.out);
    const PathConfig pc = path_config(pf, o, seed_given);
    write_file(dir / "oracle.csv", oracle_csv(oracle_probes(pf.spec, probes, pc)));
    out << "oracle " << pf.spec.name << ": " << probes.size() << " probes, " << pc.paths
        << " paths, dt " << fmt17(pc.dt) << "\n";
    out << "wrote " << (dir / "oracle.csv").string() << "\n";
    return kExitOk;
}

int cmd_compare(const Options& o, bool seed_given, std::ostream& out) {
    const ProblemFile pf = resolve_problem(o.problem);
    const auto probes = probes_for(pf, o);
    const fs::path dir = prepare_out(o.out);
    const PathConfig pc = path_config(pf, o, seed_given);
    Solved s = solve_at(pf, o, probes);
    const auto cmp = compare_rows(s.rows, oracle_probes(pf.spec, probes, pc), 2e-2);
    write_file(dir / "compare.csv", compare_csv(cmp));
    std::size_t bad = 0;
    for (const auto& c : cmp) bad += c.pass ? 0 : 1;
    out << "compare " << pf.spec.name << ": " << (cmp.size() - bad) << "/" << cmp.size()
        << " probes within tolerance\n";
    out << "wrote " << (dir / "compare.csv").string() << "\n";
    if (!s.sol.converged) return kExitNonConvergence;
    return bad ? kExitCheckFailed : kExitOk;
}

int cmd_verify(const Options& o, bool seed_given, std::ostream& out) {
    std::vector<std::string> names;
    if (o.suite == "all") {
        names = suite_names();
    } else {
        std::stringstream ss(o.suite);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            const auto& known = suite_names();
            if (std::find(known.begin(), known.end(), item) == known.end())
                throw Error(Errc::Parse, "unknown suite '" + item + "'");
            names.push_back(item);
        }
    }
    VerifyOptions vo;
    if (seed_given) vo.seed = o.seed;
    if (o.paths > 0) vo.paths = o.paths;
    if (o.dt > 0.0) vo.dt = o.dt;
    vo.threads = o.threads;
    if (!o.grid.empty()) {
        SolverConfig sc = tanh_benchmark().solver;
        apply_grid(sc, o.grid);
        vo.solver = sc;
    }
    const fs::path dir = prepare_out(o.out);
    std::string csv = "suite,check,measured,expected,tolerance,pass,detail\n";
    std::string text;
    bool all_pass = true;
    for (const auto& n : names) {
        const SuiteResult r = run_suite(n, vo);
        std::size_t ok = 0;
        for (const auto& c : r.rows) {
            ok += c.pass ? 1 : 0;
            csv += n + "," + csv_field(c.check) + "," + fmt17(c.measured) + "," + fmt17(c.expected) +
                   "," + fmt17(c.tolerance) + "," + (c.pass ? "1" : "0") + "," + csv_field(c.detail) +
                   "\n";
        }
        all_pass = all_pass && r.pass();
        char secs[32];
        std::snprintf(secs, sizeof secs, "%.1f", r.seconds);
        out << (r.pass() ? "PASS " : "FAIL ") << n << " " << ok << "/" << r.rows.size() << " (" << secs
            << " s)" << std::endl;
        text += "== " + n + "\n" + r.text;
        if (!r.text.empty() && r.text.back() != '\n') text += "\n";
        for (const auto& c : r.rows)
            if (!c.pass)
                text += "failed: " + c.check + " measured " + fmt17(c.measured) + " expected " +
                        fmt17(c.expected) + " tolerance " + fmt17(c.tolerance) + "\n";
    }
    write_file(dir / "verify.csv", csv);
    write_file(dir / "verify.txt", text);
    return all_pass ? kExitOk : kExitCheckFailed;
}

int exit_for(Errc c) {
    switch (c) {
        case Errc::Parse: return kExitParse;
        case Errc::NonConvergence: return kExitNonConvergence;
        case Errc::InvalidSpec:
        case Errc::OutOfDomain:
        case Errc::MarginViolation:
        case Errc::NonPositiveTime:
        case Errc::NonPositiveCoordinate:
        case Errc::OrderExceeded:
        case Errc::StepTooLarge:
        case Errc::GridMismatch:
        case Errc::RuleUndersized: return kExitValidation;
    }
    return kExitInternal;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hypoelliptic Kolmogorov-type boundary value solver", "hypokol"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--problem", o.problem, "problem file (JSON), or a built-in name");
        sub->add_option("--out", o.out, "output directory")->capture_default_str();
        sub->add_option("--threads", o.threads, "worker threads (0: all cores)");
    };
    auto* solve = app.add_subcommand("solve", "solve the problem and evaluate it at the probes");
    add_common(solve);
    solve->add_option("--probes", o.probes, "probe CSV (t,x,y)");
    solve->add_option("--grid", o.grid, "nt,nx,ny[,nt_side,ny_side]");

    auto* verify = app.add_subcommand("verify", "run the acceptance suites");
    verify->add_option("--out", o.out, "output directory")->capture_default_str();
    verify->add_option("--suite", o.suite, "comma-separated suite names, or all")->capture_default_str();
    auto* vseed = verify->add_option("--seed", o.seed, "random seed");
    verify->add_option("--paths", o.paths, "Monte Carlo paths");
    verify->add_option("--dt", o.dt, "Monte Carlo time step");
    verify->add_option("--grid", o.grid, "nt,nx,ny[,nt_side,ny_side]");
    verify->add_option("--threads", o.threads, "worker threads (0: all cores)");

    auto* compare = app.add_subcommand("compare", "solve and compare against the path oracle");
    add_common(compare);
    compare->add_option("--probes", o.probes, "probe CSV (t,x,y)");
    compare->add_option("--grid", o.grid, "nt,nx,ny[,nt_side,ny_side]");
    auto* cseed = compare->add_option("--seed", o.seed, "random seed");
    compare->add_option("--paths", o.paths, "Monte Carlo paths");
    compare->add_option("--dt", o.dt, "Monte Carlo time step");

    auto* oracle = app.add_subcommand("oracle", "Monte Carlo estimates at the probes");
    add_common(oracle);
    oracle->add_option("--probes", o.probes, "probe CSV (t,x,y)");
    auto* oseed = oracle->add_option("--seed", o.seed, "random seed");
    oracle->add_option("--paths", o.paths, "Monte Carlo paths");
    oracle->add_option("--dt", o.dt, "Monte Carlo time step");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "hypokol: " << e.what() << "\n";
        return kExitParse;
    }

    try {
        if (*solve) return cmd_solve(o, out);
        if (*verify) return cmd_verify(o, vseed->count() > 0, out);
        if (*compare) return cmd_compare(o, cseed->count() > 0, out);
        if (*oracle) return cmd_oracle(o, oseed->count() > 0, out);
    } catch (const Error& e) {
        err << "hypokol: " << e.what() << "\n";
        return exit_for(e.code());
    } catch (const std::exception& e) {
        err << "hypokol: internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}

} // namespace hypokol
