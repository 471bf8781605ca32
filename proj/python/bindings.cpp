#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hypokol/cli.hpp"
#include "hypokol/report.hpp"
#include "hypokol/verify.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace hypokol;

namespace {

ProblemFile problem_named(const std::string& what) {
    if (what == "tanh_benchmark") return tanh_benchmark();
    if (what == "constant") return constant_problem();
    if (what == "zero") return zero_problem();
    return load_problem(what);
}

std::vector<Probe> to_probes(const std::vector<std::array<double, 3>>& pts) {
    std::vector<Probe> out;
    for (const auto& p : pts) out.push_back({p[0], p[1], p[2]});
    return out;
}

} // namespace

PYBIND11_MODULE(_hypokol, m) {
    m.doc() = "Parametrix solver for a degenerate Kolmogorov-type boundary value problem";
    py::register_exception<Error>(m, "HypokolError", PyExc_ValueError);

    py::class_<Probe>(m, "Probe")
        .def(py::init([](double t, double x, double y) { return Probe{t, x, y}; }), "t"_a, "x"_a, "y"_a)
        .def_readwrite("t", &Probe::t)
        .def_readwrite("x", &Probe::x)
        .def_readwrite("y", &Probe::y)
        .def("__repr__", [](const Probe& p) {
            std::ostringstream os;
            os << "Probe(t=" << p.t << ", x=" << p.x << ", y=" << p.y << ")";
            return os.str();
        });

    py::class_<ProblemFile>(m, "Problem")
        .def_property_readonly("name", [](const ProblemFile& p) { return p.spec.name; })
        .def_property_readonly("horizon", [](const ProblemFile& p) { return p.spec.horizon; })
        .def_property_readonly("zero_data", [](const ProblemFile& p) { return p.spec.zero_data; })
        .def_readonly("probes", &ProblemFile::probes)
        .def("b1", [](const ProblemFile& p, double x, double y) { return p.spec.b1.value(x, y); })
        .def("u_init", [](const ProblemFile& p, double x, double y) { return p.spec.u_init(x, y); })
        .def("u_side", [](const ProblemFile& p, double t, double y) { return p.spec.u_side(t, y); })
        .def("basics_ok", [](const ProblemFile& p) { return validate_assumptions(p.spec).pass_basics; });

    m.def("load_problem", &problem_named, "path_or_name"_a,
          "Load a JSON problem file, or one of the built-ins: tanh_benchmark, constant, zero.");
    m.def("parse_problem", [](const std::string& text) { return parse_problem(text); }, "text"_a);

    m.def(
        "solve",
        [](const ProblemFile& pf, std::optional<std::vector<std::array<double, 3>>> probes,
           std::optional<std::array<int, 5>> grid, int threads) {
            SolverConfig cfg = pf.solver;
            cfg.probes = probes ? to_probes(*probes) : pf.probes;
            if (grid) {
                cfg.nt = (*grid)[0];
                cfg.nx = (*grid)[1];
                cfg.ny = (*grid)[2];
                cfg.nt_side = (*grid)[3];
                cfg.ny_side = (*grid)[4];
            }
            cfg.threads = threads;
            cfg.throw_on_nonconvergence = false;
            py::dict out;
            std::vector<SolutionRow> rows;
            Solution sol;
            {
                py::gil_scoped_release nogil;
                const VolterraSolver s(pf.spec, cfg);
                sol = s.solve();
                rows = evaluate_probes(s, sol, cfg.probes);
            }
            std::vector<double> u, err;
            for (const auto& r : rows) {
                u.push_back(r.u);
                err.push_back(r.est_error);
            }
            out["probes"] = cfg.probes;
            out["u"] = u;
            out["est_error"] = err;
            out["iterations"] = sol.iterations;
            out["converged"] = sol.converged;
            out["tail"] = sol.tail;
            out["norm_interior"] = sol.norm_interior;
            out["norm_side"] = sol.norm_side;
            return out;
        },
        "problem"_a, "probes"_a = py::none(), "grid"_a = py::none(), "threads"_a = 0,
        "Solve and evaluate u at the probes; grid is (nt, nx, ny, nt_side, ny_side).");

    m.def(
        "oracle",
        [](const ProblemFile& pf, std::optional<std::vector<std::array<double, 3>>> probes,
           std::int64_t paths, double dt, std::uint64_t seed, int threads) {
            PathConfig pc = pf.oracle;
            pc.paths = paths;
            pc.dt = dt;
            pc.seed = seed;
            pc.threads = threads;
            pc.validate();
            const std::vector<Probe> pts = probes ? to_probes(*probes) : pf.probes;
            std::vector<OracleRow> rows;
            {
                py::gil_scoped_release nogil;
                rows = oracle_probes(pf.spec, pts, pc);
            }
            std::vector<std::pair<double, double>> out;
            for (const auto& r : rows) out.emplace_back(r.e.mean, r.e.std_error);
            return out;
        },
        "problem"_a, "probes"_a = py::none(), "paths"_a = 10000, "dt"_a = 1e-3, "seed"_a = 1,
        "threads"_a = 0, "Feynman-Kac estimates (mean, stderr) at the probes.");

    m.def("kernel", [](double x0, double y0, double b1, double b2, double B, double t, double x,
                       double y) { return kernel_K(make_frozen(x0, y0, b1, b2, B), t, x, y); },
          "x0"_a, "y0"_a, "b1"_a, "b2"_a, "B"_a, "t"_a, "x"_a, "y"_a,
          "Frozen Gaussian kernel with explicit coefficients.");

    m.def("operator_matrix", []() {
        const IntMatrix6 a = assemble_operator_matrix();
        std::vector<std::vector<long long>> out;
        for (const auto& row : a) out.emplace_back(row.begin(), row.end());
        return out;
    });
    m.def("chi", [](double a1, double a2) { return solve_chi(a1, a2).chi; }, "alpha1"_a, "alpha2"_a);

    m.def("suite_names", &suite_names);
    m.def(
        "run_suite",
        [](const std::string& name, std::uint64_t seed, std::int64_t paths, double dt) {
            VerifyOptions opt;
            opt.seed = seed;
            opt.paths = paths;
            opt.dt = dt;
            SuiteResult r;
            {
                py::gil_scoped_release nogil;
                r = run_suite(name, opt);
            }
            py::list rows;
            for (const auto& c : r.rows) {
                py::dict d;
                d["check"] = c.check;
                d["measured"] = c.measured;
                d["expected"] = c.expected;
                d["tolerance"] = c.tolerance;
                d["pass"] = c.pass;
                d["detail"] = c.detail;
                rows.append(d);
            }
            return rows;
        },
        "name"_a, "seed"_a = 1, "paths"_a = 200000, "dt"_a = 1e-3);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release nogil;
                code = run_cli(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        "args"_a, "Run the command-line tool in-process; returns (exit code, stdout, stderr).");
}
