#include "hypokol/problem_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace hypokol {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& origin, const std::string& msg) {
    throw Error(Errc::Parse, origin + ": " + msg);
}

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where,
               const std::string& origin) {
    if (!j.is_object()) parse_fail(origin, where + " must be an object");
    for (const auto& [k, v] : j.items()) {
        (void)v;
        if (!allowed.count(k)) parse_fail(origin, "unknown key '" + k + "' in " + where);
    }
}

double num(const json& j, const char* key, double dflt) {
    if (!j.contains(key)) return dflt;
    return j.at(key).get<double>();
}

CoefficientField make_field(const json& j, const std::string& where, const std::string& origin) {
    if (!j.is_object() || !j.contains("type")) parse_fail(origin, where + " needs a \"type\"");
    const std::string type = j.at("type").get<std::string>();
    const int order = j.value("order", 3);
    if (type == "constant") {
        only_keys(j, {"type", "order", "value"}, where, origin);
        return fields::constant(num(j, "value", 0.0), order);
    }
    if (type == "linear") {
        only_keys(j, {"type", "order", "a0", "ax", "ay"}, where, origin);
        return fields::linear(num(j, "a0", 0.0), num(j, "ax", 0.0), num(j, "ay", 0.0), order);
    }
    if (type == "tanh") {
        only_keys(j, {"type", "shift", "scale"}, where, origin);
        return fields::tanh_drift(num(j, "shift", -2.0), num(j, "scale", 1.0));
    }
    if (type == "tanh_perturbed") {
        only_keys(j, {"type", "delta", "cx", "cy", "radius"}, where, origin);
        return fields::tanh_perturbed(num(j, "delta", 0.1), num(j, "cx", 1.0), num(j, "cy", 0.0),
                                      num(j, "radius", 0.5));
    }
    if (type == "gaussian_cdf") {
        only_keys(j, {"type", "shift"}, where, origin);
        return fields::gaussian_cdf(num(j, "shift", -2.0));
    }
    if (type == "tabulated") {
        only_keys(j, {"type", "order", "xs", "ys", "values"}, where, origin);
        return fields::tabulated(j.at("xs").get<std::vector<double>>(),
                                 j.at("ys").get<std::vector<double>>(),
                                 j.at("values").get<std::vector<std::vector<double>>>(), order);
    }
    parse_fail(origin, "unknown field type '" + type + "' in " + where);
}

struct Closure {
    std::function<double(double, double, double)> fn;  // (t, x, y)
    bool zero = false;
};

// "exp_cos" decays in x for u_init and in t for f and u_side.
Closure make_closure(const json& j, const std::string& where, bool decay_in_x,
                     const std::string& origin) {
    if (!j.is_object() || !j.contains("name")) parse_fail(origin, where + " needs a \"name\"");
    const std::string name = j.at("name").get<std::string>();
    if (name == "zero") {
        only_keys(j, {"name"}, where, origin);
        return {[](double, double, double) { return 0.0; }, true};
    }
    if (name == "constant") {
        only_keys(j, {"name", "value"}, where, origin);
        const double v = num(j, "value", 0.0);
        return {[v](double, double, double) { return v; }, v == 0.0};
    }
    if (name == "exp_cos") {
        only_keys(j, {"name", "a", "b"}, where, origin);
        const double a = num(j, "a", 0.5), b = num(j, "b", 0.5);
        if (decay_in_x)
            return {[a, b](double, double x, double y) { return a + b * std::exp(-x) * std::cos(y); },
                    a == 0.0 && b == 0.0};
        return {[a, b](double t, double, double y) { return a + b * std::exp(-t) * std::cos(y); },
                a == 0.0 && b == 0.0};
    }
    if (name == "gaussian_bump") {
        only_keys(j, {"name", "a", "cx", "cy", "width"}, where, origin);
        const double a = num(j, "a", 1.0), cx = num(j, "cx", 1.0), cy = num(j, "cy", 0.0),
                     w = num(j, "width", 0.5);
        if (!(w > 0.0)) parse_fail(origin, where + ": width must be positive");
        return {[a, cx, cy, w](double, double x, double y) {
                    const double dx = x - cx, dy = y - cy;
                    return a * std::exp(-(dx * dx + dy * dy) / (2.0 * w * w));
                },
                a == 0.0};
    }
    parse_fail(origin, "unknown closure '" + name + "' in " + where);
}

void read_quadrature(const json& j, QuadConfig& q, const std::string& origin) {
    only_keys(j, {"n_u", "n_v", "n_far", "n_time", "grading", "n_panel", "radius"}, "quadrature",
              origin);
    q.n_u = j.value("n_u", q.n_u);
    q.n_v = j.value("n_v", q.n_v);
    q.n_far = j.value("n_far", q.n_far);
    q.n_time = j.value("n_time", q.n_time);
    q.grading = j.value("grading", q.grading);
    q.n_panel = j.value("n_panel", q.n_panel);
    q.radius = j.value("radius", q.radius);
}

void read_solver(const json& j, SolverConfig& s, const std::string& origin) {
    only_keys(j,
              {"nt", "nx", "ny", "nt_side", "ny_side", "x_max", "y_max", "t_floor", "max_iter",
               "tail_tol", "threads"},
              "solver", origin);
    s.nt = j.value("nt", s.nt);
    s.nx = j.value("nx", s.nx);
    s.ny = j.value("ny", s.ny);
    s.nt_side = j.value("nt_side", s.nt_side);
    s.ny_side = j.value("ny_side", s.ny_side);
    s.x_max = j.value("x_max", s.x_max);
    s.y_max = j.value("y_max", s.y_max);
    s.t_floor = j.value("t_floor", s.t_floor);
    s.max_iter = j.value("max_iter", s.max_iter);
    s.tail_tol = j.value("tail_tol", s.tail_tol);
    s.threads = j.value("threads", s.threads);
}

void read_oracle(const json& j, PathConfig& p, const std::string& origin) {
    only_keys(j, {"paths", "dt", "seed", "mode", "antithetic", "threads"}, "oracle", origin);
    p.paths = j.value("paths", p.paths);
    p.dt = j.value("dt", p.dt);
    p.seed = j.value("seed", p.seed);
    p.antithetic = j.value("antithetic", p.antithetic);
    p.threads = j.value("threads", p.threads);
    const std::string mode = j.value("mode", std::string("interpolate"));
    if (mode == "interpolate") p.mode = ExitMode::Interpolate;
    else if (mode == "endpoint") p.mode = ExitMode::Endpoint;
    else parse_fail(origin, "oracle.mode must be interpolate or endpoint");
}

const char* kTanhBenchmark = R"({
  "name": "tanh_benchmark",
  "horizon": 0.5,
  "b1": {"type": "tanh", "shift": -2.0, "scale": 1.0},
  "b2": {"type": "constant", "value": 0.0},
  "c": {"type": "constant", "value": 0.0},
  "f": {"name": "zero"},
  "u_init": {"name": "exp_cos", "a": 0.5, "b": 0.5},
  "u_side": {"name": "exp_cos", "a": 0.5, "b": 0.5},
  "oracle": {"paths": 200000, "dt": 0.001, "seed": 1, "mode": "interpolate"},
  "probes": [[0.5, 0.25, -0.5], [0.5, 0.25, 0.5], [0.5, 0.5, -0.5], [0.5, 0.5, 0.5],
             [0.5, 1.0, -0.5], [0.5, 1.0, 0.5], [0.5, 1.5, -0.5], [0.5, 1.5, 0.5],
             [0.5, 2.0, -0.5], [0.5, 2.0, 0.5]]
})";

const char* kConstant = R"({
  "name": "constant",
  "horizon": 0.5,
  "b1": {"type": "tanh", "shift": -2.0, "scale": 1.0},
  "b2": {"type": "constant", "value": 0.0},
  "c": {"type": "constant", "value": 0.0},
  "f": {"name": "zero"},
  "u_init": {"name": "constant", "value": 1.0},
  "u_side": {"name": "constant", "value": 1.0},
  "probes": [[0.5, 0.25, 0.0], [0.5, 0.5, -0.5], [0.5, 1.0, 0.5], [0.25, 1.5, 0.0], [0.5, 2.0, 0.0]]
})";

const char* kZero = R"({
  "name": "zero",
  "horizon": 0.5,
  "b1": {"type": "tanh", "shift": -2.0, "scale": 1.0},
  "b2": {"type": "constant", "value": 0.0},
  "c": {"type": "constant", "value": 0.0},
  "f": {"name": "zero"},
  "u_init": {"name": "zero"},
  "u_side": {"name": "zero"},
  "probes": [[0.5, 0.25, 0.0], [0.5, 0.5, -0.5], [0.5, 1.0, 0.5], [0.25, 1.5, 0.0], [0.5, 2.0, 0.0]]
})";

} // namespace

ProblemFile parse_problem(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text, nullptr, true, true);
    } catch (const json::exception& e) {
        parse_fail(origin, e.what());
    }
    ProblemFile pf;
    pf.path = origin;
    try {
        only_keys(j,
                  {"name", "horizon", "b1", "b2", "c", "f", "u_init", "u_side", "quadrature",
                   "solver", "oracle", "probes"},
                  "problem", origin);
        for (const char* k : {"horizon", "b1", "u_init", "u_side"})
            if (!j.contains(k)) parse_fail(origin, std::string("missing key '") + k + "'");
        const json zero_field = {{"type", "constant"}, {"value", 0.0}};
        const json zero_fn = {{"name", "zero"}};
        CoefficientField b1 = make_field(j.at("b1"), "b1", origin);
        CoefficientField b2 = make_field(j.value("b2", zero_field), "b2", origin);
        CoefficientField c = make_field(j.value("c", zero_field), "c", origin);
        const Closure f = make_closure(j.value("f", zero_fn), "f", false, origin);
        const Closure ui = make_closure(j.at("u_init"), "u_init", true, origin);
        const Closure us = make_closure(j.at("u_side"), "u_side", false, origin);
        auto uif = ui.fn;
        auto usf = us.fn;
        pf.spec = make_spec(
            j.value("name", std::string("problem")), std::move(b1), std::move(b2), std::move(c), f.fn,
            [uif](double x, double y) { return uif(0.0, x, y); },
            [usf](double t, double y) { return usf(t, 0.0, y); }, j.at("horizon").get<double>());
        pf.spec.zero_data = f.zero && ui.zero && us.zero;
        if (j.contains("quadrature")) read_quadrature(j.at("quadrature"), pf.solver.quad, origin);
        if (j.contains("solver")) read_solver(j.at("solver"), pf.solver, origin);
        if (j.contains("oracle")) read_oracle(j.at("oracle"), pf.oracle, origin);
        if (j.contains("probes")) {
            for (const auto& p : j.at("probes")) {
                if (!p.is_array() || p.size() != 3) parse_fail(origin, "each probe is [t, x, y]");
                pf.probes.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
            }
        }
        pf.solver.probes = pf.probes;
    } catch (const json::exception& e) {
        parse_fail(origin, e.what());
    }
    return pf;
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Parse, "cannot open problem file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str(), path);
}

std::vector<Probe> load_probes(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Parse, "cannot open probe file " + path);
    std::vector<Probe> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        for (char& ch : line)
            if (ch == ',') ch = ' ';
        std::istringstream ls(line);
        Probe p{};
        if (!(ls >> p.t >> p.x >> p.y)) {
            if (out.empty() && lineno == 1) continue;  // header
            throw Error(Errc::Parse, path + ":" + std::to_string(lineno) + ": expected t,x,y");
        }
        out.push_back(p);
    }
    if (out.empty()) throw Error(Errc::Parse, path + ": no probe points");
    return out;
}

std::vector<std::string> closure_names() {
    return {"zero", "constant", "exp_cos", "gaussian_bump"};
}

ProblemFile tanh_benchmark() { return parse_problem(kTanhBenchmark, "tanh_benchmark"); }
ProblemFile constant_problem() { return parse_problem(kConstant, "constant"); }
ProblemFile zero_problem() { return parse_problem(kZero, "zero"); }

} // namespace hypokol
