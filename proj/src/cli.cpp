#include "varns/cli.hpp"

#include "varns/boundary.hpp"
#include "varns/energy.hpp"
#include "varns/errors.hpp"
#include "varns/io.hpp"
#include "varns/lagrangian.hpp"
#include "varns/operators.hpp"
#include "varns/scenario.hpp"
#include "varns/steady.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <set>

namespace varns::cli {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

GridSpec::GridSpec()
    : extent{2.0 * std::numbers::pi, 2.0 * std::numbers::pi}, nodes{16, 16},
      boundary{"periodic", "periodic"} {}

Grid GridSpec::make() const {
    if (dim < 1 || dim > 3) throw ConfigError("grid.dim must be 1, 2 or 3");
    const auto n = static_cast<std::size_t>(dim);
    if (extent.size() != n || nodes.size() != n || boundary.size() != n)
        throw ConfigError("grid.extent, grid.nodes and grid.boundary need grid.dim entries");
    std::array<double, 3> e{};
    std::array<int, 3> k{1, 1, 1};
    std::array<Boundary, 3> b{Boundary::Wall, Boundary::Wall, Boundary::Wall};
    for (std::size_t a = 0; a < n; ++a) {
        e[a] = extent[a];
        k[a] = nodes[a];
        b[a] = boundary_from_string(boundary[a]);
    }
    return Grid(dim, e, k, b, time_nodes, dt);
}

namespace {

Json solver_json(const SolveConfig& s) {
    return {{"newton_tol", s.newton_tol},
            {"max_newton", s.max_newton},
            {"continuation_steps", s.continuation_steps},
            {"time_scheme", s.time_scheme},
            {"linear_tol", s.linear_tol},
            {"max_picard", s.max_picard},
            {"max_pseudo_steps", s.max_pseudo_steps}};
}

Json config_json(const RunConfig& c) {
    Json j;
    j["grid"] = {{"dim", c.grid.dim},           {"extent", c.grid.extent},
                 {"nodes", c.grid.nodes},       {"boundary", c.grid.boundary},
                 {"time_nodes", c.grid.time_nodes}, {"dt", c.grid.dt}};
    j["nu"] = c.nu;
    j["solver"] = solver_json(c.solver);
    j["scenario"] = c.scenario;
    j["seed"] = c.seed;
    j["output"] = c.output;
    j["oscillator"] = {{"a", c.oscillator.a},
                       {"b", c.oscillator.b},
                       {"alpha", c.oscillator.alpha},
                       {"beta", c.oscillator.beta},
                       {"n", c.oscillator.n}};
    j["refine"] = c.refine;
    j["surface"] = c.surface;
    j["boundary_data"] = c.boundary_data;
    j["lid_speed"] = c.lid_speed;
    j["perturbation"] = c.perturbation;
    j["fd_step"] = c.fd_step;
    return j;
}

using Setter = std::function<void(const Json&)>;

void apply_object(const Json& obj, const std::string& where,
                  const std::map<std::string, Setter>& setters) {
    if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        const auto it = setters.find(key);
        if (it == setters.end())
            throw ConfigError("unknown key '" + (where.empty() ? key : where + "." + key) + "'");
        try {
            it->second(value);
        } catch (const Json::exception& e) {
            throw ConfigError("bad value for '" + key + "': " + e.what());
        }
    }
}

template <class T>
Setter set(T& target) {
    return [&target](const Json& v) { target = v.get<T>(); };
}

} // namespace

std::string to_json(const RunConfig& config) { return config_json(config).dump(2); }

void apply_json(RunConfig& c, const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON config: ") + e.what());
    }
    std::map<std::string, Setter> grid{{"dim", set(c.grid.dim)},
                                       {"extent", set(c.grid.extent)},
                                       {"nodes", set(c.grid.nodes)},
                                       {"boundary", set(c.grid.boundary)},
                                       {"time_nodes", set(c.grid.time_nodes)},
                                       {"dt", set(c.grid.dt)}};
    std::map<std::string, Setter> solver{{"newton_tol", set(c.solver.newton_tol)},
                                         {"max_newton", set(c.solver.max_newton)},
                                         {"continuation_steps", set(c.solver.continuation_steps)},
                                         {"time_scheme", set(c.solver.time_scheme)},
                                         {"linear_tol", set(c.solver.linear_tol)},
                                         {"max_picard", set(c.solver.max_picard)},
                                         {"max_pseudo_steps", set(c.solver.max_pseudo_steps)}};
    std::map<std::string, Setter> osc{{"a", set(c.oscillator.a)},
                                      {"b", set(c.oscillator.b)},
                                      {"alpha", set(c.oscillator.alpha)},
                                      {"beta", set(c.oscillator.beta)},
                                      {"n", set(c.oscillator.n)}};
    std::map<std::string, Setter> top{
        {"subcommand",
         [&c](const Json& v) {
             const auto s = v.get<std::string>();
             if (!c.subcommand.empty() && s != c.subcommand)
                 throw ConfigError("config is for subcommand '" + s + "', not '" + c.subcommand + "'");
         }},
        {"grid", [&](const Json& v) { apply_object(v, "grid", grid); }},
        {"nu", set(c.nu)},
        {"solver", [&](const Json& v) { apply_object(v, "solver", solver); }},
        {"scenario", set(c.scenario)},
        {"seed", set(c.seed)},
        {"output", set(c.output)},
        {"oscillator", [&](const Json& v) { apply_object(v, "oscillator", osc); }},
        {"refine", set(c.refine)},
        {"surface", set(c.surface)},
        {"boundary_data", set(c.boundary_data)},
        {"lid_speed", set(c.lid_speed)},
        {"perturbation", set(c.perturbation)},
        {"fd_step", set(c.fd_step)}};
    apply_object(doc, "", top);
}

FieldQuartet make_scenario(const std::string& scenario, const Grid& grid, double nu) {
    auto seed_of = [&](std::size_t prefix) {
        try {
            return static_cast<std::uint64_t>(std::stoull(scenario.substr(prefix)));
        } catch (const std::exception&) {
            throw ConfigError("bad scenario seed in '" + scenario + "'");
        }
    };
    if (scenario == "taylor-green") return taylor_green(nu, grid);
    if (scenario == "zero") return FieldQuartet::zeros(grid);
    if (scenario.rfind("random:", 0) == 0) return random_quartet(grid, seed_of(7));
    if (scenario.rfind("random-difference:", 0) == 0)
        return random_difference_quartet(grid, seed_of(18));
    if (scenario.rfind("file:", 0) == 0) return io::read_quartet(scenario.substr(5), grid);
    throw ConfigError("unknown scenario '" + scenario + "'");
}

namespace {

struct Outcome {
    Json summary;
    bool passed = true;
};

class Runner {
public:
    Runner(const RunConfig& c, fs::path out) : c_(c), out_(std::move(out)) {}

    Outcome dispatch(const std::string& cmd) {
        static const std::map<std::string, Outcome (Runner::*)()> table{
            {"oscillator", &Runner::oscillator},
            {"evaluate", &Runner::evaluate},
            {"residual", &Runner::residual},
            {"variation-check", &Runner::variation_check},
            {"energy", &Runner::energy},
            {"steady-cert", &Runner::steady_cert},
            {"inequality-audit", &Runner::inequality_audit},
            {"extended", &Runner::extended},
            {"boundary-audit", &Runner::boundary_audit},
            {"solve-unsteady", &Runner::solve_unsteady},
            {"solve-steady", &Runner::solve_steady},
            {"newton-dual", &Runner::newton_dual_cmd},
            {"taylor-green-verify", &Runner::taylor_green_verify}};
        return (this->*table.at(cmd))();
    }

private:
    Grid grid() const { return c_.grid.make(); }
    FieldQuartet scenario(const Grid& g) const { return make_scenario(c_.scenario, g, c_.nu); }

    void write_text(const std::string& name, const std::string& text) const {
        fs::create_directories(out_);
        std::ofstream f(out_ / name);
        if (!f) throw ConfigError("cannot write " + (out_ / name).string());
        f << text;
    }

    SurfaceData surface(const FieldQuartet& q) const {
        if (c_.surface == "trace") return {q.u, q.w};
        if (c_.surface == "zero") return {VectorField(q.grid()), VectorField(q.grid())};
        throw ConfigError("unknown surface '" + c_.surface + "'");
    }

    Outcome oscillator() {
        const OscillatorProblem& prob = c_.oscillator;
        if (auto m = prob.resonance()) {
            Json s{{"command", "oscillator"}, {"error", "resonance"}, {"m", *m},
                   {"message", "b - a^2 = m^2 pi^2: the variational problem is singular"}};
            return {s, false};
        }
        const OscillatorSolution sol = solve_oscillator_vp(prob);
        io::CsvTable table({"x", "y1", "y2", "y_mean", "y_diff", "analytic"});
        double max_err = 0.0, max_diff = 0.0, max_mean = 0.0;
        for (std::size_t i = 0; i < sol.x.size(); ++i) {
            const double exact = oscillator_exact(prob, sol.x[i]);
            table.add_row(std::vector<double>{sol.x[i], sol.y1[i], sol.y2[i], sol.y_mean[i],
                                              sol.y_diff[i], exact});
            max_err = std::max(max_err, std::abs(sol.y_mean[i] - exact));
            max_diff = std::max(max_diff, std::abs(sol.y_diff[i]));
            max_mean = std::max(max_mean, std::abs(sol.y_mean[i]));
        }
        write_text("oscillator.csv", table.str());
        OscillatorProblem fine = prob;
        fine.n = 2 * (prob.n - 1) + 1;
        const OscillatorSolution fsol = solve_oscillator_vp(fine);
        double fine_err = 0.0;
        for (std::size_t i = 0; i < fsol.x.size(); ++i)
            fine_err = std::max(fine_err, std::abs(fsol.y_mean[i] - oscillator_exact(fine, fsol.x[i])));
        const double order = (max_err > 0.0 && fine_err > 0.0) ? std::log2(max_err / fine_err) : 0.0;
        Json s{{"command", "oscillator"},
               {"J", sol.functional_value},
               {"galerkin_residual", galerkin_identity_residual(sol.y1, sol.y2, prob)},
               {"max_err", max_err},
               {"order_estimate", order},
               {"max_ydiff", max_diff},
               {"rcond", sol.rcond}};
        return {s, max_diff <= 1e-8 * std::max(max_mean, 1e-300) || max_mean == 0.0};
    }

    Outcome evaluate() {
        const FieldQuartet q = scenario(grid());
        const LagrangianReport rep = evaluate_lagrangian(q, c_.nu);
        io::CsvTable table({"t", "slice"});
        for (std::size_t k = 0; k < rep.slices.size(); ++k)
            table.add_row(std::vector<double>{q.grid().time(static_cast<int>(k)), rep.slices[k]});
        write_text("lagrangian_slices.csv", table.str());
        Json s{{"J", rep.J},           {"viscous", rep.viscous},   {"advective", rep.advective},
               {"pressure", rep.pressure}, {"temporal", rep.temporal}, {"magnitude", rep.magnitude}};
        write_text("lagrangian_report.json", s.dump(2) + "\n");
        return {s, true};
    }

    Outcome residual() {
        const FieldQuartet q = scenario(grid());
        const ELResiduals res = el_residuals(q, c_.nu);
        fs::create_directories(out_);
        io::write_field_csv(out_ / "res_div_u.csv", res.res_div_u);
        io::write_field_csv(out_ / "res_div_w.csv", res.res_div_w);
        for (int i = 0; i < res.res_u.dim(); ++i) {
            io::write_field_csv(out_ / ("res_u" + std::to_string(i) + ".csv"), res.res_u[i]);
            io::write_field_csv(out_ / ("res_w" + std::to_string(i) + ".csv"), res.res_w[i]);
        }
        Json s{{"command", "residual"},
               {"max_div_u", res.res_div_u.max_abs()},
               {"max_div_w", res.res_div_w.max_abs()},
               {"max_res_u", res.res_u.max_abs()},
               {"max_res_w", res.res_w.max_abs()}};
        return {s, true};
    }

    Outcome variation_check() {
        const Grid g = grid();
        const FieldQuartet q = scenario(g);
        const FieldQuartet d = random_admissible_direction(g, c_.seed);
        const double eps = c_.fd_step;
        const double analytic = first_variation(q, d, c_.nu);
        const double fd = (evaluate_lagrangian(q + eps * d, c_.nu).J -
                           evaluate_lagrangian(q + (-eps) * d, c_.nu).J) /
                          (2.0 * eps);
        const double denom = std::max({std::abs(analytic), std::abs(fd), 1e-300});
        const double rel = std::abs(analytic - fd) / denom;
        Json s{{"command", "variation-check"},
               {"first_variation", analytic},
               {"finite_difference", fd},
               {"relative_error", rel}};
        return {s, rel <= 1e-6};
    }

    Outcome energy() {
        const FieldQuartet q = scenario(grid());
        const EnergySeries es = energy_series(q, c_.nu);
        const GronwallReport gr = gronwall_audit(es);
        // Mismatch is defined at interior time nodes only.
        io::CsvTable series({"t", "E", "rhs", "mismatch"});
        io::CsvTable audit({"t", "dissipation", "forcing", "profile"});
        for (std::size_t k = 0; k < es.E.size(); ++k) {
            const bool interior = k > 0 && k + 1 < es.E.size();
            series.add_row({io::format_real(es.times[k]), io::format_real(es.E[k]), io::format_real(es.rhs[k]),
                            interior ? io::format_real(es.identity_mismatch[k - 1]) : std::string()});
            audit.add_row(std::vector<double>{es.times[k], es.dissipation[k], es.forcing[k], gr.profile[k]});
        }
        write_text("energy_series.csv", series.str());
        write_text("gronwall.csv", audit.str());
        double mismatch = 0.0;
        for (double v : es.identity_mismatch) mismatch = std::max(mismatch, v);
        Json s{{"command", "energy"},
               {"m", es.m},
               {"m_min", es.m_min},
               {"min_margin", gr.min_margin},
               {"tolerance", gr.tolerance},
               {"inequality_holds", gr.inequality_holds},
               {"profile_nondecreasing", gr.profile_nondecreasing},
               {"max_identity_mismatch", mismatch}};
        return {s, gr.inequality_holds};
    }

    static Json certificate_json(const UniquenessCertificate& c) {
        return {{"lhs", c.lhs},
                {"threshold", c.threshold},
                {"quoted_threshold", c.quoted_threshold},
                {"R", c.R},
                {"lambda", c.lambda},
                {"nu", c.nu},
                {"dirichlet_norm_sum", c.dirichlet_norm_sum},
                {"satisfied", c.satisfied}};
    }

    Outcome steady_cert() {
        const FieldQuartet q = scenario(grid());
        const UniquenessCertificate cert = uniqueness_certificate(q, c_.nu);
        Json s = certificate_json(cert);
        write_text("certificate.json", s.dump(2) + "\n");
        s["command"] = "steady-cert";
        return {s, cert.satisfied};
    }

    Outcome inequality_audit() {
        const FieldQuartet q = scenario(grid());
        const InequalityAudit audit = inequality_chain_audit(q, c_.nu);
        io::CsvTable table({"name", "lhs", "rhs", "margin", "asserted", "holds"});
        Json rows = Json::object();
        for (const auto& r : audit.rows) {
            table.add_row({r.name, io::format_real(r.lhs), io::format_real(r.rhs),
                           io::format_real(r.margin), r.asserted ? "1" : "0", r.holds ? "1" : "0"});
            rows[r.name] = r.margin;
        }
        write_text("inequality_audit.csv", table.str());
        Json s{{"command", "inequality-audit"},
               {"scale", audit.scale},
               {"asserted_hold", audit.asserted_hold},
               {"margins", rows}};
        return {s, audit.asserted_hold};
    }

    Outcome extended() {
        const FieldQuartet q = scenario(grid());
        const ExtendedReport rep = extended_functional(q, surface(q), c_.nu);
        Json s{{"command", "extended"},
               {"J", rep.J},
               {"surface_term", rep.surface_term},
               {"I", rep.I},
               {"singular_nodes", rep.singular_nodes}};
        return {s, true};
    }

    Outcome boundary_audit() {
        const FieldQuartet q = scenario(grid());
        const BoundaryAudit audit = boundary_recovery_audit(q, surface(q), c_.nu);
        write_text("boundary_audit.csv", audit.csv());
        Json s{{"command", "boundary-audit"}, {"max_a", audit.max_a},   {"max_b", audit.max_b},
               {"max_c", audit.max_c},        {"max_d", audit.max_d},   {"tolerance", audit.tolerance},
               {"viscous", audit.viscous},    {"passed", audit.passed}};
        return {s, audit.passed};
    }

    SolveConfig solver() const {
        SolveConfig s = c_.solver;
        s.nu = c_.nu;
        return s;
    }

    Outcome solve_unsteady() {
        const Grid g = grid();
        const FieldQuartet q = scenario(g);
        const Trajectory tr = march_reduced(extract_slice(q.u, 0), solver(), g);
        fs::create_directories(out_);
        io::write_quartet(out_, tr.state);
        write_text("history.csv", tr.history_csv());
        const int last = g.time_nodes() - 1;
        double ke0 = 0.0, ke1 = 0.0, err = 0.0, ref = 0.0;
        ScalarField e0(g), e1(g), ee(g), er(g);
        for (int i = 0; i < g.dim(); ++i)
            for (std::size_t s = 0; s < g.space_size(); ++s) {
                e0.at(s, 0) += std::pow(tr.state.u[i].at(s, 0), 2);
                e1.at(s, last) += std::pow(tr.state.u[i].at(s, last), 2);
                ee.at(s, last) += std::pow(tr.state.u[i].at(s, last) - q.u[i].at(s, last), 2);
                er.at(s, last) += std::pow(q.u[i].at(s, last), 2);
            }
        ke0 = 0.5 * integrate_space(e0, 0);
        ke1 = 0.5 * integrate_space(e1, last);
        err = integrate_space(ee, last);
        ref = integrate_space(er, last);
        Json s{{"command", "solve-unsteady"},
               {"steps", tr.iterations},
               {"kinetic_energy_ratio", ke0 > 0.0 ? ke1 / ke0 : 0.0},
               {"max_div", divergence(tr.state.u).max_abs()},
               {"J", tr.J}};
        if (c_.scenario == "taylor-green") {
            s["relative_l2_error"] = ref > 0.0 ? std::sqrt(err / ref) : std::sqrt(err);
            s["exact_energy_ratio"] = std::exp(-4.0 * c_.nu * g.tau());
        }
        return {s, tr.converged};
    }

    Outcome solve_steady() {
        const Grid g = grid();
        VectorField data(g);
        if (c_.boundary_data == "cavity")
            data = cavity_lid(g, c_.lid_speed);
        else if (c_.boundary_data == "scenario")
            data = scenario(g).u;
        else if (c_.boundary_data != "zero")
            throw ConfigError("unknown boundary_data '" + c_.boundary_data + "'");
        const SteadyResult res = steady_solve(data, solver(), g);
        fs::create_directories(out_);
        io::write_quartet(out_, res.state);
        io::CsvTable hist({"iter", "residual", "u_w_gap", "J"});
        for (const auto& h : res.history)
            hist.add_row({std::to_string(h.iter), io::format_real(h.residual),
                          io::format_real(h.u_w_gap), io::format_real(h.J)});
        write_text("history.csv", hist.str());
        write_text("certificate.json", certificate_json(res.certificate).dump(2) + "\n");
        Json s{{"command", "solve-steady"},
               {"converged", res.converged},
               {"steps", res.steps},
               {"residual", res.residual},
               {"message", res.message},
               {"certificate", certificate_json(res.certificate)}};
        return {s, res.converged && res.certificate.satisfied};
    }

    Outcome newton_dual_cmd() {
        const Grid g = grid();
        const FieldQuartet base = scenario(g);
        FieldQuartet seed = base;
        std::mt19937_64 rng(c_.seed);
        const ScalarField phi = random_smooth_scalar(g, rng);
        for (int i = 0; i < g.dim(); ++i)
            seed.w[i] = base.u[i] + c_.perturbation * hadamard(base.u[i], phi);
        const Trajectory tr = newton_dual(seed, extract_slice(base.u, 0), solver(), g);
        fs::create_directories(out_);
        io::write_quartet(out_, tr.state);
        write_text("history.csv", tr.history_csv());
        const bool ok = tr.converged && tr.u_w_gap <= 1e-8 && std::abs(tr.J) <= 1e-10 * tr.J_scale;
        Json s{{"command", "newton-dual"}, {"converged", tr.converged}, {"iterations", tr.iterations},
               {"residual", tr.residual},  {"u_w_gap", tr.u_w_gap},      {"J", tr.J},
               {"J_scale", tr.J_scale},     {"message", tr.message}};
        return {s, ok};
    }

    Outcome taylor_green_verify() {
        if (c_.refine < 2) throw ConfigError("refine must be at least 2");
        GridSpec spec = c_.grid;
        int T0 = spec.time_nodes;
        double dt0 = spec.dt;
        if (T0 < 3) {
            T0 = 11;
            dt0 = 0.02;
        }
        io::CsvTable table({"level", "n", "dt", "residual", "ratio"});
        Json levels = Json::array();
        double prev = 0.0;
        bool ok = true;
        for (int l = 0; l < c_.refine; ++l) {
            GridSpec s = spec;
            for (auto& n : s.nodes) n = spec.nodes[0] << l;
            s.time_nodes = (T0 - 1) * (1 << l) + 1;
            s.dt = dt0 / (1 << l);
            const Grid g = s.make();
            const ELResiduals res = el_residuals(taylor_green(c_.nu, g), c_.nu);
            ScalarField sq(g);
            for (int i = 0; i < g.dim(); ++i)
                for (std::size_t n = 0; n < g.size(); ++n)
                    sq[n] += res.res_u[i][n] * res.res_u[i][n] + res.res_w[i][n] * res.res_w[i][n];
            const double norm = std::sqrt(integrate_spacetime(sq));
            const double ratio = l == 0 ? 0.0 : prev / norm;
            if (l > 0 && (ratio < 3.3 || ratio > 4.7)) ok = false;
            table.add_row(std::vector<double>{double(l), double(s.nodes[0]), s.dt, norm, ratio});
            levels.push_back({{"n", s.nodes[0]}, {"dt", s.dt}, {"residual", norm}, {"ratio", ratio}});
            prev = norm;
        }
        write_text("taylor_green_order.csv", table.str());
        Json s{{"command", "taylor-green-verify"}, {"levels", levels}, {"orders_ok", ok}};
        return {s, ok};
    }

    const RunConfig& c_;
    fs::path out_;
};

const std::vector<std::string> subcommands{
    "oscillator",       "evaluate",     "residual",       "variation-check", "energy",
    "steady-cert",      "inequality-audit", "extended",   "boundary-audit",  "solve-unsteady",
    "solve-steady",     "newton-dual",  "taylor-green-verify"};

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file " + path);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dual-field variational Navier-Stokes laboratory", "varns"};
    app.require_subcommand(0, 1);

    std::string config_path, out_dir;
    bool print_config = false;
    double nu = 0, extent = 0, dt = 0, a = 0, b = 0, alpha = 0, beta = 0, newton_tol = 0,
           linear_tol = 0, lid_speed = 0, perturbation = 0, fd_step = 0;
    int dim = 0, n = 0, time_nodes = 0, refine = 0, max_newton = 0, continuation = 0;
    std::uint64_t seed = 0;
    std::string boundary, scenario, surface, boundary_data;

    std::map<std::string, CLI::Option*> opt;
    auto add = [&](const std::string& name, auto& var, const std::string& help) {
        opt[name] = app.add_option(name, var, help);
    };
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_flag("--print-config", print_config, "Print the effective configuration and exit");
    add("--out", out_dir, "Output directory (default: $VARNS_OUT, then config 'output')");
    add("--nu", nu, "Viscosity");
    add("--dim", dim, "Spatial dimension");
    add("--n", n, "Nodes per axis (oscillator: nodes on [0,1])");
    add("--extent", extent, "Domain length on every axis");
    add("--boundary", boundary, "periodic or wall on every axis");
    add("--time-nodes", time_nodes, "Number of time nodes (1 = steady)");
    add("--dt", dt, "Time step");
    add("--scenario", scenario, "taylor-green | zero | random:<seed> | random-difference:<seed> | file:<dir>");
    add("--seed", seed, "Seed for random directions and perturbations");
    add("--a", a, "Oscillator damping");
    add("--b", b, "Oscillator stiffness");
    add("--alpha", alpha, "Oscillator y(0)");
    add("--beta", beta, "Oscillator y(1)");
    add("--refine", refine, "Refinement levels");
    add("--newton-tol", newton_tol, "Residual threshold");
    add("--max-newton", max_newton, "Newton iteration cap");
    add("--continuation-steps", continuation, "Viscosity halvings from 10 nu");
    add("--linear-tol", linear_tol, "Picard convergence threshold");
    add("--lid-speed", lid_speed, "Cavity lid speed");
    add("--perturbation", perturbation, "Relative perturbation of the w seed");
    add("--surface", surface, "trace | zero");
    add("--boundary-data", boundary_data, "cavity | zero | scenario");
    add("--fd-step", fd_step, "Finite-difference step for variation-check");

    for (const auto& name : subcommands) app.add_subcommand(name)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    }

    RunConfig cfg;
    for (auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
    auto given = [&](const std::string& name) { return opt.at(name)->count() > 0; };

    try {
        if (const char* env = std::getenv("VARNS_OUT"); env && *env) cfg.output = env;
        if (!config_path.empty()) apply_json(cfg, read_file(config_path));
        if (given("--out")) cfg.output = out_dir;
        if (given("--nu")) cfg.nu = nu;
        if (given("--dim")) {
            cfg.grid.dim = dim;
            auto resize = [dim](auto& v) { v.resize(static_cast<std::size_t>(dim), v.front()); };
            resize(cfg.grid.extent);
            resize(cfg.grid.nodes);
            resize(cfg.grid.boundary);
        }
        if (given("--n")) {
            if (cfg.subcommand == "oscillator")
                cfg.oscillator.n = n;
            else
                std::fill(cfg.grid.nodes.begin(), cfg.grid.nodes.end(), n);
        }
        if (given("--extent")) std::fill(cfg.grid.extent.begin(), cfg.grid.extent.end(), extent);
        if (given("--boundary")) std::fill(cfg.grid.boundary.begin(), cfg.grid.boundary.end(), boundary);
        if (given("--time-nodes")) cfg.grid.time_nodes = time_nodes;
        if (given("--dt")) cfg.grid.dt = dt;
        if (given("--scenario")) cfg.scenario = scenario;
        if (given("--seed")) cfg.seed = seed;
        if (given("--a")) cfg.oscillator.a = a;
        if (given("--b")) cfg.oscillator.b = b;
        if (given("--alpha")) cfg.oscillator.alpha = alpha;
        if (given("--beta")) cfg.oscillator.beta = beta;
        if (given("--refine")) cfg.refine = refine;
        if (given("--newton-tol")) cfg.solver.newton_tol = newton_tol;
        if (given("--max-newton")) cfg.solver.max_newton = max_newton;
        if (given("--continuation-steps")) cfg.solver.continuation_steps = continuation;
        if (given("--linear-tol")) cfg.solver.linear_tol = linear_tol;
        if (given("--lid-speed")) cfg.lid_speed = lid_speed;
        if (given("--perturbation")) cfg.perturbation = perturbation;
        if (given("--surface")) cfg.surface = surface;
        if (given("--boundary-data")) cfg.boundary_data = boundary_data;
        if (given("--fd-step")) cfg.fd_step = fd_step;
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    }

    if (print_config) {
        out << to_json(cfg) << "\n";
        return 0;
    }
    if (cfg.subcommand.empty()) {
        err << "usage error: a subcommand is required\n" << app.help();
        return 1;
    }

    try {
        Runner runner(cfg, cfg.output);
        Outcome o = runner.dispatch(cfg.subcommand);
        if (!o.summary.contains("command")) {
            Json s{{"command", cfg.subcommand}};
            s.update(o.summary);
            o.summary = std::move(s);
        }
        o.summary["status"] = o.passed ? "ok" : "failed";
        out << o.summary.dump() << "\n";
        return o.passed ? 0 : 2;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    } catch (const ResonanceError& e) {
        out << Json{{"command", cfg.subcommand}, {"error", "resonance"}, {"m", e.m()}, {"status", "failed"}}.dump()
            << "\n";
        return 2;
    } catch (const NumericalError& e) {
        out << Json{{"command", cfg.subcommand}, {"error", e.what()}, {"status", "failed"}}.dump() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace varns::cli
