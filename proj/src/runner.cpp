#include "npdyn/runner.hpp"

#include <Eigen/LU>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include "json.hpp"
#include "npdyn/costate.hpp"
#include "npdyn/nambu.hpp"
#include "npdyn/qmcheck.hpp"
#include "npdyn/vortex.hpp"

namespace npdyn {

using nlohmann::json;

std::string to_string(SystemKind k) {
    switch (k) {
        case SystemKind::vortex: return "vortex";
        case SystemKind::reduced3: return "reduced3";
        case SystemKind::nambu: return "nambu";
        case SystemKind::costate: return "costate";
        case SystemKind::discrete: return "discrete";
        case SystemKind::qmcheck: return "qmcheck";
    }
    return "unknown";
}

SystemKind kind_from_string(const std::string& name) {
    for (SystemKind k : {SystemKind::vortex, SystemKind::reduced3, SystemKind::nambu,
                         SystemKind::costate, SystemKind::discrete, SystemKind::qmcheck})
        if (to_string(k) == name) return k;
    throw ConfigError("unknown system '" + name + "'");
}

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CostateMode mode_from_string(const std::string& name) {
    if (name == "post" || name == "post_step") return CostateMode::post_step;
    if (name == "pre" || name == "pre_step") return CostateMode::pre_step;
    throw ConfigError("unknown costate mode '" + name + "' (expected post or pre)");
}

void require(bool cond, const std::string& message) {
    if (!cond) throw ConfigError(message);
}

void require_finite(const VectorXd& v, const std::string& what) {
    require(v.size() == 0 || v.allFinite(), what + " must be finite");
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open '" + path + "' for writing");
    return f;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream f = open_out(path);
    for (std::size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
    f << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << fmt17(row[i]);
        f << "\n";
    }
}

void write_trajectory_csv(const std::string& path, const std::vector<std::string>& state_names,
                          const Trajectory& traj) {
    std::vector<std::string> header = {"t"};
    header.insert(header.end(), state_names.begin(), state_names.end());
    header.insert(header.end(), traj.monitor_names.begin(), traj.monitor_names.end());
    std::vector<std::vector<double>> rows;
    rows.reserve(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        std::vector<double> row;
        row.push_back(traj.times[i]);
        for (Eigen::Index j = 0; j < traj.states[i].size(); ++j)
            row.push_back(traj.states[i][j]);
        for (const auto& mv : traj.monitor_values) row.push_back(mv[i]);
        rows.push_back(std::move(row));
    }
    write_csv(path, header, rows);
}

json drift_entry(const std::vector<double>& values) {
    const double initial = values.front();
    double abs_drift = 0.0;
    for (double v : values) abs_drift = std::max(abs_drift, std::abs(v - initial));
    return {{"initial", initial},
            {"max_drift_abs", abs_drift},
            {"max_drift_rel", abs_drift / std::max(1.0, std::abs(initial))}};
}

void finish_report(json& rep, const RunConfig& cfg, Clock::time_point t0) {
    if (cfg.timings)
        rep["runtime_seconds"] = std::chrono::duration<double>(Clock::now() - t0).count();
    if (!cfg.out_report.empty()) {
        std::ofstream f = open_out(cfg.out_report);
        f << rep.dump(2) << "\n";
    }
}

struct ContinuousSetup {
    VectorField field;
    VectorXd x0;
    std::vector<std::string> state_names;
    MonitorSet monitors;
};

std::vector<std::string> numbered(const std::string& stem, int n) {
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back(stem + std::to_string(i));
    return names;
}

std::vector<std::string> planar_names(int n_vortices) {
    std::vector<std::string> names;
    for (int i = 1; i <= n_vortices; ++i) {
        names.push_back("x" + std::to_string(i));
        names.push_back("y" + std::to_string(i));
    }
    return names;
}

ContinuousSetup setup_reduced3(const RunConfig& cfg) {
    const Eigen::Vector3d gammas(cfg.gammas);
    ContinuousSetup s;
    s.field = reduced3_field(gammas);
    s.x0 = cfg.state;
    s.state_names = numbered("u", 3);
    s.monitors = {
        {"H1",
         [gammas](const VectorXd& u) { return reduced_integrals(ReducedState{u, gammas}).first; }},
        {"H2", [gammas](const VectorXd& u) {
             return reduced_integrals(ReducedState{u, gammas}).second;
         }}};
    return s;
}

ContinuousSetup setup_vortex(const RunConfig& cfg) {
    const VectorXd gammas = cfg.gammas;
    ContinuousSetup s;
    s.field = vortex_field(gammas);
    s.x0 = cfg.state;
    s.state_names = planar_names(static_cast<int>(gammas.size()));
    const auto config_at = [gammas](const VectorXd& state) {
        return VortexConfiguration{gammas, deinterleave(state), {}};
    };
    s.monitors = {
        {"H", [config_at](const VectorXd& st) { return vortex_hamiltonian(config_at(st)); }},
        {"Px", [config_at](const VectorXd& st) { return linear_impulse(config_at(st))[0]; }},
        {"Py", [config_at](const VectorXd& st) { return linear_impulse(config_at(st))[1]; }}};
    return s;
}

NambuSystem planar_rotation_system() {
    NambuSystem sys;
    sys.dim = 2;
    sys.weight = 1.0;
    sys.hamiltonians = {ScalarField{[](const VectorXd& x) { return 0.5 * x.squaredNorm(); },
                                    [](const VectorXd& x) -> VectorXd { return x; }}};
    return sys;
}

ContinuousSetup setup_nambu(const RunConfig& cfg) {
    ContinuousSetup s;
    NambuSystem sys;
    if (cfg.hamiltonians == "reduced3") {
        sys = reduced3_system(Eigen::Vector3d(cfg.gammas));
    } else if (cfg.hamiltonians == "rotation") {
        sys = planar_rotation_system();
    } else {
        throw ConfigError("unknown Hamiltonian set '" + cfg.hamiltonians +
                          "' (expected reduced3 or rotation)");
    }
    s.field = nambu_vector_field(sys);
    s.x0 = cfg.state;
    s.state_names = numbered("x", sys.dim);
    for (std::size_t i = 0; i < sys.hamiltonians.size(); ++i) {
        const ScalarField h = sys.hamiltonians[i];
        const std::string name =
            sys.hamiltonians.size() == 1 ? std::string("H") : "H" + std::to_string(i + 1);
        s.monitors.push_back({name, [h](const VectorXd& x) { return h.value(x); }});
    }
    return s;
}

VectorField costate_base_field(const RunConfig& cfg, std::vector<std::string>* names) {
    if (cfg.field == "rotation") {
        if (names) *names = {"x1", "x2"};
        return rotation_field();
    }
    if (cfg.field == "vortex") {
        require(cfg.gammas.size() >= 1, "the vortex field needs circulations (--gammas)");
        if (names) *names = planar_names(static_cast<int>(cfg.gammas.size()));
        return vortex_field(cfg.gammas);
    }
    if (cfg.field == "reduced3") {
        require(cfg.gammas.size() == 3, "the reduced3 field needs exactly 3 circulations");
        if (names) *names = numbered("u", 3);
        return reduced3_field(Eigen::Vector3d(cfg.gammas));
    }
    throw ConfigError("unknown field '" + cfg.field +
                      "' (expected rotation, vortex, or reduced3)");
}

ContinuousSetup setup_costate(const RunConfig& cfg) {
    ContinuousSetup s;
    std::vector<std::string> base_names;
    const VectorField base = costate_base_field(cfg, &base_names);
    s.field = extend(base);
    s.x0 = cfg.state;
    s.state_names = base_names;
    for (int i = 1; i <= base.dim; ++i) s.state_names.push_back("psi" + std::to_string(i));
    s.monitors = {{"H1", [base](const VectorXd& z) { return h1(base, unpack(z)); }}};
    return s;
}

ContinuousSetup make_setup(const RunConfig& cfg) {
    switch (cfg.kind) {
        case SystemKind::reduced3: return setup_reduced3(cfg);
        case SystemKind::vortex: return setup_vortex(cfg);
        case SystemKind::nambu: return setup_nambu(cfg);
        case SystemKind::costate: return setup_costate(cfg);
        default: throw ConfigError("not a continuous system kind");
    }
}

int run_continuous(const RunConfig& cfg, std::ostream& diag, Clock::time_point t0) {
    const ContinuousSetup s = make_setup(cfg);
    const IntegratorConfig icfg{cfg.method, cfg.dt, cfg.t_end, cfg.record_every};

    Trajectory traj;
    std::string error;
    try {
        integrate_sink(s.field, s.x0, icfg, s.monitors, traj);
    } catch (const Error& e) {
        error = e.what();
    }

    if (!cfg.out_csv.empty()) write_trajectory_csv(cfg.out_csv, s.state_names, traj);

    json rep;
    rep["system"] = to_string(cfg.kind);
    rep["samples"] = traj.size();
    rep["integrals"] = json::object();
    for (std::size_t i = 0; i < traj.monitor_names.size(); ++i)
        if (!traj.monitor_values[i].empty())
            rep["integrals"][traj.monitor_names[i]] = drift_entry(traj.monitor_values[i]);
    rep["det_checks"] = json::object();
    if (!error.empty()) rep["error"] = error;
    finish_report(rep, cfg, t0);

    if (!error.empty()) {
        diag << "runtime failure: " << error << "\n";
        return 3;
    }
    return 0;
}

DiscreteSystem map_by_name(const std::string& name) {
    if (name == "cat") return cat_map();
    if (name == "fanout") return fanout_map();
    if (name == "cubic") return cubic_shear_map();
    throw ConfigError("unknown map '" + name + "' (expected cat, fanout, or cubic)");
}

int run_discrete(const RunConfig& cfg, std::ostream& diag, Clock::time_point t0) {
    const DiscreteSystem sys = map_by_name(cfg.map);
    ExtendedDiscreteState es{cfg.state, cfg.costate};
    // A fixed tangent seed makes the duality pairing reportable and the
    // output deterministic.
    VectorXd dS = VectorXd::LinSpaced(sys.dim, 1.0, static_cast<double>(sys.dim)).normalized();

    std::vector<std::string> header = {"t"};
    for (const auto& n : numbered("S", sys.dim)) header.push_back(n);
    for (const auto& n : numbered("l", sys.dim)) header.push_back(n);
    header.push_back("detM");

    std::vector<std::vector<double>> rows;
    std::vector<double> pairing;
    double min_det = std::numeric_limits<double>::infinity(), max_det = 0.0;
    bool all_reversible = true;
    int completed = 0;
    std::string error;

    const auto record = [&](int k) {
        const ReversibilityReport rev = reversibility(sys, es.S);
        min_det = std::min(min_det, std::abs(rev.det));
        max_det = std::max(max_det, std::abs(rev.det));
        all_reversible = all_reversible && rev.reversible;
        std::vector<double> row = {static_cast<double>(k)};
        for (Eigen::Index i = 0; i < es.S.size(); ++i) row.push_back(es.S[i]);
        for (Eigen::Index i = 0; i < es.l.size(); ++i) row.push_back(es.l[i]);
        row.push_back(rev.det);
        rows.push_back(std::move(row));
        pairing.push_back(es.l.dot(dS));
    };

    try {
        record(0);
        for (int k = 0; k < cfg.steps; ++k) {
            const MatrixXd M_pre = sys.step_jacobian(es.S);
            es = costate_step(sys, es, cfg.costate_mode);
            dS = M_pre * dS;
            ++completed;
            record(k + 1);
        }
    } catch (const Error& e) {
        error = e.what();
    }

    if (!cfg.out_csv.empty()) write_csv(cfg.out_csv, header, rows);

    json rep;
    rep["system"] = "discrete";
    rep["samples"] = rows.size();
    rep["integrals"] = json::object();
    if (!pairing.empty()) rep["integrals"]["costate_pairing"] = drift_entry(pairing);
    rep["det_checks"] = {{"all_reversible", all_reversible},
                         {"min_abs_det", min_det},
                         {"max_abs_det", max_det},
                         {"mode", cfg.costate_mode == CostateMode::post_step ? "post" : "pre"},
                         {"steps_completed", completed}};
    if (!error.empty()) rep["error"] = error;
    finish_report(rep, cfg, t0);

    if (!error.empty()) {
        diag << "runtime failure: " << error << "\n";
        return 3;
    }
    return 0;
}

int run_qmcheck(const RunConfig& cfg, std::ostream& diag, Clock::time_point t0) {
    (void)diag;
    json levels = json::array();
    std::vector<double> residuals;
    int pts = cfg.points;
    for (int l = 0; l < cfg.levels; ++l) {
        const RadialGrid g{cfg.r_min, cfg.r_max, pts, cfg.d};
        const double res = stationarity_residual(g);
        residuals.push_back(res);
        levels.push_back({{"points", pts}, {"residual", res}});
        if (l + 1 < cfg.levels) pts = 2 * pts - 1;
    }
    json orders = json::array();
    for (std::size_t i = 0; i + 1 < residuals.size(); ++i) {
        if (residuals[i] > 0 && residuals[i + 1] > 0)
            orders.push_back(std::log2(residuals[i] / residuals[i + 1]));
    }

    if (!cfg.out_csv.empty()) {
        // Pointwise identity error on the finest grid.
        const RadialGrid g{cfg.r_min, cfg.r_max, pts, cfg.d};
        const std::vector<double> profile = stationarity_profile(g);
        const double h = g.spacing();
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < profile.size(); ++i) {
            const double r = g.r_min + (static_cast<double>(i) + 1) * h;
            rows.push_back({r, conformal_potential(g.d, r), profile[i]});
        }
        write_csv(cfg.out_csv, {"r", "V", "residual"}, rows);
    }

    json rep;
    rep["system"] = "qmcheck";
    rep["samples"] = residuals.size();
    rep["integrals"] = json::object();
    rep["det_checks"] = json::object();
    rep["qmcheck"] = {{"d", cfg.d}, {"levels", levels}, {"orders", orders}};
    finish_report(rep, cfg, t0);
    return 0;
}

}  // namespace

void RunConfig::validate() const {
    const auto integrator_ok = [this] {
        IntegratorConfig icfg{method, dt, t_end, record_every};
        icfg.validate();
    };
    require_finite(gammas, "circulations");
    require_finite(state, "initial state");
    require_finite(costate, "initial costate");

    switch (kind) {
        case SystemKind::vortex: {
            require(gammas.size() >= 1, "vortex runs need circulations (--gammas)");
            require(state.size() == 2 * gammas.size(),
                    "vortex state must interleave x,y per vortex (length 2N)");
            VortexConfiguration c{gammas, deinterleave(state), quantum};
            c.validate();
            integrator_ok();
            break;
        }
        case SystemKind::reduced3: {
            require(gammas.size() == 3, "reduced3 runs need exactly 3 circulations");
            require(state.size() == 3, "reduced3 state has length 3");
            ReducedState s{state, gammas};
            s.validate();
            integrator_ok();
            break;
        }
        case SystemKind::nambu: {
            if (hamiltonians == "reduced3") {
                require(gammas.size() == 3, "the reduced3 Hamiltonian set needs 3 circulations");
                for (int i = 0; i < 3; ++i)
                    require(gammas[i] != 0.0, "circulations must be nonzero");
                require(state.size() == 3, "state has length 3 for the reduced3 set");
            } else if (hamiltonians == "rotation") {
                require(state.size() == 2, "state has length 2 for the rotation set");
            } else {
                throw ConfigError("unknown Hamiltonian set '" + hamiltonians +
                                  "' (expected reduced3 or rotation)");
            }
            integrator_ok();
            break;
        }
        case SystemKind::costate: {
            std::vector<std::string> names;
            const VectorField base = costate_base_field(*this, &names);
            require(state.size() == 2 * base.dim,
                    "costate state stacks (x, psi): length " + std::to_string(2 * base.dim) +
                        " for the selected field");
            if (field == "vortex") {
                VortexConfiguration c{gammas, deinterleave(state.head(base.dim)), quantum};
                c.validate();
            }
            if (field == "reduced3") ReducedState{state.head(3), gammas}.validate();
            integrator_ok();
            break;
        }
        case SystemKind::discrete: {
            const DiscreteSystem sys = map_by_name(map);
            require(state.size() == sys.dim,
                    "state has length " + std::to_string(sys.dim) + " for this map");
            require(costate.size() == sys.dim,
                    "costate has length " + std::to_string(sys.dim) + " for this map");
            require(steps >= 1, "steps must be at least 1");
            break;
        }
        case SystemKind::qmcheck: {
            try {
                RadialGrid{r_min, r_max, points, d}.validate();
            } catch (const Error& e) {
                throw ConfigError(e.what());
            }
            require(levels >= 1 && levels <= 12, "levels must lie in [1, 12]");
            break;
        }
    }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file '" + path + "'");
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse failure: " + std::string(e.what()));
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");

    const auto as_vector = [](const json& v) {
        if (!v.is_array()) throw ConfigError("expected a JSON array of numbers");
        VectorXd out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get<double>();
        return out;
    };

    try {
        for (const auto& [key, val] : j.items()) {
            if (key == "system") {
                if (kind_from_string(val.get<std::string>()) != cfg.kind)
                    throw ConfigError("config system '" + val.get<std::string>() +
                                      "' does not match the subcommand");
            } else if (key == "gammas") {
                cfg.gammas = as_vector(val);
            } else if (key == "state") {
                cfg.state = as_vector(val);
            } else if (key == "costate") {
                cfg.costate = as_vector(val);
            } else if (key == "method") {
                cfg.method = method_from_string(val.get<std::string>());
            } else if (key == "dt") {
                cfg.dt = val.get<double>();
            } else if (key == "t_end") {
                cfg.t_end = val.get<double>();
            } else if (key == "record_every") {
                cfg.record_every = val.get<int>();
            } else if (key == "field") {
                cfg.field = val.get<std::string>();
            } else if (key == "hamiltonians") {
                cfg.hamiltonians = val.get<std::string>();
            } else if (key == "map") {
                cfg.map = val.get<std::string>();
            } else if (key == "costate_mode") {
                cfg.costate_mode = mode_from_string(val.get<std::string>());
            } else if (key == "steps") {
                cfg.steps = val.get<int>();
            } else if (key == "d") {
                cfg.d = val.get<int>();
            } else if (key == "r_min") {
                cfg.r_min = val.get<double>();
            } else if (key == "r_max") {
                cfg.r_max = val.get<double>();
            } else if (key == "points") {
                cfg.points = val.get<int>();
            } else if (key == "levels") {
                cfg.levels = val.get<int>();
            } else if (key == "quantum") {
                cfg.quantum = val.get<double>();
            } else if (key == "out") {
                cfg.out_csv = val.get<std::string>();
            } else if (key == "report") {
                cfg.out_report = val.get<std::string>();
            } else if (key == "timings") {
                cfg.timings = val.get<bool>();
            } else {
                throw ConfigError("unknown config key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError("config value failure: " + std::string(e.what()));
    }
}

int run(const RunConfig& cfg, std::ostream& diag) {
    cfg.validate();
    const Clock::time_point t0 = Clock::now();
    switch (cfg.kind) {
        case SystemKind::discrete: return run_discrete(cfg, diag, t0);
        case SystemKind::qmcheck: return run_qmcheck(cfg, diag, t0);
        default: return run_continuous(cfg, diag, t0);
    }
}

}  // namespace npdyn
