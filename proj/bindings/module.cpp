/// Python surface: the main operations on interleaved/real numpy vectors.
/// Trajectories come back as dicts of arrays; library errors surface as
/// npdyn.Error (specific kinds as subclasses).

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "npdyn/checks.hpp"
#include "npdyn/costate.hpp"
#include "npdyn/discrete.hpp"
#include "npdyn/nambu.hpp"
#include "npdyn/qmcheck.hpp"
#include "npdyn/vortex.hpp"

namespace py = pybind11;
using namespace npdyn;

namespace {

IntegratorConfig make_config(double dt, double t_end, const std::string& method,
                             int record_every) {
    IntegratorConfig cfg;
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.method = method_from_string(method);
    cfg.record_every = record_every;
    cfg.validate();
    return cfg;
}

py::dict to_dict(const Trajectory& traj) {
    const auto n = static_cast<Eigen::Index>(traj.size());
    const Eigen::Index dim = n > 0 ? traj.states[0].size() : 0;
    Eigen::VectorXd times(n);
    Eigen::MatrixXd states(n, dim);
    for (Eigen::Index k = 0; k < n; ++k) {
        times[k] = traj.times[static_cast<std::size_t>(k)];
        states.row(k) = traj.states[static_cast<std::size_t>(k)].transpose();
    }
    py::dict monitors;
    for (std::size_t m = 0; m < traj.monitor_names.size(); ++m) {
        const auto& vals = traj.monitor_values[m];
        Eigen::VectorXd col(static_cast<Eigen::Index>(vals.size()));
        for (Eigen::Index k = 0; k < col.size(); ++k) col[k] = vals[static_cast<std::size_t>(k)];
        monitors[py::str(traj.monitor_names[m])] = col;
    }
    py::dict out;
    out["times"] = times;
    out["states"] = states;
    out["monitors"] = monitors;
    return out;
}

VortexConfiguration vortex_config(const Eigen::VectorXd& gammas, const Eigen::VectorXd& state) {
    VortexConfiguration c;
    c.gammas = gammas;
    c.positions = deinterleave(state);
    return c;
}

ReducedState reduced_state(const Eigen::VectorXd& u, const Eigen::VectorXd& gammas) {
    if (u.size() != 3 || gammas.size() != 3)
        throw DimensionError("reduced states carry 3 components and 3 circulations");
    ReducedState s;
    s.u = u;
    s.gammas = gammas;
    return s;
}

}  // namespace

PYBIND11_MODULE(npdyn, m) {
    m.doc() = "Conservative Nambu-Poisson flows: point vortices, costate extensions,\n"
              "discrete reversible maps, and their conservation diagnostics.";

    const auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ConfigError>(m, "ConfigError", base);
    py::register_exception<CollisionError>(m, "CollisionError", base);
    py::register_exception<DimensionError>(m, "DimensionError", base);
    py::register_exception<BlowUpError>(m, "BlowUpError", base);
    py::register_exception<IrreversibleError>(m, "IrreversibleError", base);

    m.def(
        "vortex_rhs",
        [](const Eigen::VectorXd& state, const Eigen::VectorXd& gammas) {
            return interleave(vortex_rhs(vortex_config(gammas, state)));
        },
        py::arg("state"), py::arg("gammas"),
        "Pairwise interaction velocity on an interleaved (x1, y1, ...) state.");

    m.def(
        "vortex_hamiltonian",
        [](const Eigen::VectorXd& state, const Eigen::VectorXd& gammas) {
            return vortex_hamiltonian(vortex_config(gammas, state));
        },
        py::arg("state"), py::arg("gammas"),
        "Logarithmic interaction energy, ordered pairs counted twice.");

    m.def(
        "linear_impulse",
        [](const Eigen::VectorXd& state, const Eigen::VectorXd& gammas) {
            return Eigen::Vector2d(linear_impulse(vortex_config(gammas, state)));
        },
        py::arg("state"), py::arg("gammas"),
        "Conserved circulation-weighted centroid (Px, Py).");

    m.def(
        "reduce3",
        [](const Eigen::VectorXd& state, const Eigen::VectorXd& gammas) {
            return Eigen::Vector3d(reduce3(vortex_config(gammas, state)).u);
        },
        py::arg("state"), py::arg("gammas"),
        "Log-squared pairwise distances u of a 3-vortex state.");

    m.def(
        "reduced_rhs",
        [](const Eigen::VectorXd& u, const Eigen::VectorXd& gammas) {
            return Eigen::Vector3d(reduced_rhs(reduced_state(u, gammas)));
        },
        py::arg("u"), py::arg("gammas"), "du_i/dt = gamma_i (e^{u_j} - e^{u_k}), cyclic.");

    m.def(
        "reduced_integrals",
        [](const Eigen::VectorXd& u, const Eigen::VectorXd& gammas) {
            return reduced_integrals(reduced_state(u, gammas));
        },
        py::arg("u"), py::arg("gammas"),
        "The pair of conserved quantities (sum e^{u_i}/gamma_i, sum u_i/gamma_i).");

    m.def(
        "integrate_vortex",
        [](const Eigen::VectorXd& gammas, const Eigen::VectorXd& state, double dt, double t_end,
           const std::string& method, int record_every) {
            vortex_config(gammas, state).validate();
            const VectorField v = vortex_field(gammas);
            return to_dict(integrate(v, state, make_config(dt, t_end, method, record_every)));
        },
        py::arg("gammas"), py::arg("state"), py::arg("dt") = 1e-3, py::arg("t_end") = 10.0,
        py::arg("method") = "rk4", py::arg("record_every") = 1,
        "Fixed-step trajectory of the full point-vortex dynamics.");

    m.def(
        "integrate_reduced3",
        [](const Eigen::VectorXd& gammas, const Eigen::VectorXd& u0, double dt, double t_end,
           const std::string& method, int record_every) {
            if (gammas.size() != 3) throw DimensionError("three circulations are required");
            const VectorField v = reduced3_field(Eigen::Vector3d(gammas));
            return to_dict(integrate(v, u0, make_config(dt, t_end, method, record_every)));
        },
        py::arg("gammas"), py::arg("u0"), py::arg("dt") = 1e-3, py::arg("t_end") = 10.0,
        py::arg("method") = "rk4", py::arg("record_every") = 1,
        "Fixed-step trajectory of the reduced 3-vortex dynamics.");

    m.def(
        "integrate_costate",
        [](const Eigen::VectorXd& gammas, const Eigen::VectorXd& stacked, double dt, double t_end,
           const std::string& method, int record_every) {
            if (stacked.size() != 4 * gammas.size())
                throw DimensionError("stacked state has length 4N: interleaved x then psi");
            vortex_config(gammas, stacked.head(2 * gammas.size())).validate();
            const VectorField base = vortex_field(gammas);
            const VectorField ext = extend(base);
            Trajectory traj =
                integrate(ext, stacked, make_config(dt, t_end, method, record_every),
                          {{"H1", [base](const Eigen::VectorXd& z) {
                                return h1(base, unpack(z));
                            }}});
            return to_dict(traj);
        },
        py::arg("gammas"), py::arg("stacked"), py::arg("dt") = 1e-3, py::arg("t_end") = 10.0,
        py::arg("method") = "rk4", py::arg("record_every") = 1,
        "Doubled (x, psi) trajectory over the vortex field; monitors H1 = v . psi.");

    m.def(
        "discrete_orbit",
        [](const std::string& map_name, const Eigen::VectorXd& state,
           const Eigen::VectorXd& costate, int steps, const std::string& mode) {
            DiscreteSystem sys;
            if (map_name == "cat") sys = cat_map();
            else if (map_name == "fanout") sys = fanout_map();
            else if (map_name == "cubic") sys = cubic_shear_map();
            else throw ConfigError("unknown map '" + map_name + "'");
            CostateMode m_ = CostateMode::post_step;
            if (mode == "pre") m_ = CostateMode::pre_step;
            else if (mode != "post") throw ConfigError("mode must be 'post' or 'pre'");
            ExtendedDiscreteState es{state, costate};
            es.validate();
            Eigen::MatrixXd S(steps + 1, state.size());
            Eigen::MatrixXd L(steps + 1, state.size());
            Eigen::VectorXd dets(steps + 1);
            S.row(0) = state.transpose();
            L.row(0) = costate.transpose();
            dets[0] = reversibility(sys, state).det;
            for (int k = 0; k < steps; ++k) {
                es = costate_step(sys, es, m_);
                S.row(k + 1) = es.S.transpose();
                L.row(k + 1) = es.l.transpose();
                dets[k + 1] = reversibility(sys, es.S).det;
            }
            py::dict out;
            out["states"] = S;
            out["costates"] = L;
            out["dets"] = dets;
            return out;
        },
        py::arg("map"), py::arg("state"), py::arg("costate"), py::arg("steps") = 100,
        py::arg("mode") = "post",
        "Orbit of a named step map with the co-evolving linear costate.");

    m.def("conformal_potential", &conformal_potential, py::arg("d"), py::arg("r"),
          "The inverse-square potential 4 (4 - d) / r^2.");

    m.def(
        "stationarity_residual",
        [](int d, double r_min, double r_max, int points) {
            RadialGrid g;
            g.d = d;
            g.r_min = r_min;
            g.r_max = r_max;
            g.points = points;
            g.validate();
            return stationarity_residual(g);
        },
        py::arg("d"), py::arg("r_min") = 1.0, py::arg("r_max") = 2.0, py::arg("points") = 201,
        "Max |laplacian V - V^2/2| over the interior grid points.");

    m.def(
        "run_suite",
        [](const std::string& suite) {
            py::list out;
            for (const CheckResult& r : run_suite(suite)) {
                py::dict d;
                d["name"] = r.name;
                d["passed"] = r.passed;
                d["detail"] = r.detail;
                out.append(std::move(d));
            }
            return out;
        },
        py::arg("suite") = "all", "Built-in property suites; returns one dict per check.");
}
