#include "npdyn/checks.hpp"

#include <Eigen/LU>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "npdyn/costate.hpp"
#include "npdyn/discrete.hpp"
#include "npdyn/nambu.hpp"
#include "npdyn/qmcheck.hpp"
#include "npdyn/vortex.hpp"

namespace npdyn {

double draw_real(std::mt19937& rng, double lo, double hi) {
    // 53-bit uniform in [0, 1) from two engine words.
    const double a = static_cast<double>(rng() >> 5);
    const double b = static_cast<double>(rng() >> 6);
    const double u = (a * 67108864.0 + b) / 9007199254740992.0;
    return lo + u * (hi - lo);
}

int draw_int(std::mt19937& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1));
}

VectorXd draw_vector(std::mt19937& rng, int dim, double lo, double hi) {
    VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x[i] = draw_real(rng, lo, hi);
    return x;
}

ScalarField random_sparse_polynomial(int dim, std::mt19937& rng) {
    struct Monomial {
        double coeff;
        std::vector<int> expo;
    };
    std::vector<Monomial> monos(draw_int(rng, 1, 4));
    for (auto& m : monos) {
        m.coeff = draw_real(rng, -0.5, 0.5);
        m.expo.assign(dim, 0);
        const int degree = draw_int(rng, 1, 3);
        for (int p = 0; p < degree; ++p) m.expo[draw_int(rng, 0, dim - 1)]++;
    }
    ScalarField f;
    f.value = [monos](const VectorXd& x) {
        double s = 0.0;
        for (const auto& m : monos) {
            double term = m.coeff;
            for (std::size_t j = 0; j < m.expo.size(); ++j)
                for (int e = 0; e < m.expo[j]; ++e) term *= x[j];
            s += term;
        }
        return s;
    };
    f.gradient = [monos, dim](const VectorXd& x) {
        VectorXd g = VectorXd::Zero(dim);
        for (const auto& m : monos)
            for (int j = 0; j < dim; ++j) {
                if (m.expo[j] == 0) continue;
                double term = m.coeff * m.expo[j];
                for (int k = 0; k < dim; ++k) {
                    const int e = m.expo[k] - (k == j ? 1 : 0);
                    for (int q = 0; q < e; ++q) term *= x[k];
                }
                g[j] += term;
            }
        return g;
    };
    return f;
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

void add(std::vector<CheckResult>& out, const std::string& name, bool passed,
         const std::string& detail) {
    out.push_back({name, passed, detail});
}

// Max relative drift of a monitored quantity over a trajectory.
double drift_of(const Trajectory& traj, std::size_t monitor) {
    const auto& vals = traj.monitor_values[monitor];
    double worst = 0.0;
    for (double v : vals)
        worst = std::max(worst, std::abs(v - vals[0]) / std::max(1.0, std::abs(vals[0])));
    return worst;
}

std::vector<CheckResult> suite_flows() {
    std::vector<CheckResult> out;
    std::mt19937 rng(2024);

    {
        MatrixXd A(4, 4);
        VectorXd b = draw_vector(rng, 4, -2, 2);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) A(i, j) = draw_real(rng, -2, 2);
        VectorField v;
        v.dim = 4;
        v.eval = [A, b](const VectorXd& x) -> VectorXd { return A * x + b; };
        double worst = 0.0;
        for (int t = 0; t < 5; ++t) {
            const VectorXd x = draw_vector(rng, 4, -2, 2);
            worst = std::max(worst, (jacobian_fd(v, x) - A).cwiseAbs().maxCoeff());
        }
        add(out, "affine_jacobian_exact", worst <= 1e-9, "max deviation " + num(worst));
    }
    {
        VectorXd x0(2);
        x0 << 1, 0;
        const Trajectory traj =
            integrate(rotation_field(), x0, {Method::rk4, 1e-3, std::numbers::pi, 1});
        VectorXd target(2);
        target << -1, 0;
        const double err = (traj.states.back() - target).norm();
        add(out, "half_turn_lands_exactly", err <= 1e-6,
            "final-state error " + num(err) + " after " + std::to_string(traj.size()) +
                " samples");
    }
    {
        VectorXd x0(2);
        x0 << 1, 0;
        const auto final_err = [&](double dt) {
            const Trajectory traj = integrate(rotation_field(), x0, {Method::rk4, dt, 2.0, 64});
            VectorXd exact(2);
            exact << std::cos(2.0), -std::sin(2.0);
            return (traj.states.back() - exact).norm();
        };
        const double e1 = final_err(0.1), e2 = final_err(0.05);
        const double order = std::log2(e1 / e2);
        add(out, "fourth_order_convergence", order >= 3.7 && order <= 4.3,
            "measured order " + num(order));
    }
    {
        VectorXd x0(2);
        x0 << 1, 0;
        const Trajectory traj =
            integrate(rotation_field(), x0, {Method::implicit_midpoint, 1e-2, 2.0, 1});
        double worst = 0.0;
        for (const auto& x : traj.states) worst = std::max(worst, std::abs(x.squaredNorm() - 1.0));
        add(out, "midpoint_preserves_radius", worst <= 1e-8, "max |r^2 - 1| = " + num(worst));
    }
    {
        VectorField zero;
        zero.dim = 3;
        zero.eval = [](const VectorXd& x) { return VectorXd::Zero(x.size()).eval(); };
        const VectorXd x0 = draw_vector(rng, 3, -2, 2);
        const Trajectory traj = integrate(zero, x0, {Method::rk4, 0.1, 1.0, 1});
        bool constant = true;
        for (const auto& x : traj.states)
            constant = constant && (x - x0).cwiseAbs().maxCoeff() == 0.0;
        add(out, "zero_field_constant", constant, std::to_string(traj.size()) + " samples");
    }
    return out;
}

std::vector<CheckResult> suite_costate() {
    std::vector<CheckResult> out;
    std::mt19937 rng(2025);

    {
        const VectorField v = rotation_field();
        const VectorField ext = extend(v);
        VectorXd z0(4);
        z0 << 1, 0, 0, 1;
        const Monitor mon{"H1", [v](const VectorXd& z) { return h1(v, unpack(z)); }};
        const Trajectory traj = integrate(ext, z0, {Method::rk4, 1e-3, 10.0, 10}, {mon});
        add(out, "pairing_hamiltonian_conserved_rotation", drift_of(traj, 0) <= 1e-7,
            "relative drift " + num(drift_of(traj, 0)));
    }
    {
        VectorXd gammas(2);
        gammas << 1, 1;
        const VectorField v = vortex_field(gammas);
        const VectorField ext = extend(v);
        VectorXd z0(8);
        z0 << 1, 0, -1, 0, 0.3, -0.2, 0.5, 0.1;
        const Monitor mon{"H1", [v](const VectorXd& z) { return h1(v, unpack(z)); }};
        const Trajectory traj = integrate(ext, z0, {Method::rk4, 1e-3, 10.0, 10}, {mon});
        add(out, "pairing_hamiltonian_conserved_twovortex", drift_of(traj, 0) <= 1e-7,
            "initial value " + num(traj.monitor_values[0][0]) + ", relative drift " +
                num(drift_of(traj, 0)));
    }
    {
        const PhaseFn F = [](const VectorXd& x, const VectorXd& psi) { return x[0] * psi[1]; };
        const PhaseFn G = [](const VectorXd& x, const VectorXd& psi) { return x[1] * psi[0]; };
        VectorXd x(2), psi(2);
        x << 1, 2;
        psi << 3, 4;
        const CostateState s{x, psi};
        const double b = bracket1(F, G, s);
        add(out, "bracket_crossed_monomials", std::abs(b - 5.0) <= 1e-6,
            "value " + num(b) + " (expected x2 psi2 - x1 psi1 = 5)");
    }
    {
        std::vector<PhaseFn> fns;
        for (int t = 0; t < 3; ++t) {
            const double a = draw_real(rng, -1, 1), b = draw_real(rng, -1, 1),
                         c = draw_real(rng, -1, 1);
            const int i = draw_int(rng, 0, 1), j = draw_int(rng, 0, 1), k = draw_int(rng, 0, 1);
            fns.push_back([a, b, c, i, j, k](const VectorXd& x, const VectorXd& psi) {
                return a * x[i] * psi[j] + b * x[k] * x[k] + c * psi[i];
            });
        }
        const CostateState s{draw_vector(rng, 2, -2, 2), draw_vector(rng, 2, -2, 2)};
        double worst = 0.0;
        for (std::size_t i = 0; i < fns.size(); ++i)
            for (std::size_t j = 0; j < fns.size(); ++j)
                worst = std::max(worst,
                                 std::abs(bracket1(fns[i], fns[j], s) + bracket1(fns[j], fns[i], s)));
        add(out, "bracket_antisymmetry", worst <= 1e-9, "max |{F,G}+{G,F}| = " + num(worst));
    }
    {
        const OneForm f = canonical_pair_form(2);
        const VectorXd y = draw_vector(rng, 4, -2, 2);
        const MatrixXd B = fj_bracket(f, y);
        MatrixXd expected = MatrixXd::Zero(4, 4);
        expected.topRightCorner(2, 2) = MatrixXd::Identity(2, 2);
        expected.bottomLeftCorner(2, 2) = -MatrixXd::Identity(2, 2);
        const double err = (B - expected).cwiseAbs().maxCoeff();
        add(out, "pair_form_canonical_bracket", err <= 1e-9, "max deviation " + num(err));
    }
    {
        const VectorField v = rotation_field();
        ScalarField H;
        H.value = [v](const VectorXd& y) { return h1(v, unpack(y)); };
        const OneForm f = canonical_pair_form(2);
        double worst = 0.0;
        const VectorField ext = extend(v);
        for (int t = 0; t < 5; ++t) {
            const VectorXd y = draw_vector(rng, 4, -2, 2);
            worst = std::max(worst, (fj_flow(f, H, y) - ext(y)).cwiseAbs().maxCoeff());
        }
        add(out, "structure_flow_matches_extension", worst <= 1e-6, "max deviation " + num(worst));
    }
    {
        const OneForm closed{2, [](const VectorXd& x) -> VectorXd {
                                 VectorXd g(2);
                                 g << 2 * x[0], 3.0;  // gradient of x1^2 + 3 x2
                                 return g;
                             }};
        bool threw = false;
        double det = 0.0;
        try {
            fj_bracket(closed, VectorXd::Ones(2));
        } catch (const SingularStructureError& e) {
            threw = true;
            det = e.det;
        }
        add(out, "closed_form_rejected", threw, "det " + num(det));
    }
    {
        const VectorField v = rotation_field();
        AntisymmetricTensorField A;
        A.dim = 2;
        A.order = 1;
        A.coeffs = [v](const VectorXd& x) {
            AntisymmetricTensor t(2, 1);
            t.packed() = v.eval(x);
            return t;
        };
        double worst = 0.0;
        for (int t = 0; t < 5; ++t)
            worst = std::max(worst,
                             mbky_residual(A, v, draw_vector(rng, 2, -2, 2)).max_abs());
        add(out, "field_transports_itself", worst <= 1e-6, "max residual " + num(worst));
    }
    {
        // For the rotation field both the velocity and the position covector
        // are invariant order-1 tensors; their wedge must be invariant too.
        const VectorField v = rotation_field();
        AntisymmetricTensorField A1;
        A1.dim = 2;
        A1.order = 1;
        A1.coeffs = [v](const VectorXd& x) {
            AntisymmetricTensor t(2, 1);
            t.packed() = v.eval(x);
            return t;
        };
        AntisymmetricTensorField A2;
        A2.dim = 2;
        A2.order = 1;
        A2.coeffs = [](const VectorXd& x) {
            AntisymmetricTensor t(2, 1);
            t.packed() = x;
            return t;
        };
        const AntisymmetricTensorField W = wedge({A1, A2});
        double worst = 0.0;
        for (int t = 0; t < 5; ++t)
            worst = std::max(worst,
                             mbky_residual(W, v, draw_vector(rng, 2, -2, 2)).max_abs());
        add(out, "wedge_of_invariants_invariant", worst <= 1e-6, "max residual " + num(worst));
    }
    return out;
}

std::vector<CheckResult> suite_nambu() {
    std::vector<CheckResult> out;
    std::mt19937 rng(2026);

    NambuSystem probe;
    probe.dim = 3;
    probe.weight = draw_real(rng, 0.5, 2.0);
    probe.hamiltonians = {ScalarField{[](const VectorXd& u) { return u[0]; }, {}},
                          ScalarField{[](const VectorXd& u) { return u[1]; }, {}}};

    {
        std::vector<RealFn> fns;
        for (int t = 0; t < 3; ++t) {
            const VectorXd a = draw_vector(rng, 3, -1, 1);
            const double q = draw_real(rng, -1, 1);
            const int i = draw_int(rng, 0, 2), j = draw_int(rng, 0, 2);
            fns.push_back([a, q, i, j](const VectorXd& u) { return a.dot(u) + q * u[i] * u[j]; });
        }
        const VectorXd u = draw_vector(rng, 3, -1, 1);
        double worst = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                if (i == j) continue;
                // Swapping the first two slots must flip the sign.
                worst = std::max(worst, std::abs(bracket3(probe, fns[i], fns[j], fns[3 - i - j], u) +
                                                 bracket3(probe, fns[j], fns[i], fns[3 - i - j], u)));
            }
        add(out, "ternary_antisymmetry", worst <= 1e-9, "max deviation " + num(worst));
    }
    {
        const VectorXd a = draw_vector(rng, 3, -1, 1), b = draw_vector(rng, 3, -1, 1),
                       c = draw_vector(rng, 3, -1, 1);
        Eigen::Matrix3d m;
        m.row(0) = a;
        m.row(1) = b;
        m.row(2) = c;
        const double expected = probe.weight * m.determinant();
        const double got = bracket3(
            probe, [a](const VectorXd& u) { return a.dot(u); },
            [b](const VectorXd& u) { return b.dot(u); },
            [c](const VectorXd& u) { return c.dot(u); }, draw_vector(rng, 3, -1, 1));
        add(out, "ternary_linear_determinant", std::abs(got - expected) <= 1e-9,
            "deviation " + num(std::abs(got - expected)));
    }
    {
        const RealFn A = [](const VectorXd& u) { return u[0] + 0.5 * u[1] * u[1]; };
        const RealFn Ap = [](const VectorXd& u) { return u[2] - 0.2 * u[0] * u[1]; };
        const RealFn B = [](const VectorXd& u) { return u[1] * u[2]; };
        const RealFn C = [](const VectorXd& u) { return u[0] * u[2] + u[1]; };
        const VectorXd u = draw_vector(rng, 3, -1, 1);
        const RealFn AAp = [A, Ap](const VectorXd& u) { return A(u) * Ap(u); };
        const double lhs = bracket3(probe, AAp, B, C, u);
        const double rhs =
            A(u) * bracket3(probe, Ap, B, C, u) + Ap(u) * bracket3(probe, A, B, C, u);
        add(out, "ternary_leibniz", std::abs(lhs - rhs) <= 1e-6,
            "deviation " + num(std::abs(lhs - rhs)));
    }
    {
        double worst = 0.0;
        for (const auto& [p, N] : std::vector<std::pair<int, int>>{{1, 3}, {2, 4}, {3, 5}}) {
            NambuSystem sys;
            sys.dim = N;
            sys.weight = draw_real(rng, 0.5, 2.0);
            for (int i = 0; i < p; ++i) sys.hamiltonians.push_back(random_sparse_polynomial(N, rng));
            const VectorField f = nambu_vector_field(sys);
            for (int t = 0; t < 2; ++t)
                worst = std::max(worst, std::abs(divergence_fd(f, draw_vector(rng, N, -1, 1))));
        }
        add(out, "flows_divergence_free", worst <= 1e-6, "max |div| = " + num(worst));
    }
    {
        NambuSystem twin;
        twin.dim = 3;
        twin.weight = 1.0;
        const ScalarField H = random_sparse_polynomial(3, rng);
        twin.hamiltonians = {H, H};
        const double speed = nambu_flow(twin, draw_vector(rng, 3, -1, 1)).cwiseAbs().maxCoeff();
        add(out, "identical_hamiltonians_freeze", speed <= 1e-15, "max |v| = " + num(speed));
    }
    {
        Eigen::Vector3d gammas(1, 2, 3);
        VectorXd u0(3);
        u0 << 0.1, -0.2, 0.3;
        const auto drifts =
            hamiltonian_drift(reduced3_system(gammas), u0, {Method::rk4, 1e-3, 10.0, 10});
        const double worst = std::max(drifts[0], drifts[1]);
        add(out, "reduced_threevortex_conserved", worst <= 1e-7, "max relative drift " + num(worst));
    }
    {
        NambuSystem rot;
        rot.dim = 2;
        rot.weight = 1.0;
        rot.hamiltonians = {ScalarField{
            [](const VectorXd& x) { return 0.5 * x.squaredNorm(); },
            [](const VectorXd& x) -> VectorXd { return x; }}};
        double worst = 0.0;
        const VectorField ref = rotation_field();
        for (int t = 0; t < 5; ++t) {
            const VectorXd x = draw_vector(rng, 2, -2, 2);
            worst = std::max(worst, (nambu_flow(rot, x) - ref(x)).cwiseAbs().maxCoeff());
        }
        add(out, "planar_flow_from_single_hamiltonian", worst <= 1e-12,
            "max deviation " + num(worst));
    }
    return out;
}

std::vector<CheckResult> suite_vortex() {
    std::vector<CheckResult> out;
    std::mt19937 rng(2027);

    {
        VortexConfiguration c;
        c.gammas = VectorXd::Ones(2);
        c.positions = {{1, 0}, {-1, 0}};
        const auto dz = vortex_rhs(c);
        const double err = std::max(std::abs(dz[0] - std::complex<double>(0, 0.5)),
                                    std::abs(dz[1] - std::complex<double>(0, -0.5)));
        add(out, "counter_rotating_pair", err <= 1e-12, "max deviation " + num(err));
    }
    {
        VortexConfiguration c;
        c.gammas = draw_vector(rng, 3, 0.5, 2.0);
        c.positions = {{0, 0}, {1.3, 0.2}, {0.4, 1.1}};
        const double theta = draw_real(rng, 0, 6.28);
        const std::complex<double> rot(std::cos(theta), std::sin(theta));
        VortexConfiguration cr = c;
        for (auto& z : cr.positions) z *= rot;
        const auto dz = vortex_rhs(c);
        const auto dzr = vortex_rhs(cr);
        double worst = 0.0;
        for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(dzr[i] - rot * dz[i]));
        add(out, "rotational_equivariance", worst <= 1e-12, "max deviation " + num(worst));
    }
    {
        VortexConfiguration c;
        c.gammas = VectorXd::Ones(3);
        c.positions = {{0, 0}, {1, 0}, {1, 1}};
        const ReducedState s = reduce3(c);
        Eigen::Vector3d expected(0.0, std::log(2.0), 0.0);
        const double err = (s.u - expected).cwiseAbs().maxCoeff();
        add(out, "reduction_log_distances", err <= 1e-12, "max deviation " + num(err));
    }
    {
        Eigen::Vector3d gammas(1, 2, 3);
        const NambuSystem sys = reduced3_system(gammas);
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            const VectorXd u = draw_vector(rng, 3, -1, 1);
            const Eigen::Vector3d direct = reduced_rhs(ReducedState{u, gammas});
            worst = std::max(worst, (nambu_flow(sys, u) - direct).cwiseAbs().maxCoeff());
        }
        add(out, "reduced_flow_two_hamiltonian_form", worst <= 1e-8, "max deviation " + num(worst));
    }
    {
        VectorXd gammas(3);
        gammas << 1, 2, 3;
        const VectorField v = vortex_field(gammas);
        std::vector<std::complex<double>> z0 = {{0, 0}, {1.3, 0.2}, {0.4, 1.1}};
        const VectorXd x0 = interleave(z0);
        const MonitorSet mons = {
            {"H",
             [gammas](const VectorXd& s) {
                 return vortex_hamiltonian(VortexConfiguration{gammas, deinterleave(s), {}});
             }},
            {"Px",
             [gammas](const VectorXd& s) {
                 return linear_impulse(VortexConfiguration{gammas, deinterleave(s), {}})[0];
             }},
            {"Py",
             [gammas](const VectorXd& s) {
                 return linear_impulse(VortexConfiguration{gammas, deinterleave(s), {}})[1];
             }},
        };
        const Trajectory traj = integrate(v, x0, {Method::rk4, 1e-3, 5.0, 10}, mons);
        const double dh = drift_of(traj, 0);
        const double dp = std::max(drift_of(traj, 1), drift_of(traj, 2));
        add(out, "energy_conserved_three_vortices", dh <= 1e-6, "relative drift " + num(dh));
        add(out, "impulse_conserved_three_vortices", dp <= 1e-8, "relative drift " + num(dp));
    }
    {
        // Informational only: the reduced flow is compared against the
        // reduction of the full flow from the same start. These can differ by
        // a state-dependent time rescaling, so no tolerance is asserted.
        VectorXd gammas(3);
        gammas << 1, 2, 3;
        std::vector<std::complex<double>> z0 = {{0, 0}, {1.3, 0.2}, {0.4, 1.1}};
        const VectorXd x0 = interleave(z0);
        const Trajectory full = integrate(vortex_field(gammas), x0, {Method::rk4, 1e-3, 1.0, 100});
        const ReducedState s0 = reduce3(VortexConfiguration{gammas, z0, {}});
        const Trajectory red =
            integrate(reduced3_field(gammas), s0.u, {Method::rk4, 1e-3, 1.0, 100});
        double worst = 0.0;
        for (std::size_t i = 0; i < full.size(); ++i) {
            const ReducedState si =
                reduce3(VortexConfiguration{gammas, deinterleave(full.states[i]), {}});
            worst = std::max(worst, (si.u - Eigen::Vector3d(red.states[i])).cwiseAbs().maxCoeff());
        }
        add(out, "reduction_trajectory_comparison", true,
            "informational: max gap " + num(worst) +
                " vs the direct reduced run (a state-dependent time rescaling is expected; "
                "not asserted)");
    }
    return out;
}

std::vector<CheckResult> suite_discrete() {
    std::vector<CheckResult> out;
    std::mt19937 rng(2028);

    {
        const auto rep = reversibility(cat_map(), draw_vector(rng, 2, 0, 1));
        add(out, "torus_map_unimodular", rep.reversible && std::abs(rep.det - 1.0) <= 1e-12,
            "det " + num(rep.det));
    }
    {
        const auto rep = reversibility(fanout_map(), draw_vector(rng, 2, 0, 1));
        add(out, "fanout_irreversible", !rep.reversible && rep.det == 0.0, "det " + num(rep.det));
    }
    {
        const double tau = 1e-2;
        const VectorField v = rotation_field();
        DiscreteSystem sys;
        sys.dim = 2;
        sys.step = [v, tau](const VectorXd& S) -> VectorXd { return S + tau * v.eval(S); };
        const auto rep = reversibility(sys, draw_vector(rng, 2, -1, 1));
        add(out, "near_identity_regular", rep.reversible && std::abs(rep.det - 1.0) <= 2 * tau * tau,
            "det - 1 = " + num(rep.det - 1.0));
    }
    {
        double worst = 0.0;
        for (const auto& sys : {cat_map(), cubic_shear_map()}) {
            for (int t = 0; t < 10; ++t) {
                const VectorXd S = draw_vector(rng, 2, 0, 1);
                worst = std::max(worst,
                                 (sys.inverse_step(sys.step(S)) - S).cwiseAbs().maxCoeff());
            }
        }
        add(out, "inverse_maps_consistent", worst <= 1e-9, "max deviation " + num(worst));
    }
    {
        // Tangent/costate duality: transport both with the Jacobian at the
        // pre-step state and watch the pairing.
        const DiscreteSystem sys = cubic_shear_map();
        ExtendedDiscreteState es{draw_vector(rng, 2, -0.5, 0.5), draw_vector(rng, 2, -1, 1)};
        VectorXd dS = draw_vector(rng, 2, -1, 1);
        const double p0 = es.l.dot(dS);
        double worst = 0.0;
        for (int k = 0; k < 50; ++k) {
            const MatrixXd M = sys.step_jacobian(es.S);
            es = costate_step(sys, es, CostateMode::pre_step);
            dS = M * dS;
            worst = std::max(worst, std::abs(es.l.dot(dS) - p0) / std::max(1.0, std::abs(p0)));
        }
        add(out, "duality_pairing_constant", worst <= 1e-6, "max relative drift " + num(worst));
    }
    {
        const DiscreteSystem sys = cat_map();
        const VectorXd S = draw_vector(rng, 2, 0, 1);
        const VectorXd l1 = draw_vector(rng, 2, -1, 1), l2 = draw_vector(rng, 2, -1, 1);
        const double alpha = draw_real(rng, -2, 2), beta = draw_real(rng, -2, 2);
        const VectorXd combined = costate_step(sys, {S, alpha * l1 + beta * l2}).l;
        const VectorXd parts =
            alpha * costate_step(sys, {S, l1}).l + beta * costate_step(sys, {S, l2}).l;
        const double err = (combined - parts).cwiseAbs().maxCoeff();
        add(out, "coprocessor_linearity", err <= 1e-12, "max deviation " + num(err));
    }
    {
        const DiscreteSystem sys = cat_map();
        std::vector<VectorXd> states, costates;
        VectorXd S = draw_vector(rng, 2, 0, 1);
        for (int k = 0; k < 5; ++k) {
            states.push_back(S);
            costates.push_back(draw_vector(rng, 2, -1, 1));
            S = sys.step(S);
        }
        double naive = 0.0;
        for (int k = 0; k < 5; ++k) {
            const VectorXd phi = sys.step(states[k]);
            for (int i = 0; i < 2; ++i) naive += costates[k][i] * phi[i];
        }
        const double got = discrete_hamiltonian(sys, states, costates);
        add(out, "action_sum_matches_naive", std::abs(got - naive) <= 1e-12, "value " + num(got));
    }
    {
        const auto rep = coherence_check(rotation_field(), draw_vector(rng, 2, -1, 1),
                                         {1e-2, 5e-3, 2.5e-3});
        const bool ok = rep.residual_order >= 1.8 && rep.residual_order <= 2.2;
        add(out, "determinant_expansion_second_order", ok,
            "residual order " + num(rep.residual_order));
    }
    {
        Eigen::Vector3d gammas(1, 2, 3);
        VectorXd u = draw_vector(rng, 3, -0.5, 0.5);
        const auto rep = coherence_check(reduced3_field(gammas), u, {1e-2, 5e-3, 2.5e-3});
        add(out, "volume_preserving_first_order_clean", std::abs(rep.first_order_term) <= 1e-6,
            "first-order term " + num(rep.first_order_term));
    }
    return out;
}

std::vector<CheckResult> suite_qmcheck() {
    std::vector<CheckResult> out;

    {
        const double r = stationarity_residual({1.0, 2.0, 64, 4});
        add(out, "flat_at_dimension_four", r == 0.0, "residual " + num(r));
    }
    {
        const double v1 = conformal_potential(1, 1.0);
        const double v2 = conformal_potential(2, 2.0);
        add(out, "potential_values", v1 == 12.0 && v2 == 2.0,
            "V(d=1,r=1) = " + num(v1) + ", V(d=2,r=2) = " + num(v2));
    }
    {
        const double ra = stationarity_residual({1.0, 2.0, 201, 1});
        const double rb = stationarity_residual({1.0, 2.0, 401, 1});
        const double order = std::log2(ra / rb);
        add(out, "second_order_grid_convergence", order >= 1.7 && order <= 2.3,
            "order " + num(order) + " (residuals " + num(ra) + " -> " + num(rb) + ")");
    }
    return out;
}

}  // namespace

std::vector<CheckResult> run_suite(const std::string& suite) {
    if (suite == "flows") return suite_flows();
    if (suite == "costate") return suite_costate();
    if (suite == "nambu") return suite_nambu();
    if (suite == "vortex") return suite_vortex();
    if (suite == "discrete") return suite_discrete();
    if (suite == "qmcheck") return suite_qmcheck();
    if (suite == "all") {
        std::vector<CheckResult> all;
        for (const char* name : {"flows", "costate", "nambu", "vortex", "discrete", "qmcheck"}) {
            auto part = run_suite(name);
            for (auto& r : part) all.push_back(std::move(r));
        }
        return all;
    }
    throw ConfigError("unknown suite '" + suite +
                      "' (expected flows, costate, nambu, vortex, discrete, qmcheck, or all)");
}

}  // namespace npdyn
