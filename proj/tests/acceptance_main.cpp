/// Acceptance gate: ten end-to-end properties with pinned tolerances, one
/// verdict line each. Exits nonzero when any property fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "npdyn/checks.hpp"
#include "npdyn/costate.hpp"
#include "npdyn/discrete.hpp"
#include "npdyn/nambu.hpp"
#include "npdyn/qmcheck.hpp"
#include "npdyn/vortex.hpp"

using namespace npdyn;

namespace {

int failures = 0;

void verdict(int number, const std::string& what, bool passed, const std::string& metric) {
    std::printf("[%s] %2d. %s (%s)\n", passed ? "PASS" : "FAIL", number, what.c_str(),
                metric.c_str());
    if (!passed) ++failures;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

AntisymmetricTensorField order_one(const VectorField& v) {
    AntisymmetricTensorField A;
    A.dim = v.dim;
    A.order = 1;
    A.coeffs = [v](const VectorXd& x) {
        AntisymmetricTensor t(v.dim, 1);
        t.packed() = v(x);
        return t;
    };
    return A;
}

double h1_relative_drift(const VectorField& base, const VectorXd& z0) {
    const VectorField ext = extend(base);
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 10.0;
    cfg.record_every = 100;
    const Trajectory traj = integrate(
        ext, z0, cfg, {{"H1", [&base](const VectorXd& z) { return h1(base, unpack(z)); }}});
    const double initial = traj.monitor_values[0][0];
    double drift = 0.0;
    for (double v : traj.monitor_values[0]) drift = std::max(drift, std::abs(v - initial));
    return drift / std::max(1.0, std::abs(initial));
}

void criterion1() {
    const NambuSystem sys = reduced3_system(Eigen::Vector3d(1.0, 2.0, 3.0));
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 10.0;
    cfg.record_every = 100;
    const VectorXd u0 = (VectorXd(3) << 0.1, -0.2, 0.3).finished();
    const std::vector<double> drifts = hamiltonian_drift(sys, u0, cfg);
    const double worst = std::max(drifts[0], drifts[1]);
    verdict(1, "reduced 3-vortex integrals drift below 1e-7 over t=10", worst <= 1e-7,
            "max relative drift " + num(worst));
}

void criterion2() {
    const Eigen::Vector3d gammas(1.0, 2.0, 3.0);
    const NambuSystem sys = reduced3_system(gammas);
    std::mt19937 rng(42);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const VectorXd u = draw_vector(rng, 3, -1.0, 1.0);
        ReducedState s;
        s.u = u;
        s.gammas = gammas;
        const Eigen::Vector3d direct = reduced_rhs(s);
        const VectorXd via = nambu_flow(sys, u);
        worst = std::max(worst, (via - direct).cwiseAbs().maxCoeff());
    }
    verdict(2, "two-hamiltonian bracket flow equals the reduced equations at 100 points",
            worst <= 1e-8, "max abs gap " + num(worst));
}

void criterion3() {
    std::mt19937 rng(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const int dim = draw_int(rng, 3, 5);
        const int order = draw_int(rng, 1, std::min(3, dim - 1));
        NambuSystem sys;
        sys.dim = dim;
        for (int i = 0; i < order; ++i)
            sys.hamiltonians.push_back(random_sparse_polynomial(dim, rng));
        const VectorField v = nambu_vector_field(sys);
        const VectorXd x = draw_vector(rng, dim, -1.0, 1.0);
        worst = std::max(worst, std::abs(divergence_fd(v, x)));
    }
    verdict(3, "ten random polynomial bracket flows are divergence-free", worst <= 1e-6,
            "max |div| " + num(worst));
}

void criterion4() {
    const double rot = h1_relative_drift(
        rotation_field(), (VectorXd(4) << 1.0, 0.0, 0.3, -0.4).finished());
    const double vort = h1_relative_drift(
        vortex_field((VectorXd(2) << 1.0, 1.0).finished()),
        (VectorXd(8) << 1.0, 0.0, -1.0, 0.0, 0.3, -0.2, 0.5, 0.1).finished());

    // Pairing invariance: transport a perturbation through the doubled flow
    // and pair it with the costate at matching times.
    const VectorField base = rotation_field();
    const VectorField ext = extend(base);
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 10.0;
    cfg.record_every = 1000;
    const VectorXd x0 = (VectorXd(2) << 0.8, -0.4).finished();
    const VectorXd psi0 = (VectorXd(2) << 0.7, 0.2).finished();
    const VectorXd dx0 = (VectorXd(2) << 1e-6, -2e-6).finished();
    const Trajectory a = integrate(ext, pack({x0, psi0}), cfg);
    const Trajectory b = integrate(ext, pack({(x0 + dx0).eval(), psi0}), cfg);
    double pairing_gap = 0.0;
    const double pairing0 = psi0.dot(dx0);
    for (std::size_t k = 0; k < a.size(); ++k) {
        const VectorXd dx = b.states[k].head(2) - a.states[k].head(2);
        const VectorXd psi = a.states[k].tail(2);
        pairing_gap = std::max(pairing_gap,
                               std::abs(psi.dot(dx) - pairing0) / std::abs(pairing0));
    }
    const bool ok = rot <= 1e-7 && vort <= 1e-7 && pairing_gap <= 1e-6;
    verdict(4, "costate pairing hamiltonian conserved on rotation and two-vortex flows", ok,
            "drifts " + num(rot) + ", " + num(vort) + "; pairing gap " + num(pairing_gap));
}

void criterion5() {
    std::mt19937 rng(7);
    const VectorField fields[] = {rotation_field(),
                                  reduced3_field(Eigen::Vector3d(1.0, 2.0, 3.0)),
                                  vortex_field((VectorXd(2) << 1.0, -0.5).finished())};
    double worst = 0.0;
    for (const VectorField& v : fields) {
        const AntisymmetricTensorField A = order_one(v);
        for (int trial = 0; trial < 20; ++trial) {
            VectorXd x = draw_vector(rng, v.dim, -1.0, 1.0);
            if (v.dim == 4)
                x = (VectorXd(4) << 1.0, 0.0, -1.0, 0.3).finished() + 0.1 * x;
            worst = std::max(worst, mbky_residual(A, v, x).max_abs());
        }
    }

    // The wedge of two invariant order-one tensors of the rotation flow: the
    // flow itself and the radial (identity) field, both transport-invariant.
    const VectorField rot = rotation_field();
    VectorField radial;
    radial.dim = 2;
    radial.eval = [](const VectorXd& x) { return x; };
    const AntisymmetricTensorField wedge2 = wedge({order_one(rot), order_one(radial)});
    std::mt19937 rng2(8);
    double wedge_worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const VectorXd x = draw_vector(rng2, 2, -1.0, 1.0);
        wedge_worst = std::max(wedge_worst, mbky_residual(wedge2, rot, x).max_abs());
    }
    const bool ok = worst <= 1e-6 && wedge_worst <= 1e-6;
    verdict(5, "the flow and wedges of invariant tensors solve the transport equation", ok,
            "base residual " + num(worst) + ", wedge residual " + num(wedge_worst));
}

void criterion6() {
    const VectorField v = rotation_field();
    const OneForm f = canonical_pair_form(2);
    ScalarField H;
    H.value = [&v](const VectorXd& z) {
        const CostateState s = unpack(z);
        return v(s.x).dot(s.psi);
    };
    const VectorField ext = extend(v);
    std::mt19937 rng(9);
    double flow_gap = 0.0;
    double bracket_gap = 0.0;
    MatrixXd expected = MatrixXd::Zero(4, 4);
    expected.block(0, 2, 2, 2) = MatrixXd::Identity(2, 2);
    expected.block(2, 0, 2, 2) = -MatrixXd::Identity(2, 2);
    for (int trial = 0; trial < 20; ++trial) {
        const VectorXd y = draw_vector(rng, 4, -1.0, 1.0);
        flow_gap = std::max(flow_gap, (fj_flow(f, H, y) - ext(y)).cwiseAbs().maxCoeff());
        bracket_gap =
            std::max(bracket_gap, (fj_bracket(f, y) - expected).cwiseAbs().maxCoeff());
    }
    const bool ok = flow_gap <= 1e-6 && bracket_gap <= 1e-9;
    verdict(6, "first-order bracket flow on the pair form reproduces the doubled system", ok,
            "flow gap " + num(flow_gap) + ", bracket gap " + num(bracket_gap));
}

void criterion7() {
    VectorField v;
    v.dim = 2;
    v.eval = [](const VectorXd& x) {
        return (VectorXd(2) << x[0] * x[0] + 0.3 * x[1], x[0] - 0.5 * x[1] * x[1]).finished();
    };
    const VectorXd x = (VectorXd(2) << 0.4, 0.7).finished();
    const CoherenceReport rep = coherence_check(v, x, {1e-2, 5e-3, 2.5e-3});
    const CoherenceReport divfree =
        coherence_check(rotation_field(), (VectorXd(2) << 0.9, -0.2).finished(),
                        {1e-2, 5e-3, 2.5e-3});
    const bool ok = rep.residual_order >= 1.8 && rep.residual_order <= 2.2 &&
                    std::abs(divfree.first_order_term) <= 1e-6;
    verdict(7, "one-step volume change is 1 + tau div up to a second-order residual", ok,
            "slope " + num(rep.residual_order) + ", div-free first-order term " +
                num(std::abs(divfree.first_order_term)));
}

void criterion8() {
    const auto pairing_gap = [](const DiscreteSystem& sys, CostateMode mode, int steps) {
        ExtendedDiscreteState es;
        es.S = (VectorXd(2) << 0.2, 0.1).finished();
        es.l = (VectorXd(2) << 0.6, -0.3).finished();
        VectorXd dS = (VectorXd(2) << 0.8, 0.6).finished();
        const double first = es.l.dot(dS);
        double gap = 0.0;
        for (int k = 0; k < steps; ++k) {
            const MatrixXd M = sys.step_jacobian(
                mode == CostateMode::pre_step ? es.S : sys.step(es.S));
            es = costate_step(sys, es, mode);
            dS = M * dS;
            gap = std::max(gap, std::abs(es.l.dot(dS) - first) / std::abs(first));
        }
        return gap;
    };
    // The torus map is hyperbolic: costate and perturbation both grow like
    // lambda^k, amplifying pairing roundoff by lambda^{2k}, so the 1e-6
    // invariant is only representable in doubles for about twelve steps; the
    // parabolic shear holds the full hundred.
    const double cat_gap = pairing_gap(cat_map(), CostateMode::post_step, 12);
    const double shear_gap = pairing_gap(cubic_shear_map(), CostateMode::pre_step, 100);
    const ReversibilityReport fan =
        reversibility(fanout_map(), (VectorXd(2) << 0.7, 0.4).finished());
    const bool ok = cat_gap <= 1e-6 && shear_gap <= 1e-6 && !fan.reversible && fan.det == 0.0;
    verdict(8,
            "discrete costate pairing constant (torus map 12 steps at its conditioning "
            "limit, nonlinear shear 100); copying gate irreversible",
            ok, "gaps " + num(cat_gap) + ", " + num(shear_gap) + "; fan-out det " +
                    num(fan.det));
}

void criterion9() {
    bool ok = true;
    std::string detail = "orders";
    for (int d : {1, 2, 3, 5, 6}) {
        RadialGrid coarse;
        coarse.d = d;
        RadialGrid fine = coarse;
        fine.points = 2 * coarse.points - 1;
        const double order =
            std::log2(stationarity_residual(coarse) / stationarity_residual(fine));
        ok = ok && order >= 1.7 && order <= 2.3;
        detail += " " + num(order);
    }
    RadialGrid four;
    four.d = 4;
    const double flat = stationarity_residual(four);
    ok = ok && flat == 0.0;
    verdict(9, "stationarity residual converges at second order; vanishes in dimension four",
            ok, detail + "; d=4 residual " + num(flat));
}

void criterion10() {
    const VectorField v = rotation_field();
    const VectorXd x0 = (VectorXd(2) << 1.0, 0.0).finished();
    const auto error_at = [&](double dt) {
        IntegratorConfig cfg;
        cfg.dt = dt;
        cfg.t_end = 2.0;
        cfg.record_every = 1 << 20;
        const Trajectory traj = integrate(v, x0, cfg);
        const VectorXd exact = (VectorXd(2) << std::cos(2.0), -std::sin(2.0)).finished();
        return (traj.states.back() - exact).cwiseAbs().maxCoeff();
    };
    const double order = std::log2(error_at(0.1) / error_at(0.05));
    verdict(10, "fixed-step integrator converges at fourth order on the closed-form orbit",
            order >= 3.7 && order <= 4.3, "order " + num(order));
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    if (failures == 0) {
        std::printf("all 10 acceptance properties hold\n");
        return 0;
    }
    std::printf("%d acceptance propert%s failed\n", failures, failures == 1 ? "y" : "ies");
    return 1;
}
