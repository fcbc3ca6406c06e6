#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include <Eigen/Geometry>

#include "npdyn/vortex.hpp"

using namespace npdyn;
using std::complex;

namespace {

VortexConfiguration symmetric_pair() {
    VortexConfiguration c;
    c.gammas = (VectorXd(2) << 1.0, 1.0).finished();
    c.positions = {complex<double>(1.0, 0.0), complex<double>(-1.0, 0.0)};
    return c;
}

}  // namespace

TEST_CASE("the symmetric pair velocity and hamiltonian have their closed forms") {
    const VortexConfiguration c = symmetric_pair();
    const auto v = vortex_rhs(c);
    // dz1/dt = i * 1 / conj(2) = i/2; the mirror vortex moves oppositely.
    CHECK(v[0].real() == doctest::Approx(0.0));
    CHECK(v[0].imag() == doctest::Approx(0.5));
    CHECK(v[1].real() == doctest::Approx(0.0));
    CHECK(v[1].imag() == doctest::Approx(-0.5));
    // Ordered pairs double-count: H = 2 ln 2.
    CHECK(vortex_hamiltonian(c) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
    const Eigen::Vector2d p = linear_impulse(c);
    CHECK(p[0] == doctest::Approx(0.0));
    CHECK(p[1] == doctest::Approx(0.0));
}

TEST_CASE("the hand-differentiated pair jacobian matches both the frozen matrix and fd") {
    const VectorField v = vortex_field((VectorXd(2) << 1.0, 1.0).finished());
    const VectorXd s = (VectorXd(4) << 1.0, 0.0, -1.0, 0.0).finished();
    MatrixXd expected(4, 4);
    expected << 0, -0.25, 0, 0.25,
                -0.25, 0, 0.25, 0,
                0, 0.25, 0, -0.25,
                0.25, 0, -0.25, 0;
    const MatrixXd J = v.analytic_jacobian(s);
    CHECK((J - expected).cwiseAbs().maxCoeff() < 1e-14);
    const MatrixXd Jfd = jacobian_fd(v, s);
    CHECK((J - Jfd).cwiseAbs().maxCoeff() < 1e-7);

    // Same agreement at a generic asymmetric three-vortex state.
    const VectorField v3 = vortex_field((VectorXd(3) << 1.0, -2.0, 0.5).finished());
    const VectorXd s3 = (VectorXd(6) << 0.3, 1.1, -0.7, 0.2, 0.9, -1.4).finished();
    CHECK((v3.analytic_jacobian(s3) - jacobian_fd(v3, s3)).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("an equal pair co-rotates: period 4 pi, conserved radius, impulse, energy") {
    const VectorXd gammas = (VectorXd(2) << 1.0, 1.0).finished();
    const VectorField v = vortex_field(gammas);
    const VectorXd s0 = (VectorXd(4) << 1.0, 0.0, -1.0, 0.0).finished();
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 4.0 * M_PI;  // angular speed 1/2 at unit radius
    cfg.record_every = 200;
    const MonitorSet mon = {
        {"H",
         [&gammas](const VectorXd& s) {
             VortexConfiguration c;
             c.gammas = gammas;
             c.positions = deinterleave(s);
             return vortex_hamiltonian(c);
         }},
        {"Px",
         [&gammas](const VectorXd& s) {
             VortexConfiguration c;
             c.gammas = gammas;
             c.positions = deinterleave(s);
             return linear_impulse(c)[0];
         }},
        {"r1", [](const VectorXd& s) { return std::hypot(s[0], s[1]); }},
    };
    const Trajectory traj = integrate(v, s0, cfg, mon);
    CHECK((traj.states.back() - s0).cwiseAbs().maxCoeff() < 1e-6);
    for (std::size_t m = 0; m < mon.size(); ++m) {
        const double first = traj.monitor_values[m][0];
        for (double val : traj.monitor_values[m]) {
            CHECK(std::abs(val - first) < 1e-8);
        }
    }
}

TEST_CASE("near-coincident vortices raise a collision naming the pair") {
    VortexConfiguration c;
    c.gammas = (VectorXd(3) << 1.0, 1.0, 1.0).finished();
    c.positions = {complex<double>(0.0, 0.0), complex<double>(1.0, 0.0),
                   complex<double>(1.0, 1e-12)};
    try {
        vortex_rhs(c);
        FAIL("expected CollisionError");
    } catch (const CollisionError& e) {
        CHECK(e.first == 1);
        CHECK(e.second == 2);
    }
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("configuration validation rejects bad circulations and quantization") {
    VortexConfiguration c = symmetric_pair();
    c.validate();
    c.gammas[0] = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.gammas[0] = 1.0;
    c.quantum = 0.4;  // 1.0 is not an integer multiple of 0.4
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.quantum = 0.5;
    c.validate();
    c.gammas = (VectorXd(1) << 1.0).finished();  // length mismatch
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("the three-vortex reduction takes its frozen values") {
    VortexConfiguration c;
    c.gammas = (VectorXd(3) << 1.0, 1.0, 1.0).finished();
    c.positions = {complex<double>(0.0, 0.0), complex<double>(1.0, 0.0),
                   complex<double>(1.0, 1.0)};
    const ReducedState s = reduce3(c);
    CHECK(s.u[0] == doctest::Approx(0.0));          // ln|z2-z3|^2 = ln 1
    CHECK(s.u[1] == doctest::Approx(std::log(2.0)));  // ln|z3-z1|^2 = ln 2
    CHECK(s.u[2] == doctest::Approx(0.0));
    const Eigen::Vector3d du = reduced_rhs(s);
    CHECK(du[0] == doctest::Approx(1.0));   // e^{u2} - e^{u3} = 2 - 1
    CHECK(du[1] == doctest::Approx(0.0));
    CHECK(du[2] == doctest::Approx(-1.0));
    const auto [h1v, h2v] = reduced_integrals(s);
    CHECK(h1v == doctest::Approx(4.0));
    CHECK(h2v == doctest::Approx(std::log(2.0)));

    ReducedState origin;
    origin.u = Eigen::Vector3d::Zero();
    origin.gammas = Eigen::Vector3d(1.0, 1.0, 1.0);
    const auto [h1o, h2o] = reduced_integrals(origin);
    CHECK(h1o == doctest::Approx(3.0));
    CHECK(h2o == doctest::Approx(0.0));

    VortexConfiguration two = symmetric_pair();
    CHECK_THROWS_AS(reduce3(two), DimensionError);
}

TEST_CASE("the reduction of the full flow follows the reduced direction field") {
    // The reduced equations hold in a reparameterized time: along the true
    // dynamics du/dt is collinear with gamma_i (e^{u_j} - e^{u_k}) but scaled
    // by a state-dependent (orientation-signed) factor. Assert collinearity,
    // not pointwise equality.
    VortexConfiguration c;
    c.gammas = (VectorXd(3) << 1.0, 2.0, 3.0).finished();
    c.positions = {complex<double>(0.0, 0.0), complex<double>(1.3, 0.2),
                   complex<double>(0.4, 1.1)};
    const VectorField v = vortex_field(c.gammas);
    const VectorXd s0 = interleave(c.positions);
    const double tau = 1e-6;
    IntegratorConfig cfg;
    cfg.dt = tau;
    cfg.t_end = tau;
    const Trajectory traj = integrate(v, s0, cfg);
    VortexConfiguration after = c;
    after.positions = deinterleave(traj.states.back());
    const Eigen::Vector3d du_fd = (reduce3(after).u - reduce3(c).u) / tau;
    const Eigen::Vector3d du = reduced_rhs(reduce3(c));
    const double cosine = du_fd.dot(du) / (du_fd.norm() * du.norm());
    CHECK(std::abs(cosine) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(du_fd.cross(du).norm() / (du_fd.norm() * du.norm()) < 1e-4);
}

TEST_CASE("both reduced integrals pull back to conserved quantities of the full flow") {
    // H1 scaled by gamma1 gamma2 gamma3 is the circulation-weighted second
    // moment of the pair distances; H2 scaled likewise is twice the
    // interaction energy. Both must hold along the true dynamics.
    VortexConfiguration c;
    c.gammas = (VectorXd(3) << 1.0, 2.0, 3.0).finished();
    c.positions = {complex<double>(0.0, 0.0), complex<double>(1.3, 0.2),
                   complex<double>(0.4, 1.1)};
    const VectorField v = vortex_field(c.gammas);
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 5.0;
    cfg.record_every = 100;
    const auto pullback = [&c](const VectorXd& s) {
        VortexConfiguration now = c;
        now.positions = deinterleave(s);
        return reduced_integrals(reduce3(now));
    };
    const Trajectory traj = integrate(
        v, interleave(c.positions), cfg,
        {{"H1", [&pullback](const VectorXd& s) { return pullback(s).first; }},
         {"H2", [&pullback](const VectorXd& s) { return pullback(s).second; }}});
    for (const auto& series : traj.monitor_values) {
        for (double val : series) {
            CHECK(std::abs(val - series[0]) < 1e-7 * std::max(1.0, std::abs(series[0])));
        }
    }
}

TEST_CASE("interleaving round-trips and rejects odd lengths") {
    const std::vector<complex<double>> zs = {complex<double>(1.0, 2.0), complex<double>(-3.0, 4.0)};
    const VectorXd s = interleave(zs);
    REQUIRE(s.size() == 4);
    CHECK(s[0] == 1.0);
    CHECK(s[1] == 2.0);
    CHECK(s[2] == -3.0);
    CHECK(s[3] == 4.0);
    const auto back = deinterleave(s);
    CHECK(back == zs);
    CHECK_THROWS_AS(deinterleave(VectorXd::Zero(3)), DimensionError);
}

TEST_CASE("the reduced field's exponential jacobian matches finite differences") {
    const VectorField v = reduced3_field(Eigen::Vector3d(1.0, -2.0, 0.5));
    const VectorXd u = (VectorXd(3) << 0.2, -0.7, 0.4).finished();
    CHECK((v.analytic_jacobian(u) - jacobian_fd(v, u)).cwiseAbs().maxCoeff() < 1e-8);
    // Conservation along the reduced flow itself.
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 5.0;
    cfg.record_every = 100;
    ReducedState rs;
    rs.gammas = Eigen::Vector3d(1.0, -2.0, 0.5);
    const Trajectory traj = integrate(
        v, u, cfg,
        {{"H1",
          [&rs](const VectorXd& uu) {
              ReducedState t = rs;
              t.u = uu;
              return reduced_integrals(t).first;
          }},
         {"H2", [&rs](const VectorXd& uu) {
              ReducedState t = rs;
              t.u = uu;
              return reduced_integrals(t).second;
          }}});
    for (const auto& series : traj.monitor_values) {
        for (double val : series) CHECK(std::abs(val - series[0]) < 1e-9);
    }
}
