#include "npdyn/vortex.hpp"

#include <cmath>

namespace npdyn {

void VortexConfiguration::validate(double eps) const {
    const int n = size();
    if (gammas.size() != n)
        throw ConfigError(std::to_string(gammas.size()) + " circulations for " +
                          std::to_string(n) + " positions");
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(gammas[i]) || gammas[i] == 0.0)
            throw ConfigError("circulation " + std::to_string(i) + " must be finite and nonzero");
        if (!std::isfinite(positions[i].real()) || !std::isfinite(positions[i].imag()))
            throw ConfigError("position " + std::to_string(i) + " is not finite");
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(positions[i] - positions[j]) < eps)
                throw ConfigError("positions " + std::to_string(i) + " and " + std::to_string(j) +
                                  " coincide");
    if (quantum) {
        if (!(*quantum > 0)) throw ConfigError("circulation unit must be positive");
        for (int i = 0; i < n; ++i) {
            const double ratio = gammas[i] / *quantum;
            if (std::abs(ratio - std::round(ratio)) > 1e-9 || std::round(ratio) == 0.0)
                throw ConfigError("circulation " + std::to_string(i) +
                                  " is not a nonzero integer multiple of the unit");
        }
    }
}

void ReducedState::validate() const {
    if (!u.allFinite()) throw ConfigError("reduced state is not finite");
    for (int i = 0; i < 3; ++i)
        if (!std::isfinite(gammas[i]) || gammas[i] == 0.0)
            throw ConfigError("circulation " + std::to_string(i) + " must be finite and nonzero");
}

namespace {

void guard_collisions(const std::vector<std::complex<double>>& zs, double eps) {
    for (std::size_t i = 0; i < zs.size(); ++i)
        for (std::size_t j = i + 1; j < zs.size(); ++j)
            if (std::abs(zs[i] - zs[j]) < eps)
                throw CollisionError("vortices " + std::to_string(i) + " and " +
                                         std::to_string(j) + " closer than " + std::to_string(eps),
                                     static_cast<int>(i), static_cast<int>(j));
}

}  // namespace

std::vector<std::complex<double>> vortex_rhs(const VortexConfiguration& c, double eps) {
    const int n = c.size();
    guard_collisions(c.positions, eps);
    std::vector<std::complex<double>> dz(n, 0.0);
    const std::complex<double> unit_i(0.0, 1.0);
    for (int a = 0; a < n; ++a) {
        std::complex<double> sum = 0.0;
        for (int m = 0; m < n; ++m) {
            if (m == a) continue;
            sum += c.gammas[m] / std::conj(c.positions[a] - c.positions[m]);
        }
        dz[a] = unit_i * sum;
    }
    return dz;
}

double vortex_hamiltonian(const VortexConfiguration& c, double eps) {
    const int n = c.size();
    guard_collisions(c.positions, eps);
    double h = 0.0;
    for (int a = 0; a < n; ++a)
        for (int m = 0; m < n; ++m) {
            if (m == a) continue;
            h += c.gammas[a] * c.gammas[m] * std::log(std::abs(c.positions[a] - c.positions[m]));
        }
    return h;
}

Eigen::Vector2d linear_impulse(const VortexConfiguration& c) {
    Eigen::Vector2d p = Eigen::Vector2d::Zero();
    for (int a = 0; a < c.size(); ++a) {
        p[0] += c.gammas[a] * c.positions[a].real();
        p[1] += c.gammas[a] * c.positions[a].imag();
    }
    return p;
}

ReducedState reduce3(const VortexConfiguration& c) {
    if (c.size() != 3)
        throw DimensionError("reduction needs exactly 3 vortices, got " + std::to_string(c.size()));
    guard_collisions(c.positions, kCollisionEps);
    ReducedState s;
    s.gammas = c.gammas;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const int k = (i + 2) % 3;
        s.u[i] = std::log(std::norm(c.positions[j] - c.positions[k]));
    }
    return s;
}

Eigen::Vector3d reduced_rhs(const ReducedState& s) {
    Eigen::Vector3d du;
    const Eigen::Vector3d e = s.u.array().exp();
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const int k = (i + 2) % 3;
        du[i] = s.gammas[i] * (e[j] - e[k]);
    }
    return du;
}

std::pair<double, double> reduced_integrals(const ReducedState& s) {
    s.validate();
    double h1 = 0.0, h2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        h1 += std::exp(s.u[i]) / s.gammas[i];
        h2 += s.u[i] / s.gammas[i];
    }
    return {h1, h2};
}

VectorXd interleave(const std::vector<std::complex<double>>& zs) {
    VectorXd state(2 * zs.size());
    for (std::size_t a = 0; a < zs.size(); ++a) {
        state[2 * a] = zs[a].real();
        state[2 * a + 1] = zs[a].imag();
    }
    return state;
}

std::vector<std::complex<double>> deinterleave(const VectorXd& state) {
    if (state.size() % 2 != 0)
        throw DimensionError("interleaved state has odd length " + std::to_string(state.size()));
    std::vector<std::complex<double>> zs(state.size() / 2);
    for (std::size_t a = 0; a < zs.size(); ++a)
        zs[a] = {state[2 * a], state[2 * a + 1]};
    return zs;
}

VectorField vortex_field(const VectorXd& gammas, double eps) {
    const int n = static_cast<int>(gammas.size());
    VectorField f;
    f.dim = 2 * n;
    f.eval = [gammas, eps](const VectorXd& state) {
        VortexConfiguration c{gammas, deinterleave(state), {}};
        return interleave(vortex_rhs(c, eps));
    };
    // Velocity of vortex a: (sum_m gamma_m (-dy, dx) / rho^2) over m != a with
    // (dx, dy) = z_a - z_m, rho^2 = dx^2 + dy^2. Each pair term depends on the
    // difference only, so d/d(z_a) = +d/d(dx,dy) and d/d(z_m) = -d/d(dx,dy).
    f.analytic_jacobian = [gammas, n](const VectorXd& state) {
        MatrixXd J = MatrixXd::Zero(2 * n, 2 * n);
        for (int a = 0; a < n; ++a)
            for (int m = 0; m < n; ++m) {
                if (m == a) continue;
                const double dx = state[2 * a] - state[2 * m];
                const double dy = state[2 * a + 1] - state[2 * m + 1];
                const double r4 = (dx * dx + dy * dy) * (dx * dx + dy * dy);
                const double g = gammas[m];
                const double axx = 2 * g * dx * dy / r4;        // d(vx)/d(dx)
                const double axy = -g * (dx * dx - dy * dy) / r4;  // d(vx)/d(dy)
                const double ayx = axy;                          // d(vy)/d(dx)
                const double ayy = -axx;                         // d(vy)/d(dy)
                J(2 * a, 2 * a) += axx;
                J(2 * a, 2 * a + 1) += axy;
                J(2 * a + 1, 2 * a) += ayx;
                J(2 * a + 1, 2 * a + 1) += ayy;
                J(2 * a, 2 * m) -= axx;
                J(2 * a, 2 * m + 1) -= axy;
                J(2 * a + 1, 2 * m) -= ayx;
                J(2 * a + 1, 2 * m + 1) -= ayy;
            }
        return J;
    };
    return f;
}

VectorField reduced3_field(const Eigen::Vector3d& gammas) {
    VectorField f;
    f.dim = 3;
    f.eval = [gammas](const VectorXd& u) -> VectorXd {
        return reduced_rhs(ReducedState{u, gammas});
    };
    f.analytic_jacobian = [gammas](const VectorXd& u) {
        MatrixXd J = MatrixXd::Zero(3, 3);
        const Eigen::Vector3d e = u.array().exp();
        for (int i = 0; i < 3; ++i) {
            const int j = (i + 1) % 3;
            const int k = (i + 2) % 3;
            J(i, j) = gammas[i] * e[j];
            J(i, k) = -gammas[i] * e[k];
        }
        return J;
    };
    return f;
}

NambuSystem reduced3_system(const Eigen::Vector3d& gammas) {
    for (int i = 0; i < 3; ++i)
        if (!std::isfinite(gammas[i]) || gammas[i] == 0.0)
            throw ConfigError("circulation " + std::to_string(i) + " must be finite and nonzero");
    NambuSystem sys;
    sys.dim = 3;
    sys.weight = gammas[0] * gammas[1] * gammas[2];
    ScalarField h1;
    h1.value = [gammas](const VectorXd& u) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i) s += std::exp(u[i]) / gammas[i];
        return s;
    };
    h1.gradient = [gammas](const VectorXd& u) {
        VectorXd g(3);
        for (int i = 0; i < 3; ++i) g[i] = std::exp(u[i]) / gammas[i];
        return g;
    };
    ScalarField h2;
    h2.value = [gammas](const VectorXd& u) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i) s += u[i] / gammas[i];
        return s;
    };
    h2.gradient = [gammas](const VectorXd&) {
        VectorXd g(3);
        for (int i = 0; i < 3; ++i) g[i] = 1.0 / gammas[i];
        return g;
    };
    sys.hamiltonians = {h1, h2};
    return sys;
}

}  // namespace npdyn
