#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "npdyn/flows.hpp"
#include "npdyn/nambu.hpp"

namespace npdyn {

/// Default minimum pairwise separation in configuration length units.
inline constexpr double kCollisionEps = 1e-9;

/// Circulations plus planar positions of the interacting vortices.
struct VortexConfiguration {
    VectorXd gammas;
    std::vector<std::complex<double>> positions;
    /// When set, circulations must be nonzero integer multiples of this unit.
    std::optional<double> quantum;

    int size() const { return static_cast<int>(positions.size()); }
    /// Throws ConfigError on zero circulations, coincident positions (within
    /// eps), mismatched lengths, or a violated quantization constraint.
    void validate(double eps = kCollisionEps) const;
};

/// The 3-vortex log-squared-distance variables u_i = ln|z_j - z_k|^2, indices
/// cyclic, paired with their circulations.
struct ReducedState {
    Eigen::Vector3d u;
    Eigen::Vector3d gammas;

    /// Throws ConfigError on non-finite u or zero circulations.
    void validate() const;
};

/// dz_n/dt = i sum_{m != n} gamma_m / conj(z_n - z_m).
/// Throws CollisionError naming the closest pair below eps.
std::vector<std::complex<double>> vortex_rhs(const VortexConfiguration& c,
                                             double eps = kCollisionEps);

/// H = sum over ordered pairs n != m of gamma_n gamma_m ln|z_n - z_m|
/// (each unordered pair counted twice).
double vortex_hamiltonian(const VortexConfiguration& c, double eps = kCollisionEps);

/// Conserved linear impulse (sum gamma_n x_n, sum gamma_n y_n).
Eigen::Vector2d linear_impulse(const VortexConfiguration& c);

/// Reduction of a 3-vortex configuration to the u variables.
ReducedState reduce3(const VortexConfiguration& c);

/// du1/dt = gamma1 (e^{u2} - e^{u3}), and cyclic.
Eigen::Vector3d reduced_rhs(const ReducedState& s);

/// The two conserved quantities (H1, H2) = (sum e^{u_i}/gamma_i, sum u_i/gamma_i).
std::pair<double, double> reduced_integrals(const ReducedState& s);

/// Interleave complex positions into (x1, y1, x2, y2, ...) and back.
VectorXd interleave(const std::vector<std::complex<double>>& zs);
std::vector<std::complex<double>> deinterleave(const VectorXd& state);

/// The full N-vortex dynamics on interleaved real states, with the
/// hand-differentiated pair Jacobian.
VectorField vortex_field(const VectorXd& gammas, double eps = kCollisionEps);

/// The reduced 3-vortex dynamics as a plain vector field, with its
/// exponential Jacobian.
VectorField reduced3_field(const Eigen::Vector3d& gammas);

/// The reduced dynamics in two-Hamiltonian form: H1, H2 with analytic
/// gradients and weight gamma1 gamma2 gamma3. Its flow equals reduced_rhs.
NambuSystem reduced3_system(const Eigen::Vector3d& gammas);

}  // namespace npdyn
