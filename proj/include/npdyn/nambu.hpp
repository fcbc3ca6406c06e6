#pragma once

#include <vector>

#include "npdyn/flows.hpp"

namespace npdyn {

/// A multi-Hamiltonian system: p scalar functions on R^N plus the constant
/// prefactor of the antisymmetric contraction. Its flow conserves every
/// Hamiltonian and is divergence-free.
struct NambuSystem {
    int dim = 0;
    std::vector<ScalarField> hamiltonians;
    double weight = 1.0;

    int order() const { return static_cast<int>(hamiltonians.size()); }
    /// Throws unless 1 <= p <= dim-1 and weight is finite and nonzero.
    void validate() const;
};

/// v_n = weight * sum over index tuples of the antisymmetric symbol times
/// the product of Hamiltonian gradients; analytic gradients used when present.
VectorXd nambu_flow(const NambuSystem& sys, const VectorXd& x, double h = kFdStep);

/// The field form of nambu_flow, for integration and diagnostics.
VectorField nambu_vector_field(const NambuSystem& sys, double h = kFdStep);

/// Ternary bracket on R^3: weight * det of the three gradients (rows A, B, C),
/// all by central differences.
double bracket3(const NambuSystem& sys, const RealFn& A, const RealFn& B, const RealFn& C,
                const VectorXd& u, double h = kFdStep);

/// Integrates the flow and reports, per Hamiltonian,
/// max_t |H_i(x(t)) - H_i(x0)| / max(1, |H_i(x0)|) over recorded samples.
std::vector<double> hamiltonian_drift(const NambuSystem& sys, const VectorXd& x0,
                                      const IntegratorConfig& cfg, double h = kFdStep);

}  // namespace npdyn
