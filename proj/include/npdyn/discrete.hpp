#pragma once

#include <vector>

#include "npdyn/flows.hpp"

namespace npdyn {

/// A step map S(k) -> S(k+1) with optional analytic Jacobian and inverse.
struct DiscreteSystem {
    int dim = 0;
    VecFn step;
    std::function<MatrixXd(const VectorXd&)> jacobian;  // may be empty (FD used)
    VecFn inverse_step;                                 // may be empty

    /// Jacobian at S: analytic when present, scaled central differences
    /// otherwise. Throws EvaluationError on non-finite entries.
    MatrixXd step_jacobian(const VectorXd& S, double h = kFdStep) const;
};

/// State plus the linear co-processor row vector l.
struct ExtendedDiscreteState {
    VectorXd S;
    VectorXd l;

    /// Throws DimensionError unless S and l have equal length.
    void validate() const;
};

/// Where the costate update evaluates the step Jacobian.
enum class CostateMode {
    post_step,  // M at S(k+1)
    pre_step,   // M at S(k)
};

struct ReversibilityReport {
    bool reversible = false;
    double det = 0.0;
    double condition = 0.0;  // singular-value ratio; infinity when rank-deficient
};

/// Classifies the step map at S: reversible iff |det M| exceeds
/// tol * max(1, product of row norms).
ReversibilityReport reversibility(const DiscreteSystem& sys, const VectorXd& S,
                                  double tol = 1e-12);

/// One step of the extended system: S(k+1) = step(S(k)),
/// l(k+1) = l(k) M^{-1} with M evaluated per `mode`.
/// Throws IrreversibleError when M is singular at the evaluation state.
ExtendedDiscreteState costate_step(const DiscreteSystem& sys, const ExtendedDiscreteState& es,
                                   CostateMode mode = CostateMode::post_step,
                                   double tol = 1e-12);

/// Action sum H = sum_k l(k) . step(S(k)) over aligned state/costate arrays.
double discrete_hamiltonian(const DiscreteSystem& sys, const std::vector<VectorXd>& states,
                            const std::vector<VectorXd>& costates);

/// det M versus 1 + tau div v for the one-step map of a flow.
struct CoherenceReport {
    std::vector<double> taus;
    std::vector<double> dets;
    std::vector<double> residuals;  // det - 1 - tau * divergence
    double divergence = 0.0;
    double residual_order = 0.0;    // Richardson slope; NaN when residuals vanish
    double first_order_term = 0.0;  // extrapolated (det - 1)/tau as tau -> 0
};

/// For each tau, builds the step map identity + tau * v and reports how its
/// Jacobian determinant tracks 1 + tau * div v. The residual order is the
/// mean log-ratio slope over consecutive tau pairs.
CoherenceReport coherence_check(const VectorField& v, const VectorXd& x,
                                const std::vector<double>& taus, double h = kFdStep);

/// The unimodular torus map ((2 S1 + S2) mod 1, (S1 + S2) mod 1), with its
/// constant Jacobian and exact inverse.
DiscreteSystem cat_map();

/// The copying gate (S1, S1): rank-1 Jacobian, irreversible everywhere.
DiscreteSystem fanout_map();

/// The shear (S1 + S2^3, S2): nonlinear, exactly invertible, no analytic
/// Jacobian supplied so the finite-difference route is exercised.
DiscreteSystem cubic_shear_map();

}  // namespace npdyn
