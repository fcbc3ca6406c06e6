#include "npdyn/discrete.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

namespace npdyn {

MatrixXd DiscreteSystem::step_jacobian(const VectorXd& S, double h) const {
    MatrixXd M = jacobian ? jacobian(S) : jacobian_fd(step, dim, S, h);
    if (!M.allFinite()) throw EvaluationError("step Jacobian has non-finite entries");
    return M;
}

void ExtendedDiscreteState::validate() const {
    if (S.size() != l.size())
        throw DimensionError("state length " + std::to_string(S.size()) +
                             " does not match costate length " + std::to_string(l.size()));
}

namespace {

// Hadamard-style determinant scale: |det M| <= product of row norms.
double det_scale(const MatrixXd& M) {
    double prod = 1.0;
    for (Eigen::Index i = 0; i < M.rows(); ++i) prod *= M.row(i).norm();
    return std::max(1.0, prod);
}

}  // namespace

ReversibilityReport reversibility(const DiscreteSystem& sys, const VectorXd& S, double tol) {
    const MatrixXd M = sys.step_jacobian(S);
    ReversibilityReport r;
    r.det = Eigen::PartialPivLU<MatrixXd>(M).determinant();
    Eigen::JacobiSVD<MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    const double smin = sv[sv.size() - 1];
    r.condition = smin > 0 ? sv[0] / smin : std::numeric_limits<double>::infinity();
    r.reversible = std::abs(r.det) > tol * det_scale(M);
    return r;
}

ExtendedDiscreteState costate_step(const DiscreteSystem& sys, const ExtendedDiscreteState& es,
                                   CostateMode mode, double tol) {
    es.validate();
    if (es.S.size() != sys.dim)
        throw DimensionError("state length " + std::to_string(es.S.size()) +
                             " does not match map dimension " + std::to_string(sys.dim));
    const VectorXd S_next = sys.step(es.S);
    const MatrixXd M = sys.step_jacobian(mode == CostateMode::post_step ? S_next : es.S);
    Eigen::PartialPivLU<MatrixXd> lu(M.transpose());
    const double det = lu.determinant();
    if (std::abs(det) <= tol * det_scale(M))
        throw IrreversibleError(
            "step Jacobian is singular (det = " + std::to_string(det) + "); no costate update",
            det);
    // l(k+1) = l(k) M^{-1}  <=>  M^T l(k+1)^T = l(k)^T
    return ExtendedDiscreteState{S_next, lu.solve(es.l)};
}

double discrete_hamiltonian(const DiscreteSystem& sys, const std::vector<VectorXd>& states,
                            const std::vector<VectorXd>& costates) {
    if (states.size() != costates.size())
        throw ShapeError(std::to_string(states.size()) + " states for " +
                         std::to_string(costates.size()) + " costates");
    double h = 0.0;
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (states[k].size() != sys.dim || costates[k].size() != sys.dim)
            throw ShapeError("orbit entry " + std::to_string(k) +
                             " does not match map dimension");
        h += costates[k].dot(sys.step(states[k]));
    }
    return h;
}

CoherenceReport coherence_check(const VectorField& v, const VectorXd& x,
                                const std::vector<double>& taus, double h) {
    if (taus.empty()) throw ConfigError("at least one tau is required");
    for (double t : taus)
        if (!(t > 0)) throw ConfigError("tau values must be positive");

    CoherenceReport rep;
    rep.taus = taus;
    std::sort(rep.taus.begin(), rep.taus.end(), std::greater<>());

    const MatrixXd J = jacobian_fd(v, x, h);
    rep.divergence = J.trace();
    const Eigen::Index n = J.rows();

    for (double tau : rep.taus) {
        const MatrixXd M = MatrixXd::Identity(n, n) + tau * J;
        const double det = Eigen::PartialPivLU<MatrixXd>(M).determinant();
        rep.dets.push_back(det);
        rep.residuals.push_back(det - 1.0 - tau * rep.divergence);
    }

    // Slope of log|residual| against log tau over consecutive pairs; pairs
    // where either residual is at roundoff are skipped.
    double slope_sum = 0.0;
    int slope_count = 0;
    for (std::size_t i = 0; i + 1 < rep.taus.size(); ++i) {
        const double r0 = std::abs(rep.residuals[i]);
        const double r1 = std::abs(rep.residuals[i + 1]);
        if (r0 < 1e-14 || r1 < 1e-14) continue;
        slope_sum += std::log(r0 / r1) / std::log(rep.taus[i] / rep.taus[i + 1]);
        ++slope_count;
    }
    rep.residual_order = slope_count > 0 ? slope_sum / slope_count
                                         : std::numeric_limits<double>::quiet_NaN();

    if (rep.taus.size() >= 2) {
        // Two-point extrapolation of (det - 1)/tau at the smallest taus.
        const std::size_t k = rep.taus.size() - 1;
        const double s_small = (rep.dets[k] - 1.0) / rep.taus[k];
        const double s_large = (rep.dets[k - 1] - 1.0) / rep.taus[k - 1];
        const double ratio = rep.taus[k - 1] / rep.taus[k];
        rep.first_order_term = (ratio * s_small - s_large) / (ratio - 1.0);
    } else {
        rep.first_order_term = (rep.dets[0] - 1.0) / rep.taus[0];
    }
    return rep;
}

namespace {

VectorXd wrap_unit(VectorXd s) {
    for (Eigen::Index i = 0; i < s.size(); ++i) s[i] -= std::floor(s[i]);
    return s;
}

}  // namespace

DiscreteSystem cat_map() {
    DiscreteSystem sys;
    sys.dim = 2;
    sys.step = [](const VectorXd& S) {
        VectorXd out(2);
        out << 2 * S[0] + S[1], S[0] + S[1];
        return wrap_unit(out);
    };
    sys.jacobian = [](const VectorXd&) {
        MatrixXd M(2, 2);
        M << 2, 1, 1, 1;
        return M;
    };
    // The inverse matrix is integral, so the mod-1 wrap commutes with it.
    sys.inverse_step = [](const VectorXd& T) {
        VectorXd out(2);
        out << T[0] - T[1], -T[0] + 2 * T[1];
        return wrap_unit(out);
    };
    return sys;
}

DiscreteSystem fanout_map() {
    DiscreteSystem sys;
    sys.dim = 2;
    sys.step = [](const VectorXd& S) {
        VectorXd out(2);
        out << S[0], S[0];
        return out;
    };
    sys.jacobian = [](const VectorXd&) {
        MatrixXd M(2, 2);
        M << 1, 0, 1, 0;
        return M;
    };
    return sys;
}

DiscreteSystem cubic_shear_map() {
    DiscreteSystem sys;
    sys.dim = 2;
    sys.step = [](const VectorXd& S) {
        VectorXd out(2);
        out << S[0] + S[1] * S[1] * S[1], S[1];
        return out;
    };
    sys.inverse_step = [](const VectorXd& T) {
        VectorXd out(2);
        out << T[0] - T[1] * T[1] * T[1], T[1];
        return out;
    };
    return sys;
}

}  // namespace npdyn
