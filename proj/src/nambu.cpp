#include "npdyn/nambu.hpp"

#include <Eigen/LU>
#include <cmath>

#include "npdyn/costate.hpp"

namespace npdyn {

void NambuSystem::validate() const {
    if (dim < 2) throw DimensionError("system dimension must be at least 2");
    const int p = order();
    if (p < 1) throw ConfigError("system needs at least one Hamiltonian");
    if (p > dim - 1)
        throw DegenerateOrderError(std::to_string(p) + " Hamiltonians in dimension " +
                                   std::to_string(dim) + "; the contraction vanishes");
    if (!std::isfinite(weight) || weight == 0.0)
        throw ConfigError("weight must be finite and nonzero");
}

VectorXd nambu_flow(const NambuSystem& sys, const VectorXd& x, double h) {
    sys.validate();
    if (x.size() != sys.dim)
        throw DimensionError("state length " + std::to_string(x.size()) +
                             " does not match system dimension " + std::to_string(sys.dim));
    const int N = sys.dim;
    const int p = sys.order();

    MatrixXd grads(p, N);
    for (int i = 0; i < p; ++i) grads.row(i) = gradient(sys.hamiltonians[i], x, h);

    // Group the antisymmetric contraction by the (p+1)-element index set: for
    // the increasing tuple T, the permutation sum over the slots other than j
    // is the minor of the p x (p+1) gradient block with column j removed, and
    // moving index T_j to the front contributes (-1)^j.
    VectorXd v = VectorXd::Zero(N);
    AntisymmetricTensor tuples(N, p + 1);  // used only for tuple enumeration
    MatrixXd minor_block(p, p);
    for (Eigen::Index r = 0; r < tuples.packed_size(); ++r) {
        const std::vector<int> T = tuples.tuple_at(r);
        double sign = 1.0;
        for (int j = 0; j <= p; ++j) {
            for (int col = 0, c = 0; col <= p; ++col) {
                if (col == j) continue;
                minor_block.col(c++) = grads.col(T[col]);
            }
            v[T[j]] += sign * minor_block.determinant();
            sign = -sign;
        }
    }
    return sys.weight * v;
}

VectorField nambu_vector_field(const NambuSystem& sys, double h) {
    sys.validate();
    VectorField f;
    f.dim = sys.dim;
    f.eval = [sys, h](const VectorXd& x) { return nambu_flow(sys, x, h); };
    return f;
}

double bracket3(const NambuSystem& sys, const RealFn& A, const RealFn& B, const RealFn& C,
                const VectorXd& u, double h) {
    if (sys.dim != 3)
        throw DimensionError("ternary bracket requires dimension 3, got " +
                             std::to_string(sys.dim));
    if (u.size() != 3)
        throw DimensionError("state length " + std::to_string(u.size()) + ", expected 3");
    if (!std::isfinite(sys.weight) || sys.weight == 0.0)
        throw ConfigError("weight must be finite and nonzero");
    Eigen::Matrix3d G;
    G.row(0) = gradient_fd(A, u, h);
    G.row(1) = gradient_fd(B, u, h);
    G.row(2) = gradient_fd(C, u, h);
    return sys.weight * G.determinant();
}

std::vector<double> hamiltonian_drift(const NambuSystem& sys, const VectorXd& x0,
                                      const IntegratorConfig& cfg, double h) {
    sys.validate();
    const VectorField f = nambu_vector_field(sys, h);
    const Trajectory traj = integrate(f, x0, cfg);

    std::vector<double> drift(sys.hamiltonians.size(), 0.0);
    std::vector<double> initial(sys.hamiltonians.size());
    for (std::size_t i = 0; i < sys.hamiltonians.size(); ++i)
        initial[i] = sys.hamiltonians[i].value(x0);
    for (const VectorXd& x : traj.states)
        for (std::size_t i = 0; i < sys.hamiltonians.size(); ++i) {
            const double d = std::abs(sys.hamiltonians[i].value(x) - initial[i]) /
                             std::max(1.0, std::abs(initial[i]));
            drift[i] = std::max(drift[i], d);
        }
    return drift;
}

}  // namespace npdyn
