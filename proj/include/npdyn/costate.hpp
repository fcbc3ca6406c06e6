#pragma once

#include <vector>

#include "npdyn/flows.hpp"

namespace npdyn {

/// Paired state/costate of the doubled system (x' = v, psi' = -J^T psi).
struct CostateState {
    VectorXd x;
    VectorXd psi;

    /// Throws DimensionError unless x and psi have equal length.
    void validate() const;
};

/// Stack (x, psi) into one vector of length 2N, and back.
VectorXd pack(const CostateState& s);
CostateState unpack(const VectorXd& z);

/// A scalar function on the doubled phase space.
using PhaseFn = std::function<double(const VectorXd& x, const VectorXd& psi)>;

namespace detail {
std::size_t binomial(int n, int k);
}

/// Fully antisymmetric order-n coefficients over R^N, stored canonically:
/// one value per strictly increasing index tuple, in lexicographic order.
/// Components with any repeated index are identically zero.
class AntisymmetricTensor {
public:
    AntisymmetricTensor(int dim, int order);

    int dim() const { return dim_; }
    int order() const { return order_; }
    Eigen::Index packed_size() const { return data_.size(); }

    VectorXd& packed() { return data_; }
    const VectorXd& packed() const { return data_; }

    /// Component for arbitrary (0-based) indices, with permutation sign;
    /// zero on a repeated index.
    double component(const std::vector<int>& indices) const;
    /// Assign through an arbitrary index order; repeated indices are invalid.
    void set_component(const std::vector<int>& indices, double value);

    /// The strictly increasing tuple at a given storage rank, and its inverse.
    std::vector<int> tuple_at(Eigen::Index rank) const;
    Eigen::Index rank_of(const std::vector<int>& increasing) const;

    double max_abs() const { return data_.size() == 0 ? 0.0 : data_.cwiseAbs().maxCoeff(); }

private:
    int dim_;
    int order_;
    VectorXd data_;
};

/// A state-dependent antisymmetric coefficient field A(x).
struct AntisymmetricTensorField {
    int dim = 0;
    int order = 1;
    std::function<AntisymmetricTensor(const VectorXd&)> coeffs;
};

/// A covector field f_n(x).
struct OneForm {
    int dim = 0;
    VecFn eval;
};

/// The doubled field on (x, psi): x' = v(x), psi'_n = -sum_m (dv_m/dx_n) psi_m.
/// Uses the analytic Jacobian of v when present.
VectorField extend(const VectorField& v);

/// The conserved pairing H1 = v(x) . psi of the doubled flow.
double h1(const VectorField& v, const CostateState& s);

/// Canonical bracket on the doubled space:
/// sum_n (dF/dx_n dG/dpsi_n - dF/dpsi_n dG/dx_n), by central differences.
double bracket1(const PhaseFn& F, const PhaseFn& G, const CostateState& s, double h = kFdStep);

/// Transport derivative along v:
/// (A_{k1..kn,k} v_k - sum_j A_{k1..k..kn} dv_{kj}/dx_k), central differences
/// throughout; vanishes exactly when A is an invariant tensor of the flow.
AntisymmetricTensor mbky_residual(const AntisymmetricTensorField& A, const VectorField& v,
                                  const VectorXd& x, double h = kFdStep);

/// Antisymmetrized product of order-1 factors, normalized by 1/M!:
/// component on an increasing tuple T equals det(B)/M! with B_ij = A^(i)_{T_j}.
AntisymmetricTensor wedge_at(const std::vector<VectorXd>& covectors, int dim);
AntisymmetricTensorField wedge(const std::vector<AntisymmetricTensorField>& factors);

/// Structure two-form f_mn = d_m f_n - d_n f_m by central differences.
MatrixXd fj_structure(const OneForm& f, const VectorXd& x, double h = kFdStep);

/// Inverse of the structure two-form: entry (n,m) is the bracket {x_n, x_m}.
/// Throws SingularStructureError when det f is below 1e-12 at matrix scale.
MatrixXd fj_bracket(const OneForm& f, const VectorXd& x, double h = kFdStep);

/// First-order Hamiltonian flow x'_n = (f^{-1})_{nm} dH/dx_m.
VectorXd fj_flow(const OneForm& f, const ScalarField& H, const VectorXd& x, double h = kFdStep);

/// The one-form on stacked (x, psi) whose bracket is the canonical pairing
/// {x_a, psi_b} = +delta_ab; its flow under H = v . psi is extend(v).
OneForm canonical_pair_form(int n);

}  // namespace npdyn
