#include "npdyn/costate.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>

namespace npdyn {

void CostateState::validate() const {
    if (x.size() != psi.size())
        throw DimensionError("state length " + std::to_string(x.size()) +
                             " does not match costate length " + std::to_string(psi.size()));
}

VectorXd pack(const CostateState& s) {
    s.validate();
    VectorXd z(2 * s.x.size());
    z << s.x, s.psi;
    return z;
}

CostateState unpack(const VectorXd& z) {
    if (z.size() % 2 != 0)
        throw DimensionError("stacked state has odd length " + std::to_string(z.size()));
    const Eigen::Index n = z.size() / 2;
    return CostateState{z.head(n), z.tail(n)};
}

namespace detail {

std::size_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::size_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / i;
    return r;
}

// Sort in place, returning the permutation sign, or 0 on a repeated index.
int canonicalize(std::vector<int>& idx) {
    int sign = 1;
    for (std::size_t i = 1; i < idx.size(); ++i)
        for (std::size_t j = i; j > 0 && idx[j] < idx[j - 1]; --j) {
            std::swap(idx[j], idx[j - 1]);
            sign = -sign;
        }
    for (std::size_t i = 1; i < idx.size(); ++i)
        if (idx[i] == idx[i - 1]) return 0;
    return sign;
}

}  // namespace detail

AntisymmetricTensor::AntisymmetricTensor(int dim, int order) : dim_(dim), order_(order) {
    if (dim < 1) throw DimensionError("tensor dimension must be positive");
    if (order < 1) throw DomainError("tensor order must be positive");
    if (order > dim)
        throw DegenerateOrderError("order " + std::to_string(order) + " exceeds dimension " +
                                   std::to_string(dim) + "; all components vanish");
    data_ = VectorXd::Zero(static_cast<Eigen::Index>(detail::binomial(dim, order)));
}

Eigen::Index AntisymmetricTensor::rank_of(const std::vector<int>& increasing) const {
    std::size_t rank = 0;
    int prev = -1;
    for (int i = 0; i < order_; ++i) {
        for (int c = prev + 1; c < increasing[i]; ++c)
            rank += detail::binomial(dim_ - 1 - c, order_ - 1 - i);
        prev = increasing[i];
    }
    return static_cast<Eigen::Index>(rank);
}

std::vector<int> AntisymmetricTensor::tuple_at(Eigen::Index rank) const {
    std::vector<int> t(order_);
    std::size_t r = static_cast<std::size_t>(rank);
    int c = 0;
    for (int i = 0; i < order_; ++i) {
        for (;; ++c) {
            const std::size_t block = detail::binomial(dim_ - 1 - c, order_ - 1 - i);
            if (r < block) break;
            r -= block;
        }
        t[i] = c++;
    }
    return t;
}

double AntisymmetricTensor::component(const std::vector<int>& indices) const {
    if (static_cast<int>(indices.size()) != order_)
        throw DimensionError("expected " + std::to_string(order_) + " indices, got " +
                             std::to_string(indices.size()));
    for (int k : indices)
        if (k < 0 || k >= dim_)
            throw DomainError("index " + std::to_string(k) + " outside [0, " +
                              std::to_string(dim_) + ")");
    std::vector<int> idx = indices;
    const int sign = detail::canonicalize(idx);
    if (sign == 0) return 0.0;
    return sign * data_[rank_of(idx)];
}

void AntisymmetricTensor::set_component(const std::vector<int>& indices, double value) {
    if (static_cast<int>(indices.size()) != order_)
        throw DimensionError("expected " + std::to_string(order_) + " indices, got " +
                             std::to_string(indices.size()));
    for (int k : indices)
        if (k < 0 || k >= dim_)
            throw DomainError("index " + std::to_string(k) + " outside [0, " +
                              std::to_string(dim_) + ")");
    std::vector<int> idx = indices;
    const int sign = detail::canonicalize(idx);
    if (sign == 0) throw DomainError("cannot assign through a repeated index");
    data_[rank_of(idx)] = sign * value;
}

VectorField extend(const VectorField& v) {
    const int n = v.dim;
    VectorField out;
    out.dim = 2 * n;
    out.eval = [v, n](const VectorXd& z) {
        const VectorXd x = z.head(n);
        const VectorXd psi = z.tail(n);
        const MatrixXd J = jacobian(v, x);
        VectorXd dz(2 * n);
        dz.head(n) = v.eval(x);
        dz.tail(n) = -J.transpose() * psi;
        return dz;
    };
    return out;
}

double h1(const VectorField& v, const CostateState& s) {
    s.validate();
    return v(s.x).dot(s.psi);
}

double bracket1(const PhaseFn& F, const PhaseFn& G, const CostateState& s, double h) {
    s.validate();
    const Eigen::Index n = s.x.size();
    const auto stacked = [n](const PhaseFn& f) {
        return [&f, n](const VectorXd& z) { return f(z.head(n), z.tail(n)); };
    };
    const VectorXd z = pack(s);
    const VectorXd gF = gradient_fd(stacked(F), z, h);
    const VectorXd gG = gradient_fd(stacked(G), z, h);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) sum += gF[i] * gG[n + i] - gF[n + i] * gG[i];
    return sum;
}

AntisymmetricTensor mbky_residual(const AntisymmetricTensorField& A, const VectorField& v,
                                  const VectorXd& x, double h) {
    if (A.dim != v.dim)
        throw DimensionError("tensor dimension " + std::to_string(A.dim) +
                             " does not match field dimension " + std::to_string(v.dim));
    const int N = A.dim;
    const int n = A.order;
    AntisymmetricTensor out(N, n);  // throws DegenerateOrderError when n > N

    const AntisymmetricTensor A0 = A.coeffs(x);
    const VectorXd vx = v(x);
    const MatrixXd Jv = jacobian_fd(v, x, h);
    // dP(r, k) = d(packed component r)/dx_k; packing is linear so packed
    // derivatives are the canonical component derivatives.
    const MatrixXd dP = jacobian_fd(
        [&A](const VectorXd& y) { return A.coeffs(y).packed(); },
        static_cast<int>(A0.packed_size()), x, h);

    for (Eigen::Index r = 0; r < out.packed_size(); ++r) {
        const std::vector<int> T = out.tuple_at(r);
        double val = dP.row(r).dot(vx);
        std::vector<int> idx = T;
        for (int j = 0; j < n; ++j) {
            const int orig = idx[j];
            for (int k = 0; k < N; ++k) {
                idx[j] = k;
                val -= A0.component(idx) * Jv(orig, k);
            }
            idx[j] = orig;
        }
        out.packed()[r] = val;
    }
    return out;
}

AntisymmetricTensor wedge_at(const std::vector<VectorXd>& covectors, int dim) {
    const int M = static_cast<int>(covectors.size());
    if (M < 1) throw DomainError("wedge needs at least one factor");
    for (const auto& g : covectors)
        if (g.size() != dim) throw DimensionError("wedge factor length does not match dimension");
    AntisymmetricTensor out(dim, M);  // throws DegenerateOrderError when M > dim
    double fact = 1.0;
    for (int i = 2; i <= M; ++i) fact *= i;
    MatrixXd B(M, M);
    for (Eigen::Index r = 0; r < out.packed_size(); ++r) {
        const std::vector<int> T = out.tuple_at(r);
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j) B(i, j) = covectors[i][T[j]];
        out.packed()[r] = B.determinant() / fact;
    }
    return out;
}

AntisymmetricTensorField wedge(const std::vector<AntisymmetricTensorField>& factors) {
    if (factors.empty()) throw DomainError("wedge needs at least one factor");
    const int dim = factors[0].dim;
    for (const auto& f : factors) {
        if (f.order != 1) throw DimensionError("wedge factors must have order 1");
        if (f.dim != dim) throw DimensionError("wedge factors must share one dimension");
    }
    const int M = static_cast<int>(factors.size());
    if (M > dim)
        throw DegenerateOrderError("wedge of " + std::to_string(M) + " factors in dimension " +
                                   std::to_string(dim) + " vanishes");
    AntisymmetricTensorField out;
    out.dim = dim;
    out.order = M;
    out.coeffs = [factors, dim](const VectorXd& x) {
        std::vector<VectorXd> gs;
        gs.reserve(factors.size());
        for (const auto& f : factors) gs.push_back(f.coeffs(x).packed());
        return wedge_at(gs, dim);
    };
    return out;
}

MatrixXd fj_structure(const OneForm& f, const VectorXd& x, double h) {
    if (x.size() != f.dim)
        throw DimensionError("state length " + std::to_string(x.size()) +
                             " does not match one-form dimension " + std::to_string(f.dim));
    const MatrixXd J = jacobian_fd(f.eval, f.dim, x, h);
    return J.transpose() - J;
}

MatrixXd fj_bracket(const OneForm& f, const VectorXd& x, double h) {
    const MatrixXd F = fj_structure(f, x, h);
    Eigen::PartialPivLU<MatrixXd> lu(F);
    const double det = lu.determinant();
    const double maxabs = F.cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, std::pow(maxabs, static_cast<double>(F.rows())));
    if (std::abs(det) < 1e-12 * scale)
        throw SingularStructureError(
            "structure two-form is singular (det = " + std::to_string(det) + ")", det);
    return lu.inverse();
}

VectorXd fj_flow(const OneForm& f, const ScalarField& H, const VectorXd& x, double h) {
    return fj_bracket(f, x, h) * gradient(H, x, h);
}

OneForm canonical_pair_form(int n) {
    if (n < 1) throw DimensionError("pair form needs a positive block size");
    OneForm f;
    f.dim = 2 * n;
    f.eval = [n](const VectorXd& y) {
        VectorXd out(2 * n);
        out.head(n) = 0.5 * y.tail(n);
        out.tail(n) = -0.5 * y.head(n);
        return out;
    };
    return f;
}

}  // namespace npdyn
