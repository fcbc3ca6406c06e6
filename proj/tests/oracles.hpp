#pragma once

/// Reference implementations for the tests, kept deliberately naive: direct
/// permutation sums and a dense matrix exponential that share no code path
/// with the library's tuple-ranked storage or minor-determinant expansions.

#include <Eigen/Core>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <vector>

#include "npdyn/costate.hpp"
#include "npdyn/nambu.hpp"

namespace oracles {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Sign of the permutation sorting `idx`; 0 when any index repeats.
inline int permutation_sign(const std::vector<int>& idx) {
    int sign = 1;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        for (std::size_t j = i + 1; j < idx.size(); ++j) {
            if (idx[i] == idx[j]) return 0;
            if (idx[i] > idx[j]) sign = -sign;
        }
    }
    return sign;
}

/// The flow as a literal antisymmetric contraction: for every component n,
/// sum over all p-index tuples (m1..mp) of sign(n, m1..mp) times the product
/// of Hamiltonian gradient entries. Exponential cost, small-scale only.
inline VectorXd contraction_flow(const npdyn::NambuSystem& sys, const VectorXd& x, double h) {
    const int N = sys.dim;
    const int p = sys.order();
    MatrixXd grads(p, N);
    for (int i = 0; i < p; ++i) grads.row(i) = npdyn::gradient(sys.hamiltonians[i], x, h).transpose();

    VectorXd v = VectorXd::Zero(N);
    std::vector<int> idx(static_cast<std::size_t>(p) + 1, 0);
    const auto total = static_cast<long long>(std::pow(static_cast<double>(N), p));
    for (int n = 0; n < N; ++n) {
        idx[0] = n;
        for (long long code = 0; code < total; ++code) {
            long long rest = code;
            double prod = 1.0;
            for (int i = 0; i < p; ++i) {
                idx[static_cast<std::size_t>(i) + 1] = static_cast<int>(rest % N);
                rest /= N;
                prod *= grads(i, idx[static_cast<std::size_t>(i) + 1]);
            }
            const int sign = permutation_sign(idx);
            if (sign != 0) v[n] += sign * prod;
        }
    }
    return sys.weight * v;
}

/// Wedge component on one increasing tuple by the full permutation sum
/// (1/M!) sum_sigma sgn(sigma) prod_i a_i[T_sigma(i)].
inline double wedge_component(const std::vector<VectorXd>& covectors, std::vector<int> tuple) {
    const int M = static_cast<int>(covectors.size());
    std::vector<int> perm(tuple.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    double total = 0.0;
    double fact = 1.0;
    for (int i = 2; i <= M; ++i) fact *= i;
    do {
        double prod = 1.0;
        std::vector<int> arranged(perm.size());
        for (int i = 0; i < M; ++i) {
            arranged[static_cast<std::size_t>(i)] = perm[static_cast<std::size_t>(i)];
            prod *= covectors[static_cast<std::size_t>(i)][tuple[static_cast<std::size_t>(
                perm[static_cast<std::size_t>(i)])]];
        }
        total += permutation_sign(arranged) * prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total / fact;
}

/// Transport derivative of A along v at x, one tuple at a time: central
/// differences of the requested component, full loops over the free index.
inline double transport_component(const npdyn::AntisymmetricTensorField& A,
                                  const npdyn::VectorField& v, const VectorXd& x,
                                  const std::vector<int>& tuple, double h) {
    const int N = A.dim;
    const VectorXd vx = v(x);
    double val = 0.0;
    for (int k = 0; k < N; ++k) {
        const double step = h * std::max(1.0, std::abs(x[k]));
        VectorXd xp = x, xm = x;
        xp[k] += step;
        xm[k] -= step;
        val += (A.coeffs(xp).component(tuple) - A.coeffs(xm).component(tuple)) / (2 * step) * vx[k];
    }
    const npdyn::AntisymmetricTensor A0 = A.coeffs(x);
    for (std::size_t j = 0; j < tuple.size(); ++j) {
        for (int k = 0; k < N; ++k) {
            std::vector<int> swapped = tuple;
            swapped[j] = k;
            const double coeff = A0.component(swapped);
            if (coeff == 0.0) continue;
            const double step = h * std::max(1.0, std::abs(x[k]));
            VectorXd xp = x, xm = x;
            xp[k] += step;
            xm[k] -= step;
            val -= coeff * (v(xp)[tuple[j]] - v(xm)[tuple[j]]) / (2 * step);
        }
    }
    return val;
}

/// Dense matrix exponential, used to write closed-form linear-flow solutions.
inline MatrixXd expm(const MatrixXd& A) { return A.exp(); }

}  // namespace oracles
