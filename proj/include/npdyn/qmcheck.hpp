#pragma once

#include <vector>

#include "npdyn/errors.hpp"

namespace npdyn {

/// Uniform grid on [r_min, r_max] for the radial stationarity check in
/// spatial dimension d.
struct RadialGrid {
    double r_min = 1.0;
    double r_max = 2.0;
    int points = 201;
    int d = 1;

    double spacing() const { return (r_max - r_min) / (points - 1); }
    /// Throws DomainError / GridError on an invalid range, point count < 16,
    /// or d < 1.
    void validate() const;
};

/// The inverse-square potential V = 4 (4 - d) / r^2; zero exactly at d = 4.
double conformal_potential(int d, double r);

/// |laplacian(V) - V^2/2| at each interior grid point, with the radial
/// laplacian V'' + (d-1)/r V' by second-order central differences. The
/// potential satisfies the identity exactly, so the values measure only the
/// O(h^2) discretization error.
std::vector<double> stationarity_profile(const RadialGrid& g);

/// Max of stationarity_profile over the interior points.
double stationarity_residual(const RadialGrid& g);

}  // namespace npdyn
