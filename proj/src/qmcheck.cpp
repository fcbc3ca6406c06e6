#include "npdyn/qmcheck.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace npdyn {

void RadialGrid::validate() const {
    if (d < 1) throw DomainError("spatial dimension must be a positive integer");
    if (!(r_min > 0)) throw DomainError("r_min must be positive");
    if (!(r_max > r_min)) throw DomainError("r_max must exceed r_min");
    if (points < 16) throw GridError("grid needs at least 16 points, got " +
                                     std::to_string(points));
}

double conformal_potential(int d, double r) {
    if (!(r > 0)) throw DomainError("potential is defined for r > 0");
    return 4.0 * (4 - d) / (r * r);
}

std::vector<double> stationarity_profile(const RadialGrid& g) {
    g.validate();
    const double h = g.spacing();
    std::vector<double> V(g.points);
    for (int i = 0; i < g.points; ++i) V[i] = conformal_potential(g.d, g.r_min + i * h);

    std::vector<double> res(g.points - 2);
    for (int i = 1; i + 1 < g.points; ++i) {
        const double r = g.r_min + i * h;
        const double lap = (V[i + 1] - 2 * V[i] + V[i - 1]) / (h * h) +
                           (g.d - 1) / r * (V[i + 1] - V[i - 1]) / (2 * h);
        res[i - 1] = std::abs(lap - V[i] * V[i] / 2);
    }
    return res;
}

double stationarity_residual(const RadialGrid& g) {
    const std::vector<double> res = stationarity_profile(g);
    return *std::max_element(res.begin(), res.end());
}

}  // namespace npdyn
