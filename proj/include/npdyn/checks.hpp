#pragma once

#include <random>
#include <string>
#include <vector>

#include "npdyn/flows.hpp"

namespace npdyn {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Platform-stable draws from a seeded engine (the standard distributions are
/// implementation-defined, which would break byte-identical outputs).
double draw_real(std::mt19937& rng, double lo, double hi);
int draw_int(std::mt19937& rng, int lo, int hi);
VectorXd draw_vector(std::mt19937& rng, int dim, double lo, double hi);

/// A sparse random polynomial: at most 4 monomials of total degree <= 3 with
/// coefficients in [-1/2, 1/2], carrying its analytic gradient. Used by the
/// divergence-free and coherence suites, where nested finite differencing
/// would drown the signal in roundoff.
ScalarField random_sparse_polynomial(int dim, std::mt19937& rng);

/// Run a named property suite: one of flows, costate, nambu, vortex,
/// discrete, qmcheck, or all. Throws ConfigError on an unknown name.
std::vector<CheckResult> run_suite(const std::string& suite);

}  // namespace npdyn
