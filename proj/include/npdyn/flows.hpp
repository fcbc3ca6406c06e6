#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "npdyn/errors.hpp"

namespace npdyn {

using Eigen::MatrixXd;
using Eigen::VectorXd;

using VecFn = std::function<VectorXd(const VectorXd&)>;
using RealFn = std::function<double(const VectorXd&)>;

/// Default base step for central differences; scaled per coordinate by
/// max(1, |x_n|).
inline constexpr double kFdStep = 1e-5;

/// A smooth map v: R^N -> R^N, optionally with an analytic Jacobian
/// J(m,n) = dv_m/dx_n.
struct VectorField {
    int dim = 0;
    VecFn eval;
    std::function<MatrixXd(const VectorXd&)> analytic_jacobian;  // may be empty

    /// Evaluate with size checks; throws EvaluationError on a wrong-sized output.
    VectorXd operator()(const VectorXd& x) const;
};

/// A scalar function with an optional analytic gradient.
struct ScalarField {
    RealFn value;
    std::function<VectorXd(const VectorXd&)> gradient;  // may be empty
};

/// Time-stamped state samples plus per-sample monitored quantities.
struct Trajectory {
    std::vector<double> times;
    std::vector<VectorXd> states;
    std::vector<std::string> monitor_names;
    std::vector<std::vector<double>> monitor_values;  // [monitor][sample]

    std::size_t size() const { return times.size(); }
    /// Throws ShapeError if the sample counts disagree or times are not
    /// strictly increasing.
    void validate() const;
};

enum class Method { rk4, implicit_midpoint };

std::string to_string(Method m);
Method method_from_string(const std::string& name);

struct IntegratorConfig {
    Method method = Method::rk4;
    double dt = 1e-3;
    double t_end = 1.0;
    int record_every = 1;

    /// Throws ConfigError unless 0 < dt <= t_end and record_every >= 1.
    void validate() const;
};

struct Monitor {
    std::string name;
    RealFn fn;
};
using MonitorSet = std::vector<Monitor>;

/// Central-difference Jacobian of an arbitrary map f: R^N -> R^M.
/// Step per coordinate is h * max(1, |x_n|).
MatrixXd jacobian_fd(const VecFn& f, int dim_out, const VectorXd& x, double h = kFdStep);

/// Central-difference Jacobian of a vector field, J(m,n) = dv_m/dx_n.
MatrixXd jacobian_fd(const VectorField& v, const VectorXd& x, double h = kFdStep);

/// Central-difference gradient of a scalar function.
VectorXd gradient_fd(const RealFn& f, const VectorXd& x, double h = kFdStep);

/// Gradient of a ScalarField: analytic when present, central differences otherwise.
VectorXd gradient(const ScalarField& f, const VectorXd& x, double h = kFdStep);

/// Jacobian of a vector field: analytic when present, central differences otherwise.
MatrixXd jacobian(const VectorField& v, const VectorXd& x, double h = kFdStep);

/// Trace of the finite-difference Jacobian.
double divergence_fd(const VectorField& v, const VectorXd& x, double h = kFdStep);

/// Fixed-step integration from t=0 to cfg.t_end, recording every
/// record_every-th step (plus the initial and final states). Appends into
/// `out`, so a partial trajectory survives a blow-up or collision throw.
void integrate_sink(const VectorField& v, const VectorXd& x0, const IntegratorConfig& cfg,
                    const MonitorSet& monitors, Trajectory& out);

Trajectory integrate(const VectorField& v, const VectorXd& x0, const IntegratorConfig& cfg,
                     const MonitorSet& monitors = {});

/// The planar rotation field v = (x2, -x1), with its constant Jacobian.
VectorField rotation_field();

}  // namespace npdyn
