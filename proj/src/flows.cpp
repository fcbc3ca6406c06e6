#include "npdyn/flows.hpp"

#include <cmath>
#include <limits>

namespace npdyn {

VectorXd VectorField::operator()(const VectorXd& x) const {
    if (x.size() != dim)
        throw DimensionError("state length " + std::to_string(x.size()) +
                             " does not match field dimension " + std::to_string(dim));
    VectorXd out = eval(x);
    if (out.size() != dim)
        throw EvaluationError("field returned length " + std::to_string(out.size()) +
                              ", expected " + std::to_string(dim));
    return out;
}

void Trajectory::validate() const {
    if (states.size() != times.size())
        throw ShapeError("trajectory has " + std::to_string(states.size()) + " states for " +
                         std::to_string(times.size()) + " times");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw ShapeError("trajectory times not strictly increasing at sample " +
                             std::to_string(i));
    if (monitor_values.size() != monitor_names.size())
        throw ShapeError("monitor value rows do not match monitor names");
    for (const auto& row : monitor_values)
        if (row.size() != times.size())
            throw ShapeError("monitor array length does not match sample count");
}

std::string to_string(Method m) {
    return m == Method::rk4 ? "rk4" : "implicit_midpoint";
}

Method method_from_string(const std::string& name) {
    if (name == "rk4") return Method::rk4;
    if (name == "implicit_midpoint" || name == "midpoint") return Method::implicit_midpoint;
    throw ConfigError("unknown method '" + name + "' (expected rk4 or implicit_midpoint)");
}

void IntegratorConfig::validate() const {
    if (!(dt > 0)) throw ConfigError("dt must be positive");
    if (!(t_end > 0)) throw ConfigError("t_end must be positive");
    if (dt > t_end * (1 + 1e-12)) throw ConfigError("dt must not exceed t_end");
    if (record_every < 1) throw ConfigError("record_every must be >= 1");
}

MatrixXd jacobian_fd(const VecFn& f, int dim_out, const VectorXd& x, double h) {
    const int n = static_cast<int>(x.size());
    MatrixXd J(dim_out, n);
    VectorXd xp = x, xm = x;
    for (int j = 0; j < n; ++j) {
        const double step = h * std::max(1.0, std::abs(x[j]));
        xp[j] = x[j] + step;
        xm[j] = x[j] - step;
        const VectorXd fp = f(xp);
        const VectorXd fm = f(xm);
        if (!fp.allFinite() || !fm.allFinite())
            throw EvaluationError("non-finite field value in difference stencil at coordinate " +
                                  std::to_string(j));
        J.col(j) = (fp - fm) / (2 * step);
        xp[j] = x[j];
        xm[j] = x[j];
    }
    return J;
}

MatrixXd jacobian_fd(const VectorField& v, const VectorXd& x, double h) {
    return jacobian_fd(v.eval, v.dim, x, h);
}

VectorXd gradient_fd(const RealFn& f, const VectorXd& x, double h) {
    const int n = static_cast<int>(x.size());
    VectorXd g(n);
    VectorXd xp = x, xm = x;
    for (int j = 0; j < n; ++j) {
        const double step = h * std::max(1.0, std::abs(x[j]));
        xp[j] = x[j] + step;
        xm[j] = x[j] - step;
        const double fp = f(xp);
        const double fm = f(xm);
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw EvaluationError("non-finite value in difference stencil at coordinate " +
                                  std::to_string(j));
        g[j] = (fp - fm) / (2 * step);
        xp[j] = x[j];
        xm[j] = x[j];
    }
    return g;
}

VectorXd gradient(const ScalarField& f, const VectorXd& x, double h) {
    if (f.gradient) return f.gradient(x);
    return gradient_fd(f.value, x, h);
}

MatrixXd jacobian(const VectorField& v, const VectorXd& x, double h) {
    if (v.analytic_jacobian) return v.analytic_jacobian(x);
    return jacobian_fd(v, x, h);
}

double divergence_fd(const VectorField& v, const VectorXd& x, double h) {
    return jacobian_fd(v, x, h).trace();
}

namespace {

VectorXd rk4_step(const VectorField& v, const VectorXd& x, double dt) {
    const VectorXd k1 = v(x);
    const VectorXd k2 = v(x + 0.5 * dt * k1);
    const VectorXd k3 = v(x + 0.5 * dt * k2);
    const VectorXd k4 = v(x + dt * k3);
    return x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
}

VectorXd midpoint_step(const VectorField& v, const VectorXd& x, double dt) {
    // Fixed-point iteration on the stage value k = v(x + dt/2 k).
    VectorXd k = v(x);
    constexpr int kMaxIters = 100;
    for (int it = 0; it < kMaxIters; ++it) {
        const VectorXd k_next = v(x + 0.5 * dt * k);
        const double residual = (k_next - k).norm();
        k = k_next;
        if (residual <= 1e-12) return x + dt * k;
    }
    throw ConvergenceError("implicit midpoint stage iteration did not reach 1e-12 in 100 steps");
}

}  // namespace

void integrate_sink(const VectorField& v, const VectorXd& x0, const IntegratorConfig& cfg,
                    const MonitorSet& monitors, Trajectory& out) {
    cfg.validate();
    if (x0.size() != v.dim)
        throw DimensionError("initial state length " + std::to_string(x0.size()) +
                             " does not match field dimension " + std::to_string(v.dim));

    out.monitor_names.clear();
    out.monitor_values.assign(monitors.size(), {});
    for (const auto& m : monitors) out.monitor_names.push_back(m.name);

    // Monitors are evaluated before anything is appended, so a throwing
    // monitor leaves the recorded trajectory consistent.
    std::vector<double> mvals(monitors.size());
    const auto record = [&](double t, const VectorXd& x) {
        for (std::size_t i = 0; i < monitors.size(); ++i) mvals[i] = monitors[i].fn(x);
        out.times.push_back(t);
        out.states.push_back(x);
        for (std::size_t i = 0; i < monitors.size(); ++i)
            out.monitor_values[i].push_back(mvals[i]);
    };

    // Whole steps of dt, then one shorter step so the final sample lands
    // exactly on t_end.
    const long n_full = static_cast<long>(std::floor(cfg.t_end / cfg.dt + 1e-12));
    const double remainder = cfg.t_end - static_cast<double>(n_full) * cfg.dt;
    const bool has_partial = remainder > cfg.dt * 1e-9;
    const long n_steps = n_full + (has_partial ? 1 : 0);

    VectorXd x = x0;
    double t = 0.0;
    record(t, x);
    for (long i = 0; i < n_steps; ++i) {
        const bool last = (i == n_steps - 1);
        const double step = (has_partial && last) ? remainder : cfg.dt;
        x = (cfg.method == Method::rk4) ? rk4_step(v, x, step) : midpoint_step(v, x, step);
        if (!x.allFinite())
            throw BlowUpError("state became non-finite after t = " + std::to_string(t), t);
        t = last ? cfg.t_end : static_cast<double>(i + 1) * cfg.dt;
        if (last || (i + 1) % cfg.record_every == 0) record(t, x);
    }
}

Trajectory integrate(const VectorField& v, const VectorXd& x0, const IntegratorConfig& cfg,
                     const MonitorSet& monitors) {
    Trajectory out;
    integrate_sink(v, x0, cfg, monitors, out);
    out.validate();
    return out;
}

VectorField rotation_field() {
    VectorField v;
    v.dim = 2;
    v.eval = [](const VectorXd& x) {
        VectorXd out(2);
        out << x[1], -x[0];
        return out;
    };
    v.analytic_jacobian = [](const VectorXd&) {
        MatrixXd J(2, 2);
        J << 0, 1, -1, 0;
        return J;
    };
    return v;
}

}  // namespace npdyn
