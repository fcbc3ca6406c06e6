#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "npdyn/discrete.hpp"
#include "npdyn/flows.hpp"

namespace npdyn {

enum class SystemKind { vortex, reduced3, nambu, costate, discrete, qmcheck };

std::string to_string(SystemKind k);
SystemKind kind_from_string(const std::string& name);

/// Everything a run needs; fields beyond the selected kind are ignored.
struct RunConfig {
    SystemKind kind = SystemKind::reduced3;

    VectorXd gammas;   // vortex / reduced3 / nambu / costate-over-vortex
    VectorXd state;    // initial state; stacked (x, psi) for costate runs
    VectorXd costate;  // discrete runs: initial l row

    Method method = Method::rk4;
    double dt = 1e-3;
    double t_end = 10.0;
    int record_every = 1;

    std::string field = "rotation";         // costate runs: rotation | vortex | reduced3
    std::string hamiltonians = "reduced3";  // nambu runs: reduced3 | rotation
    std::string map = "cat";                // discrete runs: cat | fanout | cubic
    CostateMode costate_mode = CostateMode::post_step;
    int steps = 100;  // discrete runs

    int d = 1;  // qmcheck
    double r_min = 1.0;
    double r_max = 2.0;
    int points = 201;
    int levels = 3;

    std::optional<double> quantum;  // vortex circulation unit

    std::string out_csv;     // empty: no trajectory file
    std::string out_report;  // empty: no report file
    bool timings = false;    // opt-in wall-clock field (breaks byte-identical output)

    /// Throws ConfigError on anything inconsistent with the selected kind.
    void validate() const;
};

/// Overlay keys from a JSON config file onto cfg. Unknown keys are rejected;
/// a "system" key, when present, must match the already-selected kind.
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Execute a validated config, writing the requested files. Returns 0 on
/// success or 3 on a runtime failure (blow-up, collision, irreversible step),
/// with whatever partial trajectory exists flushed and the failure described
/// both on `diag` and in the report.
int run(const RunConfig& cfg, std::ostream& diag);

}  // namespace npdyn
