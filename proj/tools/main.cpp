#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "npdyn/checks.hpp"
#include "npdyn/runner.hpp"

namespace {

struct CliArgs {
    std::string config, out, report;
    std::string method = "rk4";
    std::string field = "rotation";
    std::string hamiltonians = "reduced3";
    std::string map = "cat";
    std::string mode = "post";
    std::string suite = "all";
    std::vector<double> gammas, state, costate;
    double dt = 1e-3, t_end = 10.0, r_min = 1.0, r_max = 2.0, quantum = 0.0;
    int record_every = 1, steps = 100, d = 1, points = 201, levels = 3;
    bool timings = false;
};

Eigen::VectorXd to_vec(const std::vector<double>& v) {
    Eigen::VectorXd out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    return out;
}

void add_output_options(CLI::App* sub, CliArgs& a) {
    sub->add_option("--config", a.config, "JSON config file; inline flags override its keys");
    sub->add_option("--out", a.out, "trajectory CSV path");
    sub->add_option("--report", a.report, "JSON report path");
    sub->add_flag("--timings", a.timings, "include wall-clock runtime in the report");
}

void add_integrator_options(CLI::App* sub, CliArgs& a) {
    sub->add_option("--dt", a.dt, "time step");
    sub->add_option("--t-end", a.t_end, "final time");
    sub->add_option("--method", a.method, "rk4 | midpoint");
    sub->add_option("--record-every", a.record_every, "record every n-th step");
}

CLI::Option* add_state_option(CLI::App* sub, CliArgs& a, const std::string& desc) {
    return sub->add_option("--state", a.state, desc)->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nambu-Poisson dynamics: conservative flows, point vortices, costate\n"
                 "extensions, discrete reversible maps, and their conservation reports"};
    app.require_subcommand(1);
    CliArgs a;

    CLI::App* vortex = app.add_subcommand("vortex", "full point-vortex dynamics");
    vortex->add_option("--gammas", a.gammas, "circulations, comma separated")->delimiter(',');
    add_state_option(vortex, a, "initial positions interleaved x1,y1,x2,y2,...");
    vortex->add_option("--quantum", a.quantum, "require circulations = nonzero integers * unit");
    add_integrator_options(vortex, a);
    add_output_options(vortex, a);

    CLI::App* reduced3 = app.add_subcommand("reduced3", "reduced 3-vortex dynamics in u variables");
    reduced3->add_option("--gammas", a.gammas, "three circulations")->delimiter(',');
    add_state_option(reduced3, a, "initial u1,u2,u3");
    add_integrator_options(reduced3, a);
    add_output_options(reduced3, a);

    CLI::App* nambu = app.add_subcommand("nambu", "multi-Hamiltonian flow");
    nambu->add_option("--hamiltonians", a.hamiltonians, "reduced3 | rotation");
    nambu->add_option("--gammas", a.gammas, "circulations for the reduced3 set")->delimiter(',');
    add_state_option(nambu, a, "initial state");
    add_integrator_options(nambu, a);
    add_output_options(nambu, a);

    CLI::App* costate = app.add_subcommand("costate", "doubled (x, psi) dynamics over a base field");
    costate->add_option("--field", a.field, "rotation | vortex | reduced3");
    costate->add_option("--gammas", a.gammas, "circulations when the base field needs them")
        ->delimiter(',');
    add_state_option(costate, a, "stacked x1..xN,psi1..psiN");
    add_integrator_options(costate, a);
    add_output_options(costate, a);

    CLI::App* discrete = app.add_subcommand("discrete", "step map with the linear co-processor");
    discrete->add_option("--map", a.map, "cat | fanout | cubic");
    discrete->add_option("--steps", a.steps, "number of steps");
    discrete->add_option("--costate-mode", a.mode, "post | pre (Jacobian evaluation state)");
    add_state_option(discrete, a, "initial S (default 0.2,0.1)");
    discrete->add_option("--costate", a.costate, "initial l (default 1,0)")->delimiter(',');
    add_output_options(discrete, a);

    CLI::App* qmcheck = app.add_subcommand("qmcheck", "radial stationarity check of the 4(4-d)/r^2 potential");
    qmcheck->add_option("--d", a.d, "spatial dimension");
    qmcheck->add_option("--r-min", a.r_min, "grid start");
    qmcheck->add_option("--r-max", a.r_max, "grid end");
    qmcheck->add_option("--points", a.points, "coarsest grid point count");
    qmcheck->add_option("--levels", a.levels, "number of grid refinements");
    add_output_options(qmcheck, a);

    CLI::App* check = app.add_subcommand("check", "run built-in property suites");
    check->add_option("--suite", a.suite, "flows|costate|nambu|vortex|discrete|qmcheck|all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (check->parsed()) {
        try {
            const auto results = npdyn::run_suite(a.suite);
            bool all = true;
            for (const auto& r : results) {
                std::cout << (r.passed ? "PASS" : "FAIL") << "  " << r.name << ": " << r.detail
                          << "\n";
                all = all && r.passed;
            }
            std::cout << (all ? "all " : "FAILURES among ") << results.size() << " checks\n";
            return all ? 0 : 3;
        } catch (const npdyn::ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        }
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        npdyn::RunConfig cfg;
        cfg.kind = npdyn::kind_from_string(sub->get_name());
        if (!a.config.empty()) npdyn::apply_config_file(cfg, a.config);

        const auto passed = [sub](const char* name) {
            const CLI::Option* o = sub->get_option_no_throw(name);
            return o != nullptr && o->count() > 0;
        };
        if (passed("--gammas")) cfg.gammas = to_vec(a.gammas);
        if (passed("--state")) cfg.state = to_vec(a.state);
        if (passed("--costate")) cfg.costate = to_vec(a.costate);
        if (passed("--method")) cfg.method = npdyn::method_from_string(a.method);
        if (passed("--dt")) cfg.dt = a.dt;
        if (passed("--t-end")) cfg.t_end = a.t_end;
        if (passed("--record-every")) cfg.record_every = a.record_every;
        if (passed("--field")) cfg.field = a.field;
        if (passed("--hamiltonians")) cfg.hamiltonians = a.hamiltonians;
        if (passed("--map")) cfg.map = a.map;
        if (passed("--costate-mode")) {
            if (a.mode == "post" || a.mode == "post_step")
                cfg.costate_mode = npdyn::CostateMode::post_step;
            else if (a.mode == "pre" || a.mode == "pre_step")
                cfg.costate_mode = npdyn::CostateMode::pre_step;
            else
                throw npdyn::ConfigError("unknown costate mode '" + a.mode + "'");
        }
        if (passed("--steps")) cfg.steps = a.steps;
        if (passed("--d")) cfg.d = a.d;
        if (passed("--r-min")) cfg.r_min = a.r_min;
        if (passed("--r-max")) cfg.r_max = a.r_max;
        if (passed("--points")) cfg.points = a.points;
        if (passed("--levels")) cfg.levels = a.levels;
        if (passed("--quantum")) cfg.quantum = a.quantum;
        if (passed("--out")) cfg.out_csv = a.out;
        if (passed("--report")) cfg.out_report = a.report;
        if (passed("--timings")) cfg.timings = a.timings;

        if (cfg.kind == npdyn::SystemKind::discrete) {
            if (cfg.state.size() == 0) {
                cfg.state = Eigen::VectorXd(2);
                cfg.state << 0.2, 0.1;
            }
            if (cfg.costate.size() == 0) {
                cfg.costate = Eigen::VectorXd(2);
                cfg.costate << 1, 0;
            }
        }

        return npdyn::run(cfg, std::cerr);
    } catch (const npdyn::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const npdyn::DimensionError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const npdyn::DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const npdyn::GridError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const npdyn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
