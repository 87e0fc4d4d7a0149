#include "etsim/cli.hpp"
#include "etsim/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <stdexcept>

namespace {

// Linear grid helper for --gamma-from/--gamma-to/--gamma-steps.
std::vector<double> linear_grid(double from, double to, int steps) {
    std::vector<double> g;
    if (steps < 1)
        return g;
    if (steps == 1) {
        g.push_back(from);
        return g;
    }
    g.reserve(steps);
    for (int i = 0; i < steps; ++i)
        g.push_back(from + (to - from) * i / (steps - 1));
    return g;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"event-triggered stabilization over a delayed digital link"};
    app.require_subcommand(1);
    app.fallthrough(true);
    app.set_config("--config", "", "config file (key=value; manifests are valid configs)");

    etsim::DesignArgs da;
    CLI::App* design = app.add_subcommand("design", "print the design report");
    design->add_option("--A", da.A, "open-loop growth rate");
    design->add_option("--B", da.B, "input gain");
    design->add_option("--M", da.M, "disturbance bound");
    design->add_option("--rho0", da.rho0, "post-jump contraction in (0,1)");
    design->add_option("--b", da.b, "slack factor > 1");
    design->add_option("--gamma", da.gamma, "worst-case channel delay");
    design->add_option("--J", da.J, "triggering threshold (overrides --J-offset)");
    design->add_option("--J-offset", da.J_offset, "J = min_J + offset");

    etsim::SimulateArgs sa;
    CLI::App* simulate = app.add_subcommand("simulate", "run one closed-loop simulation");
    simulate->add_flag("--scalar", sa.scalar, "scalar plant instead of the pendulum");
    simulate->add_option("--scenario", sa.scenario, "pendulum scenario")
        ->check(CLI::IsMember({"a", "b", "c"}));
    simulate->add_option("--A", sa.A, "scalar: open-loop growth rate");
    simulate->add_option("--B", sa.B, "scalar: input gain");
    simulate->add_option("--M", sa.M, "disturbance bound");
    simulate->add_option("--L", sa.L, "scalar: initial-state bound");
    simulate->add_option("--gamma", sa.gamma, "worst-case channel delay");
    simulate->add_option("--rho0", sa.rho0, "post-jump contraction");
    simulate->add_option("--b", sa.b, "slack factor");
    simulate->add_option("--J", sa.J, "triggering threshold");
    simulate->add_option("--J-offset", sa.J_offset, "J = min_J + offset");
    simulate->add_option("--T", sa.T, "horizon [s]");
    simulate->add_option("--dt", sa.h, "grid step [s]");
    simulate->add_option("--K", sa.K, "scalar: feedback gain (default pole mirror)");
    simulate->add_option("--x0", sa.x0, "scalar: initial state");
    simulate->add_option("--xhat0", sa.xhat0, "scalar: initial estimate");
    simulate->add_option("--bound-mode", sa.bound_mode, "per-mode | physical")
        ->check(CLI::IsMember({"per-mode", "physical"}));
    simulate->add_option("--disturbance", sa.disturbance, "zero | uniform | adversarial")
        ->check(CLI::IsMember({"zero", "uniform", "adversarial"}));
    simulate->add_option("--delay-kind", sa.delay_kind,
                         "constant | uniform | adversarial-max")
        ->check(CLI::IsMember({"constant", "uniform", "adversarial-max"}));
    simulate->add_option("--seed-delay", sa.seed_delay, "delay RNG seed");
    simulate->add_option("--seed-w", sa.seed_w, "disturbance RNG seed");
    simulate->add_option("--out", sa.out_dir, "output directory")
        ->envname("ETSIM_OUT");

    etsim::SweepArgs wa;
    double gfrom = 0.0, gto = 0.0;
    int gsteps = 0;
    CLI::App* sweep = app.add_subcommand("sweep", "design/rate formulas across delays");
    sweep->add_flag("--pendulum", wa.pendulum, "use the pendulum's unstable mode");
    sweep->add_flag("--measured", wa.measured, "also run one simulation per point");
    sweep->add_option("--gamma-list", wa.gamma_grid, "explicit delay grid")
        ->delimiter(',');
    sweep->add_option("--gamma-from", gfrom, "grid start");
    sweep->add_option("--gamma-to", gto, "grid end");
    sweep->add_option("--gamma-steps", gsteps, "grid point count");
    sweep->add_option("--A", wa.A, "open-loop growth rate (scalar mode)");
    sweep->add_option("--B", wa.B, "input gain (scalar mode)");
    sweep->add_option("--M", wa.M, "disturbance bound");
    sweep->add_option("--rho0", wa.rho0, "post-jump contraction");
    sweep->add_option("--b", wa.b, "slack factor");
    sweep->add_option("--J", wa.J, "fixed triggering threshold");
    sweep->add_option("--J-offset", wa.J_offset, "J(gamma) = min_J + offset");
    sweep->add_option("--bound-mode", wa.bound_mode, "per-mode | physical")
        ->check(CLI::IsMember({"per-mode", "physical"}));
    sweep->add_option("--T", wa.T, "horizon for measured runs");
    sweep->add_option("--dt", wa.h, "grid step for measured runs");
    sweep->add_option("--seed-delay", wa.seed_delay, "delay RNG seed");
    sweep->add_option("--seed-w", wa.seed_w, "disturbance RNG seed");
    sweep->add_option("--out", wa.out_file, "output CSV path")->envname("ETSIM_OUT");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? etsim::kExitOk : etsim::kExitUsage;
    }

    try {
        if (design->parsed())
            return etsim::cmd_design(da, std::cout);
        if (simulate->parsed())
            return etsim::cmd_simulate(sa, std::cout);
        if (gsteps > 0) {
            const auto grid = linear_grid(gfrom, gto, gsteps);
            wa.gamma_grid.insert(wa.gamma_grid.end(), grid.begin(), grid.end());
        }
        return etsim::cmd_sweep(wa, std::cout);
    } catch (const etsim::FeasibilityError& e) {
        std::cerr << "infeasible design: " << e.what() << "\n";
        return etsim::kExitInfeasible;
    } catch (const etsim::InvariantViolation& e) {
        std::cerr << "runtime invariant violated: " << e.what() << "\n";
        return etsim::kExitInvariant;
    } catch (const etsim::ProtocolError& e) {
        std::cerr << "runtime invariant violated: " << e.what() << "\n";
        return etsim::kExitInvariant;
    } catch (const etsim::DecodeError& e) {
        std::cerr << "runtime invariant violated: " << e.what() << "\n";
        return etsim::kExitInvariant;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return etsim::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
