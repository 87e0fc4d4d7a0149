#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace etsim {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes shared by the CLI commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitInvariant = 4;

struct DesignArgs {
    double A = 5.5651;
    double B = 1.0;
    double M = 0.0;
    double rho0 = 0.9;
    double b = 1.0001;
    double gamma = 0.005;
    std::optional<double> J;
    double J_offset = 0.005;
};

/// Prints the full design report (feasibility floor, quantizer geometry,
/// packet sizes both ways, rate bounds, data-rate threshold).
int cmd_design(const DesignArgs& args, std::ostream& out);

struct SimulateArgs {
    bool scalar = false;
    std::string scenario = "a";
    std::optional<double> A, B, M, L, gamma, rho0, b, J, T, h, K, x0, xhat0;
    std::optional<double> J_offset;
    std::optional<std::string> bound_mode;  // per-mode | physical
    std::optional<std::string> disturbance; // zero | uniform | adversarial
    std::optional<std::string> delay_kind;  // constant | uniform | adversarial-max
    std::optional<std::uint64_t> seed_delay, seed_w;
    std::string out_dir = "out";
};

/// Runs one closed-loop simulation and writes trace.csv, events.csv,
/// stats.txt and manifest.txt into the output directory. The manifest is a
/// config file: re-running with it reproduces the outputs byte for byte.
int cmd_simulate(const SimulateArgs& args, std::ostream& log);

struct SweepArgs {
    bool pendulum = false;
    bool measured = false;
    std::vector<double> gamma_grid;
    double A = 5.5651;
    double B = 1.0;
    double M = 0.0;
    double rho0 = 0.9;
    double b = 1.0001;
    std::optional<double> J;
    double J_offset = 0.005;
    std::string bound_mode = "per-mode";
    double T = 5.0;
    double h = 0.005;
    std::uint64_t seed_delay = 1;
    std::uint64_t seed_w = 2;
    std::string out_file = "sweep.csv";
};

/// Evaluates the design formulas across the delay grid (one CSV row per
/// point, infeasible points flagged in the error column) and, with
/// measured = true, also runs a simulation per point.
int cmd_sweep(const SweepArgs& args, std::ostream& log);

} // namespace etsim
