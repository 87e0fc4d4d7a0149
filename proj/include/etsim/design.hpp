#pragma once

#include "etsim/plant.hpp"

#include <span>
#include <string>
#include <vector>

namespace etsim {

/// Feasibility floor for the triggering threshold:
/// (M/(A rho0)) (e^{A gamma} - 1). Callers must pick J strictly above it.
[[nodiscard]] double min_feasible_J(const PlantParams& p, double rho0, double gamma);

/// Closed-form packet-size bound evaluated three ways.
struct PaperPacketSize {
    double raw;   ///< 1 + log2(A b gamma / ln(1 + (rho0 - (M/JA)(e^{A g}-1))/e^{A g})); -inf at gamma = 0
    double bound; ///< max{0, raw}: the real-valued sufficient size
    int bits;     ///< max{1, ceil(raw)}: the integer size used in experiments
};

/// Evaluates the closed-form bound. Throws FeasibilityError when J is at or
/// below min_feasible_J. Requires b > 1.
PaperPacketSize packet_size_paper(const PlantParams& p, double J, double rho0,
                                  double b, double gamma);

/// Smallest possible spacing between triggers:
/// (1/A) ln((J + M/A)/(rho0 J + M/A)). Positive whenever rho0 < 1.
[[nodiscard]] double min_inter_event(const PlantParams& p, double J, double rho0);

/// Worst-case triggering rate, the reciprocal of min_inter_event.
[[nodiscard]] double max_trigger_rate(const PlantParams& p, double J, double rho0);

/// Sufficient transmission rate: max_trigger_rate times the clamped
/// packet-size bound. Zero while the size bound clamps to zero.
[[nodiscard]] double sufficient_rate(const PlantParams& p, double J, double rho0,
                                     double b, double gamma);

/// A / ln 2, the classical minimum rate for the scalar unstable pole.
[[nodiscard]] double datarate_threshold(const PlantParams& p);

/// Threshold selection rule for sweeps: either a fixed J or an offset above
/// the feasibility floor (always feasible for offset > 0).
struct JRule {
    bool fixed = false;
    double value = 0.005; ///< the fixed J, or the offset above min_feasible_J

    [[nodiscard]] double J(const PlantParams& p, double rho0, double gamma) const;
};

/// One row of the rate-vs-delay sweep.
struct RateCurvePoint {
    double gamma = 0.0;
    double J = 0.0;
    double delta = 0.0;
    double g_paper_real = 0.0;
    int g_paper_int = 0;
    int g_constructive = 0;
    double tau_min = 0.0;
    double rtr_bound = 0.0;
    double rs_bound = 0.0;
    double datarate_threshold = 0.0;
    std::string error; ///< set (with the point index) when the point is infeasible
};

/// Evaluates design and rate formulas on a strictly increasing delay grid.
/// Infeasible points carry an error string; feasible ones fill every column.
std::vector<RateCurvePoint> rate_curve_sweep(const PlantParams& p, double rho0, double b,
                                             const JRule& rule,
                                             std::span<const double> gamma_grid);

} // namespace etsim
