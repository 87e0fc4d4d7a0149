#include "etsim/design.hpp"

#include "etsim/errors.hpp"
#include "etsim/trigger.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace etsim {

namespace {

void check_rho0(double rho0) {
    if (!(rho0 > 0.0 && rho0 < 1.0))
        throw std::invalid_argument("rho0 must lie in (0,1), got " + std::to_string(rho0));
}

} // namespace

double min_feasible_J(const PlantParams& p, double rho0, double gamma) {
    p.validate();
    check_rho0(rho0);
    if (gamma < 0.0)
        throw std::invalid_argument("gamma must be >= 0");
    return (p.M / (p.A * rho0)) * std::expm1(p.A * gamma);
}

PaperPacketSize packet_size_paper(const PlantParams& p, double J, double rho0,
                                  double b, double gamma) {
    if (!(b > 1.0))
        throw std::invalid_argument("slack factor b must be > 1");
    // Feasibility check and ln(1 + ...) denominator via the shared resolution.
    const double delta = quantizer_resolution(p, J, rho0, gamma);
    if (gamma == 0.0)
        return PaperPacketSize{-std::numeric_limits<double>::infinity(), 0.0, 1};
    const double raw = 1.0 + std::log2(p.A * b * gamma / (p.A * delta));
    const double bound = std::max(0.0, raw);
    const int bits = std::max(1, static_cast<int>(std::ceil(raw)));
    return PaperPacketSize{raw, bound, bits};
}

double min_inter_event(const PlantParams& p, double J, double rho0) {
    p.validate();
    check_rho0(rho0);
    if (!(J > 0.0))
        throw std::invalid_argument("J must be > 0");
    const double c = p.M / p.A;
    return std::log((J + c) / (rho0 * J + c)) / p.A;
}

double max_trigger_rate(const PlantParams& p, double J, double rho0) {
    return 1.0 / min_inter_event(p, J, rho0);
}

double sufficient_rate(const PlantParams& p, double J, double rho0, double b,
                       double gamma) {
    const PaperPacketSize g = packet_size_paper(p, J, rho0, b, gamma);
    return max_trigger_rate(p, J, rho0) * g.bound;
}

double datarate_threshold(const PlantParams& p) {
    p.validate();
    return p.A / std::log(2.0);
}

double JRule::J(const PlantParams& p, double rho0, double gamma) const {
    return fixed ? value : min_feasible_J(p, rho0, gamma) + value;
}

std::vector<RateCurvePoint> rate_curve_sweep(const PlantParams& p, double rho0, double b,
                                             const JRule& rule,
                                             std::span<const double> gamma_grid) {
    for (std::size_t i = 1; i < gamma_grid.size(); ++i)
        if (!(gamma_grid[i] > gamma_grid[i - 1]))
            throw std::invalid_argument("gamma grid must be strictly increasing");

    std::vector<RateCurvePoint> out;
    out.reserve(gamma_grid.size());
    const double threshold = datarate_threshold(p);
    for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
        RateCurvePoint pt;
        pt.gamma = gamma_grid[i];
        pt.datarate_threshold = threshold;
        try {
            pt.J = rule.J(p, rho0, pt.gamma);
            const TriggerDesign d = build_design(p, pt.J, rho0, b, pt.gamma);
            const PaperPacketSize g = packet_size_paper(p, pt.J, rho0, b, pt.gamma);
            pt.delta = d.delta;
            pt.g_paper_real = g.bound;
            pt.g_paper_int = g.bits;
            pt.g_constructive = d.bits;
            pt.tau_min = min_inter_event(p, pt.J, rho0);
            pt.rtr_bound = 1.0 / pt.tau_min;
            pt.rs_bound = pt.rtr_bound * g.bound;
        } catch (const FeasibilityError& e) {
            pt.error = "point " + std::to_string(i) + ": " + e.what();
        }
        out.push_back(pt);
    }
    return out;
}

} // namespace etsim
