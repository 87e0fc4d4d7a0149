#include "etsim/trigger.hpp"

#include "etsim/design.hpp"
#include "etsim/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace etsim {

double quantizer_resolution(const PlantParams& p, double J, double rho0, double gamma) {
    p.validate();
    if (!(rho0 > 0.0 && rho0 < 1.0))
        throw std::invalid_argument("rho0 must lie in (0,1)");
    if (gamma < 0.0)
        throw std::invalid_argument("gamma must be >= 0");
    if (!(J > 0.0))
        throw std::invalid_argument("J must be > 0");
    const double arg =
        (rho0 - (p.M / (J * p.A)) * std::expm1(p.A * gamma)) / std::exp(p.A * gamma);
    if (!(arg > 0.0)) {
        const double floor = min_feasible_J(p, rho0, gamma);
        throw FeasibilityError("infeasible threshold J = " + std::to_string(J) +
                                   "; requires J > " + std::to_string(floor),
                               floor);
    }
    return std::log1p(arg) / p.A;
}

TriggerDesign build_design(const PlantParams& p, double J, double rho0, double b,
                           double gamma) {
    if (!(b > 1.0))
        throw std::invalid_argument("slack factor b must be > 1");
    TriggerDesign d;
    d.J = J;
    d.rho0 = rho0;
    d.b = b;
    d.gamma = gamma;
    d.delta = quantizer_resolution(p, J, rho0, gamma);
    if (gamma <= d.delta) {
        d.cells = 1;
        d.wrap = 0.0;
        d.bits = 1;
    } else {
        d.cells = static_cast<int>(std::ceil(gamma / d.delta)) + 2;
        d.wrap = d.cells * d.delta;
        d.bits = 1 + static_cast<int>(std::bit_width(
                         static_cast<unsigned>(d.cells - 1)));
    }
    return d;
}

Packet encode(double t_send, int z_sign, const TriggerDesign& d) {
    Packet pkt;
    pkt.sign = z_sign >= 0 ? 1 : -1;
    pkt.bits = d.bits;
    pkt.meta_t_send = t_send;
    if (d.bits > 1) {
        const double rem = std::fmod(t_send, d.wrap);
        pkt.cell_index =
            std::min(static_cast<int>(std::floor(rem / d.delta)), d.cells - 1);
    }
    return pkt;
}

double decode(const Packet& pkt, double t_receive, const TriggerDesign& d) {
    if (d.bits == 1)
        return t_receive - d.gamma;

    // Unique candidate cell_index*delta + m*wrap inside the half-open window
    // (t_receive - gamma - delta, t_receive]. Window edges get a relative fp
    // cushion; uniqueness is protected by wrap - (gamma + delta) >= delta.
    const double edge = pkt.cell_index * d.delta;
    const double tol = 1e-9 * d.delta;
    const double lo = t_receive - d.gamma - d.delta - tol;
    const double hi = t_receive + tol;
    const int m_guess = static_cast<int>(std::floor((t_receive - edge) / d.wrap));

    double found = 0.0;
    int hits = 0;
    for (int m = m_guess - 2; m <= m_guess + 2; ++m) {
        const double q = edge + m * d.wrap;
        if (q > lo && q <= hi) {
            found = q;
            ++hits;
        }
    }
    if (hits != 1)
        throw DecodeError("decoder found " + std::to_string(hits) +
                          " timestamp candidates at t_receive = " +
                          std::to_string(t_receive));
    return found;
}

double reconstruct_zbar(int z_sign, double J, double A, double t_receive, double q) {
    return (z_sign >= 0 ? 1.0 : -1.0) * J * std::exp(A * (t_receive - q));
}

} // namespace etsim
