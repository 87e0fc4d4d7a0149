#pragma once

#include "etsim/plant.hpp"

namespace etsim {

/// Triggering threshold plus the derived quantizer geometry.
///
/// When the delay bound fits inside one quantizer cell (gamma <= delta) the
/// packet degenerates to the sign bit alone: cells = 1, wrap unused, bits = 1.
/// Otherwise cells = ceil(gamma/delta) + 2 so the wrap period exceeds
/// gamma + 2*delta and the decoder candidate is always unique.
struct TriggerDesign {
    double J = 0.0;     ///< triggering threshold, > 0
    double rho0 = 0.0;  ///< post-jump contraction, in (0,1)
    double b = 1.0001;  ///< slack factor > 1 (closed-form reporting only)
    double gamma = 0.0; ///< worst-case channel delay [s]
    double delta = 0.0; ///< quantizer resolution [s]
    int cells = 1;      ///< cell count N
    double wrap = 0.0;  ///< wrap period P = N*delta (0 when cells == 1)
    int bits = 1;       ///< packet size g
};

/// Quantizer resolution from the jump-contract error budget:
/// delta = (1/A) ln(1 + (rho0 - (M/(J A))(e^{A gamma}-1)) / e^{A gamma}).
/// Throws FeasibilityError (naming the minimum J) when the budget is empty.
double quantizer_resolution(const PlantParams& p, double J, double rho0, double gamma);

/// Constructs the full design for the given threshold and delay bound.
TriggerDesign build_design(const PlantParams& p, double J, double rho0, double b,
                           double gamma);

/// Discrete-time crossing detection of |z| = J, suppressed while a packet
/// is awaiting delivery.
[[nodiscard]] inline bool should_trigger(double z, const TriggerDesign& d,
                                         bool packet_in_flight) {
    return !packet_in_flight && (z >= d.J || z <= -d.J);
}

/// What the sensor sends: the sign of z at the trigger instant plus, for
/// multi-bit designs, the index of the quantizer cell containing the
/// trigger time modulo the wrap period.
struct Packet {
    int sign = 1;          ///< +1 or -1
    int cell_index = 0;    ///< in [0, cells); 0 for sign-only packets
    int bits = 1;          ///< declared width, matches TriggerDesign::bits
    double meta_t_send = 0.0; ///< bookkeeping only; the decoder never reads it
};

/// Quantizes the trigger time into a packet. The implicit quantized time is
/// the cell's left edge, so 0 <= t_send - edge < delta.
Packet encode(double t_send, int z_sign, const TriggerDesign& d);

/// Reconstructs the quantized trigger time from the packet and the reception
/// time. Sign-only designs return t_receive - gamma. Multi-bit designs return
/// the unique candidate cell_index*delta + m*wrap inside
/// (t_receive - gamma - delta, t_receive]; throws DecodeError otherwise.
/// Guarantees |t_send - q| <= delta whenever the delay respected gamma.
double decode(const Packet& pkt, double t_receive, const TriggerDesign& d);

/// Controller-side estimate of z at reception, aged from the trigger:
/// sign * J * e^{A (t_receive - q)}.
[[nodiscard]] double reconstruct_zbar(int z_sign, double J, double A,
                                      double t_receive, double q);

/// Jump update applied at reception; afterwards z(t+) = z(t) - zbar.
[[nodiscard]] inline double apply_jump(double xhat, double zbar) {
    return xhat + zbar;
}

} // namespace etsim
