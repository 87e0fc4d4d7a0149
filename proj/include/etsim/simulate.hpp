#pragma once

#include "etsim/channel.hpp"
#include "etsim/plant.hpp"
#include "etsim/trigger.hpp"

#include <cstdint>
#include <vector>

namespace etsim {

enum class DisturbanceKind {
    zero,
    uniform,     ///< each step uniform in [-bound, bound]
    adversarial, ///< bound * sign(z), the worst case for error growth
};

struct DisturbancePolicy {
    DisturbanceKind kind = DisturbanceKind::zero;
    double bound = 0.0; ///< must not exceed the plant's M
    std::uint64_t seed = 0;
};

/// Everything one closed-loop run needs. Grid step h, horizon T; delivery is
/// grid-quantized, so the declared delay bound must be at least one step and
/// raw delays are sampled up to gamma - h.
struct SimConfig {
    double T = 5.0;
    double h = 0.005;
    PlantParams plant;
    TriggerDesign design;
    ControllerGain gain;
    DelayPolicy delay;
    DisturbancePolicy disturbance;
    double x0 = 0.0;
    double xhat0 = 0.0;

    /// Throws on inconsistent configs: nonpositive steps, delay.gamma < h,
    /// |x0| > L, |x0 - xhat0| >= J, infeasible design, or a gain too
    /// aggressive for the grid (discrete pole magnitude >= 1).
    void validate() const;
};

/// Scalar config with the library defaults: pole-mirror gain, x0 = L,
/// xhat0 = x0 - J/2, uniform delays, disturbance bound = plant M.
SimConfig default_scalar_config(const PlantParams& p, const TriggerDesign& d);

struct TraceRow {
    double t, x, xhat, z, u, w;
    bool trigger, reception;
};

struct EventRow {
    int k = 0;              ///< 1-based event index
    double t_send = 0.0;
    double t_receive = 0.0; ///< grid time the controller processed it
    double delay = 0.0;     ///< t_receive - t_send
    double interval = 0.0;  ///< to the next trigger; last one closes at T
    int sign = 0;
    int cell_index = 0;
    int bits = 0;
};

struct SimTrace {
    std::vector<TraceRow> rows;
    std::vector<EventRow> events;
    long long total_bits = 0;
    int trigger_count = 0;
    double horizon = 0.0;
    double step = 0.0;
};

/// Finite-horizon surrogates of the transmission and triggering rates plus
/// the analytic bounds they are compared against.
struct RateStats {
    double r_s = 0.0;       ///< measured bits/s: total bits / span
    double r_tr = 0.0;      ///< measured events/s
    double r_tr_bound = 0.0;
    double r_s_bound = 0.0; ///< packet bits * r_tr_bound
    double datarate_threshold = 0.0;
    double span = 0.0;      ///< first trigger to horizon; 0 when no trigger
    long long total_bits = 0;
    int events = 0;
};

/// Practical-stability certificate for the exact-ZOH discrete loop
/// x+ = lambda_d x + phi (B K z + w):  |x| <= kappa for all t >= T0.
struct BoundCertificate {
    double lambda_d = 0.0;   ///< discrete closed-loop pole e^{Ah} - phi B K
    double z_max = 0.0;      ///< grid-safe bound on |z|
    double kappa_base = 0.0; ///< asymptotic bound phi(BK z_max + Mw)/(1-|lambda_d|)
    double kappa = 0.0;      ///< certified bound, 1.01 * kappa_base
    double T0 = 0.0;         ///< initial-condition decay horizon
};

struct ScalarRun {
    SimTrace trace;
    RateStats rates;
    BoundCertificate cert;
};

/// Runs the closed loop on the grid. Every runtime guarantee (delay bound,
/// post-jump contract, inter-event spacing, error bound, state bound) is
/// checked as it is produced; the first violation aborts with
/// InvariantViolation naming it and the step or event index.
ScalarRun run_scalar(const SimConfig& cfg);

/// Rates from a finished trace; zero events give zero rates by convention.
RateStats measure_rates(const SimTrace& trace, const PlantParams& p,
                        const TriggerDesign& d);

enum class MirrorFault {
    none,
    use_send_time, ///< mirror decodes with t_send instead of t_receive
};

struct MirrorReport {
    double max_divergence = 0.0; ///< max |xhat_sensor - xhat_controller| over the grid
    bool consistent = false;     ///< true iff max_divergence == 0
    int triggers = 0;
};

/// Replays the run with a second estimator maintained at the sensor from its
/// own packets and the observed reception times; they must agree exactly.
/// The fault option feeds the mirror the send time instead, a negative
/// control that must be detected as divergence whenever anything triggers.
MirrorReport run_sensor_mirror(const SimConfig& cfg,
                               MirrorFault fault = MirrorFault::none);

} // namespace etsim
