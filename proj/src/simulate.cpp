#include "etsim/simulate.hpp"

#include "etsim/design.hpp"
#include "etsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace etsim {

namespace {

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

class DisturbanceSampler {
public:
    explicit DisturbanceSampler(const DisturbancePolicy& policy)
        : policy_(policy), rng_(policy.seed) {}

    double sample(double z) {
        switch (policy_.kind) {
        case DisturbanceKind::zero:
            return 0.0;
        case DisturbanceKind::uniform:
            return policy_.bound * (2.0 * unit_uniform(rng_) - 1.0);
        case DisturbanceKind::adversarial:
            // sign(0) treated as +1 so the worst case still pushes z away.
            return z >= 0.0 ? policy_.bound : -policy_.bound;
        }
        throw std::logic_error("unknown DisturbanceKind");
    }

private:
    DisturbancePolicy policy_;
    std::mt19937_64 rng_;
};

double discrete_pole(const PlantParams& p, const ControllerGain& g, double h) {
    return std::exp(p.A * h) - hold_weight(p.A, h) * p.B * g.K;
}

BoundCertificate make_certificate(const SimConfig& cfg) {
    const PlantParams& p = cfg.plant;
    const double h = cfg.h;
    const double mw =
        cfg.disturbance.kind == DisturbanceKind::zero ? 0.0 : cfg.disturbance.bound;
    BoundCertificate c;
    c.lambda_d = discrete_pole(p, cfg.gain, h);
    c.z_max = cfg.design.J * std::exp(p.A * (cfg.design.gamma + h)) +
              (mw / p.A) * std::expm1(p.A * (cfg.design.gamma + h));
    const double abs_pole = std::abs(c.lambda_d);
    c.kappa_base = hold_weight(p.A, h) * (p.B * cfg.gain.K * c.z_max + mw) /
                   (1.0 - abs_pole);
    c.kappa = 1.01 * c.kappa_base;
    // T0: geometric decay of the initial-condition excess to 1% of kappa_base.
    double excess = std::max(0.0, std::abs(cfg.x0) - c.kappa_base);
    int k0 = 0;
    while (excess > 0.01 * c.kappa_base) {
        excess *= abs_pole;
        ++k0;
    }
    c.T0 = k0 * h;
    return c;
}

struct CoreResult {
    SimTrace trace;
    BoundCertificate cert;
    double max_divergence = 0.0;
};

CoreResult run_core(const SimConfig& cfg, bool with_mirror, MirrorFault fault) {
    cfg.validate();
    const PlantParams& p = cfg.plant;
    const TriggerDesign& d = cfg.design;
    const double h = cfg.h;
    const int nsteps = static_cast<int>(std::llround(cfg.T / h));

    CoreResult res;
    res.cert = make_certificate(cfg);
    SimTrace& trace = res.trace;
    trace.horizon = cfg.T;
    trace.step = h;
    trace.rows.reserve(nsteps + 1);

    DelayChannel channel(cfg.delay, std::max(0.0, cfg.delay.gamma - h));
    DisturbanceSampler wgen(cfg.disturbance);

    const double tau_min = min_inter_event(p, d.J, d.rho0);
    const double eps_j = 1e-9 * d.J;
    const double eps_x = 1e-9 * std::max({res.cert.kappa_base, std::abs(cfg.x0), 1.0});
    const double abs_pole = std::abs(res.cert.lambda_d);

    double x = cfg.x0;
    double xh = cfg.xhat0;
    double xh_mirror = cfg.xhat0;
    // |x_k| <= kappa_base + |lambda_d|^k (|x0| - kappa_base), valid for all k.
    double envelope_excess = std::abs(cfg.x0) - res.cert.kappa_base;
    const int k0 = static_cast<int>(std::llround(res.cert.T0 / h));

    for (int k = 0; k <= nsteps; ++k) {
        const double t = k * h;
        bool reception = false;
        bool trigger = false;

        if (auto delivered = channel.poll(t)) {
            EventRow& ev = trace.events.back();
            const double q = decode(*delivered, t, d);
            const double zbar = reconstruct_zbar(delivered->sign, d.J, p.A, t, q);
            xh = apply_jump(xh, zbar);
            if (with_mirror) {
                const double t_dec =
                    fault == MirrorFault::use_send_time ? ev.t_send : t;
                const double qm = decode(*delivered, t_dec, d);
                xh_mirror = apply_jump(
                    xh_mirror, reconstruct_zbar(delivered->sign, d.J, p.A, t_dec, qm));
            }
            reception = true;
            ev.t_receive = t;
            ev.delay = t - ev.t_send;
            if (ev.delay > d.gamma + 1e-12)
                throw InvariantViolation("delay bound: event " + std::to_string(ev.k) +
                                         " delay " + std::to_string(ev.delay) +
                                         " exceeds gamma");
            const double z_post = std::abs(x - xh);
            if (z_post > d.rho0 * d.J + eps_j)
                throw InvariantViolation(
                    "jump contract: event " + std::to_string(ev.k) + " |z(t_c+)| = " +
                    std::to_string(z_post) + " exceeds rho0*J = " +
                    std::to_string(d.rho0 * d.J));
        }

        const double z = x - xh;
        if (std::abs(z) > res.cert.z_max + eps_j)
            throw InvariantViolation("error bound: |z| = " + std::to_string(std::abs(z)) +
                                     " exceeds z_max at step " + std::to_string(k));
        const double state_bound = res.cert.kappa_base + envelope_excess;
        if (std::abs(x) > state_bound + eps_x)
            throw InvariantViolation("state envelope: |x| = " + std::to_string(std::abs(x)) +
                                     " exceeds " + std::to_string(state_bound) +
                                     " at step " + std::to_string(k));
        if (k >= k0 && std::abs(x) > res.cert.kappa + eps_x)
            throw InvariantViolation("practical-stability bound: |x| exceeds kappa after T0 at step " +
                                     std::to_string(k));

        if (should_trigger(z, d, channel.in_flight())) {
            trigger = true;
            const int sgn = z >= 0.0 ? 1 : -1;
            const Packet pkt = encode(t, sgn, d);
            channel.submit(pkt, t);
            if (!trace.events.empty()) {
                EventRow& prev = trace.events.back();
                prev.interval = t - prev.t_send;
                if (prev.interval < tau_min - h - 1e-12)
                    throw InvariantViolation(
                        "inter-event bound: interval " + std::to_string(prev.interval) +
                        " after event " + std::to_string(prev.k) +
                        " is below tau_min - h");
            }
            EventRow ev;
            ev.k = ++trace.trigger_count;
            ev.t_send = t;
            ev.sign = sgn;
            ev.cell_index = pkt.cell_index;
            ev.bits = pkt.bits;
            trace.events.push_back(ev);
            trace.total_bits += pkt.bits;
        }

        const double u = -cfg.gain.K * xh;
        const double w = k < nsteps ? wgen.sample(z) : 0.0;
        trace.rows.push_back(TraceRow{t, x, xh, z, u, w, trigger, reception});
        if (with_mirror)
            res.max_divergence = std::max(res.max_divergence, std::abs(xh_mirror - xh));

        if (k < nsteps) {
            x = step_plant_exact(x, u, w, h, p);
            xh = step_estimator(xh, u, h, p);
            if (with_mirror) {
                const double u_mirror = -cfg.gain.K * xh_mirror;
                xh_mirror = step_estimator(xh_mirror, u_mirror, h, p);
            }
            envelope_excess *= abs_pole;
        }
    }
    if (!trace.events.empty())
        trace.events.back().interval = cfg.T - trace.events.back().t_send;
    return res;
}

} // namespace

void SimConfig::validate() const {
    plant.validate();
    if (!(h > 0.0))
        throw std::invalid_argument("SimConfig: h must be > 0");
    if (!(T >= h))
        throw std::invalid_argument("SimConfig: T must be >= h");
    if (!(delay.gamma >= h))
        throw std::invalid_argument(
            "SimConfig: delay.gamma must be at least one grid step (grid-delay rule)");
    if (delay.gamma > design.gamma + 1e-15)
        throw std::invalid_argument("SimConfig: channel gamma exceeds the design's gamma");
    if (std::abs(x0) > plant.L)
        throw std::invalid_argument("SimConfig: |x0| exceeds the initial bound L");
    if (!(std::abs(x0 - xhat0) < design.J))
        throw std::invalid_argument("SimConfig: initial estimate must satisfy |z(0)| < J");
    if (disturbance.bound < 0.0 || disturbance.bound > plant.M)
        throw std::invalid_argument("SimConfig: disturbance bound must lie in [0, M]");
    if (!(gain.alpha > 0.0))
        throw std::invalid_argument("SimConfig: gain must stabilize (alpha > 0)");
    // Feasibility of the design against this plant (throws FeasibilityError).
    quantizer_resolution(plant, design.J, design.rho0, design.gamma);
    if (!(std::abs(discrete_pole(plant, gain, h)) < 1.0))
        throw std::invalid_argument(
            "SimConfig: gain too aggressive for the grid step (|discrete pole| >= 1)");
}

SimConfig default_scalar_config(const PlantParams& p, const TriggerDesign& d) {
    SimConfig cfg;
    cfg.plant = p;
    cfg.design = d;
    cfg.gain = pole_mirror_gain(p);
    cfg.delay = DelayPolicy{DelayKind::uniform_random, d.gamma, 1};
    cfg.disturbance = DisturbancePolicy{
        p.M > 0.0 ? DisturbanceKind::uniform : DisturbanceKind::zero, p.M, 2};
    cfg.x0 = p.L;
    cfg.xhat0 = p.L - d.J / 2.0;
    return cfg;
}

ScalarRun run_scalar(const SimConfig& cfg) {
    CoreResult core = run_core(cfg, false, MirrorFault::none);
    ScalarRun run;
    run.rates = measure_rates(core.trace, cfg.plant, cfg.design);
    run.trace = std::move(core.trace);
    run.cert = core.cert;
    return run;
}

RateStats measure_rates(const SimTrace& trace, const PlantParams& p,
                        const TriggerDesign& d) {
    RateStats rs;
    rs.r_tr_bound = max_trigger_rate(p, d.J, d.rho0);
    rs.r_s_bound = d.bits * rs.r_tr_bound;
    rs.datarate_threshold = datarate_threshold(p);
    rs.events = static_cast<int>(trace.events.size());
    rs.total_bits = trace.total_bits;
    if (!trace.events.empty()) {
        rs.span = trace.horizon - trace.events.front().t_send;
        if (rs.span > 0.0) {
            rs.r_s = static_cast<double>(rs.total_bits) / rs.span;
            rs.r_tr = static_cast<double>(rs.events) / rs.span;
        }
    }
    return rs;
}

MirrorReport run_sensor_mirror(const SimConfig& cfg, MirrorFault fault) {
    CoreResult core = run_core(cfg, true, fault);
    MirrorReport rep;
    rep.max_divergence = core.max_divergence;
    rep.consistent = core.max_divergence == 0.0;
    rep.triggers = core.trace.trigger_count;
    return rep;
}

} // namespace etsim
