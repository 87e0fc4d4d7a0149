#include "etsim/pendulum.hpp"

#include "etsim/design.hpp"
#include "etsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace etsim {

namespace {

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double sgn_or_one(double v) { return v >= 0.0 ? 1.0 : -1.0; }

// Zero-order-hold input weight for one mode; exact limit h at lambda = 0.
double mode_hold_weight(double lambda, double h) {
    if (std::abs(lambda * h) < 1e-12)
        return h;
    return std::expm1(lambda * h) / lambda;
}

} // namespace

PendulumModel diagonalize(const Eigen::Matrix4d& A, const Eigen::Vector4d& B,
                          const Eigen::RowVector4d& k) {
    Eigen::EigenSolver<Eigen::Matrix4d> es(A);
    if (es.info() != Eigen::Success)
        throw std::invalid_argument("diagonalize: eigensolver failed");

    const double scale = std::max(A.cwiseAbs().maxCoeff(), 1.0);
    const auto evals = es.eigenvalues();
    for (int i = 0; i < 4; ++i)
        if (std::abs(evals(i).imag()) > 1e-9 * scale)
            throw std::invalid_argument("diagonalize: complex eigenvalues, unsupported model");

    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return evals(a).real() < evals(b).real(); });

    PendulumModel m;
    m.A = A;
    m.B = B;
    m.k = k;
    for (int i = 0; i < 4; ++i) {
        m.eigvals(i) = evals(order[i]).real();
        Eigen::Vector4d v = es.eigenvectors().col(order[i]).real();
        v.normalize();
        // Orientation: largest-magnitude entry positive.
        int imax = 0;
        v.cwiseAbs().maxCoeff(&imax);
        if (v(imax) < 0.0)
            v = -v;
        m.P.col(i) = v;
    }
    for (int i = 1; i < 4; ++i)
        if (m.eigvals(i) - m.eigvals(i - 1) <= 1e-9 * scale)
            throw std::invalid_argument("diagonalize: repeated eigenvalues, unsupported model");

    m.Pinv = m.P.inverse();
    m.Atil = m.eigvals.asDiagonal();
    m.Btil = m.Pinv * B;
    m.ktil = k * m.P;
    return m;
}

PendulumModel cart_pole_model() {
    const double m1 = 0.2, m2 = 0.5, nu = 0.1, len = 0.3, inertia = 0.006, g0 = 9.8;
    const double den = inertia * (m1 + m2) + m2 * m1 * len * len;

    Eigen::Matrix4d A;
    A << 0, 1, 0, 0,
         0, -(inertia + m1 * len * len) * nu / den, m1 * m1 * g0 * len * len / den, 0,
         0, 0, 0, 1,
         0, -m1 * len * nu / den, m1 * g0 * len * (m1 + m2) / den, 0;
    Eigen::Vector4d B;
    B << 0, (inertia + m1 * len * len) / den, 0, m1 * len / den;
    // Quadratic-regulator gain for Q = I, R = 1 on (A, B).
    Eigen::RowVector4d k;
    k << -1.0, -2.0407631769873573, 20.367152374835207, 3.9302150737106007;

    PendulumModel m = diagonalize(A, B, k);
    // Fix mode orientations to the reproducible input-coupling signs
    // (ascending eigenvalue order): (-, +, +, +).
    const double orient[4] = {-1.0, 1.0, 1.0, 1.0};
    for (int i = 0; i < 4; ++i)
        if (m.Btil(i) * orient[i] < 0.0)
            m.P.col(i) = -m.P.col(i);
    m.Pinv = m.P.inverse();
    m.Btil = m.Pinv * B;
    m.ktil = k * m.P;
    return m;
}

double transformed_disturbance_bound(const Eigen::Matrix4d& P, double M_component) {
    return modal_disturbance_bounds(P, M_component)(3);
}

Eigen::Vector4d modal_disturbance_bounds(const Eigen::Matrix4d& P, double M_component) {
    if (M_component < 0.0)
        throw std::invalid_argument("disturbance bound must be >= 0");
    Eigen::FullPivLU<Eigen::Matrix4d> lu(P);
    if (!lu.isInvertible())
        throw std::invalid_argument("singular eigenvector matrix");
    const Eigen::Matrix4d Pinv = lu.inverse();
    return M_component * Pinv.cwiseAbs().rowwise().sum();
}

PendulumConfig resolve_scenario(Scenario s, const PendulumOverrides& ov) {
    PendulumConfig cfg;
    cfg.scenario = s;
    switch (s) {
    case Scenario::a: cfg.M = 0.0;  cfg.gamma = cfg.h;  break;
    case Scenario::b: cfg.M = 0.05; cfg.gamma = cfg.h;  break;
    case Scenario::c: cfg.M = 0.05; cfg.gamma = 0.1;    break;
    }
    cfg.disturbance = cfg.M > 0.0 ? DisturbanceKind::uniform : DisturbanceKind::zero;

    if (ov.M) cfg.M = *ov.M;
    if (ov.gamma) cfg.gamma = *ov.gamma;
    if (ov.T) cfg.T = *ov.T;
    if (ov.h) cfg.h = *ov.h;
    if (ov.rho0) cfg.rho0 = *ov.rho0;
    if (ov.b) cfg.b = *ov.b;
    if (ov.bound_mode) cfg.bound_mode = *ov.bound_mode;
    if (ov.disturbance) cfg.disturbance = *ov.disturbance;
    if (ov.delay_kind) cfg.delay_kind = *ov.delay_kind;
    if (ov.delay_seed) cfg.delay_seed = *ov.delay_seed;
    if (ov.disturbance_seed) cfg.disturbance_seed = *ov.disturbance_seed;

    if (cfg.M == 0.0)
        cfg.disturbance = DisturbanceKind::zero;
    return cfg;
}

PendulumRun run_pendulum(Scenario s, const PendulumOverrides& ov) {
    return run_pendulum(resolve_scenario(s, ov));
}

PendulumRun run_pendulum(const PendulumConfig& cfg) {
    if (!(cfg.h > 0.0) || !(cfg.T >= cfg.h))
        throw std::invalid_argument("pendulum: need h > 0 and T >= h");
    if (!(cfg.gamma >= cfg.h))
        throw std::invalid_argument("pendulum: gamma must be at least one grid step");
    if (cfg.M < 0.0)
        throw std::invalid_argument("pendulum: M must be >= 0");

    PendulumRun run;
    run.model = cart_pole_model();
    run.config = cfg;
    const PendulumModel& mdl = run.model;
    const double h = cfg.h;
    const int nsteps = static_cast<int>(std::llround(cfg.T / h));

    const double lam4 = mdl.eigvals(3);
    run.M_design = cfg.bound_mode == BoundMode::per_mode
                       ? cfg.M
                       : transformed_disturbance_bound(mdl.P, cfg.M);

    Eigen::Vector4d st = mdl.Pinv * Eigen::Vector4d(0, 0, 0, 0.1001);
    Eigen::Vector4d sh = mdl.Pinv * Eigen::Vector4d(0, 0, 0, 0.10);
    const Eigen::Vector4d z0 = (st - sh).cwiseAbs();

    PlantParams p4{lam4, mdl.Btil(3), run.M_design, std::abs(st(3)) + 1.0};
    const double J = min_feasible_J(p4, cfg.rho0, cfg.gamma) + 0.005;
    run.design = build_design(p4, J, cfg.rho0, cfg.b, cfg.gamma);
    const TriggerDesign& d = run.design;
    if (!(z0(3) < J))
        throw std::invalid_argument("pendulum: initial estimate violates |z4(0)| < J");

    // Per-mode disturbance bounds and estimation-error bounds over the horizon.
    const Eigen::Vector4d Mt = cfg.disturbance == DisturbanceKind::zero
                                   ? Eigen::Vector4d::Zero().eval()
                                   : (cfg.bound_mode == BoundMode::per_mode
                                          ? Eigen::Vector4d::Constant(cfg.M).eval()
                                          : modal_disturbance_bounds(mdl.P, cfg.M));
    Eigen::Vector4d Z;
    for (int i = 0; i < 3; ++i) {
        const double lam = mdl.eigvals(i);
        Z(i) = std::abs(lam) < 1e-9 ? z0(i) + Mt(i) * cfg.T
                                    : std::max(z0(i), Mt(i) / std::abs(lam));
    }
    const double z4_max = d.J * std::exp(lam4 * (d.gamma + h)) +
                          (run.M_design / lam4) * std::expm1(lam4 * (d.gamma + h));
    Z(3) = z4_max;

    // Exact discrete closed loop s+ = Md s + G ktil z + phi.*w.
    Eigen::Vector4d ad, phi;
    for (int i = 0; i < 4; ++i) {
        ad(i) = std::exp(mdl.eigvals(i) * h);
        phi(i) = mode_hold_weight(mdl.eigvals(i), h);
    }
    const Eigen::Vector4d G = phi.cwiseProduct(mdl.Btil);
    const Eigen::Matrix4d Md =
        Eigen::Matrix4d(ad.asDiagonal()) - G * mdl.ktil;
    {
        Eigen::EigenSolver<Eigen::Matrix4d> es(Md);
        run.cert.spectral_radius = es.eigenvalues().cwiseAbs().maxCoeff();
        if (!(run.cert.spectral_radius < 1.0))
            throw std::invalid_argument(
                "pendulum: discrete closed loop unstable for this grid step");
    }

    const Eigen::Vector4d F =
        G.cwiseAbs() * (mdl.ktil.cwiseAbs() * Z).value() + phi.cwiseProduct(Mt);
    Eigen::Vector4d S = Eigen::Vector4d::Zero();
    {
        Eigen::Matrix4d Mk = Eigen::Matrix4d::Identity();
        for (long j = 0; j < 2'000'000; ++j) {
            S += Mk.cwiseAbs() * F;
            Mk = Mk * Md;
            if (Mk.cwiseAbs().maxCoeff() < 1e-14)
                break;
        }
    }
    // Initial-condition decay D_k = |Md^k| |s(0)| and the 1%-of-S horizon.
    std::vector<Eigen::Vector4d> decay(nsteps + 1);
    int k0 = nsteps + 1;
    {
        Eigen::Matrix4d Mk = Eigen::Matrix4d::Identity();
        const Eigen::Vector4d s0abs = st.cwiseAbs();
        for (int k = 0; k <= nsteps; ++k) {
            decay[k] = Mk.cwiseAbs() * s0abs;
            if (k0 > nsteps && (decay[k].array() <= 0.01 * S.array()).all())
                k0 = k;
            Mk = Mk * Md;
        }
    }
    for (int i = 0; i < 4; ++i)
        run.cert.kappa_modal[i] = 1.01 * S(i);
    const Eigen::Vector4d kp = mdl.P.cwiseAbs() * (1.01 * S);
    for (int i = 0; i < 4; ++i)
        run.cert.kappa_phys[i] = kp(i);
    run.cert.T0 = k0 * h;

    DelayChannel channel(DelayPolicy{cfg.delay_kind, cfg.gamma, cfg.delay_seed},
                         std::max(0.0, cfg.gamma - h));
    std::mt19937_64 wrng(cfg.disturbance_seed);
    auto sample_wt = [&](const Eigen::Vector4d& ztil) -> Eigen::Vector4d {
        if (cfg.disturbance == DisturbanceKind::zero || cfg.M == 0.0)
            return Eigen::Vector4d::Zero();
        Eigen::Vector4d w;
        if (cfg.bound_mode == BoundMode::per_mode) {
            if (cfg.disturbance == DisturbanceKind::uniform)
                for (int i = 0; i < 4; ++i)
                    w(i) = cfg.M * (2.0 * unit_uniform(wrng) - 1.0);
            else
                for (int i = 0; i < 4; ++i)
                    w(i) = cfg.M * sgn_or_one(ztil(i));
            return w;
        }
        Eigen::Vector4d wp;
        if (cfg.disturbance == DisturbanceKind::uniform)
            for (int j = 0; j < 4; ++j)
                wp(j) = cfg.M * (2.0 * unit_uniform(wrng) - 1.0);
        else
            for (int j = 0; j < 4; ++j)
                wp(j) = cfg.M * sgn_or_one(mdl.Pinv(3, j)) * sgn_or_one(ztil(3));
        return mdl.Pinv * wp;
    };

    SimTrace& m4 = run.mode4;
    m4.horizon = cfg.T;
    m4.step = h;
    m4.rows.reserve(nsteps + 1);
    run.rows.reserve(nsteps + 1);

    const double tau_min = min_inter_event(p4, d.J, d.rho0);
    const double eps_j = 1e-9 * d.J;
    const double eps_s = 1e-9 * std::max(S.maxCoeff(), 1.0);

    for (int k = 0; k <= nsteps; ++k) {
        const double t = k * h;
        bool reception = false;
        bool trigger = false;

        if (auto delivered = channel.poll(t)) {
            EventRow& ev = m4.events.back();
            const double q = decode(*delivered, t, d);
            sh(3) = apply_jump(sh(3), reconstruct_zbar(delivered->sign, d.J, lam4, t, q));
            reception = true;
            ev.t_receive = t;
            ev.delay = t - ev.t_send;
            if (ev.delay > d.gamma + 1e-12)
                throw InvariantViolation("delay bound: event " + std::to_string(ev.k));
            const double z_post = std::abs(st(3) - sh(3));
            if (z_post > d.rho0 * d.J + eps_j)
                throw InvariantViolation("jump contract: event " + std::to_string(ev.k) +
                                         " |z4(t_c+)| = " + std::to_string(z_post));
        }

        const Eigen::Vector4d ztil = st - sh;
        const double z4 = ztil(3);
        for (int i = 0; i < 4; ++i)
            if (std::abs(ztil(i)) > Z(i) + eps_j + 1e-12)
                throw InvariantViolation("error bound: |z" + std::to_string(i + 1) +
                                         "| at step " + std::to_string(k));
        for (int i = 0; i < 4; ++i) {
            if (std::abs(st(i)) > S(i) + decay[k](i) + eps_s)
                throw InvariantViolation("modal state envelope: mode " +
                                         std::to_string(i + 1) + " at step " +
                                         std::to_string(k));
            if (k >= k0 && std::abs(st(i)) > run.cert.kappa_modal[i] + eps_s)
                throw InvariantViolation("modal practical-stability bound at step " +
                                         std::to_string(k));
        }
        const Eigen::Vector4d sphys = mdl.P * st;
        if (k >= k0)
            for (int i = 0; i < 4; ++i)
                if (std::abs(sphys(i)) > run.cert.kappa_phys[i] + eps_s)
                    throw InvariantViolation("physical practical-stability bound at step " +
                                             std::to_string(k));

        if (should_trigger(z4, d, channel.in_flight())) {
            trigger = true;
            const int sgn = z4 >= 0.0 ? 1 : -1;
            const Packet pkt = encode(t, sgn, d);
            channel.submit(pkt, t);
            if (!m4.events.empty()) {
                EventRow& prev = m4.events.back();
                prev.interval = t - prev.t_send;
                if (prev.interval < tau_min - h - 1e-12)
                    throw InvariantViolation("inter-event bound after event " +
                                             std::to_string(prev.k));
            }
            EventRow ev;
            ev.k = ++m4.trigger_count;
            ev.t_send = t;
            ev.sign = sgn;
            ev.cell_index = pkt.cell_index;
            ev.bits = pkt.bits;
            m4.events.push_back(ev);
            m4.total_bits += pkt.bits;
        }

        const double u = -(mdl.ktil * sh).value();
        const Eigen::Vector4d wt =
            k < nsteps ? sample_wt(ztil) : Eigen::Vector4d::Zero().eval();

        PendulumRow row;
        row.t = t;
        for (int i = 0; i < 4; ++i) {
            row.s_modal[i] = st(i);
            row.s_phys[i] = sphys(i);
        }
        row.xhat4 = sh(3);
        row.z4 = z4;
        row.u = u;
        row.w4 = wt(3);
        row.trigger = trigger;
        row.reception = reception;
        run.rows.push_back(row);
        m4.rows.push_back(TraceRow{t, st(3), sh(3), z4, u, wt(3), trigger, reception});

        if (k < nsteps) {
            st = ad.cwiseProduct(st) + phi.cwiseProduct(mdl.Btil * u + wt);
            sh = ad.cwiseProduct(sh) + phi.cwiseProduct(mdl.Btil * u);
        }
    }
    if (!m4.events.empty())
        m4.events.back().interval = cfg.T - m4.events.back().t_send;
    run.rates = measure_rates(m4, p4, d);
    return run;
}

} // namespace etsim
