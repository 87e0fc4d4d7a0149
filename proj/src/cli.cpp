#include "etsim/cli.hpp"

#include "etsim/design.hpp"
#include "etsim/errors.hpp"
#include "etsim/io.hpp"
#include "etsim/pendulum.hpp"
#include "etsim/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace etsim {

namespace {

Scenario parse_scenario(const std::string& s) {
    if (s == "a") return Scenario::a;
    if (s == "b") return Scenario::b;
    if (s == "c") return Scenario::c;
    throw std::invalid_argument("scenario must be one of a, b, c");
}

BoundMode parse_bound_mode(const std::string& s) {
    if (s == "per-mode") return BoundMode::per_mode;
    if (s == "physical") return BoundMode::physical;
    throw std::invalid_argument("bound-mode must be per-mode or physical");
}

DisturbanceKind parse_disturbance(const std::string& s) {
    if (s == "zero") return DisturbanceKind::zero;
    if (s == "uniform") return DisturbanceKind::uniform;
    if (s == "adversarial") return DisturbanceKind::adversarial;
    throw std::invalid_argument("disturbance must be zero, uniform or adversarial");
}

DelayKind parse_delay_kind(const std::string& s) {
    if (s == "constant") return DelayKind::constant;
    if (s == "uniform") return DelayKind::uniform_random;
    if (s == "adversarial-max") return DelayKind::adversarial_max;
    throw std::invalid_argument("delay-kind must be constant, uniform or adversarial-max");
}

const char* bound_mode_name(BoundMode m) {
    return m == BoundMode::per_mode ? "per-mode" : "physical";
}

const char* disturbance_name(DisturbanceKind k) {
    switch (k) {
    case DisturbanceKind::zero: return "zero";
    case DisturbanceKind::uniform: return "uniform";
    case DisturbanceKind::adversarial: return "adversarial";
    }
    return "?";
}

const char* delay_kind_name(DelayKind k) {
    switch (k) {
    case DelayKind::constant: return "constant";
    case DelayKind::uniform_random: return "uniform";
    case DelayKind::adversarial_max: return "adversarial-max";
    }
    return "?";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << content;
}

KVList design_report(const PlantParams& p, const TriggerDesign& d,
                     const PaperPacketSize& g, double floor) {
    return {
        {"min_J", fmt_g(floor)},
        {"J", fmt_g(d.J)},
        {"rho0", fmt_g(d.rho0)},
        {"b", fmt_g(d.b)},
        {"gamma", fmt_g(d.gamma)},
        {"delta", fmt_g(d.delta)},
        {"cells", std::to_string(d.cells)},
        {"wrap", fmt_g(d.wrap)},
        {"g_constructive", std::to_string(d.bits)},
        {"g_paper_raw", fmt_g(g.raw)},
        {"g_paper_real", fmt_g(g.bound)},
        {"g_paper_int", std::to_string(g.bits)},
        {"tau_min", fmt_g(min_inter_event(p, d.J, d.rho0))},
        {"Rtr_bound", fmt_g(max_trigger_rate(p, d.J, d.rho0))},
        {"Rs_bound", fmt_g(sufficient_rate(p, d.J, d.rho0, d.b, d.gamma))},
        {"datarate_threshold", fmt_g(datarate_threshold(p))},
    };
}

void append_rate_stats(KVList& kv, const RateStats& rs) {
    kv.emplace_back("events", std::to_string(rs.events));
    kv.emplace_back("total_bits", std::to_string(rs.total_bits));
    kv.emplace_back("span", fmt_g(rs.span));
    kv.emplace_back("measured_Rs", fmt_g(rs.r_s));
    kv.emplace_back("measured_Rtr", fmt_g(rs.r_tr));
    kv.emplace_back("Rtr_bound", fmt_g(rs.r_tr_bound));
    kv.emplace_back("Rs_bound", fmt_g(rs.r_s_bound));
    kv.emplace_back("datarate_threshold", fmt_g(rs.datarate_threshold));
}

} // namespace

int cmd_design(const DesignArgs& a, std::ostream& out) {
    PlantParams p{a.A, a.B, a.M, 1.0};
    const double floor = min_feasible_J(p, a.rho0, a.gamma);
    const double J = a.J ? *a.J : floor + a.J_offset;
    const TriggerDesign d = build_design(p, J, a.rho0, a.b, a.gamma);
    const PaperPacketSize g = packet_size_paper(p, J, a.rho0, a.b, a.gamma);
    write_kv(out, design_report(p, d, g, floor));
    return kExitOk;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& log) {
    namespace fs = std::filesystem;
    const fs::path dir(a.out_dir);
    fs::create_directories(dir);

    std::ostringstream trace_csv, events_csv, stats_txt, manifest_txt;
    KVList manifest;
    manifest.emplace_back("out", a.out_dir);

    if (a.scalar) {
        PlantParams p{a.A.value_or(5.5651), a.B.value_or(1.0), a.M.value_or(0.0),
                      a.L.value_or(1.0)};
        const double rho0 = a.rho0.value_or(0.9);
        const double b = a.b.value_or(1.0001);
        const double h = a.h.value_or(0.005);
        const double gamma = a.gamma.value_or(h);
        const double J =
            a.J ? *a.J : min_feasible_J(p, rho0, gamma) + a.J_offset.value_or(0.005);
        const TriggerDesign d = build_design(p, J, rho0, b, gamma);

        SimConfig cfg = default_scalar_config(p, d);
        cfg.T = a.T.value_or(5.0);
        cfg.h = h;
        if (a.K)
            cfg.gain = make_gain(p, *a.K);
        if (a.disturbance)
            cfg.disturbance.kind = parse_disturbance(*a.disturbance);
        if (a.delay_kind)
            cfg.delay.kind = parse_delay_kind(*a.delay_kind);
        if (a.seed_delay)
            cfg.delay.seed = *a.seed_delay;
        if (a.seed_w)
            cfg.disturbance.seed = *a.seed_w;
        if (a.x0)
            cfg.x0 = *a.x0;
        if (a.xhat0)
            cfg.xhat0 = *a.xhat0;

        const ScalarRun run = run_scalar(cfg);

        write_scalar_trace_csv(trace_csv, run.trace);
        write_events_csv(events_csv, run.trace.events);

        KVList stats = design_report(p, d, packet_size_paper(p, J, rho0, b, gamma),
                                     min_feasible_J(p, rho0, gamma));
        append_rate_stats(stats, run.rates);
        stats.emplace_back("lambda_d", fmt_g(run.cert.lambda_d));
        stats.emplace_back("z_max", fmt_g(run.cert.z_max));
        stats.emplace_back("kappa", fmt_g(run.cert.kappa));
        stats.emplace_back("T0", fmt_g(run.cert.T0));
        write_kv(stats_txt, stats);

        manifest.emplace_back("scalar", "true");
        manifest.emplace_back("A", fmt_exact(p.A));
        manifest.emplace_back("B", fmt_exact(p.B));
        manifest.emplace_back("M", fmt_exact(p.M));
        manifest.emplace_back("L", fmt_exact(p.L));
        manifest.emplace_back("gamma", fmt_exact(gamma));
        manifest.emplace_back("rho0", fmt_exact(rho0));
        manifest.emplace_back("b", fmt_exact(b));
        manifest.emplace_back("J", fmt_exact(J));
        manifest.emplace_back("T", fmt_exact(cfg.T));
        manifest.emplace_back("dt", fmt_exact(cfg.h));
        manifest.emplace_back("K", fmt_exact(cfg.gain.K));
        manifest.emplace_back("x0", fmt_exact(cfg.x0));
        manifest.emplace_back("xhat0", fmt_exact(cfg.xhat0));
        manifest.emplace_back("disturbance", disturbance_name(cfg.disturbance.kind));
        manifest.emplace_back("delay-kind", delay_kind_name(cfg.delay.kind));
        manifest.emplace_back("seed-delay", std::to_string(cfg.delay.seed));
        manifest.emplace_back("seed-w", std::to_string(cfg.disturbance.seed));
    } else {
        PendulumOverrides ov;
        ov.M = a.M;
        ov.gamma = a.gamma;
        ov.T = a.T;
        ov.h = a.h;
        ov.rho0 = a.rho0;
        ov.b = a.b;
        if (a.bound_mode)
            ov.bound_mode = parse_bound_mode(*a.bound_mode);
        if (a.disturbance)
            ov.disturbance = parse_disturbance(*a.disturbance);
        if (a.delay_kind)
            ov.delay_kind = parse_delay_kind(*a.delay_kind);
        ov.delay_seed = a.seed_delay;
        ov.disturbance_seed = a.seed_w;

        const PendulumRun run = run_pendulum(parse_scenario(a.scenario), ov);
        const PendulumConfig& cfg = run.config;

        write_pendulum_trace_csv(trace_csv, run);
        write_events_csv(events_csv, run.mode4.events);

        PlantParams p4{run.model.eigvals(3), run.model.Btil(3), run.M_design, 1.0};
        KVList stats = design_report(
            p4, run.design,
            packet_size_paper(p4, run.design.J, cfg.rho0, cfg.b, cfg.gamma),
            min_feasible_J(p4, cfg.rho0, cfg.gamma));
        stats.emplace_back("M_design", fmt_g(run.M_design));
        append_rate_stats(stats, run.rates);
        for (int i = 0; i < 4; ++i)
            stats.emplace_back("kappa_modal" + std::to_string(i + 1),
                               fmt_g(run.cert.kappa_modal[i]));
        for (int i = 0; i < 4; ++i)
            stats.emplace_back("kappa_phys" + std::to_string(i + 1),
                               fmt_g(run.cert.kappa_phys[i]));
        stats.emplace_back("T0", fmt_g(run.cert.T0));
        stats.emplace_back("spectral_radius", fmt_g(run.cert.spectral_radius));
        write_kv(stats_txt, stats);

        manifest.emplace_back("scenario", a.scenario);
        manifest.emplace_back("M", fmt_exact(cfg.M));
        manifest.emplace_back("gamma", fmt_exact(cfg.gamma));
        manifest.emplace_back("T", fmt_exact(cfg.T));
        manifest.emplace_back("dt", fmt_exact(cfg.h));
        manifest.emplace_back("rho0", fmt_exact(cfg.rho0));
        manifest.emplace_back("b", fmt_exact(cfg.b));
        manifest.emplace_back("bound-mode", bound_mode_name(cfg.bound_mode));
        manifest.emplace_back("disturbance", disturbance_name(cfg.disturbance));
        manifest.emplace_back("delay-kind", delay_kind_name(cfg.delay_kind));
        manifest.emplace_back("seed-delay", std::to_string(cfg.delay_seed));
        manifest.emplace_back("seed-w", std::to_string(cfg.disturbance_seed));
    }

    write_kv(manifest_txt, manifest,
             {std::string("etsim ") + kVersion, "command: simulate",
              "outputs: trace.csv events.csv stats.txt"},
             "simulate");

    write_file(dir / "trace.csv", trace_csv.str());
    write_file(dir / "events.csv", events_csv.str());
    write_file(dir / "stats.txt", stats_txt.str());
    write_file(dir / "manifest.txt", manifest_txt.str());
    log << "wrote trace.csv, events.csv, stats.txt, manifest.txt to " << dir.string()
        << "\n";
    return kExitOk;
}

int cmd_sweep(const SweepArgs& a, std::ostream& log) {
    namespace fs = std::filesystem;
    if (a.gamma_grid.empty())
        throw std::invalid_argument("sweep: gamma grid is empty");

    PendulumModel mdl;
    PlantParams p;
    double M_design = a.M;
    if (a.pendulum) {
        mdl = cart_pole_model();
        if (parse_bound_mode(a.bound_mode) == BoundMode::physical)
            M_design = transformed_disturbance_bound(mdl.P, a.M);
        p = PlantParams{mdl.eigvals(3), mdl.Btil(3), M_design, 1.0};
    } else {
        p = PlantParams{a.A, a.B, a.M, 1.0};
    }
    const JRule rule = a.J ? JRule{true, *a.J} : JRule{false, a.J_offset};
    std::vector<RateCurvePoint> points = rate_curve_sweep(p, a.rho0, a.b, rule, a.gamma_grid);

    std::vector<std::optional<RateStats>> measured;
    if (a.measured) {
        measured.resize(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            RateCurvePoint& pt = points[i];
            if (!pt.error.empty())
                continue;
            if (pt.gamma < a.h) {
                pt.error = "point " + std::to_string(i) + ": gamma below the grid step";
                continue;
            }
            if (a.pendulum) {
                PendulumOverrides ov;
                ov.M = a.M;
                ov.gamma = pt.gamma;
                ov.T = a.T;
                ov.h = a.h;
                ov.rho0 = a.rho0;
                ov.b = a.b;
                ov.bound_mode = parse_bound_mode(a.bound_mode);
                ov.delay_seed = a.seed_delay;
                ov.disturbance_seed = a.seed_w;
                measured[i] = run_pendulum(Scenario::c, ov).rates;
            } else {
                const TriggerDesign d = build_design(p, pt.J, a.rho0, a.b, pt.gamma);
                SimConfig cfg = default_scalar_config(p, d);
                cfg.T = a.T;
                cfg.h = a.h;
                cfg.delay.seed = a.seed_delay;
                cfg.disturbance.seed = a.seed_w;
                measured[i] = run_scalar(cfg).rates;
            }
        }
    }

    std::ostringstream csv;
    write_sweep_csv(csv, points, a.measured ? &measured : nullptr);
    const fs::path out(a.out_file);
    if (out.has_parent_path())
        fs::create_directories(out.parent_path());
    write_file(out, csv.str());

    KVList manifest{
        {"pendulum", a.pendulum ? "true" : "false"},
        {"measured", a.measured ? "true" : "false"},
        {"A", fmt_exact(p.A)},
        {"B", fmt_exact(p.B)},
        {"M", fmt_exact(a.M)},
        {"rho0", fmt_exact(a.rho0)},
        {"b", fmt_exact(a.b)},
        {"bound-mode", a.bound_mode},
        {"T", fmt_exact(a.T)},
        {"dt", fmt_exact(a.h)},
        {"seed-delay", std::to_string(a.seed_delay)},
        {"seed-w", std::to_string(a.seed_w)},
        {"out", a.out_file},
    };
    if (a.J)
        manifest.emplace_back("J", fmt_exact(*a.J));
    else
        manifest.emplace_back("J-offset", fmt_exact(a.J_offset));
    std::string grid;
    for (std::size_t i = 0; i < a.gamma_grid.size(); ++i)
        grid += (i ? "," : "") + fmt_exact(a.gamma_grid[i]);
    manifest.emplace_back("gamma-list", grid);

    std::ostringstream manifest_txt;
    write_kv(manifest_txt, manifest, {std::string("etsim ") + kVersion, "command: sweep"},
             "sweep");
    write_file(out.string() + ".manifest.txt", manifest_txt.str());
    log << "wrote " << out.string() << " (" << points.size() << " points)\n";
    return kExitOk;
}

} // namespace etsim
