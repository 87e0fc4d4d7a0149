#include "etsim/io.hpp"

#include <cstdio>

namespace etsim {

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt_exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_kv(std::ostream& os, const KVList& values,
              const std::vector<std::string>& comments, const std::string& section) {
    for (const auto& c : comments)
        os << "# " << c << "\n";
    if (!section.empty())
        os << "[" << section << "]\n";
    for (const auto& [k, v] : values)
        os << k << "=" << v << "\n";
}

void write_scalar_trace_csv(std::ostream& os, const SimTrace& trace) {
    os << "t,x,xhat,z,u,w,trigger,reception\n";
    for (const TraceRow& r : trace.rows) {
        os << fmt_g(r.t) << ',' << fmt_g(r.x) << ',' << fmt_g(r.xhat) << ','
           << fmt_g(r.z) << ',' << fmt_g(r.u) << ',' << fmt_g(r.w) << ','
           << (r.trigger ? 1 : 0) << ',' << (r.reception ? 1 : 0) << '\n';
    }
}

void write_pendulum_trace_csv(std::ostream& os, const PendulumRun& run) {
    os << "t,st1,st2,st3,st4,s1,s2,s3,s4,xhat,z,u,w,trigger,reception\n";
    for (const PendulumRow& r : run.rows) {
        os << fmt_g(r.t);
        for (double v : r.s_modal)
            os << ',' << fmt_g(v);
        for (double v : r.s_phys)
            os << ',' << fmt_g(v);
        os << ',' << fmt_g(r.xhat4) << ',' << fmt_g(r.z4) << ',' << fmt_g(r.u) << ','
           << fmt_g(r.w4) << ',' << (r.trigger ? 1 : 0) << ',' << (r.reception ? 1 : 0)
           << '\n';
    }
}

void write_events_csv(std::ostream& os, const std::vector<EventRow>& events) {
    os << "k,t_s,t_c,delta_k,interval_k,sign,cell_index,g_bits\n";
    for (const EventRow& e : events) {
        os << e.k << ',' << fmt_g(e.t_send) << ',' << fmt_g(e.t_receive) << ','
           << fmt_g(e.delay) << ',' << fmt_g(e.interval) << ','
           << (e.sign >= 0 ? '+' : '-') << ',' << e.cell_index << ',' << e.bits << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const std::vector<RateCurvePoint>& points,
                     const std::vector<std::optional<RateStats>>* measured) {
    os << "gamma,J,delta,g_paper_real,g_paper_int,g_constructive,tau_min,"
          "Rtr_bound,Rs_bound,datarate_threshold";
    if (measured)
        os << ",measured_Rs,measured_Rtr";
    os << ",error\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        const RateCurvePoint& p = points[i];
        os << fmt_g(p.gamma) << ',' << fmt_g(p.J) << ',' << fmt_g(p.delta) << ','
           << fmt_g(p.g_paper_real) << ',' << p.g_paper_int << ',' << p.g_constructive
           << ',' << fmt_g(p.tau_min) << ',' << fmt_g(p.rtr_bound) << ','
           << fmt_g(p.rs_bound) << ',' << fmt_g(p.datarate_threshold);
        if (measured) {
            const auto& m = (*measured)[i];
            os << ',' << (m ? fmt_g(m->r_s) : "") << ',' << (m ? fmt_g(m->r_tr) : "");
        }
        os << ',' << p.error << '\n';
    }
}

} // namespace etsim
