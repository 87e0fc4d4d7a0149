#pragma once

#include "etsim/design.hpp"
#include "etsim/pendulum.hpp"
#include "etsim/simulate.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace etsim {

/// Display formatting for CSV and report values.
std::string fmt_g(double v);
/// Round-trip exact formatting (%.17g) for manifests.
std::string fmt_exact(double v);

using KVList = std::vector<std::pair<std::string, std::string>>;

/// key=value lines; comment lines carry provenance and are ignored by the
/// config parser, so a manifest doubles as a re-runnable config file. A
/// nonempty section name emits a [section] header for subcommand scoping.
void write_kv(std::ostream& os, const KVList& values,
              const std::vector<std::string>& comments = {},
              const std::string& section = {});

// Trace CSV: t,x,xhat,z,u,w,trigger,reception
void write_scalar_trace_csv(std::ostream& os, const SimTrace& trace);
// Trace CSV: t,st1..st4,s1..s4,xhat,z,u,w,trigger,reception
void write_pendulum_trace_csv(std::ostream& os, const PendulumRun& run);
// Event CSV: k,t_s,t_c,delta_k,interval_k,sign,cell_index,g_bits
void write_events_csv(std::ostream& os, const std::vector<EventRow>& events);
// Sweep CSV per the design-calc schema plus an error column and, when
// measured stats are supplied, measured_Rs / measured_Rtr columns.
void write_sweep_csv(std::ostream& os, const std::vector<RateCurvePoint>& points,
                     const std::vector<std::optional<RateStats>>* measured = nullptr);

} // namespace etsim
