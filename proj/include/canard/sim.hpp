#ifndef CANARD_SIM_HPP
#define CANARD_SIM_HPP

#include "canard/model.hpp"

namespace canard {

/// Configuration for integrating the full field F.Z + eps.Q.
struct SimConfig {
    double eps = 0.0;     // in (0, 0.2] for slow-fast runs; 0 gives the fast flow
    double t_end = 100.0;
    double dt = 0.01;
    Bindings params;
    Point start{0.0, 0.0};
    double escape_radius = 10.0;
};

struct TrajectorySample {
    double t, x, y;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
};

enum class IntegrationStatus { Completed, Escaped, NonFinite };

struct IntegrationResult {
    Trajectory trajectory;
    IntegrationStatus status = IntegrationStatus::Completed;
    TrajectorySample last{0.0, 0.0, 0.0};
};

/// Classical fixed-step RK4 on (F Zx + eps Qx, F Zy + eps Qy). Aborts when
/// the state leaves the escape radius or stops being finite.
IntegrationResult integrate(const SlowFastModel& m, const SimConfig& cfg);

/// Write a trajectory as CSV: header "t,x,y", one sample per line, %.12g.
void write_trajectory_csv(std::ostream& os, const Trajectory& t);

enum class ProbeVerdict { Supercritical, Subcritical, Inconclusive };

const char* probe_verdict_name(ProbeVerdict v);

struct ProbeOptions {
    double dt = 0.01;
    double max_time_per_run = 4000.0;
    double start_offset = 0.12;     // initial radius relative to the local scale
    double cycle_cap = 0.75;        // "small cycle" radius bound
    double collapse_radius = 2e-3;  // returns below this mean the focus won
    int min_returns = 5;
    double contraction = 0.9;       // successive return gaps must shrink 10%
    std::vector<double> sweep_offsets{0.01, 0.02, 0.005};
};

struct ProbeResult {
    ProbeVerdict verdict = ProbeVerdict::Inconclusive;
    double hopf_param = 0.0;  // zero of the trace of the full-field Jacobian
    double offset_used = 0.0; // sweep offset that produced the verdict
    std::string detail;
};

/// Sweeps the breaking parameter across the Hopf value (detected as the zero
/// of the trace of the full-field Jacobian at the nearby singular point),
/// integrates on both sides and reports the criticality sign:
/// supercritical when a stable small cycle surrounds the unstable focus,
/// subcritical when instead time-reversed integration finds the unstable
/// small cycle around the stable focus. Never guesses: anything else is
/// Inconclusive.
ProbeResult criticality_probe(const SlowFastModel& m, const ContactPoint& p, double eps,
                              const std::string& breaking_param, const ProbeOptions& opts = {});

} // namespace canard

#endif
