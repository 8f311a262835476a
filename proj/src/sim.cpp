#include "canard/sim.hpp"

#include <cmath>
#include <functional>
#include <ostream>

namespace canard {

namespace {

// Compiled right-hand side of the full field F.Z + eps.Q.
// Slot layout: [x, y, params...].
struct FullField {
    CompiledExpr fzx, fzy, qx, qy;
    double eps;
    std::vector<double> slots;

    FullField(const SlowFastModel& m, double eps_, const Bindings& params) : eps(eps_) {
        std::vector<std::string> names{"x", "y"};
        names.insert(names.end(), m.parameters.begin(), m.parameters.end());
        fzx = CompiledExpr(simplify(m.F * m.Z.x), names);
        fzy = CompiledExpr(simplify(m.F * m.Z.y), names);
        qx = CompiledExpr(m.Q.x, names);
        qy = CompiledExpr(m.Q.y, names);
        slots.resize(names.size());
        for (std::size_t i = 0; i < m.parameters.size(); ++i) {
            auto it = params.find(m.parameters[i]);
            if (it == params.end()) throw UnboundSymbolError(m.parameters[i]);
            slots[2 + i] = it->second;
        }
    }

    void operator()(double x, double y, double& dx, double& dy) {
        slots[0] = x;
        slots[1] = y;
        std::span<const double> s(slots);
        dx = fzx.eval(s) + eps * qx.eval(s);
        dy = fzy.eval(s) + eps * qy.eval(s);
    }
};

// One RK4 step.
template <typename RHS>
void rk4_step(RHS& f, double& x, double& y, double dt) {
    double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y;
    f(x, y, k1x, k1y);
    f(x + 0.5 * dt * k1x, y + 0.5 * dt * k1y, k2x, k2y);
    f(x + 0.5 * dt * k2x, y + 0.5 * dt * k2y, k3x, k3y);
    f(x + dt * k3x, y + dt * k3y, k4x, k4y);
    x += dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
    y += dt / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
}

} // namespace

IntegrationResult integrate(const SlowFastModel& m, const SimConfig& cfg) {
    if (cfg.dt <= 0.0) throw AnalysisError("integration step must be positive");
    FullField field(m, cfg.eps, cfg.params);

    IntegrationResult out;
    double x = cfg.start[0], y = cfg.start[1], t = 0.0;
    out.trajectory.samples.push_back({t, x, y});
    long steps = static_cast<long>(std::ceil(cfg.t_end / cfg.dt));
    for (long i = 0; i < steps; ++i) {
        double dt = std::min(cfg.dt, cfg.t_end - t);
        rk4_step(field, x, y, dt);
        t += dt;
        if (!std::isfinite(x) || !std::isfinite(y)) {
            out.status = IntegrationStatus::NonFinite;
            break;
        }
        out.trajectory.samples.push_back({t, x, y});
        if (std::hypot(x, y) > cfg.escape_radius) {
            out.status = IntegrationStatus::Escaped;
            break;
        }
    }
    out.last = out.trajectory.samples.back();
    return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
    os << "t,x,y\n";
    char line[128];
    for (const TrajectorySample& s : t.samples) {
        std::snprintf(line, sizeof(line), "%.12g,%.12g,%.12g\n", s.t, s.x, s.y);
        os << line;
    }
}

const char* probe_verdict_name(ProbeVerdict v) {
    switch (v) {
        case ProbeVerdict::Supercritical: return "supercritical";
        case ProbeVerdict::Subcritical: return "subcritical";
        case ProbeVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

// Newton on the full field for its singular point near a seed.
struct FullFieldJets {
    FullField f;
    CompiledExpr j11, j12, j21, j22; // of F.Z
    CompiledExpr q11, q12, q21, q22; // of Q
    double eps;

    FullFieldJets(const SlowFastModel& m, double eps_, const Bindings& params)
        : f(m, eps_, params), eps(eps_) {
        std::vector<std::string> names{"x", "y"};
        names.insert(names.end(), m.parameters.begin(), m.parameters.end());
        Expr fzx = simplify(m.F * m.Z.x), fzy = simplify(m.F * m.Z.y);
        j11 = CompiledExpr(differentiate(fzx, "x"), names);
        j12 = CompiledExpr(differentiate(fzx, "y"), names);
        j21 = CompiledExpr(differentiate(fzy, "x"), names);
        j22 = CompiledExpr(differentiate(fzy, "y"), names);
        q11 = CompiledExpr(differentiate(m.Q.x, "x"), names);
        q12 = CompiledExpr(differentiate(m.Q.x, "y"), names);
        q21 = CompiledExpr(differentiate(m.Q.y, "x"), names);
        q22 = CompiledExpr(differentiate(m.Q.y, "y"), names);
    }

    void jacobian(double x, double y, double out[4]) {
        f.slots[0] = x;
        f.slots[1] = y;
        std::span<const double> s(f.slots);
        out[0] = j11.eval(s) + eps * q11.eval(s);
        out[1] = j12.eval(s) + eps * q12.eval(s);
        out[2] = j21.eval(s) + eps * q21.eval(s);
        out[3] = j22.eval(s) + eps * q22.eval(s);
    }

    bool singular_point(double& x, double& y) {
        for (int it = 0; it < 80; ++it) {
            double rx, ry, j[4];
            f(x, y, rx, ry);
            jacobian(x, y, j);
            double det = j[0] * j[3] - j[1] * j[2];
            if (!std::isfinite(det) || std::abs(det) < 1e-14) return false;
            double dx = (j[3] * rx - j[1] * ry) / det;
            double dy = (j[0] * ry - j[2] * rx) / det;
            x -= dx;
            y -= dy;
            if (!std::isfinite(x) || !std::isfinite(y)) return false;
            if (std::abs(dx) + std::abs(dy) < 1e-13) break;
        }
        double rx, ry;
        f(x, y, rx, ry);
        return std::abs(rx) + std::abs(ry) < 1e-9;
    }
};

struct ReturnAnalysis {
    enum class Kind { Cycle, Collapse, Diverged, Insufficient } kind = Kind::Insufficient;
    double limit_radius = 0.0;
    int returns = 0;
};

// Integrate from `start`, recording crossings of the half-line
// {y = yc, x > xc} and classifying the sequence of radii.
ReturnAnalysis poincare_probe(FullField& field, double xc, double yc, Point start, bool reversed,
                              const ProbeOptions& opts) {
    ReturnAnalysis out;
    double x = start[0], y = start[1];
    double px = x, py = y;
    std::vector<double> radii;
    long steps = static_cast<long>(opts.max_time_per_run / opts.dt);

    auto field_step = [&](double& ax, double& ay) {
        if (!reversed) {
            rk4_step(field, ax, ay, opts.dt);
        } else {
            auto rev = [&](double bx, double by, double& dx, double& dy) {
                field(bx, by, dx, dy);
                dx = -dx;
                dy = -dy;
            };
            rk4_step(rev, ax, ay, opts.dt);
        }
    };

    for (long i = 0; i < steps; ++i) {
        px = x;
        py = y;
        field_step(x, y);
        if (!std::isfinite(x) || !std::isfinite(y)) {
            out.kind = ReturnAnalysis::Kind::Diverged;
            return out;
        }
        if (std::hypot(x - xc, y - yc) > opts.cycle_cap) {
            out.kind = ReturnAnalysis::Kind::Diverged;
            out.returns = static_cast<int>(radii.size());
            return out;
        }
        // crossing of y = yc between the previous and current sample
        if ((py - yc) * (y - yc) < 0.0) {
            double s = (yc - py) / (y - py);
            double xi = px + s * (x - px);
            if (xi > xc) {
                radii.push_back(xi - xc);
                out.returns = static_cast<int>(radii.size());
                std::size_t n = radii.size();
                if (radii.back() < opts.collapse_radius) {
                    out.kind = ReturnAnalysis::Kind::Collapse;
                    return out;
                }
                if (n >= static_cast<std::size_t>(opts.min_returns + 1)) {
                    // gaps between successive returns must contract steadily
                    bool contracting = true;
                    std::size_t lo = n - static_cast<std::size_t>(opts.min_returns + 1);
                    for (std::size_t k = lo; k + 2 < n; ++k) {
                        double d0 = std::abs(radii[k + 1] - radii[k]);
                        double d1 = std::abs(radii[k + 2] - radii[k + 1]);
                        if (!(d1 <= opts.contraction * d0 + 1e-12)) {
                            contracting = false;
                            break;
                        }
                    }
                    double last_gap = std::abs(radii[n - 1] - radii[n - 2]);
                    if (contracting && last_gap <= 0.05 * radii.back() &&
                        radii.back() > 2.0 * opts.collapse_radius) {
                        out.kind = ReturnAnalysis::Kind::Cycle;
                        out.limit_radius = radii.back();
                        return out;
                    }
                }
            }
        }
    }
    out.kind = ReturnAnalysis::Kind::Insufficient;
    out.returns = static_cast<int>(radii.size());
    return out;
}

} // namespace

ProbeResult criticality_probe(const SlowFastModel& m, const ContactPoint& p, double eps,
                              const std::string& breaking_param, const ProbeOptions& opts) {
    if (p.params.find(breaking_param) == p.params.end())
        throw AnalysisError("breaking parameter '" + breaking_param + "' is not bound");

    double base = p.params.at(breaking_param);
    double scale = std::max(1.0, std::abs(base));

    auto trace_at = [&](double value, bool* ok) {
        Bindings params = p.params;
        params[breaking_param] = value;
        FullFieldJets jets(m, eps, params);
        double x = p.x, y = p.y;
        if (!jets.singular_point(x, y)) {
            *ok = false;
            return 0.0;
        }
        double j[4];
        jets.jacobian(x, y, j);
        *ok = true;
        return j[0] + j[3];
    };

    // Bracket the zero of the trace around the base value.
    ProbeResult pr;
    bool ok_lo = false, ok_hi = false;
    double lo = base, hi = base, t_lo = 0.0, t_hi = 0.0;
    bool bracketed = false;
    for (double step : {0.005, 0.01, 0.02, 0.05, 0.1, 0.2}) {
        lo = base - step * scale;
        hi = base + step * scale;
        t_lo = trace_at(lo, &ok_lo);
        t_hi = trace_at(hi, &ok_hi);
        if (ok_lo && ok_hi && t_lo * t_hi < 0.0) {
            bracketed = true;
            break;
        }
    }
    if (!bracketed) {
        pr.detail = "could not bracket the trace zero near the base parameter";
        return pr;
    }
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        bool ok = false;
        double t_mid = trace_at(mid, &ok);
        if (!ok) break;
        if (t_lo * t_mid <= 0.0) {
            hi = mid;
            t_hi = t_mid;
        } else {
            lo = mid;
            t_lo = t_mid;
        }
    }
    pr.hopf_param = 0.5 * (lo + hi);

    for (double offset : opts.sweep_offsets) {
        double delta = offset * scale;
        for (int side : {-1, +1}) {
            double value = pr.hopf_param + side * delta;
            bool ok = false;
            double tr = trace_at(value, &ok);
            if (!ok || std::abs(tr) < 1e-12) continue;
            bool unstable = tr > 0.0;

            Bindings params = p.params;
            params[breaking_param] = value;
            FullFieldJets jets(m, eps, params);
            double xs = p.x, ys = p.y;
            if (!jets.singular_point(xs, ys)) continue;

            double r0 = opts.start_offset * std::max(1.0, std::hypot(xs, ys));
            Point start{xs + r0, ys};

            if (unstable) {
                // forward time: a stable small cycle proves supercritical
                ReturnAnalysis fwd = poincare_probe(jets.f, xs, ys, start, false, opts);
                if (fwd.kind == ReturnAnalysis::Kind::Cycle) {
                    pr.verdict = ProbeVerdict::Supercritical;
                    pr.offset_used = side * delta;
                    char d[160];
                    std::snprintf(d, sizeof(d),
                                  "stable cycle of radius %.4g at %s = %.6g (unstable focus side)",
                                  fwd.limit_radius, breaking_param.c_str(), value);
                    pr.detail = d;
                    return pr;
                }
            } else {
                // reversed time: an attracting cycle here is the unstable
                // small cycle around the stable focus -> subcritical
                ReturnAnalysis rev = poincare_probe(jets.f, xs, ys, start, true, opts);
                if (rev.kind == ReturnAnalysis::Kind::Cycle) {
                    pr.verdict = ProbeVerdict::Subcritical;
                    pr.offset_used = side * delta;
                    char d[160];
                    std::snprintf(d, sizeof(d),
                                  "unstable cycle of radius %.4g at %s = %.6g (stable focus side)",
                                  rev.limit_radius, breaking_param.c_str(), value);
                    pr.detail = d;
                    return pr;
                }
            }
        }
    }
    pr.detail = "no conclusive small cycle on either side of the Hopf value";
    return pr;
}

} // namespace canard
