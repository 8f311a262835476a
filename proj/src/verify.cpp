#include "canard/verify.hpp"

#include <cmath>
#include <random>

namespace canard {

namespace {

double deviation(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

VerificationCheck make_check(std::string name, int samples, double max_dev, double tolerance,
                             std::string detail = "") {
    VerificationCheck c;
    c.name = std::move(name);
    c.samples = samples;
    c.max_deviation = max_dev;
    c.pass = max_dev <= tolerance;
    c.detail = std::move(detail);
    return c;
}

// 1-D Newton on t -> f(t) with compiled partials on the full binding map.
bool solve_1d(const Expr& f, const Expr& df, Bindings& at, const std::string& var,
              double residual_tol) {
    for (int it = 0; it < 30; ++it) {
        double r = evaluate(f, at);
        double d = evaluate(df, at);
        if (!std::isfinite(r) || !std::isfinite(d) || std::abs(d) < 1e-12) return false;
        at[var] -= r / d;
        if (!std::isfinite(at[var]) || std::abs(at[var]) > 1e6) return false;
        if (std::abs(r / d) < 1e-13) break;
    }
    return std::abs(evaluate(f, at)) <= residual_tol;
}

} // namespace

std::vector<Point> sample_critical_curve(const VerifyContext& ctx, int count) {
    const SlowFastModel& m = ctx.model;
    ContactPoint p = find_contact_point(m, ctx.guess, ctx.params, ctx.tol);
    Expr fy = differentiate(m.F, "y");
    Expr fx = differentiate(m.F, "x");

    std::mt19937_64 rng(ctx.seed);
    std::uniform_real_distribution<double> off(-0.75, 0.75);
    std::uniform_real_distribution<double> jitter(-0.3, 0.3);

    std::vector<Point> out;
    for (int attempt = 0; attempt < 200 && static_cast<int>(out.size()) < count; ++attempt) {
        Bindings at = point_bindings(m, p.x + off(rng), p.y + jitter(rng), ctx.params);
        // solve F = 0 for y at fixed x; fall back to solving for x
        bool ok = solve_1d(m.F, fy, at, "y", ctx.tol.residual) &&
                  std::abs(at["y"] - p.y) <= 2.5;
        if (!ok) {
            at = point_bindings(m, p.x + jitter(rng), p.y + off(rng), ctx.params);
            ok = solve_1d(m.F, fx, at, "x", ctx.tol.residual) && std::abs(at["x"] - p.x) <= 2.5;
        }
        if (ok) out.push_back({at["x"], at["y"]});
    }
    if (static_cast<int>(out.size()) < count)
        throw AnalysisError("could not sample enough points of the critical curve");
    return out;
}

VerificationCheck verify_factorization_invariance(const VerifyContext& ctx, const Expr& c) {
    const SlowFastModel& m = ctx.model;
    SlowFastModel scaled = m;
    scaled.F = simplify(c * m.F);
    scaled.Z = {simplify(m.Z.x / c), simplify(m.Z.y / c)};

    ContactPoint p = find_contact_point(m, ctx.guess, ctx.params, ctx.tol);
    ContactPoint p2 = find_contact_point(scaled, ctx.guess, ctx.params, ctx.tol);

    double dev = deviation(compute_A(m, p, ctx.tol), compute_A(scaled, p2, ctx.tol));

    Expr g = compute_G_flat(m);
    Expr g2 = compute_G_flat(scaled);
    std::vector<Point> pts = sample_critical_curve(ctx, 8);
    for (const Point& q : pts) {
        Bindings at = point_bindings(m, q[0], q[1], ctx.params);
        if (std::abs(evaluate(c, at)) <= 1e-6)
            throw AnalysisError("factorization scalar vanishes at a sample point");
        dev = std::max(dev, deviation(evaluate(g, at), evaluate(g2, at)));
    }
    return make_check("factorization-invariance", 1 + static_cast<int>(pts.size()), dev,
                      ctx.check_tolerance, "c = " + simplify(c).str());
}

VerificationCheck verify_Q_shift_invariance(const VerifyContext& ctx, const Expr& c) {
    const SlowFastModel& m = ctx.model;
    SlowFastModel shifted = m;
    shifted.Q = {simplify(m.Q.x + c * m.Z.x), simplify(m.Q.y + c * m.Z.y)};

    Expr g = compute_G_flat(m);
    Expr g2 = compute_G_flat(shifted);
    double dev = 0.0;
    std::vector<Point> pts = sample_critical_curve(ctx, 8);
    for (const Point& q : pts) {
        Bindings at = point_bindings(m, q[0], q[1], ctx.params);
        dev = std::max(dev, deviation(evaluate(g, at), evaluate(g2, at)));
    }

    ContactPoint p = find_contact_point(m, ctx.guess, ctx.params, ctx.tol);
    Classification before = classify_point(m, {p.x, p.y}, ctx.params, ctx.tol);
    Classification after = classify_point(shifted, {p.x, p.y}, ctx.params, ctx.tol);
    bool verdicts_match = same_verdict(before, after);
    if (!verdicts_match) dev = std::max(dev, 1.0);

    return make_check("q-shift-invariance", static_cast<int>(pts.size()) + 1, dev,
                      ctx.check_tolerance,
                      std::string("classification ") +
                          (verdicts_match ? "unchanged" : "CHANGED") + ", c = " +
                          simplify(c).str());
}

VerificationCheck verify_metric_independence(const VerifyContext& ctx, const Metric& metric) {
    const SlowFastModel& m = ctx.model;
    SlowFastModel with_metric = m;
    with_metric.metric = metric;

    Expr g_flat = compute_G_flat(m);
    Expr g_metric = compute_G(with_metric);

    double dev = 0.0;
    std::vector<Point> pts = sample_critical_curve(ctx, 8);
    for (const Point& q : pts) {
        Bindings at = point_bindings(m, q[0], q[1], ctx.params);
        if (!metric.admissible_at(at))
            throw MetricError("metric not admissible at a sample point");
        dev = std::max(dev, deviation(evaluate(g_flat, at), evaluate(g_metric, at)));
    }
    return make_check("metric-independence", static_cast<int>(pts.size()), dev,
                      ctx.check_tolerance);
}

VerificationCheck verify_V_extension_invariance(const VerifyContext& ctx, const VectorField& u) {
    const SlowFastModel& m = ctx.model;
    ContactPoint p = find_contact_point(m, ctx.guess, ctx.params, ctx.tol);
    InvariantSet inv = compute_derived(m, p, ctx.tol);

    VectorField extended{simplify(inv.V.x + m.F * u.x), simplify(inv.V.y + m.F * u.y)};
    auto [vg, v2g] = derivatives_of_G_along(m, extended, p.x, p.y, p.params);
    double dev = std::max(deviation(vg, inv.VG_at_p), deviation(v2g, inv.V2G_at_p));
    return make_check("v-extension-invariance", 2, dev, ctx.check_tolerance);
}

VerificationCheck verify_normalform_oracle(double g1, double g2, double tolerance) {
    SymbolSet s{{"x", "y"}, {"g1", "g2"}};
    SlowFastModel m;
    m.F = parse_expression("y - x^2/2", s);
    m.Z = {parse_expression("1", s), parse_expression("0", s)};
    m.Q = {parse_expression("0", s), parse_expression("g1*x + g2*x^2", s)};
    m.parameters = {"g1", "g2"};

    ContactPoint p;
    p.x = 0.0;
    p.y = 0.0;
    p.params = {{"g1", g1}, {"g2", g2}};
    InvariantSet inv = compute_derived(m, p);

    double dev = std::max({std::abs(inv.G_at_p), std::abs(inv.VG_at_p - g1),
                           std::abs(inv.V2G_at_p - (-2.0 * g2)), std::abs(inv.sigma - (-g2))});
    char detail[128];
    std::snprintf(detail, sizeof(detail), "g1=%g g2=%g VG=%g V2G=%g sigma=%g", g1, g2,
                  inv.VG_at_p, inv.V2G_at_p, inv.sigma);
    return make_check("normal-form-oracle", 4, dev, tolerance, detail);
}

VerificationReport run_verify_suite(const VerifyContext& ctx, int perturbations) {
    perturbations = std::max(perturbations, 3);
    std::mt19937_64 rng(ctx.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> small(-0.3, 0.3);

    ContactPoint p = find_contact_point(ctx.model, ctx.guess, ctx.params, ctx.tol);
    Expr x = Expr::variable("x"), y = Expr::variable("y");
    Expr dx = x - Expr::real(p.x), dy = y - Expr::real(p.y);

    VerificationReport report;
    auto add = [&](VerificationCheck c, int index) {
        c.name += "[" + std::to_string(index) + "]";
        report.checks.push_back(std::move(c));
    };

    for (int i = 0; i < perturbations; ++i) {
        // positive on the sampling box: constant in [1.5, 2.5], small slopes,
        // plus a nonnegative quadratic bump
        Expr c = Expr::real(1.5 + unit(rng)) + Expr::real(small(rng)) * dx +
                 Expr::real(small(rng)) * dy + Expr::real(0.25 * unit(rng)) * dx.pow(2);
        add(verify_factorization_invariance(ctx, simplify(c)), i);
    }
    for (int i = 0; i < perturbations; ++i) {
        Expr c = Expr::real(2.0 * small(rng)) + Expr::real(small(rng)) * x +
                 Expr::real(small(rng)) * y + Expr::real(small(rng)) * x * y;
        add(verify_Q_shift_invariance(ctx, simplify(c)), i);
    }
    for (int i = 0; i < perturbations; ++i) {
        Metric metric;
        if (i == 0) {
            metric = {Expr::integer(2), Expr::integer(1), Expr::integer(3)};
        } else {
            // spatially varying, admissible near the contact point
            metric = {simplify(Expr::real(1.0 + unit(rng)) + dx.pow(2)),
                      simplify(Expr::real(0.4 * small(rng)) * dx * dy),
                      simplify(Expr::real(1.0 + unit(rng)) + dy.pow(2))};
        }
        add(verify_metric_independence(ctx, metric), i);
    }
    for (int i = 0; i < perturbations; ++i) {
        VectorField u{Expr::real(small(rng)) + Expr::real(small(rng)) * x +
                          Expr::real(small(rng)) * y,
                      Expr::real(small(rng)) + Expr::real(small(rng)) * x * y};
        add(verify_V_extension_invariance(ctx, u), i);
    }
    add(verify_normalform_oracle(-1.0, 1.0), 0);
    add(verify_normalform_oracle(-1.0, -1.0), 1);
    add(verify_normalform_oracle(-0.1 - unit(rng), 2.0 * small(rng) + 0.5), 2);
    return report;
}

} // namespace canard
