#include "canard/classify.hpp"

#include <cmath>

namespace canard {

const char* point_kind_name(PointKind k) {
    switch (k) {
        case PointKind::NormallyHyperbolic: return "normally_hyperbolic";
        case PointKind::Jump: return "jump";
        case PointKind::SlowFastHopf: return "slow_fast_hopf";
        case PointKind::SingularSaddle: return "singular_saddle";
        case PointKind::BogdanovTakens: return "bogdanov_takens";
        case PointKind::Indeterminate: return "indeterminate";
    }
    return "?";
}

const char* subkind_name(const Classification& c) {
    if (c.hyperbolicity)
        return *c.hyperbolicity == Hyperbolicity::Attracting ? "attracting" : "repelling";
    if (c.criticality) {
        switch (*c.criticality) {
            case Criticality::Supercritical: return "supercritical";
            case Criticality::Subcritical: return "subcritical";
            case Criticality::Degenerate: return "degenerate";
        }
    }
    if (c.bt_hopf_sign) return *c.bt_hopf_sign < 0 ? "hopf_negative" : "hopf_positive";
    return "";
}

bool same_verdict(const Classification& a, const Classification& b) {
    return a.kind == b.kind && a.hyperbolicity == b.hyperbolicity &&
           a.criticality == b.criticality && a.bt_hopf_sign == b.bt_hopf_sign;
}

Classification classify_point(const SlowFastModel& m, Point q, const Bindings& params,
                              const Tolerances& tol) {
    const double tau = tol.degenerate;
    Bindings at = point_bindings(m, q[0], q[1], params);

    Classification c;
    double f = evaluate(m.F, at);
    c.evidence["F"] = f;
    if (std::abs(f) > tol.residual)
        throw AnalysisError("point is not on the critical curve: |F| = " + std::to_string(std::abs(f)));

    Expr zf_expr = lie_derivative(m.Z, m.F);
    double zf = evaluate(zf_expr, at);
    c.evidence["ZF"] = zf;
    if (std::abs(zf) > tau) {
        c.kind = PointKind::NormallyHyperbolic;
        c.hyperbolicity = zf < 0 ? Hyperbolicity::Attracting : Hyperbolicity::Repelling;
        return c;
    }

    AssumptionReport ar = check_assumptions(m, q, params, tol);
    c.evidence["Z2F"] = ar.Z2F;
    if (!ar.a1_ok || !ar.a2_ok)
        throw AssumptionViolationError("A1/A2 fail at the contact point");
    if (!ar.a3_ok)
        throw DegenerateContactError("contact point is degenerate (A3): |Z^2F| = " +
                                     std::to_string(std::abs(ar.Z2F)));

    ContactPoint p;
    p.x = q[0];
    p.y = q[1];
    for (const std::string& name : m.parameters) p.params[name] = params.at(name);
    p.diag.F = f;
    p.diag.ZF = zf;
    p.diag.Z2F = ar.Z2F;
    InvariantSet inv = compute_derived(m, p, tol);

    double qf = evaluate(lie_derivative(m.Q, m.F), at);
    double bracket = evaluate(lie_derivative(lie_bracket(m.Z, m.Q), m.F), at);
    c.evidence["QF"] = qf;
    c.evidence["bracketF"] = bracket;
    c.evidence["G"] = inv.G_at_p;
    c.evidence["VG"] = inv.VG_at_p;
    c.evidence["V2G"] = inv.V2G_at_p;
    c.evidence["sigma"] = inv.sigma;
    c.evidence["A"] = inv.A;

    if (std::abs(inv.G_at_p) > tau) {
        c.kind = PointKind::Jump;
        return c;
    }
    if (inv.VG_at_p < -tau) {
        c.kind = PointKind::SlowFastHopf;
        if (inv.sigma < -tau)
            c.criticality = Criticality::Supercritical;
        else if (inv.sigma > tau)
            c.criticality = Criticality::Subcritical;
        else
            c.criticality = Criticality::Degenerate; // Bautin
        return c;
    }
    if (inv.VG_at_p > tau) {
        c.kind = PointKind::SingularSaddle;
        return c;
    }
    if (std::abs(inv.V2G_at_p) > tau) {
        c.kind = PointKind::BogdanovTakens;
        c.bt_hopf_sign = inv.V2G_at_p < 0 ? -1 : 1;
        return c;
    }
    c.kind = PointKind::Indeterminate;
    return c;
}

namespace {

// Singular values of a 1xN or 2xN matrix via the eigenvalues of J J^T.
std::vector<double> singular_values(const std::vector<std::vector<double>>& j) {
    if (j.empty() || j[0].empty()) return {};
    auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };
    if (j.size() == 1) return {std::sqrt(dot(j[0], j[0]))};
    double a = dot(j[0], j[0]), b = dot(j[0], j[1]), d = dot(j[1], j[1]);
    double mean = 0.5 * (a + d);
    double disc = std::sqrt(std::max(0.0, mean * mean - (a * d - b * b)));
    double l1 = std::max(0.0, mean + disc), l2 = std::max(0.0, mean - disc);
    return {std::sqrt(l1), std::sqrt(l2)};
}

} // namespace

TransversalityReport transversality(const SlowFastModel& m, const ContactPoint& p,
                                    TransversalityMode mode, const Tolerances& tol) {
    const std::size_t n = m.parameters.size();
    const std::size_t rows = mode == TransversalityMode::Hopf ? 1 : 2;

    TransversalityReport r;
    r.jacobian.assign(rows, std::vector<double>(n, 0.0));
    if (n == 0) return r;

    Expr g = compute_G_flat(m);
    Expr vg = lie_derivative(compute_V(m), g);

    auto values_at = [&](const Bindings& params) {
        ContactPoint moved = track_contact_point(m, p, params, tol);
        Bindings at = point_bindings(m, moved.x, moved.y, params);
        std::array<double, 2> v{evaluate(g, at), 0.0};
        if (rows == 2) v[1] = evaluate(vg, at);
        return v;
    };

    for (std::size_t i = 0; i < n; ++i) {
        const std::string& name = m.parameters[i];
        double base = p.params.at(name);
        double h = 1e-6 * std::max(1.0, std::abs(base));
        Bindings up = p.params, down = p.params;
        up[name] = base + h;
        down[name] = base - h;
        auto vu = values_at(up);
        auto vd = values_at(down);
        for (std::size_t row = 0; row < rows; ++row)
            r.jacobian[row][i] = (vu[row] - vd[row]) / (2 * h);
    }

    r.singular_values = singular_values(r.jacobian);
    double smax = r.singular_values.empty() ? 0.0 : r.singular_values[0];
    for (double s : r.singular_values)
        if (s > 1e-6 * smax) ++r.rank;
    return r;
}

bool classify_crosscheck(const SlowFastModel& m, Point q, const Bindings& params,
                         const Tolerances& tol) {
    const double tau = tol.degenerate;
    Bindings at = point_bindings(m, q[0], q[1], params);
    double bracket = evaluate(lie_derivative(lie_bracket(m.Z, m.Q), m.F), at);

    ContactPoint p;
    p.x = q[0];
    p.y = q[1];
    for (const std::string& name : m.parameters) p.params[name] = params.at(name);
    InvariantSet inv = compute_derived(m, p, tol);

    int by_bracket = bracket < -tau ? -1 : (bracket > tau ? 1 : 0);
    int by_vg = inv.VG_at_p < -tau ? -1 : (inv.VG_at_p > tau ? 1 : 0);
    return by_bracket == by_vg;
}

} // namespace canard
