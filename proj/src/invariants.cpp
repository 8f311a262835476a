#include "canard/invariants.hpp"

#include <cmath>

namespace canard {

double compute_A(const SlowFastModel& m, double x, double y, const Bindings& params,
                 const Tolerances& tol) {
    Expr zf = lie_derivative(m.Z, m.F);
    Expr z2f = lie_derivative(m.Z, zf);
    Expr z3f = lie_derivative(m.Z, z2f);
    Bindings at = point_bindings(m, x, y, params);
    double d = evaluate(z2f, at);
    if (std::abs(d) <= tol.degenerate)
        throw DegenerateContactError("A undefined: |Z^2F| below the degeneracy threshold");
    return evaluate(z3f, at) / (d * d);
}

double compute_A(const SlowFastModel& m, const ContactPoint& p, const Tolerances& tol) {
    return compute_A(m, p.x, p.y, p.params, tol);
}

Expr compute_G(const SlowFastModel& m) {
    Expr zf = lie_derivative(m.Z, m.F);
    Expr first = area_form(m.Q, m.Z, m.metric);
    Expr second = area_form(gradient(m.F, m.metric), gradient(zf, m.metric), m.metric);
    return simplify(first * second);
}

Expr compute_G_flat(const SlowFastModel& m) {
    SlowFastModel flat = m;
    flat.metric = Metric::identity();
    return compute_G(flat);
}

VectorField compute_V(const SlowFastModel& m) {
    Expr zf = lie_derivative(m.Z, m.F);
    VectorField w{simplify(-differentiate(m.F, "y")), differentiate(m.F, "x")};
    Expr den = lie_derivative(w, zf);
    if (is_effectively_zero(den))
        throw AnalysisError("normalizing field undefined: (grad F)^perp(ZF) vanishes identically");
    return {simplify(w.x / den), simplify(w.y / den)};
}

VectorField slow_vector_field(const SlowFastModel& m) {
    Expr zf = lie_derivative(m.Z, m.F);
    if (is_effectively_zero(zf))
        throw AnalysisError("slow vector field undefined: Z(F) vanishes identically");
    Expr qf = lie_derivative(m.Q, m.F);
    Expr ratio = simplify(qf / zf);
    return {simplify(m.Q.x - ratio * m.Z.x), simplify(m.Q.y - ratio * m.Z.y)};
}

std::pair<double, double> derivatives_of_G_along(const SlowFastModel& m, const VectorField& v,
                                                 double x, double y, const Bindings& params) {
    Expr g = compute_G_flat(m);
    Expr vg = lie_derivative(v, g);
    Expr v2g = lie_derivative(v, vg);
    Bindings at = point_bindings(m, x, y, params);
    return {evaluate(vg, at), evaluate(v2g, at)};
}

InvariantSet compute_derived(const SlowFastModel& m, const ContactPoint& p,
                             const Tolerances& tol) {
    InvariantSet inv;
    inv.G_expr = compute_G_flat(m);
    inv.V = compute_V(m);

    // The denominator of V is the flat area form of (grad F, grad ZF); it
    // must stay away from zero at an accepted contact point.
    Expr zf = lie_derivative(m.Z, m.F);
    VectorField w{simplify(-differentiate(m.F, "y")), differentiate(m.F, "x")};
    Bindings at = point_bindings(m, p.x, p.y, p.params);
    double den = evaluate(lie_derivative(w, zf), at);
    if (std::abs(den) <= tol.degenerate)
        throw AnalysisError("grad F and grad ZF are parallel at the contact point");

    Expr vg = lie_derivative(inv.V, inv.G_expr);
    Expr v2g = lie_derivative(inv.V, vg);
    inv.G_at_p = evaluate(inv.G_expr, at);
    inv.VG_at_p = evaluate(vg, at);
    inv.V2G_at_p = evaluate(v2g, at);
    inv.A = compute_A(m, p, tol);
    inv.sigma = 0.5 * inv.V2G_at_p - inv.VG_at_p * inv.A;
    inv.Qtilde = slow_vector_field(m);
    return inv;
}

} // namespace canard
