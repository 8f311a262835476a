#include "canard/model.hpp"

#include <cmath>

namespace canard {

Bindings point_bindings(const SlowFastModel& m, double x, double y, const Bindings& params) {
    Bindings b;
    for (const std::string& p : m.parameters) {
        auto it = params.find(p);
        if (it == params.end()) throw UnboundSymbolError(p);
        b[p] = it->second;
    }
    b["x"] = x;
    b["y"] = y;
    return b;
}

AssumptionReport check_assumptions(const SlowFastModel& m, Point p, const Bindings& params,
                                   const Tolerances& tol) {
    Expr zf = lie_derivative(m.Z, m.F);
    Expr z2f = lie_derivative(m.Z, zf);
    Bindings at = point_bindings(m, p[0], p[1], params);

    AssumptionReport r;
    r.F = evaluate(m.F, at);
    r.ZF = evaluate(zf, at);
    r.Z2F = evaluate(z2f, at);
    r.grad_norm = std::hypot(evaluate(differentiate(m.F, "x"), at),
                             evaluate(differentiate(m.F, "y"), at));
    r.z_norm = std::hypot(evaluate(m.Z.x, at), evaluate(m.Z.y, at));
    r.a1_ok = r.grad_norm > tol.degenerate;
    r.a2_ok = r.z_norm > tol.degenerate;
    r.a3_ok = std::abs(r.Z2F) > tol.degenerate;
    return r;
}

namespace {

std::vector<std::string> slot_names(const SlowFastModel& m) {
    std::vector<std::string> slots{"x", "y"};
    slots.insert(slots.end(), m.parameters.begin(), m.parameters.end());
    return slots;
}

std::vector<double> slot_values(const SlowFastModel& m, double x, double y,
                                const Bindings& params) {
    std::vector<double> v{x, y};
    for (const std::string& p : m.parameters) {
        auto it = params.find(p);
        if (it == params.end()) throw UnboundSymbolError(p);
        v.push_back(it->second);
    }
    return v;
}

} // namespace

ContactPoint find_contact_point(const SlowFastModel& m, Point guess, const Bindings& params,
                                const Tolerances& tol) {
    Expr zf = lie_derivative(m.Z, m.F);
    Expr z2f = lie_derivative(m.Z, zf);
    Expr z3f = lie_derivative(m.Z, z2f);
    Expr fx = differentiate(m.F, "x"), fy = differentiate(m.F, "y");
    Expr zfx = differentiate(zf, "x"), zfy = differentiate(zf, "y");

    std::vector<std::string> slots = slot_names(m);
    CompiledExpr cF(m.F, slots), cZF(zf, slots);
    CompiledExpr cFx(fx, slots), cFy(fy, slots), cZFx(zfx, slots), cZFy(zfy, slots);

    std::vector<double> v = slot_values(m, guess[0], guess[1], params);
    bool converged = false;
    for (int it = 0; it < tol.max_iterations; ++it) {
        double r0 = cF.eval(v), r1 = cZF.eval(v);
        double a = cFx.eval(v), b = cFy.eval(v);
        double c = cZFx.eval(v), d = cZFy.eval(v);
        double det = a * d - b * c;
        if (!std::isfinite(det) || det == 0.0)
            throw NoConvergenceError("contact-point Newton hit a singular Jacobian");
        double dx = (d * r0 - b * r1) / det;
        double dy = (a * r1 - c * r0) / det;
        v[0] -= dx;
        v[1] -= dy;
        if (!std::isfinite(v[0]) || !std::isfinite(v[1]) || std::abs(dx) + std::abs(dy) > 1e6)
            throw NoConvergenceError("contact-point Newton step exploded");
        if (std::abs(dx) <= tol.newton_step && std::abs(dy) <= tol.newton_step) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NoConvergenceError("contact-point Newton did not converge within " +
                                 std::to_string(tol.max_iterations) + " iterations");

    ContactPoint p;
    p.x = v[0];
    p.y = v[1];
    for (const std::string& name : m.parameters) p.params[name] = params.at(name);
    p.diag.F = cF.eval(v);
    p.diag.ZF = cZF.eval(v);
    if (std::abs(p.diag.F) > tol.residual || std::abs(p.diag.ZF) > tol.residual)
        throw NoConvergenceError("contact-point residuals above tolerance");

    Bindings at = point_bindings(m, p.x, p.y, params);
    p.diag.Z2F = evaluate(z2f, at);
    p.diag.Z3F = evaluate(z3f, at);
    p.diag.grad_norm = std::hypot(cFx.eval(v), cFy.eval(v));
    p.diag.z_norm = std::hypot(evaluate(m.Z.x, at), evaluate(m.Z.y, at));

    if (p.diag.grad_norm <= tol.degenerate)
        throw AssumptionViolationError("critical curve is not regular at the contact point (A1)");
    if (p.diag.z_norm <= tol.degenerate)
        throw AssumptionViolationError("fast direction Z vanishes at the contact point (A2)");
    if (std::abs(p.diag.Z2F) <= tol.degenerate)
        throw DegenerateContactError("contact point is degenerate: |Z^2F| = " +
                                     std::to_string(std::abs(p.diag.Z2F)));
    return p;
}

ContactPoint track_contact_point(const SlowFastModel& m, const ContactPoint& base,
                                 const Bindings& new_params, const Tolerances& tol) {
    return find_contact_point(m, {base.x, base.y}, new_params, tol);
}

} // namespace canard
