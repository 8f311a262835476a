#include "canard/geom.hpp"

namespace canard {

bool Metric::is_identity() const {
    return simplify(E).is_one_literal() && simplify(Fm).is_zero_literal() &&
           simplify(G).is_one_literal();
}

Expr Metric::determinant() const { return simplify(E * G - Fm.pow(2)); }

bool Metric::admissible_at(const Bindings& b) const {
    return evaluate(E, b) > 0.0 && evaluate(determinant(), b) > 0.0;
}

Expr lie_derivative(const VectorField& v, const Expr& f) {
    return simplify(v.x * differentiate(f, "x") + v.y * differentiate(f, "y"));
}

VectorField lie_bracket(const VectorField& v, const VectorField& w) {
    return {simplify(lie_derivative(v, w.x) - lie_derivative(w, v.x)),
            simplify(lie_derivative(v, w.y) - lie_derivative(w, v.y))};
}

VectorField gradient(const Expr& f, const Metric& m) {
    Expr fx = differentiate(f, "x");
    Expr fy = differentiate(f, "y");
    if (m.is_identity()) return {fx, fy};
    Expr det = m.determinant();
    if (is_effectively_zero(det)) throw MetricError("metric is symbolically degenerate");
    return {simplify((m.G * fx - m.Fm * fy) / det), simplify((m.E * fy - m.Fm * fx) / det)};
}

Expr area_form(const VectorField& a, const VectorField& b, const Metric& m) {
    Expr det = a.x * b.y - a.y * b.x;
    if (m.is_identity()) return simplify(det);
    return simplify(Expr::call(FuncKind::Sqrt, simplify(m.determinant())) * det);
}

} // namespace canard
