#ifndef CANARD_GEOM_HPP
#define CANARD_GEOM_HPP

#include "canard/expr.hpp"

namespace canard {

/// Planar vector field with symbolic components in the chart (x, y).
struct VectorField {
    Expr x;
    Expr y;
};

/// Raised when a metric is symbolically degenerate or fails positivity at an
/// evaluation point.
class MetricError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Coefficients of the first fundamental form. `Fm` is the off-diagonal
/// coefficient (named to avoid the scalar F of the slow-fast triplet).
struct Metric {
    Expr E = Expr::integer(1);
    Expr Fm = Expr::integer(0);
    Expr G = Expr::integer(1);

    static Metric identity() { return Metric{}; }
    bool is_identity() const;

    /// det of the fundamental form, E*G - Fm^2, simplified.
    Expr determinant() const;

    /// Positivity check at a concrete point: E > 0 and det > 0.
    bool admissible_at(const Bindings& b) const;
};

/// Lie derivative V(f) = vx df/dx + vy df/dy, simplified.
Expr lie_derivative(const VectorField& v, const Expr& f);

/// Lie bracket [V, W], computed componentwise as (V(Wx)-W(Vx), V(Wy)-W(Vy)).
VectorField lie_bracket(const VectorField& v, const VectorField& w);

/// Gradient with respect to a metric: M^{-1} (df/dx, df/dy) with
/// M = [[E, Fm], [Fm, G]]. Throws MetricError if det(M) is identically zero.
VectorField gradient(const Expr& f, const Metric& m);

/// Area form sqrt(E*G - Fm^2) * (ax*by - ay*bx); the plain determinant for
/// the identity metric.
Expr area_form(const VectorField& a, const VectorField& b, const Metric& m);

} // namespace canard

#endif
