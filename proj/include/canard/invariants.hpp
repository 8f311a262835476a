#ifndef CANARD_INVARIANTS_HPP
#define CANARD_INVARIANTS_HPP

#include "canard/model.hpp"

namespace canard {

/// The intrinsic quantities attached to a generic contact point p:
///   A    = Z^3F / (Z^2F)^2 at p              (fast skewness)
///   G    = Omega(Q,Z) * Omega(grad F, grad ZF), read on the critical curve
///   V    = the normalizing field with V(F) = 0, V(ZF) = 1
///   sigma = 1/2 V^2(G)(p) - V(G)(p) * A      (criticality quantity)
struct InvariantSet {
    double A = 0.0;
    Expr G_expr;
    double G_at_p = 0.0;
    double VG_at_p = 0.0;
    double V2G_at_p = 0.0;
    double sigma = 0.0;
    VectorField V;
    VectorField Qtilde;
};

/// Fast skewness A at a point satisfying A1-A3.
double compute_A(const SlowFastModel& m, double x, double y, const Bindings& params,
                 const Tolerances& tol = {});
double compute_A(const SlowFastModel& m, const ContactPoint& p, const Tolerances& tol = {});

/// The chart function G built with the model's metric. Only its restriction
/// to {F = 0} is meaningful.
Expr compute_G(const SlowFastModel& m);

/// G built with the identity metric. As a chart function this equals
/// compute_G wherever the metric is admissible (the density factors cancel
/// against det M exactly), and it is the form used for reports and for the
/// derived quantities.
Expr compute_G_flat(const SlowFastModel& m);

/// The normalizing field V = W / W(ZF) with W = (-dF/dy, dF/dx).
/// By construction V(F) == 0 and V(ZF) == 1 identically.
VectorField compute_V(const SlowFastModel& m);

/// Full invariant set at a contact point: G, V, V(G), V^2(G), A, sigma and
/// the slow vector field.
InvariantSet compute_derived(const SlowFastModel& m, const ContactPoint& p,
                             const Tolerances& tol = {});

/// The slow vector field Qtilde = Q - (Q(F)/Z(F)) Z; tangent to the critical
/// curve: Qtilde(F) == 0. Requires Z(F) not identically zero.
VectorField slow_vector_field(const SlowFastModel& m);

/// V(G)(p) and V^2(G)(p) computed with a caller-supplied V; used by the
/// extension-invariance checks.
std::pair<double, double> derivatives_of_G_along(const SlowFastModel& m, const VectorField& v,
                                                 double x, double y, const Bindings& params);

} // namespace canard

#endif
