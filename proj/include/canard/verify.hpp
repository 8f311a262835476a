#ifndef CANARD_VERIFY_HPP
#define CANARD_VERIFY_HPP

#include "canard/classify.hpp"

namespace canard {

/// One executed invariance check. `deviation` is the maximum mixed
/// absolute/relative deviation over the samples: |a-b| / max(1, |a|, |b|).
struct VerificationCheck {
    std::string name;
    int samples = 0;
    double max_deviation = 0.0;
    bool pass = false;
    std::string detail;
};

struct VerificationReport {
    std::vector<VerificationCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Everything the invariance checks need to run against a model: concrete
/// parameter values, a Newton seed for the contact point, and an RNG seed so
/// reports are reproducible.
struct VerifyContext {
    SlowFastModel model;
    Bindings params;
    Point guess{0.0, 0.0};
    Tolerances tol;
    double check_tolerance = 1e-8;
    std::uint64_t seed = 42;
};

/// Points of the critical curve near the contact point, found by 1-D Newton
/// on F along one coordinate from random seeds; every point satisfies
/// |F| <= tol.residual.
std::vector<Point> sample_critical_curve(const VerifyContext& ctx, int count);

/// (c F, Z/c, Q) leaves A at p and G on the critical curve unchanged.
VerificationCheck verify_factorization_invariance(const VerifyContext& ctx, const Expr& c);

/// Q -> Q + c Z leaves G on the critical curve and the classification
/// unchanged.
VerificationCheck verify_Q_shift_invariance(const VerifyContext& ctx, const Expr& c);

/// G restricted to the critical curve is the same under `metric` and the
/// identity metric. The metric must be admissible at every sample point.
VerificationCheck verify_metric_independence(const VerifyContext& ctx, const Metric& metric);

/// V -> V + F U leaves V(G)(p) and V^2(G)(p) unchanged.
VerificationCheck verify_V_extension_invariance(const VerifyContext& ctx, const VectorField& u);

/// Exact normal form F = y - x^2/2, Z = d/dx, Q = (0, g1 x + g2 x^2):
/// asserts G(0) = 0, V(G)(0) = g1, V^2(G)(0) = -2 g2 and sigma = -g2.
VerificationCheck verify_normalform_oracle(double g1, double g2, double tolerance = 1e-9);

/// The full randomized suite: `perturbations` seeded random instances of
/// each invariance check (at least 3), plus normal-form oracle spot checks.
VerificationReport run_verify_suite(const VerifyContext& ctx, int perturbations = 3);

} // namespace canard

#endif
