#ifndef CANARD_CLASSIFY_HPP
#define CANARD_CLASSIFY_HPP

#include <map>
#include <optional>

#include "canard/invariants.hpp"

namespace canard {

enum class PointKind {
    NormallyHyperbolic,
    Jump,
    SlowFastHopf,
    SingularSaddle,
    BogdanovTakens,
    Indeterminate,
};

enum class Hyperbolicity { Attracting, Repelling };

enum class Criticality { Supercritical, Subcritical, Degenerate };

const char* point_kind_name(PointKind k);
const char* subkind_name(const struct Classification& c);

/// Outcome of the decision tree at a point of the critical curve, together
/// with the numeric values that drove it.
struct Classification {
    PointKind kind = PointKind::Indeterminate;
    std::optional<Hyperbolicity> hyperbolicity; // NormallyHyperbolic
    std::optional<Criticality> criticality;     // SlowFastHopf
    std::optional<int> bt_hopf_sign;            // BogdanovTakens: sign of V^2(G)(p)
    std::map<std::string, double> evidence;
};

bool same_verdict(const Classification& a, const Classification& b);

/// Decision tree with dead zone tau = tol.degenerate on every tested value:
///   |ZF| > tau                 -> normally hyperbolic (attracting/repelling)
///   |G(p)| > tau               -> jump point
///   V(G)(p) < -tau             -> slow-fast Hopf; criticality from sigma
///   V(G)(p) > tau              -> singular saddle
///   |V(G)| <= tau, |V2G| > tau -> Bogdanov-Takens
///   otherwise                  -> indeterminate
/// The point must lie on the critical curve (|F| <= tol.residual).
Classification classify_point(const SlowFastModel& m, Point q, const Bindings& params,
                              const Tolerances& tol = {});

enum class TransversalityMode { Hopf, BogdanovTakens };

/// Finite-difference Jacobian of lambda -> G(p_lambda) (one row) or
/// lambda -> (G(p_lambda), V(G)(p_lambda)) (two rows), with the contact
/// point re-solved at every stencil node. Rank uses singular values with
/// threshold 1e-6 * sigma_max.
struct TransversalityReport {
    std::vector<std::vector<double>> jacobian; // rows x n_params
    std::vector<double> singular_values;
    int rank = 0;
};

TransversalityReport transversality(const SlowFastModel& m, const ContactPoint& p,
                                    TransversalityMode mode, const Tolerances& tol = {});

/// At a singular contact point, checks that the bracket criterion
/// ([Z,Q](F)(p) < 0 <=> Hopf) and the V(G) criterion (V(G)(p) < 0 <=> Hopf)
/// reach the same verdict.
bool classify_crosscheck(const SlowFastModel& m, Point q, const Bindings& params,
                         const Tolerances& tol = {});

} // namespace canard

#endif
