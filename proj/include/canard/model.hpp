#ifndef CANARD_MODEL_HPP
#define CANARD_MODEL_HPP

#include <array>

#include "canard/geom.hpp"

namespace canard {

/// Base for analysis failures that are properties of the model/point, not of
/// the input files.
class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoConvergenceError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

/// Converged contact point with |Z^2 F| at or below the degeneracy threshold.
class DegenerateContactError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

/// A1 (regular critical curve) or A2 (nonvanishing fast direction) fails.
class AssumptionViolationError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

/// Numeric thresholds; all overridable from the CLI / model file.
struct Tolerances {
    double newton_step = 1e-12; // Newton stop on the step size
    double residual = 1e-10;    // acceptance on |F|, |ZF|
    double degenerate = 1e-8;   // dead zone for sign decisions (A1-A3, taxonomy)
    int max_iterations = 50;
};

/// A slow-fast system presented as the triplet (F, Z, Q), interpreted as
/// X = F.Z + eps.Q + O(eps^2) on the chart (x, y). eps itself never appears
/// in the expressions.
struct SlowFastModel {
    Expr F;
    VectorField Z;
    VectorField Q;
    std::vector<std::string> parameters; // ordered
    Metric metric = Metric::identity();
};

using Point = std::array<double, 2>;

struct AssumptionReport {
    bool a1_ok = false; // ||grad F|| above threshold
    bool a2_ok = false; // ||Z|| above threshold
    bool a3_ok = false; // |Z^2 F| above threshold
    double grad_norm = 0.0;
    double z_norm = 0.0;
    double F = 0.0;
    double ZF = 0.0;
    double Z2F = 0.0;
    bool all_ok() const { return a1_ok && a2_ok && a3_ok; }
};

struct ContactPoint {
    double x = 0.0;
    double y = 0.0;
    Bindings params;
    struct Diagnostics {
        double F = 0.0;
        double ZF = 0.0;
        double Z2F = 0.0;
        double Z3F = 0.0;
        double grad_norm = 0.0;
        double z_norm = 0.0;
    } diag;
};

/// Bindings for a concrete point: x, y plus the parameter values.
Bindings point_bindings(const SlowFastModel& m, double x, double y, const Bindings& params);

/// Evaluate the A1-A3 witnesses at a point and apply the thresholds.
AssumptionReport check_assumptions(const SlowFastModel& m, Point p, const Bindings& params,
                                   const Tolerances& tol = {});

/// Newton iteration on (F, ZF) from `guess`. The returned point satisfies
/// |F|,|ZF| <= tol.residual, |Z^2F| > tol.degenerate and A1/A2.
ContactPoint find_contact_point(const SlowFastModel& m, Point guess, const Bindings& params,
                                const Tolerances& tol = {});

/// Continuation step: re-solve from the coordinates of `base` at new
/// parameter values. Same contract as find_contact_point.
ContactPoint track_contact_point(const SlowFastModel& m, const ContactPoint& base,
                                 const Bindings& new_params, const Tolerances& tol = {});

} // namespace canard

#endif
