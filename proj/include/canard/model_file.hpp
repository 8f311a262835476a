#ifndef CANARD_MODEL_FILE_HPP
#define CANARD_MODEL_FILE_HPP

#include <optional>

#include "canard/model.hpp"

namespace canard {

/// Invalid or incomplete model description (bad TOML, undeclared symbols,
/// missing sections, wrong variables).
class ModelFileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// On-disk model description:
///
///   [model]
///   name = "van-der-pol"          # optional
///   vars = ["x", "y"]             # must be exactly x, y
///   params = ["lambda"]
///   F = "y - x^2/2 - x^3/3"
///   Z = ["1", "0"]
///   Q = ["0", "lambda - x"]
///   breaking = "lambda"           # optional: parameter swept by the probe
///   metric = { E = "1", F = "0", G = "1" }   # optional
///
///   [point]
///   guess = [0.1, 0.1]
///   params.lambda = 0.0
///
///   [analysis]                    # optional overrides
///   tol_residual = 1e-10
///   tol_degenerate = 1e-8
///   seed = 42
///
///   [sim]                         # optional simulate defaults
///   start = [0.3, 0.1]
///   dt = 0.01
struct ModelFile {
    std::string name;
    SlowFastModel model;
    std::optional<Point> guess;
    Bindings point_params; // values from [point]; may be partial before overrides
    Tolerances tol;
    std::uint64_t seed = 42;
    std::string breaking; // empty when absent
    std::optional<Point> sim_start;
    double sim_dt = 0.01;
};

ModelFile load_model_file(const std::string& path);
ModelFile parse_model_file(const std::string& toml_text);

/// Merge CLI-style overrides ("name=value") into the point parameters and
/// check that every declared parameter ends up bound.
Bindings resolve_parameters(const ModelFile& mf, const std::vector<std::string>& overrides);

} // namespace canard

#endif
