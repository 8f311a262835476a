#ifndef CANARD_REPORT_HPP
#define CANARD_REPORT_HPP

#include <optional>

#include <json.hpp>

#include "canard/classify.hpp"
#include "canard/verify.hpp"

namespace canard {

/// Everything `analyze` produces, serializable both ways. JSON is the source
/// of truth; the text rendering shows the same numbers.
struct AnalysisReport {
    // input echo
    std::string model_name;
    std::string F;
    std::array<std::string, 2> Z;
    std::array<std::string, 2> Q;
    std::vector<std::string> parameters;
    Bindings param_values;
    bool identity_metric = true;

    AssumptionReport assumptions;
    ContactPoint contact;

    double A = 0.0;
    double G_at_p = 0.0;
    double VG_at_p = 0.0;
    double V2G_at_p = 0.0;
    double sigma = 0.0;
    std::string G_symbolic;

    Classification classification;
    std::optional<TransversalityReport> transversality;
    std::optional<VerificationReport> verification;
};

bool operator==(const AnalysisReport& a, const AnalysisReport& b);

nlohmann::json to_json(const AnalysisReport& r);
AnalysisReport report_from_json(const nlohmann::json& j);

std::string render_text(const AnalysisReport& r);
std::string render_text(const VerificationReport& r);

} // namespace canard

#endif
