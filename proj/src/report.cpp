#include "canard/report.hpp"

#include <cstdio>
#include <sstream>

namespace canard {

using nlohmann::json;

namespace {

json bindings_to_json(const Bindings& b) {
    json j = json::object();
    for (const auto& [k, v] : b) j[k] = v;
    return j;
}

Bindings bindings_from_json(const json& j) {
    Bindings b;
    for (auto it = j.begin(); it != j.end(); ++it) b[it.key()] = it.value().get<double>();
    return b;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

bool operator==(const AnalysisReport& a, const AnalysisReport& b) {
    return to_json(a) == to_json(b);
}

json to_json(const AnalysisReport& r) {
    json j;
    j["model"] = {
        {"name", r.model_name},
        {"F", r.F},
        {"Z", {r.Z[0], r.Z[1]}},
        {"Q", {r.Q[0], r.Q[1]}},
        {"parameters", r.parameters},
        {"identity_metric", r.identity_metric},
    };
    j["assumptions"] = {
        {"a1_ok", r.assumptions.a1_ok}, {"a2_ok", r.assumptions.a2_ok},
        {"a3_ok", r.assumptions.a3_ok}, {"grad_norm", r.assumptions.grad_norm},
        {"z_norm", r.assumptions.z_norm}, {"F", r.assumptions.F},
        {"ZF", r.assumptions.ZF},       {"Z2F", r.assumptions.Z2F},
    };
    j["contact_point"] = {
        {"x", r.contact.x},
        {"y", r.contact.y},
        {"params", bindings_to_json(r.contact.params)},
        {"diagnostics",
         {{"F", r.contact.diag.F},
          {"ZF", r.contact.diag.ZF},
          {"Z2F", r.contact.diag.Z2F},
          {"Z3F", r.contact.diag.Z3F},
          {"gradF_norm", r.contact.diag.grad_norm},
          {"Z_norm", r.contact.diag.z_norm}}},
    };
    j["invariants"] = {
        {"A", r.A},
        {"G_at_p", r.G_at_p},
        {"VG_at_p", r.VG_at_p},
        {"V2G_at_p", r.V2G_at_p},
        {"sigma", r.sigma},
        {"G_symbolic", r.G_symbolic},
    };
    j["classification"] = {
        {"kind", point_kind_name(r.classification.kind)},
        {"subkind", subkind_name(r.classification)},
        {"evidence", bindings_to_json(Bindings(r.classification.evidence.begin(),
                                               r.classification.evidence.end()))},
    };
    if (r.transversality) {
        j["transversality"] = {
            {"jacobian", r.transversality->jacobian},
            {"rank", r.transversality->rank},
            {"singular_values", r.transversality->singular_values},
        };
    }
    if (r.verification) {
        json checks = json::array();
        for (const VerificationCheck& c : r.verification->checks)
            checks.push_back({{"name", c.name},
                              {"samples", c.samples},
                              {"max_deviation", c.max_deviation},
                              {"pass", c.pass},
                              {"detail", c.detail}});
        j["verification"] = {{"checks", checks}, {"all_pass", r.verification->all_pass()}};
    }
    return j;
}

AnalysisReport report_from_json(const json& j) {
    AnalysisReport r;
    const json& m = j.at("model");
    r.model_name = m.at("name").get<std::string>();
    r.F = m.at("F").get<std::string>();
    r.Z = {m.at("Z")[0].get<std::string>(), m.at("Z")[1].get<std::string>()};
    r.Q = {m.at("Q")[0].get<std::string>(), m.at("Q")[1].get<std::string>()};
    r.parameters = m.at("parameters").get<std::vector<std::string>>();
    r.identity_metric = m.at("identity_metric").get<bool>();

    const json& a = j.at("assumptions");
    r.assumptions.a1_ok = a.at("a1_ok").get<bool>();
    r.assumptions.a2_ok = a.at("a2_ok").get<bool>();
    r.assumptions.a3_ok = a.at("a3_ok").get<bool>();
    r.assumptions.grad_norm = a.at("grad_norm").get<double>();
    r.assumptions.z_norm = a.at("z_norm").get<double>();
    r.assumptions.F = a.at("F").get<double>();
    r.assumptions.ZF = a.at("ZF").get<double>();
    r.assumptions.Z2F = a.at("Z2F").get<double>();

    const json& cp = j.at("contact_point");
    r.contact.x = cp.at("x").get<double>();
    r.contact.y = cp.at("y").get<double>();
    r.contact.params = bindings_from_json(cp.at("params"));
    const json& d = cp.at("diagnostics");
    r.contact.diag.F = d.at("F").get<double>();
    r.contact.diag.ZF = d.at("ZF").get<double>();
    r.contact.diag.Z2F = d.at("Z2F").get<double>();
    r.contact.diag.Z3F = d.at("Z3F").get<double>();
    r.contact.diag.grad_norm = d.at("gradF_norm").get<double>();
    r.contact.diag.z_norm = d.at("Z_norm").get<double>();
    r.param_values = r.contact.params;

    const json& inv = j.at("invariants");
    r.A = inv.at("A").get<double>();
    r.G_at_p = inv.at("G_at_p").get<double>();
    r.VG_at_p = inv.at("VG_at_p").get<double>();
    r.V2G_at_p = inv.at("V2G_at_p").get<double>();
    r.sigma = inv.at("sigma").get<double>();
    r.G_symbolic = inv.at("G_symbolic").get<std::string>();

    const json& cl = j.at("classification");
    std::string kind = cl.at("kind").get<std::string>();
    std::string subkind = cl.at("subkind").get<std::string>();
    for (PointKind k : {PointKind::NormallyHyperbolic, PointKind::Jump, PointKind::SlowFastHopf,
                        PointKind::SingularSaddle, PointKind::BogdanovTakens,
                        PointKind::Indeterminate})
        if (kind == point_kind_name(k)) r.classification.kind = k;
    if (subkind == "attracting") r.classification.hyperbolicity = Hyperbolicity::Attracting;
    if (subkind == "repelling") r.classification.hyperbolicity = Hyperbolicity::Repelling;
    if (subkind == "supercritical") r.classification.criticality = Criticality::Supercritical;
    if (subkind == "subcritical") r.classification.criticality = Criticality::Subcritical;
    if (subkind == "degenerate") r.classification.criticality = Criticality::Degenerate;
    if (subkind == "hopf_negative") r.classification.bt_hopf_sign = -1;
    if (subkind == "hopf_positive") r.classification.bt_hopf_sign = 1;
    Bindings ev = bindings_from_json(cl.at("evidence"));
    r.classification.evidence = {ev.begin(), ev.end()};

    if (j.contains("transversality")) {
        TransversalityReport t;
        t.jacobian = j.at("transversality").at("jacobian").get<std::vector<std::vector<double>>>();
        t.rank = j.at("transversality").at("rank").get<int>();
        t.singular_values =
            j.at("transversality").at("singular_values").get<std::vector<double>>();
        r.transversality = std::move(t);
    }
    if (j.contains("verification")) {
        VerificationReport v;
        for (const json& c : j.at("verification").at("checks")) {
            VerificationCheck ck;
            ck.name = c.at("name").get<std::string>();
            ck.samples = c.at("samples").get<int>();
            ck.max_deviation = c.at("max_deviation").get<double>();
            ck.pass = c.at("pass").get<bool>();
            ck.detail = c.at("detail").get<std::string>();
            v.checks.push_back(std::move(ck));
        }
        r.verification = std::move(v);
    }
    return r;
}

std::string render_text(const AnalysisReport& r) {
    std::ostringstream os;
    os << "model: " << (r.model_name.empty() ? "(unnamed)" : r.model_name) << "\n";
    os << "  F = " << r.F << "\n";
    os << "  Z = (" << r.Z[0] << ", " << r.Z[1] << ")\n";
    os << "  Q = (" << r.Q[0] << ", " << r.Q[1] << ")\n";
    if (!r.param_values.empty()) {
        os << "  parameters:";
        for (const auto& [k, v] : r.param_values) os << " " << k << " = " << num(v);
        os << "\n";
    }
    os << "assumptions: A1 " << (r.assumptions.a1_ok ? "ok" : "FAIL") << " (|grad F| = "
       << num(r.assumptions.grad_norm) << "), A2 " << (r.assumptions.a2_ok ? "ok" : "FAIL")
       << " (|Z| = " << num(r.assumptions.z_norm) << "), A3 "
       << (r.assumptions.a3_ok ? "ok" : "FAIL") << " (Z2F = " << num(r.assumptions.Z2F) << ")\n";
    os << "contact point: (" << num(r.contact.x) << ", " << num(r.contact.y) << ")\n";
    os << "  residuals: F = " << num(r.contact.diag.F) << ", ZF = " << num(r.contact.diag.ZF)
       << "\n";
    os << "invariants:\n";
    os << "  A      = " << num(r.A) << "\n";
    os << "  G      = " << r.G_symbolic << "\n";
    os << "  G(p)   = " << num(r.G_at_p) << "\n";
    os << "  VG(p)  = " << num(r.VG_at_p) << "\n";
    os << "  V2G(p) = " << num(r.V2G_at_p) << "\n";
    os << "  sigma  = " << num(r.sigma) << "\n";
    os << "classification: " << point_kind_name(r.classification.kind);
    std::string sub = subkind_name(r.classification);
    if (!sub.empty()) os << " (" << sub << ")";
    os << "\n";
    if (r.transversality) {
        os << "transversality: rank " << r.transversality->rank << ", jacobian [";
        for (std::size_t row = 0; row < r.transversality->jacobian.size(); ++row) {
            if (row) os << "; ";
            for (std::size_t i = 0; i < r.transversality->jacobian[row].size(); ++i)
                os << (i ? " " : "") << num(r.transversality->jacobian[row][i]);
        }
        os << "]\n";
    }
    if (r.verification) os << render_text(*r.verification);
    return os.str();
}

std::string render_text(const VerificationReport& r) {
    std::ostringstream os;
    os << "verification:\n";
    for (const VerificationCheck& c : r.checks) {
        os << "  " << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  max deviation "
           << num(c.max_deviation);
        if (!c.detail.empty()) os << "  (" << c.detail << ")";
        os << "\n";
    }
    return os.str();
}

} // namespace canard
