#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "canard/model_file.hpp"
#include "canard/report.hpp"
#include "canard/toml.hpp"

using namespace canard;

TEST_CASE("toml: values, arrays, inline tables, dotted keys") {
    toml::Table t = toml::parse(R"(
# comment
title = "demo"   # trailing comment
count = 42
ratio = -1.5e-3
flag = true

[model]
vars = ["x", "y"]
metric = { E = "1", F = "0", G = "1" }

[point]
guess = [0.1, 0.2]
params.lambda = 0.25
params.mu = -2
)");
    CHECK(t.at("title").as_string() == "demo");
    CHECK(t.at("count").as_number() == 42.0);
    CHECK(t.at("ratio").as_number() == doctest::Approx(-1.5e-3));
    CHECK(t.at("flag").as_bool());
    const toml::Table& model = t.at("model").as_table();
    CHECK(model.at("vars").as_array().size() == 2);
    CHECK(model.at("metric").as_table().at("G").as_string() == "1");
    const toml::Table& point = t.at("point").as_table();
    CHECK(point.at("guess").as_array()[1].as_number() == 0.2);
    CHECK(point.at("params").as_table().at("lambda").as_number() == 0.25);
    CHECK(point.at("params").as_table().at("mu").as_number() == -2.0);
}

TEST_CASE("toml: errors carry line numbers") {
    try {
        toml::parse("a = 1\nb = \n");
        FAIL("expected TomlError");
    } catch (const toml::TomlError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(toml::parse("a = 1\na = 2\n"), toml::TomlError);
    CHECK_THROWS_AS(toml::parse("x = \"unterminated\n"), toml::TomlError);
}

TEST_CASE("model file: bundled vdp.toml loads") {
    ModelFile mf = load_model_file(std::string(CANARD_MODELS_DIR) + "/vdp.toml");
    CHECK(mf.name == "van-der-pol");
    CHECK(mf.model.parameters == std::vector<std::string>{"lambda"});
    CHECK(mf.breaking == "lambda");
    REQUIRE(mf.guess.has_value());
    CHECK((*mf.guess)[0] == 0.1);
    CHECK(mf.point_params.at("lambda") == 0.0);
    CHECK(mf.model.metric.is_identity());
    CHECK(structurally_equal(simplify(mf.model.F),
                             simplify(parse_expression("y - x^2/2 - x^3/3",
                                                       {{"x", "y"}, {"lambda"}}))));
}

TEST_CASE("model file: validation errors") {
    CHECK_THROWS_AS(parse_model_file("[model]\nvars = [\"u\", \"v\"]\n"), ModelFileError);
    CHECK_THROWS_AS(parse_model_file("[point]\nguess = [0, 0]\n"), ModelFileError);
    // undeclared symbol inside F
    CHECK_THROWS_AS(parse_model_file(R"(
[model]
vars = ["x", "y"]
F = "y - q*x"
Z = ["1", "0"]
Q = ["0", "x"]
)"),
                    ModelFileError);
    // breaking must name a declared parameter
    CHECK_THROWS_AS(parse_model_file(R"(
[model]
vars = ["x", "y"]
params = ["lambda"]
F = "y - x^2"
Z = ["1", "0"]
Q = ["0", "lambda - x"]
breaking = "mu"
)"),
                    ModelFileError);
    CHECK_THROWS_AS(load_model_file("/nonexistent/nowhere.toml"), ModelFileError);
}

TEST_CASE("model file: parameter resolution and overrides") {
    ModelFile mf = load_model_file(std::string(CANARD_MODELS_DIR) + "/twostroke.toml");
    Bindings all = resolve_parameters(mf, {});
    CHECK(all.at("beta") == 1.0);
    Bindings overridden = resolve_parameters(mf, {"beta=2.5"});
    CHECK(overridden.at("beta") == 2.5);
    CHECK(overridden.at("alpha") == 1.0);
    CHECK_THROWS_AS(resolve_parameters(mf, {"nope=1"}), ModelFileError);
    CHECK_THROWS_AS(resolve_parameters(mf, {"beta=abc"}), ModelFileError);

    ModelFile partial = parse_model_file(R"(
[model]
vars = ["x", "y"]
params = ["lambda"]
F = "y - x^2"
Z = ["1", "0"]
Q = ["0", "lambda - x"]
)");
    CHECK_THROWS_AS(resolve_parameters(partial, {}), ModelFileError);
    CHECK(resolve_parameters(partial, {"lambda=0.5"}).at("lambda") == 0.5);
}

TEST_CASE("analysis report: JSON round trip is lossless") {
    ModelFile mf = load_model_file(std::string(CANARD_MODELS_DIR) + "/vdp.toml");
    Bindings params = resolve_parameters(mf, {});
    ContactPoint p = find_contact_point(mf.model, *mf.guess, params, mf.tol);
    InvariantSet inv = compute_derived(mf.model, p, mf.tol);

    AnalysisReport r;
    r.model_name = mf.name;
    r.F = mf.model.F.str();
    r.Z = {mf.model.Z.x.str(), mf.model.Z.y.str()};
    r.Q = {mf.model.Q.x.str(), mf.model.Q.y.str()};
    r.parameters = mf.model.parameters;
    r.param_values = params;
    r.assumptions = check_assumptions(mf.model, {p.x, p.y}, params, mf.tol);
    r.contact = p;
    r.A = inv.A;
    r.G_at_p = inv.G_at_p;
    r.VG_at_p = inv.VG_at_p;
    r.V2G_at_p = inv.V2G_at_p;
    r.sigma = inv.sigma;
    r.G_symbolic = inv.G_expr.str();
    r.classification = classify_point(mf.model, {p.x, p.y}, params, mf.tol);
    r.transversality = transversality(mf.model, p, TransversalityMode::Hopf, mf.tol);

    VerifyContext ctx{mf.model, params, *mf.guess, mf.tol, 1e-8, mf.seed};
    r.verification = run_verify_suite(ctx, 3);

    nlohmann::json j = to_json(r);
    AnalysisReport back = report_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back == r);
    CHECK(to_json(back).dump() == j.dump());

    // text view shows the same numbers (spot checks at full precision)
    std::string text = render_text(r);
    CHECK(text.find("sigma  = -1") != std::string::npos);
    CHECK(text.find("A      = -2") != std::string::npos);
    CHECK(text.find("slow_fast_hopf (supercritical)") != std::string::npos);
}

TEST_CASE("analysis report: schema keys are stable") {
    nlohmann::json j = to_json(AnalysisReport{});
    for (const char* key : {"model", "assumptions", "contact_point", "invariants",
                            "classification"})
        CHECK(j.contains(key));
    for (const char* key : {"A", "G_at_p", "VG_at_p", "V2G_at_p", "sigma", "G_symbolic"})
        CHECK(j["invariants"].contains(key));
    for (const char* key : {"x", "y", "params", "diagnostics"})
        CHECK(j["contact_point"].contains(key));
    CHECK(j["classification"].contains("kind"));
    CHECK(j["classification"].contains("subkind"));
    CHECK(j["classification"].contains("evidence"));
}
