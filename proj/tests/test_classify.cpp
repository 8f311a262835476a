#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "canard/classify.hpp"

using namespace canard;

namespace {

SlowFastModel van_der_pol() {
    SymbolSet s{{"x", "y"}, {"lambda"}};
    SlowFastModel m;
    m.F = parse_expression("y - x^2/2 - x^3/3", s);
    m.Z = {parse_expression("1", s), parse_expression("0", s)};
    m.Q = {parse_expression("0", s), parse_expression("lambda - x", s)};
    m.parameters = {"lambda"};
    return m;
}

SlowFastModel two_stroke() {
    SymbolSet s{{"x", "y"}, {"alpha", "beta", "gamma", "delta"}};
    SlowFastModel m;
    m.F = parse_expression("delta - y", s);
    m.Z = {parse_expression("y", s), parse_expression("-x + alpha*y", s)};
    m.Q = {parse_expression("0", s), parse_expression("-(beta - gamma*x)", s)};
    m.parameters = {"alpha", "beta", "gamma", "delta"};
    return m;
}

SlowFastModel normal_form_with(const std::string& qy) {
    SymbolSet s{{"x", "y"}, {}};
    SlowFastModel m;
    m.F = parse_expression("y - x^2/2", s);
    m.Z = {parse_expression("1", s), parse_expression("0", s)};
    m.Q = {parse_expression("0", s), parse_expression(qy, s)};
    return m;
}

const Bindings kTwoStrokeUnit{{"alpha", 1.0}, {"beta", 1.0}, {"gamma", 1.0}, {"delta", 1.0}};

} // namespace

TEST_CASE("classify_point: slow-fast Hopf cases") {
    Classification c = classify_point(van_der_pol(), {0.0, 0.0}, {{"lambda", 0.0}});
    CHECK(c.kind == PointKind::SlowFastHopf);
    REQUIRE(c.criticality.has_value());
    CHECK(*c.criticality == Criticality::Supercritical);
    CHECK(c.evidence.at("sigma") == doctest::Approx(-1.0).epsilon(1e-12));

    Classification c2 = classify_point(two_stroke(), {1.0, 1.0}, kTwoStrokeUnit);
    CHECK(c2.kind == PointKind::SlowFastHopf);
    REQUIRE(c2.criticality.has_value());
    CHECK(*c2.criticality == Criticality::Subcritical);
    CHECK(c2.evidence.at("sigma") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("classify_point: jump point when G(p) is nonzero") {
    Classification c = classify_point(van_der_pol(), {0.0, 0.0}, {{"lambda", 0.5}});
    CHECK(c.kind == PointKind::Jump);
    CHECK(c.evidence.at("G") == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(std::abs(c.evidence.at("QF")) > 1e-8); // equivalent criterion agrees
}

TEST_CASE("classify_point: Bogdanov-Takens and saddle") {
    Classification bt = classify_point(normal_form_with("x^2"), {0.0, 0.0}, {});
    CHECK(bt.kind == PointKind::BogdanovTakens);
    REQUIRE(bt.bt_hopf_sign.has_value());
    CHECK(*bt.bt_hopf_sign == -1); // V^2(G)(0) = -2
    CHECK(bt.evidence.at("V2G") == doctest::Approx(-2.0).epsilon(1e-12));

    Classification sad = classify_point(normal_form_with("x - x^2"), {0.0, 0.0}, {});
    CHECK(sad.kind == PointKind::SingularSaddle);
    CHECK(sad.evidence.at("VG") > 0.0);
}

TEST_CASE("classify_point: sigma inside the dead zone reports a degenerate Hopf") {
    Classification c = classify_point(normal_form_with("-x"), {0.0, 0.0}, {});
    CHECK(c.kind == PointKind::SlowFastHopf);
    REQUIRE(c.criticality.has_value());
    CHECK(*c.criticality == Criticality::Degenerate); // sigma = 0 exactly (Bautin)
    CHECK(c.evidence.at("sigma") == 0.0);
}

TEST_CASE("classify_point: normally hyperbolic branches") {
    SlowFastModel vdp = van_der_pol();
    double x1 = 0.5, y1 = x1 * x1 / 2 + x1 * x1 * x1 / 3;
    Classification att = classify_point(vdp, {x1, y1}, {{"lambda", 0.0}});
    CHECK(att.kind == PointKind::NormallyHyperbolic);
    CHECK(*att.hyperbolicity == Hyperbolicity::Attracting);

    double x2 = -0.5, y2 = x2 * x2 / 2 + x2 * x2 * x2 / 3;
    Classification rep = classify_point(vdp, {x2, y2}, {{"lambda", 0.0}});
    CHECK(rep.kind == PointKind::NormallyHyperbolic);
    CHECK(*rep.hyperbolicity == Hyperbolicity::Repelling);
}

TEST_CASE("classify_point: errors") {
    SlowFastModel vdp = van_der_pol();
    CHECK_THROWS_AS(classify_point(vdp, {0.0, 0.7}, {{"lambda", 0.0}}), AnalysisError);

    SymbolSet s{{"x", "y"}, {}};
    SlowFastModel cubic;
    cubic.F = parse_expression("y - x^3", s);
    cubic.Z = {parse_expression("1", s), parse_expression("0", s)};
    cubic.Q = {parse_expression("0", s), parse_expression("x", s)};
    CHECK_THROWS_AS(classify_point(cubic, {0.0, 0.0}, {}), DegenerateContactError);
}

TEST_CASE("classify_point is deterministic") {
    Classification a = classify_point(van_der_pol(), {0.0, 0.0}, {{"lambda", 0.0}});
    Classification b = classify_point(van_der_pol(), {0.0, 0.0}, {{"lambda", 0.0}});
    CHECK(same_verdict(a, b));
    CHECK(a.evidence == b.evidence);
}

TEST_CASE("transversality: Van der Pol has rank 1 with dG/dlambda = -1") {
    SlowFastModel vdp = van_der_pol();
    ContactPoint p = find_contact_point(vdp, {0.1, 0.1}, {{"lambda", 0.0}});
    TransversalityReport r = transversality(vdp, p, TransversalityMode::Hopf);
    REQUIRE(r.jacobian.size() == 1);
    REQUIRE(r.jacobian[0].size() == 1);
    CHECK(r.jacobian[0][0] == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(r.rank == 1);
}

TEST_CASE("transversality: two-stroke row and the no-parameter case") {
    SlowFastModel ts = two_stroke();
    ContactPoint p = find_contact_point(ts, {0.8, 0.9}, kTwoStrokeUnit);
    TransversalityReport r = transversality(ts, p, TransversalityMode::Hopf);
    REQUIRE(r.jacobian[0].size() == 4);
    // G(p_lambda) = delta*(beta - alpha*gamma*delta); at the unit values
    // the beta-derivative equals delta = 1
    CHECK(r.jacobian[0][1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.rank == 1);

    SlowFastModel fixed = normal_form_with("-x + x^2");
    ContactPoint q = find_contact_point(fixed, {0.05, 0.01}, {});
    TransversalityReport r0 = transversality(fixed, q, TransversalityMode::Hopf);
    CHECK(r0.rank == 0);
    CHECK(r0.jacobian[0].empty());
}

TEST_CASE("transversality: Bogdanov-Takens mode produces two rows") {
    // two parameters unfold the BT point: Q = (0, a + b*x + x^2)
    SymbolSet s{{"x", "y"}, {"a", "b"}};
    SlowFastModel m;
    m.F = parse_expression("y - x^2/2", s);
    m.Z = {parse_expression("1", s), parse_expression("0", s)};
    m.Q = {parse_expression("0", s), parse_expression("a + b*x + x^2", s)};
    m.parameters = {"a", "b"};
    Bindings params{{"a", 0.0}, {"b", 0.0}};
    ContactPoint p = find_contact_point(m, {0.02, 0.01}, params);
    TransversalityReport r = transversality(m, p, TransversalityMode::BogdanovTakens);
    REQUIRE(r.jacobian.size() == 2);
    // G = -(a + b*x + x^2), V(G)(p_lambda): dG/da = -1, dVG/db = 1
    CHECK(r.jacobian[0][0] == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(r.jacobian[1][1] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(r.rank == 2);
}

TEST_CASE("classify_crosscheck: bracket and V(G) criteria agree") {
    CHECK(classify_crosscheck(van_der_pol(), {0.0, 0.0}, {{"lambda", 0.0}}));
    CHECK(classify_crosscheck(two_stroke(), {1.0, 1.0}, kTwoStrokeUnit));

    // sign-flipped Q: both criteria flip together (saddle/saddle)
    SlowFastModel flipped = van_der_pol();
    flipped.Q = {simplify(-flipped.Q.x), simplify(-flipped.Q.y)};
    Classification c = classify_point(flipped, {0.0, 0.0}, {{"lambda", 0.0}});
    CHECK(c.kind == PointKind::SingularSaddle);
    CHECK(classify_crosscheck(flipped, {0.0, 0.0}, {{"lambda", 0.0}}));
}
