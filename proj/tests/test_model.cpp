#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "canard/model.hpp"

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

SlowFastModel cubic_tangency() {
    SymbolSet s{{"x", "y"}, {}};
    SlowFastModel m;
    m.F = parse_expression("y - x^3", s);
    m.Z = {parse_expression("1", s), parse_expression("0", s)};
    m.Q = {parse_expression("0", s), parse_expression("x", s)};
    return m;
}

const Bindings kTwoStrokeUnit{{"alpha", 1.0}, {"beta", 1.0}, {"gamma", 1.0}, {"delta", 1.0}};

} // namespace

TEST_CASE("check_assumptions: reference cases") {
    SlowFastModel vdp = van_der_pol();
    AssumptionReport r = check_assumptions(vdp, {0.0, 0.0}, {{"lambda", 0.0}});
    CHECK(r.a1_ok);
    CHECK(r.grad_norm == doctest::Approx(1.0));
    CHECK(r.a2_ok);
    CHECK(r.z_norm == doctest::Approx(1.0));
    CHECK(r.a3_ok);
    CHECK(r.Z2F == doctest::Approx(-1.0));
    CHECK(r.all_ok());

    SlowFastModel ts = two_stroke();
    AssumptionReport r2 = check_assumptions(ts, {1.0, 1.0}, kTwoStrokeUnit);
    CHECK(r2.a3_ok);
    CHECK(r2.Z2F == doctest::Approx(1.0)); // Z^2F(p) = delta

    SlowFastModel cubic = cubic_tangency();
    AssumptionReport r3 = check_assumptions(cubic, {0.0, 0.0}, {});
    CHECK_FALSE(r3.a3_ok);
    CHECK(r3.Z2F == doctest::Approx(0.0));
}

TEST_CASE("find_contact_point: reference cases") {
    SlowFastModel vdp = van_der_pol();
    ContactPoint p = find_contact_point(vdp, {0.1, 0.1}, {{"lambda", 0.0}});
    CHECK(std::abs(p.x) <= 1e-9);
    CHECK(std::abs(p.y) <= 1e-9);
    CHECK(std::abs(p.diag.F) <= 1e-10);
    CHECK(std::abs(p.diag.ZF) <= 1e-10);

    SlowFastModel ts = two_stroke();
    ContactPoint q = find_contact_point(ts, {0.8, 0.9}, kTwoStrokeUnit);
    CHECK(q.x == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(q.y == doctest::Approx(1.0).epsilon(1e-9));

    SlowFastModel cubic = cubic_tangency();
    CHECK_THROWS_AS(find_contact_point(cubic, {0.05, 0.01}, {}), DegenerateContactError);
}

TEST_CASE("find_contact_point: two-stroke closed form over a random grid") {
    SlowFastModel ts = two_stroke();
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> dist(0.5, 2.0);
    for (int i = 0; i < 12; ++i) {
        double alpha = dist(rng), delta = dist(rng);
        Bindings params{{"alpha", alpha}, {"beta", 1.0}, {"gamma", 1.0}, {"delta", delta}};
        ContactPoint p = find_contact_point(ts, {alpha * delta + 0.1, delta - 0.05}, params);
        CHECK(std::abs(p.x - alpha * delta) <= 1e-9);
        CHECK(std::abs(p.y - delta) <= 1e-9);
    }
}

TEST_CASE("track_contact_point: continuation examples") {
    SlowFastModel vdp = van_der_pol();
    ContactPoint base = find_contact_point(vdp, {0.1, 0.1}, {{"lambda", 0.0}});

    // the contact equations do not involve lambda here
    ContactPoint moved = track_contact_point(vdp, base, {{"lambda", 0.1}});
    CHECK(std::abs(moved.x) <= 1e-9);
    CHECK(std::abs(moved.y) <= 1e-9);

    SlowFastModel ts = two_stroke();
    ContactPoint b2 = find_contact_point(ts, {0.8, 0.9}, kTwoStrokeUnit);
    Bindings stretched = kTwoStrokeUnit;
    stretched["delta"] = 1.2;
    ContactPoint m2 = track_contact_point(ts, b2, stretched);
    CHECK(m2.x == doctest::Approx(1.2).epsilon(1e-9));
    CHECK(m2.y == doctest::Approx(1.2).epsilon(1e-9));

    // identical parameters reproduce the identical point
    ContactPoint same = track_contact_point(ts, b2, kTwoStrokeUnit);
    CHECK(std::abs(same.x - b2.x) <= 1e-12);
    CHECK(std::abs(same.y - b2.y) <= 1e-12);

    // consistency between the two entry points
    ContactPoint direct = find_contact_point(ts, {1.15, 1.21}, stretched);
    CHECK(std::abs(direct.x - m2.x) <= 1e-9);
    CHECK(std::abs(direct.y - m2.y) <= 1e-9);
}

TEST_CASE("find_contact_point: failure modes") {
    // no contact point anywhere: F = y - x, ZF = -1 never vanishes
    SymbolSet s{{"x", "y"}, {}};
    SlowFastModel flat;
    flat.F = parse_expression("y - x", s);
    flat.Z = {parse_expression("1", s), parse_expression("0", s)};
    flat.Q = {parse_expression("0", s), parse_expression("1", s)};
    CHECK_THROWS_AS(find_contact_point(flat, {0.0, 0.0}, {}), NoConvergenceError);

    // missing parameter binding surfaces as an unbound-symbol error
    SlowFastModel vdp = van_der_pol();
    CHECK_THROWS_AS(find_contact_point(vdp, {0.1, 0.1}, {}), UnboundSymbolError);
}
