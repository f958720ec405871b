#include <doctest.h>

#include "wittkit/report.hpp"

using namespace wittkit;

TEST_CASE("presentations parse to the expected algebras") {
    auto a = algebra_from_presentation(parse_presentation("algebra F2[t]/(t^2+t)"));
    CHECK(a.dim == 2);
    CHECK(is_reduced(a));
    auto b = algebra_from_presentation(parse_presentation("algebra F3[t]/(t^3-t)"));
    CHECK(b.dim == 3);
    CHECK(is_reduced(b));
    auto c = algebra_from_presentation(parse_presentation("algebra F2[x,y]/(x^2+x; y^2; x*y)"));
    CHECK(c.dim == 3);  // 1, x, y
    CHECK(!is_reduced(c));
    // the prime field itself
    auto f5 = algebra_from_presentation(parse_presentation("algebra F5"));
    CHECK(f5.dim == 1);
    CHECK(f5.p == 5);
}

TEST_CASE("parse errors carry positions and reject bad input") {
    CHECK_THROWS_WITH_AS((void)parse_presentation("algebra F4[x]/(x^2)"),
                         doctest::Contains("not prime"), ParseError);
    CHECK_THROWS_AS((void)parse_presentation("algebra F2[t]/(t^2"), ParseError);
    CHECK_THROWS_AS((void)parse_presentation("algebra F2[t]/(u^2)"), ParseError);
    CHECK_THROWS_WITH_AS((void)parse_presentation("extension F2[t]/(t)"),
                         doctest::Contains("not supported"), ParseError);
    try {
        (void)parse_presentation("algebra F2[t]/(t^2 @)");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.line == 1);
        CHECK(e.column > 1);
    }
}

TEST_CASE("formatter round trip reparses to an identical object") {
    for (auto text : {"algebra F2[t]/(t^2+t)", "algebra F3[x,y]/(x^2 - y; y^3)",
                      "module Z4[e1,e2]/(2e1 + 2e2; 2e2)", "algebra F2[t]/(t^2) cap 8"}) {
        Presentation p = parse_presentation(text);
        std::string f = format_presentation(p);
        CHECK(parse_presentation(f) == p);
    }
}

TEST_CASE("module presentations build presented modules") {
    auto m = module_from_presentation(parse_presentation("module Z4[e1,e2]/(2e1 + 2e2; 2e2)"));
    CHECK(m.mod.q == 4);
    CHECK(m.size() == 4);  // the relator span has order 4: quotient Z/2 + Z/2
    CHECK(invariant_factors(m) == std::vector<std::uint32_t>{1, 1});
    auto free_m = module_from_presentation(parse_presentation("module Z9[e1]/(3e1)"));
    CHECK(free_m.size() == 3);
}

TEST_CASE("dimension cap is enforced") {
    CHECK_THROWS_WITH_AS(
        (void)algebra_from_presentation(parse_presentation("algebra F2[t]/(t^9) cap 4")),
        doctest::Contains("cap"), std::invalid_argument);
    // polynomial rings have no finite normal-form basis
    CHECK_THROWS(algebra_from_presentation(parse_presentation("algebra F2[t]/(0) cap 4")));
}

TEST_CASE("suites run and report deterministically") {
    SuiteOptions opt;
    opt.p = 2;
    opt.n = 2;
    Report r1 = run_suite("witt-axioms", opt);
    Report r2 = run_suite("witt-axioms", opt);
    CHECK(r1.all_passed());
    CHECK(r1.to_json(false) == r2.to_json(false));
    CHECK(r1.to_markdown(false) == r2.to_markdown(false));
}

TEST_CASE("deformation suite rejects non-reduced bases") {
    SuiteOptions opt;
    opt.algebra = "algebra F2[t]/(t^2)";
    Report r = run_suite("deformation", opt);
    CHECK(r.rejected());
    CHECK(r.checks.size() == 1);
    CHECK(r.checks[0].status == "rejected");
}

TEST_CASE("the isogamma suite reports the expected group order") {
    SuiteOptions opt;
    opt.p = 2;
    opt.d = 2;
    opt.r = 2;
    Report r = run_suite("isogamma", opt);
    CHECK(r.all_passed());
    bool found = false;
    for (auto& c : r.checks)
        if (c.detail.find("32") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("unknown suites raise an error") {
    SuiteOptions opt;
    CHECK_THROWS_AS((void)run_suite("nonsense", opt), std::invalid_argument);
}
