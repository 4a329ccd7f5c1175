#include "catch_amalgamated.hpp"

#include <random>

#include "stabcat/phase_order.hpp"

using namespace stabcat;

TEST_CASE("phase strings round-trip through parse", "[phase]") {
    std::vector<phase> ps{
        phase::integer(-3),
        phase::rational(6, 4),
        phase::infinity(),
        phase::label_of("x"),
        phase::label_of("λ"),
        phase::label_of("12"),
        phase::label_of("inf"),
        phase::label_of(""),
        phase::pair(phase::infinity(), phase::rational(1, 2)),
        phase::pair(phase::integer(0), phase::pair(phase::label_of("a|b"), phase::integer(7))),
    };
    for (auto& p : ps) {
        INFO(p.str());
        CHECK(phase::parse(p.str()) == p);
    }
    CHECK(phase::rational(6, 4).str() == "3/2");
    CHECK(phase::rational(4, -2) == phase::integer(-2));
    CHECK(phase::parse("(inf|1/2)").str() == "(inf|1/2)");
}

TEST_CASE("malformed phases are rejected", "[phase]") {
    for (std::string s : {"", "(1|2", "(1 2)", "'open", "1)"}) {
        INFO(s);
        CHECK_THROWS_AS(phase::parse(s), parse_error);
    }
    CHECK_THROWS_AS(phase::rational(1, 0), precondition_error);
}

TEST_CASE("explicit orders keep list order and reject duplicates", "[order]") {
    auto o = make_finite_order({"c", "a", "b"});
    CHECK(o.less(phase::label_of("c"), phase::label_of("a")));
    CHECK_FALSE(o.less(phase::label_of("b"), phase::label_of("a")));
    CHECK(o.index_of(phase::label_of("b")) == 2);
    CHECK(check_order_axioms(o));
    CHECK_THROWS_AS(make_finite_order({"a", "a"}), precondition_error);
    CHECK_THROWS_AS(o.less(phase::label_of("z"), phase::label_of("a")), precondition_error);
}

TEST_CASE("explicit order cap is enforced", "[order]") {
    auto saved = explicit_order_cap();
    explicit_order_cap() = 3;
    CHECK_THROWS_AS(make_finite_order({"a", "b", "c", "d"}), precondition_error);
    explicit_order_cap() = saved;
}

TEST_CASE("rationals with infinity compare numerically", "[order]") {
    auto q = linear_order::rationals_with_infinity();
    CHECK(q.less(phase::rational(-1, 2), phase::integer(0)));
    CHECK(q.less(phase::rational(2, 3), phase::rational(3, 4)));
    CHECK(q.less(phase::integer(1000000), phase::infinity()));
    CHECK_FALSE(q.less(phase::infinity(), phase::infinity()));
    CHECK_FALSE(q.contains(phase::label_of("x")));
    CHECK_FALSE(q.enumerable());
    CHECK_THROWS_AS(q.elements(), precondition_error);
}

TEST_CASE("random rationals are ordered like doubles", "[order][property]") {
    auto q = linear_order::rationals_with_infinity();
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> num(-50, 50), den(1, 12);
    for (int i = 0; i < 2000; ++i) {
        int a = num(rng), b = den(rng), c = num(rng), d = den(rng);
        double x = double(a) / b, y = double(c) / d;
        INFO(a << "/" << b << " vs " << c << "/" << d);
        CHECK(q.less(phase::rational(a, b), phase::rational(c, d)) == (x < y));
    }
}

TEST_CASE("lex products order by outer then inner", "[order]") {
    auto outer = make_finite_order({"lo", "hi"});
    std::map<phase, linear_order> inner{{phase::label_of("lo"), make_finite_order({"b", "a"})},
                                        {phase::label_of("hi"), make_finite_order({"z"})}};
    auto lp = lex_product(outer, inner);
    REQUIRE(lp.enumerable());
    CHECK(lp.size() == 3);
    auto P = [](const char* a, const char* b) { return phase::pair(phase::label_of(a), phase::label_of(b)); };
    CHECK(lp.less(P("lo", "b"), P("lo", "a")));
    CHECK(lp.less(P("lo", "a"), P("hi", "z")));
    CHECK(check_order_axioms(lp));
    CHECK(linear_order::from_json(lp.to_json()) == lp);
}

TEST_CASE("lex product over an infinite outer order", "[order]") {
    auto z = linear_order::integers();
    CHECK_THROWS_AS(lex_product(z, {}), precondition_error);
    auto lp = lex_product(z, {}, make_finite_order({"x", "y"}));
    CHECK_FALSE(lp.enumerable());
    auto P = [](int n, const char* s) { return phase::pair(phase::integer(n), phase::label_of(s)); };
    CHECK(lp.less(P(3, "y"), P(4, "x")));
    CHECK(lp.less(P(4, "x"), P(4, "y")));
    CHECK_FALSE(lp.contains(P(4, "w")));
    CHECK(linear_order::from_json(lp.to_json()).less(P(-1, "x"), P(-1, "y")));
}

TEST_CASE("refinements project monotonically onto the base", "[order][property]") {
    auto base = make_finite_order({"1", "2", "3"});
    std::map<phase, linear_order> blocks;
    blocks[phase::label_of("1")] = make_finite_order({"1a", "1b"});
    blocks[phase::label_of("2")] = make_finite_order({"2a"});
    blocks[phase::label_of("3")] = make_finite_order({"3b", "3a", "3c"});
    auto ref = refine_order(base, blocks);
    CHECK(ref.psi.size() == 6);
    CHECK(check_order_axioms(ref.psi));
    for (auto& a : ref.psi.elements())
        for (auto& b : ref.psi.elements())
            if (ref.psi.less(a, b)) CHECK_FALSE(base.less(ref.r.at(b), ref.r.at(a)));
    CHECK(linear_order::from_json(ref.psi.to_json()) == ref.psi);
    blocks.erase(phase::label_of("2"));
    CHECK_THROWS_AS(refine_order(base, blocks), precondition_error);
}

TEST_CASE("order json rejects unknown kinds", "[order]") {
    CHECK_THROWS_AS(linear_order::from_json(nlohmann::json{{"kind", "reals"}}), parse_error);
}
