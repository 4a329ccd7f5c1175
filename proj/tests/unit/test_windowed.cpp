#include "catch_amalgamated.hpp"

#include "stabcat/io.hpp"
#include "stabcat/oracle_suites.hpp"
#include "stabcat/stability.hpp"
#include "stabcat/torsion.hpp"
#include "stabcat/windowed.hpp"

using namespace stabcat;
using windowed::x2_exc;
using windowed::x2_family;
using windowed::x2_line;

namespace {

using factors = std::vector<std::vector<std::string>>;

factors hn(const ambient& amb, const stability_data& sd, const std::string& x) {
    factors out;
    for (auto& st : hn_filtration(amb, sd, x).steps) out.push_back(st.second);
    return out;
}

std::vector<std::string> checked_names(const ambient& amb) {
    std::vector<std::string> out;
    for_each_bit(amb.checked, [&](int x) { out.push_back(amb.carrier[x]); });
    return out;
}

} // namespace

TEST_CASE("P1 finest data make every indecomposable semistable", "[windowed]") {
    auto amb = io::parse_ambient("p1:window=-3..3:points=3");
    for (auto order : {std::vector<std::string>{"0", "1", "λ"}, {"λ", "0", "1"}}) {
        auto sd = windowed::p1_finest(amb, order);
        REQUIRE(is_valid(amb, sd));
        for (auto& x : checked_names(amb)) {
            INFO(x);
            CHECK(hn(amb, sd, x).size() == 1);
        }
    }
    auto slope = windowed::p1_slope(amb);
    CHECK(is_valid(amb, slope));
    CHECK_FALSE(is_finest(amb, slope).finest);
}

TEST_CASE("growing the window does not change HN filtrations", "[windowed][property]") {
    for (std::string fam : {"p1", "x2"}) {
        auto small = io::parse_ambient(fam + ":window=-1..1:points=2");
        auto big = io::parse_ambient(fam + ":window=-3..3:points=2");
        auto pick = [&](const ambient& a) {
            return fam == "p1" ? windowed::p1_finest(a, {"1", "0"}) : windowed::x2_finest(a, x2_family::coset);
        };
        auto sa = pick(small), sb = pick(big);
        REQUIRE(is_valid(small, sa));
        REQUIRE(is_valid(big, sb));
        for (auto& x : checked_names(small)) {
            INFO(fam << " " << x);
            CHECK(hn(small, sa, x) == hn(big, sb, x));
        }
    }
}

TEST_CASE("X(2) line bundles outside their family split off the exceptional simple", "[windowed][property]") {
    auto amb = io::parse_ambient("x2:window=-3..3:points=2");
    for (int m = amb.lo; m <= amb.hi; ++m) {
        auto sd = windowed::x2_finest(amb, x2_family::lm, m);
        REQUIRE(is_valid(amb, sd));
        for (int d = 2 * amb.lo; d <= 2 * amb.hi + 1; ++d) {
            auto f = hn(amb, sd, x2_line(d));
            INFO("m=" << m << " d=" << d);
            if (d % 2 == 0 && d >= 2 * m) CHECK(f == factors{{x2_line(d - 1)}, {x2_exc(0, 1)}});
            else CHECK(f.size() == 1);
        }
    }
}

TEST_CASE("X(2) full family keeps everything semistable", "[windowed]") {
    auto amb = io::parse_ambient("x2:window=-2..2:points=2");
    auto sd = windowed::x2_finest(amb, x2_family::full);
    REQUIRE(is_valid(amb, sd));
    CHECK(is_finest(amb, sd).finest);
    for (int d = 2 * amb.lo; d <= 2 * amb.hi + 1; ++d) CHECK(hn(amb, sd, x2_line(d)).size() == 1);
    CHECK(hn(amb, sd, x2_exc(0, 1)).size() == 1);
    CHECK(hn(amb, sd, x2_exc(1, 2)).size() == 1);
}

TEST_CASE("X(2) torsion orders are checked", "[windowed]") {
    auto amb = io::parse_ambient("x2:window=-1..1:points=2");
    CHECK_THROWS_AS(windowed::x2_finest(amb, x2_family::full, 0, {"inf1", "inf1/2", "inf0", "0", "1"}),
                    precondition_error);
    CHECK_THROWS_AS(windowed::x2_finest(amb, x2_family::coset, 0, {"0", "inf0", "inf1/2", "inf1", "1"}),
                    precondition_error);
    CHECK_THROWS_AS(windowed::x2_finest(amb, x2_family::full, 0, {"inf0", "inf1/2", "inf1"}), precondition_error);
    auto sd = windowed::x2_finest(amb, x2_family::full, 0, {"0", "inf0", "1", "inf1/2", "inf1"});
    CHECK(is_valid(amb, sd));
}

TEST_CASE("window violations", "[windowed]") {
    CHECK_THROWS_AS(windowed::make_p1_ambient(2, 1, 3), window_error);
    CHECK_THROWS_AS(windowed::make_x2_ambient(2, 1, 3), window_error);
    CHECK_THROWS_AS(windowed::make_kronecker_ambient(0, 3, 3), window_error);
    auto p1 = io::parse_ambient("p1:window=-2..2:points=2");
    CHECK_THROWS_AS(windowed::p1_degree_pair(p1, 9), window_error);
    CHECK_THROWS_AS(windowed::p1_points_pair(p1, {}), precondition_error);
    CHECK_THROWS_AS(windowed::p1_points_pair(p1, {"λ"}), precondition_error);
    CHECK_THROWS_AS(windowed::p1_finest(p1, {"0"}), precondition_error);
    auto x2 = io::parse_ambient("x2:window=-2..2:points=2");
    CHECK_THROWS_AS(windowed::x2_finest(x2, x2_family::lm, 5), window_error);
    CHECK_THROWS_AS(windowed::x2_table_pair(x2, 4, {}, {}, 7), window_error);
    CHECK_THROWS_AS(windowed::x2_table_pair(x2, 7), precondition_error);
    auto kr = io::parse_ambient("kronecker:window=3:points=2");
    CHECK_THROWS_AS(windowed::kron_table_pair(kr, 2, {}, 3), window_error);
    CHECK_THROWS_AS(windowed::kron_table_pair(kr, 5), precondition_error);
    CHECK_THROWS_AS(io::resolve(p1, "O(40)"), error);
}

TEST_CASE("windowed validation reports its window", "[windowed]") {
    auto amb = io::parse_ambient("p1:window=-1..1:points=1");
    auto r = validate(amb, windowed::p1_finest(amb, {"0"}));
    CHECK(r.valid);
    CHECK(r.window_verified);
    // the line one below the window is carried but not checked
    CHECK_FALSE(test_bit(amb.checked, amb.find(windowed::p1_line(-2))));
    CHECK(test_bit(amb.checked, amb.find(windowed::p1_line(-1))));
}

TEST_CASE("P1 table pairs", "[windowed][torsion]") {
    auto amb = io::parse_ambient("p1:window=-3..3:points=3");
    for (int n = -2; n <= 2; ++n) CHECK(validate_torsion_pair(amb, windowed::p1_degree_pair(amb, n)).valid);
    CHECK_THROWS_AS(windowed::p1_degree_pair(amb, 3), window_error);
    auto tp = windowed::p1_points_pair(amb, {"1"});
    CHECK(validate_torsion_pair(amb, tp).valid);
    CHECK((tp.T & windowed::torsion_at(amb, "0")) == 0);
    CHECK((tp.T & windowed::torsion_at(amb, "1")) == windowed::torsion_at(amb, "1"));
}

TEST_CASE("Kronecker model agrees with linear algebra", "[windowed][oracle]") {
    for (int p : {2, 3}) {
        auto t = oracle::suite_kronecker(p);
        INFO((t.examples.empty() ? std::string() : t.examples.front()));
        CHECK(t.checks > 0);
        CHECK(t.mismatches == 0);
    }
}

TEST_CASE("Kronecker preprojective family", "[windowed]") {
    auto amb = io::parse_ambient("kronecker:window=4:points=3");
    auto sd = windowed::kron_finest_preprojective(amb, {"1", "λ", "0"});
    REQUIRE(is_valid(amb, sd));
    CHECK(is_finest(amb, sd).finest);
    CHECK(hn(amb, sd, "R[0]^(2)").size() == 1);
    auto simples = windowed::kron_finest_simples(amb);
    REQUIRE(is_valid(amb, simples));
    CHECK(windowed::kron_dims("P_2") == std::pair<int, int>{1, 2});
    CHECK(windowed::kron_dims("R[1]^(2)") == std::pair<int, int>{2, 2});
    CHECK_THROWS_AS(windowed::kron_dims("Q_1"), parse_error);
}
