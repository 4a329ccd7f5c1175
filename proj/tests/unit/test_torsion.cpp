#include "catch_amalgamated.hpp"

#include <set>

#include "stabcat/io.hpp"
#include "stabcat/torsion.hpp"

using namespace stabcat;

namespace {

// every torsion class is the left perp of its own right perp, so running
// S -> (perp(perp S), perp S) over all subsets finds every pair
std::set<std::pair<bits, bits>> pairs_by_perps(const ambient& amb) {
    std::set<std::pair<bits, bits>> out;
    for (bits s = 0; s <= amb.full(); ++s) {
        bits F = right_perp(amb, s);
        out.insert({left_perp(amb, F), F});
        if (s == amb.full()) break;
    }
    return out;
}

std::set<std::pair<bits, bits>> as_set(const std::vector<torsion_pair>& v) {
    std::set<std::pair<bits, bits>> out;
    for (auto& tp : v) out.insert({tp.T, tp.F});
    return out;
}

} // namespace

TEST_CASE("torsion pair counts agree with the perpendicular oracle", "[torsion][oracle]") {
    // totals include the two trivial pairs
    std::vector<std::pair<std::string, std::size_t>> cases{{"an:2", 5}, {"an:3", 14}, {"tube:2", 6}, {"tube:3", 20}};
    for (auto& [spec, total] : cases) {
        auto amb = io::parse_ambient(spec);
        auto found = enumerate_torsion_pairs(amb);
        INFO(spec);
        CHECK(found.size() == total);
        CHECK(as_set(found) == pairs_by_perps(amb));
    }
}

TEST_CASE("named A2 torsion pairs", "[torsion]") {
    auto amb = make_an_ambient(2);
    auto s = [&](std::vector<std::string> v) { return closure(amb, io::resolve_set(amb, v)); };
    auto found = as_set(non_trivial(amb, enumerate_torsion_pairs(amb)));
    std::set<std::pair<bits, bits>> want{{s({"S_1"}), s({"S_2", "P_1"})},
                                         {s({"S_2"}), s({"S_1"})},
                                         {s({"S_1", "P_1"}), s({"S_2"})}};
    CHECK(found == want);
}

TEST_CASE("three methods agree on tubes", "[torsion][property]") {
    for (int n : {1, 2, 3}) {
        auto amb = make_tube_ambient(n);
        auto brute = enumerate_torsion_pairs(amb);
        auto rule = pairs_of(classify_tube_torsion_pairs(amb));
        sort_unique(rule);
        auto cuts = torsion_pairs_from_finest(amb);
        INFO("n=" << n);
        CHECK(brute == rule);
        CHECK(brute == cuts);
        CHECK(enumerate_torsion_pairs(amb, true) == torsion_pairs_from_finest(amb, true));
    }
}

TEST_CASE("torsion pairs in a rank n tube number C(2n, n)", "[torsion][property]") {
    const std::vector<std::size_t> binom{2, 6, 20, 70};
    for (int n = 1; n <= 4; ++n) {
        auto amb = make_tube_ambient(n);
        auto brute = enumerate_torsion_pairs(amb);
        auto rule = pairs_of(classify_tube_torsion_pairs(amb));
        sort_unique(rule);
        INFO("n=" << n);
        CHECK(brute.size() == binom[n - 1]);
        CHECK(rule == brute);
        for (auto& tp : rule) CHECK(validate_torsion_pair(amb, tp).valid);
        auto up = classify_tube_torsion_pairs(amb, true);
        int ray = 0, coray = 0;
        std::size_t total = 0;
        for (auto& c : up) {
            ray += c.kind == "ray";
            coray += c.kind == "coray";
            total += tau_orbit_size(amb, c.tp);
        }
        CHECK(total == brute.size());
        CHECK(ray == coray);
    }
}

TEST_CASE("ray pairs avoid a simple in T, coray pairs in F", "[torsion]") {
    for (int n : {2, 3}) {
        auto amb = make_tube_ambient(n);
        for (auto& c : classify_tube_torsion_pairs(amb, true)) {
            if (c.kind == "trivial") continue;
            bits side = c.kind == "ray" ? c.tp.T : c.tp.F;
            bool avoids = false;
            for (int j = 0; j < n; ++j) {
                bool has = false;
                for_each_bit(side, [&](int x) {
                    auto so = amb.scope[amb.carrier_scope[x]];
                    int t = so.length, top = x % n;
                    if (tube::has_factor(tube::make(n, top, t), j)) has = true;
                });
                avoids = avoids || !has;
            }
            CHECK(avoids);
        }
    }
}

TEST_CASE("tau maps torsion pairs to torsion pairs", "[torsion][property]") {
    auto amb = make_tube_ambient(3);
    auto all = enumerate_torsion_pairs(amb);
    auto set = as_set(all);
    for (auto& tp : all) {
        auto t = tau_apply(amb, tp, 1);
        CHECK(set.count({t.T, t.F}));
        CHECK(tau_orbit_size(amb, tp) * static_cast<int>(std::count_if(all.begin(), all.end(), [&](const torsion_pair& o) {
                  return tau_canonical(amb, o) == tau_canonical(amb, tp);
              })) == tau_orbit_size(amb, tp) * tau_orbit_size(amb, tp));
    }
    CHECK(dedupe_tau(amb, all).size() == 8);
}

TEST_CASE("torsion validation finds Hom witnesses and escapes", "[torsion]") {
    auto amb = make_an_ambient(2);
    auto s = [&](std::vector<std::string> v) { return closure(amb, io::resolve_set(amb, v)); };
    auto r = validate_torsion_pair(amb, {s({"P_1"}), s({"S_1"})});
    CHECK_FALSE(r.valid);
    CHECK_FALSE(r.hom_witnesses.empty());
    r = validate_torsion_pair(amb, {s({"S_2"}), s({"P_1"})});
    CHECK_FALSE(r.valid);
    r = validate_torsion_pair(amb, {s({"S_1"}), s({"S_2"})});
    CHECK_FALSE(r.valid);
    CHECK_FALSE(r.decomposition_failures.empty());
    CHECK_THROWS_AS(validate_torsion_pair(amb, {bit(9), 0}), precondition_error);
    CHECK(is_trivial(amb, {0, amb.full()}));
    CHECK_FALSE(is_trivial(amb, {s({"S_1"}), s({"S_2", "P_1"})}));
}

TEST_CASE("arbitrary down-closed cuts give torsion pairs", "[torsion][property]") {
    auto amb = make_an_ambient(3);
    for (auto& sd : enumerate_valid(amb))
        for (std::size_t k = 0; k <= sd.size(); ++k) {
            std::set<std::size_t> cut;
            for (std::size_t i = 0; i < k; ++i) cut.insert(i);
            CHECK(validate_torsion_pair(amb, cut_torsion_pair(amb, sd, cut)).valid);
        }
    auto sd = enumerate_finest(amb).front();
    CHECK_THROWS_AS(cut_torsion_pair(amb, sd, {1}), precondition_error);
    CHECK_THROWS_AS(cut_torsion_pair(amb, sd, {0, 9}), precondition_error);
}

TEST_CASE("pieces of finest data are cut out by perpendiculars", "[torsion][property]") {
    for (std::string spec : {"an:3", "tube:3"}) {
        auto amb = io::parse_ambient(spec);
        for (auto& sd : enumerate_finest(amb))
            for (std::size_t i = 0; i < sd.size(); ++i) CHECK((sd.pieces[i] & ~perp_shape(amb, sd, i)) == 0);
    }
}

TEST_CASE("classifier needs a tube", "[torsion]") {
    CHECK_THROWS_AS(classify_tube_torsion_pairs(make_an_ambient(3)), precondition_error);
}
