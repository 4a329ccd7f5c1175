#include "catch_amalgamated.hpp"

#include <random>

#include "stabcat/ambient.hpp"
#include "stabcat/oracle.hpp"
#include "stabcat/subcat.hpp"

using namespace stabcat;

namespace {

std::vector<ambient> small_ambients() {
    return {make_an_ambient(2), make_an_ambient(3), make_an_ambient(4), make_tube_ambient(1), make_tube_ambient(2),
            make_tube_ambient(3), make_truncated_tube_ambient(2, 4)};
}

bits random_subset(std::mt19937& rng, const ambient& amb, double p) {
    std::bernoulli_distribution coin(p);
    bits b = 0;
    for (std::size_t i = 0; i < amb.size(); ++i)
        if (coin(rng)) b |= bit(static_cast<int>(i));
    return b;
}

// closure by repeatedly scanning every recorded extension, no shortcuts
bits naive_closure(const ambient& amb, bits gens) {
    const std::size_t n = amb.size();
    bits cur = gens;
    for (bool grew = true; grew;) {
        grew = false;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                if (!test_bit(cur, static_cast<int>(a)) || !test_bit(cur, static_cast<int>(b))) continue;
                for (auto& m : amb.middle[a * n + b])
                    for (int x : m)
                        if (!test_bit(cur, x)) {
                            cur |= bit(x);
                            grew = true;
                        }
            }
    }
    return cur;
}

} // namespace

TEST_CASE("ambient carriers have the expected sizes", "[ambient]") {
    CHECK(make_an_ambient(3).size() == 6);
    CHECK(make_tube_ambient(3).size() == 18);
    CHECK(make_tube_ambient(3).scope.size() == 27);
    CHECK(make_truncated_tube_ambient(2, 6).size() == 12);
    CHECK_THROWS_AS(make_tube_ambient(0), precondition_error);
    CHECK_THROWS_AS(make_tube_ambient(40), precondition_error);
    auto t = make_tube_ambient(2);
    CHECK(t.find("S1^(3)@2") == 5);
    CHECK(t.scope[t.find_scope("S1^(5)@2")].rep == t.find("S1^(3)@2"));
}

TEST_CASE("tau on tube carriers has period n", "[ambient]") {
    for (int n = 1; n <= 4; ++n) {
        auto t = make_tube_ambient(n);
        CHECK(t.tau_period() == n);
        CHECK(t.tau_apply(t.full(), 1) == t.full());
    }
    CHECK(make_an_ambient(3).tau_period() == 1);
}

TEST_CASE("closure is extensive, monotone and idempotent", "[subcat][property]") {
    std::mt19937 rng(11);
    for (auto& amb : small_ambients())
        for (int trial = 0; trial < 200; ++trial) {
            bits g = random_subset(rng, amb, 0.15), h = g | random_subset(rng, amb, 0.1);
            bits cg = closure(amb, g);
            INFO(amb.spec);
            CHECK((cg & g) == g);
            CHECK(closure(amb, cg) == cg);
            CHECK(is_closed(amb, cg));
            CHECK((closure(amb, h) & cg) == cg);
            CHECK(cg == naive_closure(amb, g));
        }
}

TEST_CASE("closure rejects generators outside the carrier", "[subcat]") {
    auto amb = make_an_ambient(2);
    CHECK_THROWS_AS(closure(amb, bit(5)), precondition_error);
}

TEST_CASE("perpendiculars form a Galois connection", "[subcat][property]") {
    std::mt19937 rng(5);
    for (auto& amb : small_ambients())
        for (int trial = 0; trial < 200; ++trial) {
            bits s = random_subset(rng, amb, 0.2);
            bits r = right_perp(amb, s), l = left_perp(amb, s);
            INFO(amb.spec);
            CHECK(hom_vanishes(amb, s, r));
            CHECK(hom_vanishes(amb, l, s));
            CHECK(right_perp(amb, left_perp(amb, r)) == r);
            CHECK(left_perp(amb, right_perp(amb, l)) == l);
            CHECK(is_closed(amb, r));
            CHECK(is_closed(amb, l));
        }
}

TEST_CASE("Hom-connected sets", "[subcat]") {
    auto amb = make_an_ambient(2);
    int s1 = amb.find("M[1,1]@A2"), p = amb.find("M[1,2]@A2"), s2 = amb.find("M[2,2]@A2");
    CHECK(hom_connected(amb, bit(s1)));
    CHECK_FALSE(hom_connected(amb, bit(s1) | bit(p)));
    CHECK_FALSE(hom_connected(amb, bit(s1) | bit(s2)));
}

TEST_CASE("both enumeration strategies agree", "[subcat][property]") {
    for (auto& amb : {make_an_ambient(3), make_tube_ambient(2), make_truncated_tube_ambient(2, 5)}) {
        auto a = enumerate_ext_closed(amb, enum_strategy::filter_subsets, 1);
        auto b = enumerate_ext_closed(amb, enum_strategy::generate_closures, 1);
        auto c = enumerate_ext_closed(amb, enum_strategy::generate_closures, 4);
        auto d = enumerate_ext_closed(amb, enum_strategy::filter_subsets, 4);
        INFO(amb.spec);
        CHECK(a == b);
        CHECK(b == c);
        CHECK(a == d);
        for (bits s : a) CHECK(is_closed(amb, s));
    }
}

TEST_CASE("closed subcategory counts", "[subcat]") {
    // A2: every subset of {S_1, P_1, S_2} except {S_1, S_2}
    CHECK(enumerate_ext_closed(make_an_ambient(2)).size() == 7);
    // T1 on representatives: lengths >= 2 share one representative, so only
    // the empty set and the whole carrier are closed
    CHECK(enumerate_ext_closed(make_tube_ambient(1)).size() == 2);
}

TEST_CASE("enumeration bound is enforced", "[subcat]") {
    auto saved = enumeration_bound();
    enumeration_bound() = 4;
    CHECK_THROWS_AS(enumerate_ext_closed(make_an_ambient(3)), precondition_error);
    enumeration_bound() = saved;
}

TEST_CASE("truncated closure agrees with the cocycle oracle on triples", "[subcat][oracle]") {
    oracle::field F(2);
    const int n = 2, bound = 5;
    auto table = oracle::build_ext_table(F, n, bound);
    auto amb = make_truncated_tube_ambient(n, bound);
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(amb.size()) - 1);
    for (int trial = 0; trial < 150; ++trial) {
        bits g = bit(pick(rng)) | bit(pick(rng)) | bit(pick(rng));
        INFO(oracle::closure_fixpoint(table, g));
        CHECK(closure(amb, g) == oracle::closure_fixpoint(table, g));
    }
}

TEST_CASE("representative closure contains the truncated closure", "[subcat][property]") {
    // every real object reached within length 6 has its representative in
    // the closure computed on representatives
    for (int n = 1; n <= 3; ++n) {
        auto rep = make_tube_ambient(n);
        auto real = make_truncated_tube_ambient(n, 6);
        for (std::size_t a = 0; a < rep.size(); ++a)
            for (std::size_t b = a; b < rep.size(); ++b) {
                bits gr = bit(static_cast<int>(a)) | bit(static_cast<int>(b));
                bits gt = bit(real.find(rep.carrier[a])) | bit(real.find(rep.carrier[b]));
                bits cr = closure(rep, gr);
                for_each_bit(closure(real, gt), [&](int x) {
                    auto t = tube::truncate_rep(tube::make(n, x % n, x / n + 1));
                    int r = rep.find(tube::to_string(t));
                    INFO(rep.spec << ": " << real.carrier[x] << " from " << rep.carrier[a] << ", " << rep.carrier[b]);
                    CHECK(test_bit(cr, r));
                });
            }
    }
}
