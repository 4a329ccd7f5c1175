#include "catch_amalgamated.hpp"

#include <map>
#include <random>

#include "stabcat/io.hpp"
#include "stabcat/stability.hpp"
#include "stabcat/torsion.hpp"

using namespace stabcat;

namespace {

std::vector<std::vector<std::string>> factors(const ambient& amb, const stability_data& sd, const std::string& x) {
    std::vector<std::vector<std::string>> out;
    for (auto& st : hn_filtration(amb, sd, x).steps) out.push_back(st.second);
    return out;
}

stability_data from_names(const ambient& amb, const std::vector<std::vector<std::string>>& pieces) {
    std::vector<bits> ps;
    for (auto& p : pieces) ps.push_back(closure(amb, io::resolve_set(amb, p)));
    return numbered(ps);
}

bool semistable(hn_solver& hn, int s) { return hn.filtrations(s).front().size() == 1; }

// merge phase i with phase i+1
stability_data merge(const ambient& amb, const stability_data& sd, std::size_t i) {
    stability_data out;
    for (std::size_t k = 0; k < sd.size(); ++k) {
        if (k == i + 1) continue;
        out.order.push_back(sd.order[k]);
        out.pieces.push_back(k == i ? closure(amb, sd.pieces[i] | sd.pieces[i + 1]) : sd.pieces[k]);
    }
    return out;
}

} // namespace

TEST_CASE("simples in increasing order on A3", "[stability]") {
    auto amb = make_an_ambient(3);
    auto sd = from_names(amb, {{"S_1"}, {"S_2"}, {"S_3"}});
    REQUIRE(is_valid(amb, sd));
    CHECK(is_finest(amb, sd).finest);
    CHECK(factors(amb, sd, "M[2,3]@A3") == std::vector<std::vector<std::string>>{{"M[3,3]@A3"}, {"M[2,2]@A3"}});
    CHECK(factors(amb, sd, "M[1,3]@A3") ==
          std::vector<std::vector<std::string>>{{"M[3,3]@A3"}, {"M[2,2]@A3"}, {"M[1,1]@A3"}});
    CHECK(factors(amb, sd, "M[1,2]@A3") == std::vector<std::vector<std::string>>{{"M[2,2]@A3"}, {"M[1,1]@A3"}});
    CHECK(factors(amb, sd, "M[2,2]@A3") == std::vector<std::vector<std::string>>{{"M[2,2]@A3"}});
}

TEST_CASE("validation reports each kind of failure", "[stability]") {
    auto amb = make_an_ambient(3);
    auto hom_bad = from_names(amb, {{"S_2"}, {"P_2"}});
    auto r = validate(amb, hom_bad);
    CHECK_FALSE(r.valid);
    CHECK_FALSE(r.hom_violations.empty());

    auto missing = from_names(amb, {{"S_1"}, {"S_3"}});
    r = validate(amb, missing);
    CHECK_FALSE(r.valid);
    CHECK_FALSE(r.hn_failures.empty());

    auto overlap = numbered({bit(0) | bit(1), bit(1)});
    CHECK_FALSE(validate(amb, overlap).overlaps.empty());

    stability_data unclosed = numbered({io::resolve_set(amb, {"S_1", "S_2"}), io::resolve_set(amb, {"S_3"})});
    CHECK_FALSE(validate(amb, unclosed).unclosed.empty());

    stability_data mism = numbered({bit(0)});
    mism.order.push_back(phase::integer(9));
    CHECK_THROWS_AS(validate(amb, mism), precondition_error);
    CHECK_THROWS_AS(hn_filtration(amb, missing, "M[2,3]@A3"), precondition_error);
}

TEST_CASE("tube validation scope reaches length 3n", "[stability]") {
    auto amb = make_tube_ambient(2);
    auto r = validate(amb, numbered({amb.full()}));
    CHECK(r.valid);
    CHECK(r.scope.find("3") == std::string::npos);  // "up to 6" for rank 2
    CHECK(r.scope.find("6") != std::string::npos);
    CHECK_FALSE(r.window_verified);
}

TEST_CASE("every valid datum has unique HN filtrations and valid cuts", "[stability][property]") {
    for (std::string spec : {"an:2", "an:3", "tube:2", "tube:3"}) {
        auto amb = io::parse_ambient(spec);
        for (auto& sd : enumerate_valid(amb)) {
            hn_solver hn(amb, sd);
            for (std::size_t s = 0; s < amb.scope.size(); ++s) CHECK(hn.filtrations(static_cast<int>(s)).size() == 1);
            for (std::size_t k = 0; k <= sd.size(); ++k) CHECK(validate_torsion_pair(amb, cut_below(amb, sd, k)).valid);
        }
    }
}

TEST_CASE("top and bottom HN factors bound semistable sub and quotient phases", "[stability][property]") {
    for (std::string spec : {"an:3", "tube:3"}) {
        auto amb = io::parse_ambient(spec);
        for (auto& sd : enumerate_valid(amb)) {
            hn_solver hn(amb, sd);
            for (std::size_t s = 0; s < amb.scope.size(); ++s) {
                auto& f = hn.filtrations(static_cast<int>(s)).front();
                int top = f.front().phase, bottom = f.back().phase;
                for (auto& d : amb.scope[s].decomps) {
                    if (d.sub.size() == 1 && semistable(hn, d.sub[0]))
                        CHECK(hn.filtrations(d.sub[0]).front().front().phase <= top);
                    if (d.quot.size() == 1 && semistable(hn, d.quot[0]))
                        CHECK(hn.filtrations(d.quot[0]).front().front().phase >= bottom);
                }
            }
        }
    }
}

// counts hold for finest data only; the one-piece datum makes everything semistable
TEST_CASE("semistable census on tubes under finest data", "[stability][property]") {
    for (int n : {2, 3}) {
        auto amb = make_tube_ambient(n);
        int increasing = 0;
        for (auto& sd : enumerate_finest(amb)) {
            hn_solver hn(amb, sd);
            std::map<int, int> f;
            for (std::size_t s = 0; s < amb.scope.size(); ++s)
                if (semistable(hn, static_cast<int>(s))) ++f[amb.scope[s].length];
            CHECK(f[1] == n);
            for (int t = 2; t <= 3 * n; ++t) {
                INFO("n=" << n << " t=" << t);
                if (t % n == 0) CHECK(f[t] == 1);
                else if (t < n) CHECK(f[t] <= n - t + 1);
                else CHECK(f[t] == 0);
            }
            // simples in strictly increasing phase S_0 < ... < S_{n-1}
            auto where = [&](int j) {
                int x = amb.find(tube::to_string(tube::make(n, j, 1)));
                for (std::size_t i = 0; i < sd.size(); ++i)
                    if (test_bit(sd.pieces[i], x)) return static_cast<int>(i);
                return -1;
            };
            bool inc = true;
            for (int j = 0; j + 1 < n; ++j) inc = inc && where(j) < where(j + 1);
            if (inc) {
                ++increasing;
                for (int t = 1; t <= n; ++t) CHECK(f[t] == n - t + 1);
            }
        }
        CHECK(increasing > 0);
    }
}

TEST_CASE("finest pieces on tubes are generated by one short object", "[stability][property]") {
    for (int n : {2, 3}) {
        auto amb = make_tube_ambient(n);
        for (auto& sd : enumerate_finest(amb)) {
            REQUIRE(is_valid(amb, sd));
            for (bits p : sd.pieces) {
                bool single = false;
                for_each_bit(p, [&](int x) {
                    if (x < n * n && closure(amb, bit(x)) == p) single = true;
                });
                CHECK(single);
            }
        }
    }
}

TEST_CASE("finest enumeration does not depend on jobs or pruning", "[stability][property]") {
    for (std::string spec : {"an:3", "tube:2", "tube:3"}) {
        auto amb = io::parse_ambient(spec);
        auto a = enumerate_finest(amb, {false, true, 1});
        auto b = enumerate_finest(amb, {false, true, 4});
        auto c = enumerate_finest(amb, {false, false, 2});
        INFO(spec);
        CHECK(a == b);
        CHECK(a.size() == c.size());
        for (auto& sd : c)
            CHECK(std::any_of(a.begin(), a.end(), [&](const stability_data& x) { return equivalent(x, sd); }));
    }
}

TEST_CASE("tau orbits of finest data on T2", "[stability]") {
    auto amb = make_tube_ambient(2);
    auto all = enumerate_finest(amb);
    auto up = enumerate_finest(amb, {true, true, 1});
    std::size_t total = 0;
    for (auto& sd : up) total += tau_orbit_size(amb, sd);
    CHECK(total == all.size());
    for (auto& sd : all)
        CHECK(std::count_if(up.begin(), up.end(), [&](const stability_data& u) { return tau_equivalent(amb, u, sd); }) == 1);
}

TEST_CASE("coarsening finest data stays valid and refines back", "[stability][property]") {
    std::mt19937 rng(17);
    for (std::string spec : {"an:3", "tube:2", "tube:3"}) {
        auto amb = io::parse_ambient(spec);
        for (auto& fine : enumerate_finest(amb)) {
            auto coarse = fine;
            for (int step = 0; step < 2 && coarse.size() > 1; ++step) {
                std::uniform_int_distribution<std::size_t> pick(0, coarse.size() - 2);
                coarse = merge(amb, coarse, pick(rng));
            }
            INFO(spec);
            REQUIRE(is_valid(amb, coarse));
            CHECK(is_coarser(amb, coarse, fine).has_value());
            auto back = refine_to_finest(amb, coarse);
            CHECK(is_valid(amb, back));
            CHECK(is_finest(amb, back).finest);
            CHECK(is_coarser(amb, coarse, back).has_value());
        }
    }
}

TEST_CASE("is_coarser rejects reordered and unrelated data", "[stability]") {
    auto amb = make_an_ambient(2);
    auto a = from_names(amb, {{"S_1"}, {"S_2"}});
    auto b = from_names(amb, {{"S_2"}, {"P_1"}, {"S_1"}});
    auto whole = numbered({amb.full()});
    CHECK_FALSE(is_coarser(amb, a, b).has_value());
    CHECK(is_coarser(amb, whole, a).has_value());
    CHECK(is_coarser(amb, whole, b).has_value());
    CHECK_FALSE(is_coarser(amb, a, whole).has_value());
    CHECK(is_coarser(amb, a, a).has_value());
}

TEST_CASE("split_phase preconditions", "[stability]") {
    auto amb = make_an_ambient(2);
    auto whole = numbered({amb.full()});
    CHECK_THROWS_AS(split_phase(amb, whole, 3, 0), precondition_error);
    auto one = from_names(amb, {{"S_1"}, {"S_2"}});
    CHECK_THROWS_AS(split_phase(amb, one, 0, io::resolve(amb, "S_2")), precondition_error);
    CHECK_THROWS_AS(split_phase(amb, one, 0, io::resolve(amb, "S_1")), precondition_error);
    auto s = split_phase(amb, whole, 0, io::resolve(amb, "S_1"));
    CHECK(is_valid(amb, s));
    CHECK(s.size() == 2);
}

TEST_CASE("empty phases are dropped before comparison", "[stability]") {
    auto amb = make_an_ambient(2);
    auto a = from_names(amb, {{"S_1"}, {"S_2"}});
    stability_data b = a;
    b.order.insert(b.order.begin() + 1, phase::rational(3, 2));
    b.pieces.insert(b.pieces.begin() + 1, 0);
    CHECK(equivalent(a, b));
    CHECK(canonicalize(b).size() == 2);
    CHECK(is_valid(amb, b));
}
