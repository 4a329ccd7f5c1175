#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "stabcat/ambient.hpp"
#include "stabcat/oracle.hpp"
#include "stabcat/parallel.hpp"
#include "stabcat/subcat.hpp"
#include "stabcat/tube.hpp"
#include "stabcat/windowed.hpp"

// Rule-versus-oracle sweeps shared by the CLI and the acceptance binary.
namespace stabcat::oracle {

inline std::string join_names(const std::vector<std::string>& v) {
    std::string s;
    for (auto& x : v) s += (s.empty() ? "" : ", ") + x;
    return s;
}

struct tally {
    long checks = 0, mismatches = 0;
    std::vector<std::string> examples;
    void add(bool ok, const std::string& what) {
        ++checks;
        if (!ok) {
            ++mismatches;
            if (examples.size() < 10) examples.push_back(what);
        }
    }
};

inline std::vector<tube::indec> tube_objects(int n, int maxlen) {
    std::vector<tube::indec> out;
    for (int t = 1; t <= maxlen; ++t)
        for (int j = 0; j < n; ++j) out.push_back(tube::make(n, j, t));
    return out;
}

inline std::set<std::vector<std::string>> as_names(const oracle::catalogue& c, const std::vector<std::vector<int>>& ms) {
    std::set<std::vector<std::string>> out;
    for (auto& m : ms) {
        std::vector<std::string> v;
        for (int i : m) v.push_back(c.names[i]);
        std::sort(v.begin(), v.end());
        out.insert(v);
    }
    return out;
}

inline tally suite_hom(int p, int max_n, int jobs = 1) {
    tally t;
    oracle::field F(p);
    for (int n = 1; n <= max_n; ++n) {
        auto objs = tube_objects(n, 2 * n);
        std::vector<oracle::rep> reps;
        for (auto& x : objs) reps.push_back(oracle::build_cyclic(n, x.j, x.t));
        auto rows = parallel_map(objs.size(), jobs, [&](std::size_t a) {
            std::vector<std::string> bad;
            for (std::size_t b = 0; b < objs.size(); ++b)
                if (tube::hom_nonzero(objs[a], objs[b]) != (oracle::hom_dim(F, reps[a], reps[b]) > 0))
                    bad.push_back(tube::to_string(objs[a]) + " -> " + tube::to_string(objs[b]));
            return bad;
        });
        for (auto& r : rows) {
            t.checks += static_cast<long>(objs.size() - r.size());
            for (auto& b : r) t.add(false, "Hom " + b);
        }
    }
    return t;
}

inline tally suite_middle(int p, int max_n, int bound) {
    tally t;
    oracle::field F(p);
    for (int n = 1; n <= max_n; ++n) {
        auto cat = oracle::tube_catalogue(F, n, bound);
        auto objs = tube_objects(n, bound);
        for (std::size_t a = 0; a < objs.size(); ++a)
            for (std::size_t b = 0; b < objs.size(); ++b) {
                if (objs[a].t + objs[b].t > bound) continue;
                auto brute = as_names(cat, oracle::middle_terms_bruteforce(cat, static_cast<int>(a), static_cast<int>(b)));
                std::set<std::vector<std::string>> rule;
                for (auto& m : tube::middle_terms(objs[a], objs[b])) {
                    std::vector<std::string> v;
                    for (auto& x : m) v.push_back(tube::to_string(x));
                    std::sort(v.begin(), v.end());
                    rule.insert(v);
                }
                t.add(brute == rule, "middle terms " + cat.names[a] + ", " + cat.names[b]);
            }
    }
    return t;
}

inline tally suite_closure(int p, const std::vector<int>& ranks, int bound) {
    tally t;
    oracle::field F(p);
    for (int n : ranks) {
        auto table = oracle::build_ext_table(F, n, bound);
        ambient amb = make_truncated_tube_ambient(n, bound);
        const int N = static_cast<int>(amb.size());
        t.add(closure(amb, 0) == oracle::closure_fixpoint(table, 0), "empty generators on rank " + std::to_string(n));
        for (int a = 0; a < N; ++a)
            for (int b = a; b < N; ++b) {
                bits g = bit(a) | bit(b);
                t.add(closure(amb, g) == oracle::closure_fixpoint(table, g),
                      "closure of " + join_names(amb.names(g)) + " on rank " + std::to_string(n));
            }
    }
    return t;
}

inline tally suite_ar(int p, int max_n, int maxlen) {
    tally t;
    oracle::field F(p);
    for (int n = 1; n <= max_n; ++n) {
        auto objs = tube_objects(n, maxlen);
        for (auto& a : objs)
            for (auto& b : objs) {
                auto A = oracle::build_cyclic(n, a.j, a.t), B = oracle::build_cyclic(n, b.j, b.t);
                auto tb = tube::tau(b);
                bool ext = oracle::ext_dim(F, B, A) > 0;
                bool hom = oracle::hom_dim(F, A, oracle::build_cyclic(n, tb.j, tb.t)) > 0;
                bool rule = !tube::middle_terms(a, b).empty();
                t.add(ext == hom && ext == rule, "Ext/Hom duality " + tube::to_string(a) + ", " + tube::to_string(b));
            }
    }
    return t;
}

inline tally suite_fields(int max_n, int maxlen) {
    tally t;
    for (int n = 1; n <= max_n; ++n) {
        auto objs = tube_objects(n, maxlen);
        std::vector<oracle::catalogue> cats;
        for (int p : {2, 3, 5}) cats.push_back(oracle::tube_catalogue(oracle::field(p), n, maxlen));
        for (std::size_t a = 0; a < objs.size(); ++a)
            for (std::size_t b = 0; b < objs.size(); ++b) {
                std::vector<int> homs;
                std::vector<std::set<std::vector<std::string>>> mids;
                for (auto& c : cats) {
                    homs.push_back(oracle::hom_dim(c.F, c.reps[a], c.reps[b]));
                    if (objs[a].t + objs[b].t <= maxlen)
                        mids.push_back(as_names(c, oracle::middle_terms_bruteforce(c, static_cast<int>(a), static_cast<int>(b))));
                }
                bool ok = homs[0] == homs[1] && homs[1] == homs[2];
                if (!mids.empty()) ok = ok && mids[0] == mids[1] && mids[1] == mids[2];
                t.add(ok, "field dependence at " + cats[0].names[a] + ", " + cats[0].names[b]);
            }
    }
    return t;
}

inline tally suite_kronecker(int p) {
    tally t;
    oracle::field F(p);
    auto cat = oracle::kronecker_catalogue(F, 4, 4, 3);
    ambient amb = windowed::make_kronecker_ambient(4, 4, 3);
    for (std::size_t a = 0; a < cat.reps.size(); ++a)
        for (std::size_t b = 0; b < cat.reps.size(); ++b) {
            int ia = amb.find(cat.names[a]), ib = amb.find(cat.names[b]);
            t.add((oracle::hom_dim(F, cat.reps[a], cat.reps[b]) > 0) == amb.hom(ia, ib),
                  "Hom " + cat.names[a] + " -> " + cat.names[b]);
            if (cat.reps[a].total() + cat.reps[b].total() > 7) continue;
            std::set<std::vector<int>> brute, model;
            for (auto& m : oracle::middle_terms_bruteforce(cat, static_cast<int>(a), static_cast<int>(b))) {
                std::vector<int> v;
                for (int i : m) v.push_back(amb.find(cat.names[i]));
                std::sort(v.begin(), v.end());
                brute.insert(v);
            }
            for (auto& m : amb.mid(ia, ib)) model.insert(m);
            t.add(brute == model, "middle terms " + cat.names[a] + ", " + cat.names[b]);
        }
    return t;
}

} // namespace stabcat::oracle
