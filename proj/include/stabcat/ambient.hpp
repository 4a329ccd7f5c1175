#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "stabcat/errors.hpp"
#include "stabcat/interval.hpp"
#include "stabcat/tube.hpp"

namespace stabcat {

using bits = std::uint64_t;
inline constexpr std::size_t max_carrier = 64;

inline bool test_bit(bits b, int i) { return (b >> i) & 1u; }
inline bits bit(int i) { return bits{1} << i; }
inline int popcount(bits b) { return std::popcount(b); }

template <class F>
inline void for_each_bit(bits b, F&& f) {
    while (b) {
        int i = std::countr_zero(b);
        f(i);
        b &= b - 1;
    }
}

// A proper short exact sequence 0 -> sub -> X -> quot -> 0, both sides given
// as multisets of scope indices.
struct decomposition {
    std::vector<int> sub;
    std::vector<int> quot;
};

// Objects whose HN filtrations are computed. For tubes this includes real
// lengths beyond the carrier; membership always goes through `rep`.
struct scope_object {
    std::string name;
    int rep = -1;
    int length = 0;
    bool checked = true;
    std::vector<decomposition> decomps;
};

struct ambient {
    std::string spec;
    std::string family;
    int rank = 0;
    bool windowed = false;

    std::vector<std::string> carrier;
    std::vector<bits> hom_to;
    std::vector<bits> hom_from;
    std::vector<std::vector<std::vector<int>>> middle;
    std::vector<bits> middle_union;
    std::vector<scope_object> scope;
    std::vector<int> carrier_scope;
    std::vector<int> tau;
    std::map<std::string, int> index;
    std::map<std::string, int> scope_index;

    // windowed models only
    int lo = 0, hi = 0;
    std::vector<std::string> points;
    bits checked = 0;  // carrier objects inside the window

    std::size_t size() const { return carrier.size(); }
    bits full() const { return size() == 64 ? ~bits{0} : (bit(static_cast<int>(size())) - 1); }
    bool hom(int i, int j) const { return test_bit(hom_to[i], j); }

    const std::vector<std::vector<int>>& mid(int a, int b) const { return middle[a * size() + b]; }

    int find(const std::string& d) const {
        auto it = index.find(d);
        if (it == index.end()) throw precondition_error("'" + d + "' is not in the carrier of " + spec);
        return it->second;
    }
    int find_scope(const std::string& d) const {
        auto it = scope_index.find(d);
        if (it == scope_index.end()) throw precondition_error("'" + d + "' is outside the scope of " + spec);
        return it->second;
    }

    std::vector<std::string> names(bits b) const {
        std::vector<std::string> out;
        for_each_bit(b, [&](int i) { out.push_back(carrier[i]); });
        return out;
    }

    bits tau_apply(bits b, int k) const {
        if (tau.empty()) return b;
        bits out = b;
        for (int s = 0; s < k; ++s) {
            bits next = 0;
            for_each_bit(out, [&](int i) { next |= bit(tau[i]); });
            out = next;
        }
        return out;
    }
    int tau_period() const {
        if (tau.empty()) return 1;
        for (int k = 1; k <= static_cast<int>(size()) + 1; ++k) {
            bool id = true;
            for (std::size_t i = 0; i < size() && id; ++i) {
                int x = static_cast<int>(i);
                for (int s = 0; s < k; ++s) x = tau[x];
                id = x == static_cast<int>(i);
            }
            if (id) return k;
        }
        return 1;
    }
};

// Fills hom tables and middle terms from predicates over carrier indices,
// then indexes names. Scope must already be populated.
inline void finish_ambient(ambient& amb, const std::function<bool(int, int)>& hom,
                           const std::function<std::vector<std::vector<int>>(int, int)>& mid) {
    const std::size_t n = amb.carrier.size();
    if (n > max_carrier)
        throw precondition_error("carrier of " + amb.spec + " has " + std::to_string(n) + " objects, above " +
                                 std::to_string(max_carrier));
    amb.hom_to.assign(n, 0);
    amb.hom_from.assign(n, 0);
    amb.middle.assign(n * n, {});
    amb.middle_union.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        amb.index[amb.carrier[i]] = static_cast<int>(i);
        for (std::size_t j = 0; j < n; ++j) {
            if (hom(static_cast<int>(i), static_cast<int>(j))) {
                amb.hom_to[i] |= bit(static_cast<int>(j));
                amb.hom_from[j] |= bit(static_cast<int>(i));
            }
            auto ms = mid(static_cast<int>(i), static_cast<int>(j));
            for (auto& m : ms) {
                std::sort(m.begin(), m.end());
                for (int x : m) amb.middle_union[i * n + j] |= bit(x);
            }
            std::sort(ms.begin(), ms.end());
            ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
            amb.middle[i * n + j] = std::move(ms);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!amb.hom(static_cast<int>(i), static_cast<int>(i)))
            throw internal_error("identity morphism missing for " + amb.carrier[i]);
    amb.carrier_scope.assign(n, -1);
    for (std::size_t s = 0; s < amb.scope.size(); ++s) {
        amb.scope_index[amb.scope[s].name] = static_cast<int>(s);
        int r = amb.scope[s].rep;
        if (r >= 0 && amb.carrier[r] == amb.scope[s].name) {
            amb.carrier_scope[r] = static_cast<int>(s);
            if (amb.scope[s].checked) amb.checked |= bit(r);
        }
    }
}

// Rank n tube in representative space: tops 0..n-1, lengths 1..2n.
inline ambient make_tube_ambient(int n) {
    if (n < 1) throw precondition_error("tube rank must be positive");
    ambient amb;
    amb.spec = "tube:" + std::to_string(n);
    amb.family = "tube";
    amb.rank = n;
    std::vector<tube::indec> reps;
    for (int t = 1; t <= 2 * n; ++t)
        for (int j = 0; j < n; ++j) reps.push_back(tube::make(n, j, t));
    auto rep_index = [n](const tube::indec& x) {
        tube::indec r = tube::truncate_rep(x);
        return (r.t - 1) * n + r.j;
    };
    for (auto& r : reps) amb.carrier.push_back(tube::to_string(r));
    for (auto& r : reps) amb.tau.push_back(rep_index(tube::tau(r)));

    // real lengths up to 3n for HN checks
    std::map<std::pair<int, int>, int> sidx;
    for (int t = 1; t <= 3 * n; ++t)
        for (int j = 0; j < n; ++j) {
            sidx[{j, t}] = static_cast<int>(amb.scope.size());
            scope_object so;
            so.name = tube::to_string(tube::make(n, j, t));
            so.rep = rep_index(tube::make(n, j, t));
            so.length = t;
            amb.scope.push_back(so);
        }
    for (int t = 1; t <= 3 * n; ++t)
        for (int j = 0; j < n; ++j) {
            auto& so = amb.scope[sidx[{j, t}]];
            for (int r = 1; r < t; ++r) {
                int subj = tube::mod(static_cast<long long>(j) - t + r, n);
                so.decomps.push_back({{sidx[{subj, r}]}, {sidx[{j, t - r}]}});
            }
        }

    auto lifts = [n](int t) {
        std::vector<int> out{t};
        if (t > n) {
            out.push_back(t + n);
            out.push_back(t + 2 * n);
        }
        return out;
    };
    finish_ambient(
        amb, [&](int a, int b) { return tube::hom_nonzero(reps[a], reps[b]); },
        [&](int a, int b) {
            std::vector<std::vector<int>> out;
            for (int la : lifts(reps[a].t))
                for (int lb : lifts(reps[b].t)) {
                    auto ms = tube::middle_terms(tube::make(n, reps[a].j, la), tube::make(n, reps[b].j, lb));
                    for (auto& m : ms) {
                        std::vector<int> v;
                        for (auto& x : m) v.push_back(rep_index(x));
                        std::sort(v.begin(), v.end());
                        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
                    }
                }
            return out;
        });
    return amb;
}

// Real lengths 1..maxlen with no representative identification; only
// extensions whose total length stays within maxlen are recorded.
inline ambient make_truncated_tube_ambient(int n, int maxlen) {
    if (n < 1 || maxlen < 1) throw precondition_error("truncated tube needs positive rank and length");
    ambient amb;
    amb.spec = "tube:" + std::to_string(n) + ":maxlen=" + std::to_string(maxlen);
    amb.family = "tube-truncated";
    amb.rank = n;
    std::vector<tube::indec> objs;
    for (int t = 1; t <= maxlen; ++t)
        for (int j = 0; j < n; ++j) objs.push_back(tube::make(n, j, t));
    auto idx = [n](const tube::indec& x) { return (x.t - 1) * n + x.j; };
    for (auto& x : objs) {
        amb.carrier.push_back(tube::to_string(x));
        amb.tau.push_back(idx(tube::tau(x)));
        scope_object so;
        so.name = amb.carrier.back();
        so.rep = idx(x);
        so.length = x.t;
        amb.scope.push_back(so);
    }
    finish_ambient(
        amb, [&](int a, int b) { return tube::hom_nonzero(objs[a], objs[b]); },
        [&](int a, int b) {
            std::vector<std::vector<int>> out;
            if (objs[a].t + objs[b].t > maxlen) return out;
            for (auto& m : tube::middle_terms(objs[a], objs[b])) {
                std::vector<int> v;
                for (auto& x : m) v.push_back(idx(x));
                out.push_back(v);
            }
            return out;
        });
    return amb;
}

// mod-A_n for the linear orientation; every interval module is uniserial.
inline ambient make_an_ambient(int n) {
    ambient amb;
    amb.spec = "an:" + std::to_string(n);
    amb.family = "an";
    amb.rank = n;
    auto mods = interval::all_modules(n);
    std::map<std::pair<int, int>, int> idx;
    for (std::size_t i = 0; i < mods.size(); ++i) {
        amb.carrier.push_back(interval::to_string(mods[i]));
        idx[{mods[i].a, mods[i].b}] = static_cast<int>(i);
    }
    for (std::size_t i = 0; i < mods.size(); ++i) {
        scope_object so;
        so.name = amb.carrier[i];
        so.rep = static_cast<int>(i);
        so.length = interval::length(mods[i]);
        for (int c = mods[i].a + 1; c <= mods[i].b; ++c)
            so.decomps.push_back({{idx[{c, mods[i].b}]}, {idx[{mods[i].a, c - 1}]}});
        amb.scope.push_back(so);
    }
    finish_ambient(
        amb, [&](int a, int b) { return interval::hom_nonzero(mods[a], mods[b]); },
        [&](int a, int b) {
            std::vector<std::vector<int>> out;
            for (auto& m : interval::middle_terms(mods[a], mods[b])) {
                std::vector<int> v;
                for (auto& x : m) v.push_back(idx[{x.a, x.b}]);
                out.push_back(v);
            }
            return out;
        });
    return amb;
}

} // namespace stabcat
