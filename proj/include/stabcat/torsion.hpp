#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "stabcat/ambient.hpp"
#include "stabcat/interval.hpp"
#include "stabcat/stability.hpp"
#include "stabcat/subcat.hpp"

namespace stabcat {

struct torsion_report {
    bool valid = true;
    bool T_is_left_perp = true;
    bool F_is_right_perp = true;
    std::vector<std::pair<std::string, std::string>> hom_witnesses;
    std::vector<std::string> decomposition_failures;
    std::vector<std::string> quotient_escapes;  // quotients of T objects outside T
    std::vector<std::string> sub_escapes;       // subobjects of F objects outside F
};

inline torsion_report validate_torsion_pair(const ambient& amb, const torsion_pair& tp) {
    if ((tp.T | tp.F) & ~amb.full()) throw precondition_error("torsion pair leaves the carrier of " + amb.spec);
    torsion_report r;
    for_each_bit(tp.T, [&](int x) {
        for_each_bit(amb.hom_to[x] & tp.F, [&](int y) { r.hom_witnesses.push_back({amb.carrier[x], amb.carrier[y]}); });
    });
    // outside the window the carrier is truncated, so perps are compared inside it
    const bits chk = amb.checked;
    r.T_is_left_perp = (left_perp(amb, tp.F) & chk) == (tp.T & chk);
    r.F_is_right_perp = (right_perp(amb, tp.T) & chk) == (tp.F & chk);
    auto all_in = [&](const std::vector<int>& v, bits s) {
        return std::all_of(v.begin(), v.end(), [&](int k) { return test_bit(s, amb.scope[k].rep); });
    };
    for (auto& so : amb.scope) {
        if (!so.checked) continue;
        bool inT = test_bit(tp.T, so.rep), inF = test_bit(tp.F, so.rep);
        bool qe = false, se = false;
        for (auto& d : so.decomps) {
            qe = qe || (inT && !all_in(d.quot, tp.T));
            se = se || (inF && !all_in(d.sub, tp.F));
        }
        if (qe) r.quotient_escapes.push_back(so.name);
        if (se) r.sub_escapes.push_back(so.name);
        if (inT || inF) continue;
        bool ok = std::any_of(so.decomps.begin(), so.decomps.end(),
                              [&](const decomposition& d) { return all_in(d.sub, tp.T) && all_in(d.quot, tp.F); });
        if (!ok) r.decomposition_failures.push_back(so.name);
    }
    r.valid = r.hom_witnesses.empty() && r.T_is_left_perp && r.F_is_right_perp && r.decomposition_failures.empty() &&
              r.quotient_escapes.empty() && r.sub_escapes.empty();
    return r;
}

inline bool is_trivial(const ambient& amb, const torsion_pair& tp) {
    return (tp.T == 0 && tp.F == amb.full()) || (tp.T == amb.full() && tp.F == 0);
}

inline std::vector<int> members(bits b) {
    std::vector<int> v;
    for_each_bit(b, [&](int i) { v.push_back(i); });
    return v;
}

inline bool canonical_less(const torsion_pair& a, const torsion_pair& b) {
    if (popcount(a.T) != popcount(b.T)) return popcount(a.T) < popcount(b.T);
    return members(a.T) < members(b.T);
}

inline void sort_unique(std::vector<torsion_pair>& v) {
    std::sort(v.begin(), v.end(), canonical_less);
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

inline torsion_pair tau_apply(const ambient& amb, const torsion_pair& tp, int k) {
    return {amb.tau_apply(tp.T, k), amb.tau_apply(tp.F, k)};
}

inline torsion_pair tau_canonical(const ambient& amb, const torsion_pair& tp) {
    torsion_pair best = tp;
    for (int k = 1; k < amb.tau_period(); ++k) {
        auto c = tau_apply(amb, tp, k);
        if (canonical_less(c, best)) best = c;
    }
    return best;
}

inline int tau_orbit_size(const ambient& amb, const torsion_pair& tp) {
    std::set<std::pair<bits, bits>> seen;
    for (int k = 0; k < amb.tau_period(); ++k) {
        auto c = tau_apply(amb, tp, k);
        seen.insert({c.T, c.F});
    }
    return static_cast<int>(seen.size());
}

inline std::vector<torsion_pair> dedupe_tau(const ambient& amb, const std::vector<torsion_pair>& in) {
    std::vector<torsion_pair> out;
    for (auto& tp : in) out.push_back(tau_canonical(amb, tp));
    sort_unique(out);
    return out;
}

inline std::vector<torsion_pair> non_trivial(const ambient& amb, const std::vector<torsion_pair>& in) {
    std::vector<torsion_pair> out;
    for (auto& tp : in)
        if (!is_trivial(amb, tp)) out.push_back(tp);
    return out;
}

inline std::vector<torsion_pair> enumerate_torsion_pairs(const ambient& amb, bool upto_tau = false, int jobs = 1) {
    auto closed = enumerate_ext_closed(amb, enum_strategy::automatic, jobs);
    auto found = parallel_map(closed.size(), jobs, [&](std::size_t k) -> std::optional<torsion_pair> {
        bits T = closed[k];
        bits F = right_perp(amb, T);
        if (left_perp(amb, F) != T) return std::nullopt;
        torsion_pair tp{T, F};
        if (!validate_torsion_pair(amb, tp).valid) return std::nullopt;
        return tp;
    });
    std::vector<torsion_pair> out;
    for (auto& f : found)
        if (f) out.push_back(*f);
    sort_unique(out);
    return upto_tau ? dedupe_tau(amb, out) : out;
}

// Ray pairs come from torsion classes of the A_{n-1} chain avoiding one
// simple, coray pairs from torsionfree classes of the tau-shifted chain.
struct classified_pair {
    torsion_pair tp;
    std::string kind;  // "ray", "coray" or "trivial"
};

inline std::vector<classified_pair> classify_tube_torsion_pairs(const ambient& tube_amb, bool upto_tau = false) {
    if (tube_amb.family != "tube") throw precondition_error("classifier needs a tube ambient, got " + tube_amb.spec);
    const int n = tube_amb.rank;
    std::vector<classified_pair> out;
    out.push_back({{0, tube_amb.full()}, "trivial"});
    out.push_back({{tube_amb.full(), 0}, "trivial"});
    if (n >= 2) {
        ambient a = make_an_ambient(n - 1);
        auto mods = interval::all_modules(n - 1);
        std::vector<interval::module> by_index(a.size());
        for (auto& m : mods) by_index[a.find(interval::to_string(m))] = m;
        auto embed = [&](bits s, int shift) {
            bits out_bits = 0;
            for_each_bit(s, [&](int i) {
                out_bits |= bit(tube_amb.find(tube::to_string(interval::embed_in_tube(by_index[i], n, shift))));
            });
            return out_bits;
        };
        for (auto& ap : enumerate_torsion_pairs(a)) {
            bits T = closure(tube_amb, embed(ap.T, 0));
            bits F = closure(tube_amb, embed(ap.F, 1));
            if (T) out.push_back({{T, right_perp(tube_amb, T)}, "ray"});
            if (F) out.push_back({{left_perp(tube_amb, F), F}, "coray"});
        }
    }
    std::vector<classified_pair> all;
    for (auto& c : out)
        for (int k = 0; k < tube_amb.tau_period(); ++k)
            all.push_back({upto_tau ? tau_canonical(tube_amb, c.tp) : tau_apply(tube_amb, c.tp, k), c.kind});
    for (auto& c : all)
        if (is_trivial(tube_amb, c.tp)) c.kind = "trivial";
    std::sort(all.begin(), all.end(), [](const classified_pair& x, const classified_pair& y) {
        if (x.tp == y.tp) return x.kind < y.kind;
        return canonical_less(x.tp, y.tp);
    });
    all.erase(std::unique(all.begin(), all.end(),
                          [](const classified_pair& x, const classified_pair& y) { return x.tp == y.tp; }),
              all.end());
    return all;
}

inline std::vector<torsion_pair> pairs_of(const std::vector<classified_pair>& v) {
    std::vector<torsion_pair> out;
    for (auto& c : v) out.push_back(c.tp);
    return out;
}

inline std::vector<torsion_pair> torsion_pairs_from_finest(const ambient& amb, bool upto_tau = false, int jobs = 1) {
    std::vector<torsion_pair> out;
    for (auto& sd : enumerate_finest(amb, {false, true, jobs}))
        for (std::size_t k = 0; k <= sd.size(); ++k) out.push_back(cut_below(amb, sd, k));
    sort_unique(out);
    return upto_tau ? dedupe_tau(amb, out) : out;
}

} // namespace stabcat
