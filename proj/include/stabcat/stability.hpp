#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stabcat/ambient.hpp"
#include "stabcat/parallel.hpp"
#include "stabcat/phase_order.hpp"
#include "stabcat/subcat.hpp"

namespace stabcat {

// Phases listed in ascending order, with one closed subcategory each.
struct stability_data {
    std::vector<phase> order;
    std::vector<bits> pieces;

    std::size_t size() const { return pieces.size(); }
    linear_order as_order() const { return linear_order::from_phases(order); }

    friend bool operator==(const stability_data& a, const stability_data& b) {
        return a.order == b.order && a.pieces == b.pieces;
    }
};

inline stability_data canonicalize(const stability_data& sd) {
    stability_data out;
    for (std::size_t i = 0; i < sd.size(); ++i)
        if (sd.pieces[i]) {
            out.order.push_back(sd.order[i]);
            out.pieces.push_back(sd.pieces[i]);
        }
    return out;
}

inline stability_data numbered(const std::vector<bits>& pieces) {
    stability_data sd;
    for (std::size_t i = 0; i < pieces.size(); ++i) sd.order.push_back(phase::integer(static_cast<long long>(i) + 1));
    sd.pieces = pieces;
    return sd;
}

// carrier index -> piece index, or -1
inline std::vector<int> phase_table(const ambient& amb, const stability_data& sd) {
    std::vector<int> ph(amb.size(), -1);
    for (std::size_t i = 0; i < sd.size(); ++i)
        for_each_bit(sd.pieces[i], [&](int x) {
            if (ph[x] < 0) ph[x] = static_cast<int>(i);
        });
    return ph;
}

struct hn_step {
    int phase = -1;
    std::vector<int> factor;  // scope indices, a multiset
};
using filtration = std::vector<hn_step>;

// Enumerates every filtration with semistable factors of strictly decreasing
// phase, by splitting off a semistable subobject and recursing on the
// quotient. For uniserial ambients these are exactly the segmentations of the
// composition chain.
class hn_solver {
public:
    hn_solver(const ambient& amb, const stability_data& sd)
        : amb_(amb), carrier_phase_(phase_table(amb, sd)), memo_(amb.scope.size()), done_(amb.scope.size(), 0) {}

    int phase_of(int s) const { return carrier_phase_[amb_.scope[s].rep]; }

    const std::vector<filtration>& filtrations(int s) {
        if (done_[s]) return memo_[s];
        std::vector<filtration> res;
        int ph = phase_of(s);
        if (ph >= 0) res.push_back({hn_step{ph, {s}}});
        for (auto& d : amb_.scope[s].decomps) {
            int kph = -1;
            bool same = true;
            for (int k : d.sub) {
                int p = phase_of(k);
                if (p < 0 || (kph >= 0 && p != kph)) same = false;
                kph = p;
            }
            if (!same || kph < 0) continue;
            for (auto& f : multiset_filtrations(d.quot)) {
                if (f.empty() || f.front().phase >= kph) continue;
                filtration g{hn_step{kph, d.sub}};
                g.insert(g.end(), f.begin(), f.end());
                res.push_back(std::move(g));
            }
        }
        memo_[s] = std::move(res);
        done_[s] = 1;
        return memo_[s];
    }

    // Filtrations of a direct sum: one filtration per summand, merged by phase.
    std::vector<filtration> multiset_filtrations(const std::vector<int>& objs) {
        if (objs.size() == 1) return filtrations(objs[0]);
        std::vector<std::vector<filtration>> per;
        std::size_t combos = 1;
        for (int o : objs) {
            per.push_back(filtrations(o));
            combos *= per.back().size();
            if (combos == 0) return {};
            if (combos > 256) combos = 256;
        }
        std::vector<filtration> out;
        std::vector<std::size_t> pick(objs.size(), 0);
        for (std::size_t c = 0; c < combos; ++c) {
            std::map<int, std::vector<int>, std::greater<int>> merged;
            for (std::size_t i = 0; i < objs.size(); ++i)
                for (auto& st : per[i][pick[i]]) merged[st.phase].insert(merged[st.phase].end(), st.factor.begin(), st.factor.end());
            filtration f;
            for (auto& [p, fac] : merged) {
                auto sorted = fac;
                std::sort(sorted.begin(), sorted.end());
                f.push_back({p, sorted});
            }
            if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
            for (std::size_t i = 0; i < pick.size(); ++i) {
                if (++pick[i] < per[i].size()) break;
                pick[i] = 0;
            }
        }
        return out;
    }

private:
    const ambient& amb_;
    std::vector<int> carrier_phase_;
    std::vector<std::vector<filtration>> memo_;
    std::vector<char> done_;
};

inline bool operator==(const hn_step& a, const hn_step& b) { return a.phase == b.phase && a.factor == b.factor; }

struct validation_report {
    bool valid = true;
    std::vector<std::pair<std::string, std::string>> hom_violations;
    std::vector<std::string> hn_failures;
    std::vector<std::string> overlaps;
    std::vector<std::string> unclosed;
    std::string scope;
    bool window_verified = false;
};

inline std::string scope_description(const ambient& amb) {
    if (amb.family == "tube") return "carrier plus real lengths up to " + std::to_string(3 * amb.rank);
    if (amb.windowed) return "all objects inside the window";
    return "every indecomposable";
}

inline validation_report validate(const ambient& amb, const stability_data& sd, std::size_t max_witnesses = 16) {
    validation_report rep;
    rep.scope = scope_description(amb);
    rep.window_verified = amb.windowed;
    if (sd.order.size() != sd.pieces.size()) throw precondition_error("order and pieces differ in length");
    for (std::size_t i = 0; i < sd.size(); ++i) {
        if (sd.pieces[i] & ~amb.full()) throw precondition_error("piece of phase " + sd.order[i].str() + " leaves the carrier");
        if (!is_closed(amb, sd.pieces[i])) rep.unclosed.push_back(sd.order[i].str());
        for (std::size_t j = 0; j < i; ++j) {
            if (sd.pieces[i] & sd.pieces[j]) rep.overlaps.push_back(sd.order[j].str() + "/" + sd.order[i].str());
            // higher phase i, lower phase j
            for_each_bit(sd.pieces[i], [&](int x) {
                bits bad = amb.hom_to[x] & sd.pieces[j];
                for_each_bit(bad, [&](int y) {
                    if (rep.hom_violations.size() < max_witnesses)
                        rep.hom_violations.push_back({amb.carrier[x], amb.carrier[y]});
                    else
                        rep.hom_violations.push_back({"...", "..."});
                });
            });
        }
    }
    if (rep.hom_violations.size() > max_witnesses) rep.hom_violations.resize(max_witnesses + 1);
    if (rep.hom_violations.empty() && rep.overlaps.empty()) {
        hn_solver hn(amb, sd);
        for (std::size_t s = 0; s < amb.scope.size(); ++s)
            if (amb.scope[s].checked && hn.filtrations(static_cast<int>(s)).empty())
                rep.hn_failures.push_back(amb.scope[s].name);
    }
    rep.valid = rep.hom_violations.empty() && rep.overlaps.empty() && rep.unclosed.empty() && rep.hn_failures.empty();
    return rep;
}

inline bool is_valid(const ambient& amb, const stability_data& sd) { return validate(amb, sd).valid; }

struct hn_result {
    std::string object;
    std::vector<std::pair<phase, std::vector<std::string>>> steps;  // decreasing phases
    std::size_t count = 0;  // number of decreasing chain decompositions found
};

inline hn_result hn_filtration(const ambient& amb, const stability_data& sd, const std::string& object) {
    int s = amb.find_scope(object);
    hn_solver hn(amb, sd);
    const auto& fs = hn.filtrations(s);
    if (fs.empty()) throw precondition_error("HN failure: " + object + " has no decreasing filtration");
    hn_result r;
    r.object = object;
    r.count = fs.size();
    for (auto& st : fs.front()) {
        std::vector<std::string> fac;
        for (int k : st.factor) fac.push_back(amb.scope[k].name);
        r.steps.push_back({sd.order[st.phase], fac});
    }
    return r;
}

struct finest_result {
    bool finest = true;
    std::optional<std::tuple<phase, std::string, std::string>> witness;
};

inline finest_result is_finest(const ambient& amb, const stability_data& sd) {
    finest_result r;
    for (std::size_t i = 0; i < sd.size() && r.finest; ++i) {
        bits p = sd.pieces[i];
        for_each_bit(p, [&](int x) {
            if (!r.finest) return;
            bits miss = p & ~amb.hom_to[x];
            if (miss) {
                r.finest = false;
                r.witness = std::make_tuple(sd.order[i], amb.carrier[x], amb.carrier[std::countr_zero(miss)]);
            }
        });
    }
    return r;
}

// Replace phase i by i- < i+ using the kernel side of Hom(x, -).
inline stability_data split_phase(const ambient& amb, const stability_data& sd, std::size_t i, int x) {
    if (i >= sd.size()) throw precondition_error("no such phase");
    bits p = sd.pieces[i];
    if (!test_bit(p, x)) throw precondition_error(amb.carrier[x] + " is not in the piece of phase " + sd.order[i].str());
    bits minus = p & ~amb.hom_to[x];
    if (!minus) throw precondition_error("phase " + sd.order[i].str() + " is already Hom-connected from " + amb.carrier[x]);
    bits plus = p & left_perp(amb, minus);
    stability_data out;
    for (std::size_t k = 0; k < sd.size(); ++k) {
        if (k == i) {
            out.order.push_back(phase::pair(sd.order[k], phase::label_of("-")));
            out.pieces.push_back(minus);
            out.order.push_back(phase::pair(sd.order[k], phase::label_of("+")));
            out.pieces.push_back(plus);
        } else {
            out.order.push_back(sd.order[k]);
            out.pieces.push_back(sd.pieces[k]);
        }
    }
    return canonicalize(out);
}

inline stability_data refine_to_finest(const ambient& amb, const stability_data& start) {
    stability_data sd = canonicalize(start);
    for (;;) {
        bool split = false;
        for (std::size_t i = 0; i < sd.size() && !split; ++i) {
            bits p = sd.pieces[i];
            for (bits xs = p; xs && !split; xs &= xs - 1) {
                int x = std::countr_zero(xs);
                if (p & ~amb.hom_to[x]) {
                    sd = split_phase(amb, sd, i, x);
                    split = true;
                }
            }
        }
        if (!split) return sd;
    }
}

// r: fine phase index -> coarse phase index, when `fine` refines `coarse`.
inline std::optional<std::vector<int>> is_coarser(const ambient& amb, const stability_data& coarse_in,
                                                  const stability_data& fine_in) {
    stability_data coarse = canonicalize(coarse_in), fine = canonicalize(fine_in);
    std::vector<int> r(fine.size(), -1);
    for (std::size_t psi = 0; psi < fine.size(); ++psi) {
        for (std::size_t phi = 0; phi < coarse.size(); ++phi)
            if ((fine.pieces[psi] & ~coarse.pieces[phi]) == 0) {
                r[psi] = static_cast<int>(phi);
                break;
            }
        if (r[psi] < 0) return std::nullopt;
        if (psi > 0 && r[psi] < r[psi - 1]) return std::nullopt;
    }
    for (std::size_t phi = 0; phi < coarse.size(); ++phi) {
        bits u = 0;
        for (std::size_t psi = 0; psi < fine.size(); ++psi)
            if (r[psi] == static_cast<int>(phi)) u |= fine.pieces[psi];
        if (closure(amb, u) != coarse.pieces[phi]) return std::nullopt;
    }
    return r;
}

inline bool equivalent(const stability_data& a, const stability_data& b) {
    return canonicalize(a).pieces == canonicalize(b).pieces;
}

inline std::vector<bits> tau_key(const ambient& amb, const stability_data& sd, int k) {
    std::vector<bits> v;
    for (bits p : canonicalize(sd).pieces) v.push_back(amb.tau_apply(p, k));
    return v;
}

inline std::vector<bits> tau_canonical(const ambient& amb, const stability_data& sd) {
    std::vector<bits> best = tau_key(amb, sd, 0);
    for (int k = 1; k < amb.tau_period(); ++k) best = std::min(best, tau_key(amb, sd, k));
    return best;
}

inline int tau_orbit_size(const ambient& amb, const stability_data& sd) {
    std::set<std::vector<bits>> seen;
    for (int k = 0; k < amb.tau_period(); ++k) seen.insert(tau_key(amb, sd, k));
    return static_cast<int>(seen.size());
}

inline bool tau_equivalent(const ambient& amb, const stability_data& a, const stability_data& b) {
    return tau_canonical(amb, a) == tau_canonical(amb, b);
}

struct torsion_pair {
    bits T = 0;
    bits F = 0;
    friend bool operator==(const torsion_pair& a, const torsion_pair& b) { return a.T == b.T && a.F == b.F; }
};

// Lower phases in `cut` give F, the rest give T.
inline torsion_pair cut_torsion_pair(const ambient& amb, const stability_data& sd, const std::set<std::size_t>& cut) {
    for (std::size_t i : cut) {
        if (i >= sd.size()) throw precondition_error("cut names a phase outside the order");
        for (std::size_t j = 0; j < i; ++j)
            if (!cut.count(j))
                throw precondition_error("cut is not down-closed: " + sd.order[i].str() + " is in but " +
                                         sd.order[j].str() + " is not");
    }
    bits lo = 0, hi = 0;
    for (std::size_t i = 0; i < sd.size(); ++i) (cut.count(i) ? lo : hi) |= sd.pieces[i];
    return {closure(amb, hi), closure(amb, lo)};
}

inline torsion_pair cut_below(const ambient& amb, const stability_data& sd, std::size_t k) {
    std::set<std::size_t> c;
    for (std::size_t i = 0; i < k; ++i) c.insert(i);
    return cut_torsion_pair(amb, sd, c);
}

// each piece is cut out by the perpendiculars of the others
inline bits perp_shape(const ambient& amb, const stability_data& sd, std::size_t i) {
    bits s = amb.full();
    for (std::size_t j = 0; j < sd.size(); ++j) {
        if (j > i) s &= right_perp(amb, sd.pieces[j]);
        if (j < i) s &= left_perp(amb, sd.pieces[j]);
    }
    return s;
}

// ---- enumeration -------------------------------------------------------

struct search_options {
    bool upto_tau = false;
    bool restricted = true;  // tube-specific pruning for finest data
    int jobs = 1;
};

inline std::vector<bits> finest_piece_candidates(const ambient& amb, bool restricted) {
    std::vector<bits> out;
    if (amb.family == "tube" && restricted) {
        const int n = amb.rank;
        for (int s = 1; s <= n; ++s)
            for (int j = 0; j < n; ++j) out.push_back(closure(amb, bit((s - 1) * n + j)));
        return out;
    }
    for (bits c : enumerate_ext_closed(amb))
        if (c && hom_connected(amb, c)) out.push_back(c);
    return out;
}

// Depth-first search over increasing sequences of disjoint candidate pieces
// with Hom vanishing from later to earlier pieces. `keep` decides which
// sequences are reported; `extra_prune` can cut whole branches.
template <class Keep, class Prune>
std::vector<stability_data> search_sequences(const ambient& amb, const std::vector<bits>& cands, Keep&& keep,
                                             Prune&& extra_prune, int jobs) {
    // objects that can only be semistable: no proper decompositions
    bits must = 0;
    for (auto& so : amb.scope)
        if (so.checked && so.decomps.empty()) must |= bit(so.rep);

    struct frame {
        std::vector<std::size_t> seq;
        bits used = 0;
    };
    auto run_from = [&](std::size_t first) {
        std::vector<stability_data> found;
        std::vector<frame> stack;
        stack.push_back({{first}, cands[first]});
        while (!stack.empty()) {
            frame f = std::move(stack.back());
            stack.pop_back();
            // a must-object with Hom into the used part can never be added
            bool dead = false;
            for_each_bit(must & ~f.used, [&](int x) {
                if (amb.hom_to[x] & f.used) dead = true;
            });
            if (dead || extra_prune(f.seq)) continue;
            std::vector<bits> pieces;
            for (auto k : f.seq) pieces.push_back(cands[k]);
            stability_data sd = numbered(pieces);
            if (keep(sd)) found.push_back(sd);
            for (std::size_t k = cands.size(); k-- > 0;) {
                bits c = cands[k];
                if (c & f.used) continue;
                if (!hom_vanishes(amb, c, f.used)) continue;
                frame g{f.seq, f.used | c};
                g.seq.push_back(k);
                stack.push_back(std::move(g));
            }
        }
        return found;
    };
    auto parts = parallel_map(cands.size(), jobs, run_from);
    std::vector<stability_data> all;
    for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    std::sort(all.begin(), all.end(), [](const stability_data& a, const stability_data& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.pieces < b.pieces;
    });
    all.erase(std::unique(all.begin(), all.end(),
                          [](const stability_data& a, const stability_data& b) { return a.pieces == b.pieces; }),
              all.end());
    return all;
}

inline std::vector<stability_data> dedupe_tau(const ambient& amb, const std::vector<stability_data>& in) {
    std::map<std::vector<bits>, stability_data> reps;
    for (auto& sd : in) {
        auto key = tau_canonical(amb, sd);
        if (!reps.count(key)) reps[key] = numbered(key);
    }
    std::vector<stability_data> out;
    for (auto& [k, v] : reps) out.push_back(v);
    std::sort(out.begin(), out.end(), [](const stability_data& a, const stability_data& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.pieces < b.pieces;
    });
    return out;
}

inline std::vector<stability_data> enumerate_finest(const ambient& amb, const search_options& opt = {}) {
    std::vector<bits> cands = finest_piece_candidates(amb, opt.restricted);
    const bool tube_restricted = amb.family == "tube" && opt.restricted;
    const int n = amb.rank;
    auto count_length_n = [&](const std::vector<std::size_t>& seq) {
        int c = 0;
        for (auto k : seq)
            if (k >= static_cast<std::size_t>((n - 1) * n)) ++c;
        return c;
    };
    auto keep = [&](const stability_data& sd) { return is_valid(amb, sd) && is_finest(amb, sd).finest; };
    auto prune = [&](const std::vector<std::size_t>& seq) { return tube_restricted && count_length_n(seq) > 1; };
    auto all = search_sequences(amb, cands, keep, prune, opt.jobs);
    if (opt.upto_tau) return dedupe_tau(amb, all);
    return all;
}

// Every valid datum whose pieces are nonempty closed subcategories.
inline std::vector<stability_data> enumerate_valid(const ambient& amb, int jobs = 1) {
    std::vector<bits> cands;
    for (bits c : enumerate_ext_closed(amb))
        if (c) cands.push_back(c);
    auto keep = [&](const stability_data& sd) { return is_valid(amb, sd); };
    auto prune = [](const std::vector<std::size_t>&) { return false; };
    return search_sequences(amb, cands, keep, prune, jobs);
}

} // namespace stabcat
