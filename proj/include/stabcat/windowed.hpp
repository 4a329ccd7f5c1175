#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stabcat/ambient.hpp"
#include "stabcat/stability.hpp"
#include "stabcat/subcat.hpp"
#include "stabcat/tube.hpp"

namespace stabcat::windowed {

inline std::vector<std::string> default_points(int count) {
    static const std::vector<std::string> base{"0", "1", "λ"};
    std::vector<std::string> out;
    for (int i = 0; i < count; ++i) out.push_back(i < 3 ? base[i] : "p" + std::to_string(i));
    return out;
}

inline long long floor_div(long long a, long long b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); }

// One shape for all three models. `a` is a degree (line) or an index
// (preprojective/preinjective); `x` a point index or exceptional top.
struct wobj {
    enum kind_t { line, exc, ord, prep, prei } kind = line;
    int a = 0;
    int x = -1;
    int t = 0;
    friend bool operator==(const wobj&, const wobj&) = default;
};

using wmulti = std::vector<wobj>;

struct model {
    std::string family;
    std::vector<std::string> points;
    std::function<std::string(const wobj&)> name;
    std::function<bool(const wobj&, const wobj&)> hom;
    std::function<std::vector<wmulti>(const wobj&, const wobj&)> mid;
    std::function<std::vector<std::pair<wmulti, wmulti>>(const wobj&)> decomps;
    std::function<bool(const wobj&)> checked;
};

inline ambient build(const std::string& spec, const model& m, const std::vector<wobj>& objs, int lo, int hi) {
    ambient amb;
    amb.spec = spec;
    amb.family = m.family;
    amb.windowed = true;
    amb.lo = lo;
    amb.hi = hi;
    amb.points = m.points;
    std::map<std::string, int> idx;
    for (auto& o : objs) {
        idx[m.name(o)] = static_cast<int>(amb.carrier.size());
        amb.carrier.push_back(m.name(o));
    }
    auto lookup = [&](const wobj& o) {
        auto it = idx.find(m.name(o));
        return it == idx.end() ? -1 : it->second;
    };
    auto map_multi = [&](const wmulti& ms, bool drop) -> std::optional<std::vector<int>> {
        std::vector<int> v;
        for (auto& o : ms) {
            int k = lookup(o);
            if (k < 0) {
                if (drop) continue;
                return std::nullopt;
            }
            v.push_back(k);
        }
        std::sort(v.begin(), v.end());
        return v;
    };
    for (std::size_t i = 0; i < objs.size(); ++i) {
        scope_object so;
        so.name = amb.carrier[i];
        so.rep = static_cast<int>(i);
        so.checked = m.checked(objs[i]);
        for (auto& [sub, quot] : m.decomps(objs[i])) {
            auto s = map_multi(sub, false), q = map_multi(quot, false);
            if (s && q && !s->empty() && !q->empty()) so.decomps.push_back({*s, *q});
        }
        amb.scope.push_back(so);
    }
    finish_ambient(
        amb, [&](int a, int b) { return m.hom(objs[a], objs[b]); },
        [&](int a, int b) {
            std::vector<std::vector<int>> out;
            for (auto& e : m.mid(objs[a], objs[b])) {
                auto v = map_multi(e, true);
                if (v && !v->empty()) out.push_back(*v);
            }
            return out;
        });
    return amb;
}

// rank-1 tube at a single point: lengths only
inline std::vector<std::vector<int>> rank_one_mid(int ta, int tb) {
    std::vector<std::vector<int>> out;
    for (auto& m : tube::middle_terms(tube::make(1, 0, ta), tube::make(1, 0, tb))) {
        std::vector<int> v;
        for (auto& x : m) v.push_back(x.t);
        out.push_back(v);
    }
    return out;
}

inline std::vector<wmulti> uniserial_point_mid(const wobj& a, const wobj& b, int maxlen) {
    std::vector<wmulti> out;
    if (a.kind != b.kind || a.x != b.x) return out;
    for (auto& lens : rank_one_mid(a.t, b.t)) {
        wmulti e;
        for (int t : lens)
            if (t <= maxlen) e.push_back({a.kind, 0, a.x, t});
        out.push_back(e);
    }
    return out;
}

inline std::vector<std::pair<wmulti, wmulti>> uniserial_point_decomps(const wobj& o) {
    std::vector<std::pair<wmulti, wmulti>> out;
    for (int r = 1; r < o.t; ++r) out.push_back({{{o.kind, 0, o.x, r}}, {{o.kind, 0, o.x, o.t - r}}});
    return out;
}

// Multisets of (point, length) with distinct points, lengths 1..maxlen,
// total exactly `total`.
inline std::vector<std::vector<std::pair<int, int>>> point_profiles(int npoints, int maxlen, int total) {
    std::vector<std::vector<std::pair<int, int>>> out;
    std::vector<std::pair<int, int>> cur;
    std::function<void(int, int)> go = [&](int p, int left) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        if (p == npoints) return;
        go(p + 1, left);
        for (int t = 1; t <= std::min(maxlen, left); ++t) {
            cur.push_back({p, t});
            go(p + 1, left - t);
            cur.pop_back();
        }
    };
    go(0, total);
    return out;
}

// ---- P^1 ----------------------------------------------------------------

inline constexpr int p1_max_torsion = 3;

inline ambient make_p1_ambient(int lo, int hi, int npoints) {
    if (lo > hi) throw window_error("empty window " + std::to_string(lo) + ".." + std::to_string(hi));
    model m;
    m.family = "p1";
    m.points = default_points(npoints);
    auto pts = m.points;
    m.name = [pts](const wobj& o) {
        if (o.kind == wobj::line) return "O(" + std::to_string(o.a) + ")";
        return "S[" + pts[o.x] + "]^(" + std::to_string(o.t) + ")";
    };
    m.hom = [](const wobj& x, const wobj& y) {
        if (x.kind == wobj::line) return y.kind != wobj::line || x.a <= y.a;
        return y.kind != wobj::line && x.x == y.x;
    };
    m.mid = [](const wobj& a, const wobj& b) {
        std::vector<wmulti> out;
        if (a.kind == wobj::line && b.kind == wobj::line) {
            for (int c = a.a + 1; 2 * c <= a.a + b.a; ++c)
                if (a.a + b.a - c < b.a) out.push_back({{wobj::line, c}, {wobj::line, a.a + b.a - c}});
        } else if (a.kind == wobj::line) {
            for (int u = 0; u < b.t; ++u) {
                wmulti e{{wobj::line, a.a + b.t - u}};
                if (u > 0) e.push_back({wobj::ord, 0, b.x, u});
                out.push_back(e);
            }
        } else if (b.kind != wobj::line) {
            out = uniserial_point_mid(a, b, p1_max_torsion);
        }
        return out;
    };
    m.decomps = [npoints](const wobj& o) {
        std::vector<std::pair<wmulti, wmulti>> out;
        if (o.kind != wobj::line) return uniserial_point_decomps(o);
        for (int s = 1; s <= p1_max_torsion * npoints; ++s)
            for (auto& prof : point_profiles(npoints, p1_max_torsion, s)) {
                wmulti q;
                for (auto [x, t] : prof) q.push_back({wobj::ord, 0, x, t});
                out.push_back({{{wobj::line, o.a - s}}, q});
            }
        return out;
    };
    m.checked = [lo](const wobj& o) { return o.kind != wobj::line || o.a >= lo; };
    std::vector<wobj> objs;
    for (int n = lo - 1; n <= hi; ++n) objs.push_back({wobj::line, n});
    for (int x = 0; x < npoints; ++x)
        for (int t = 1; t <= p1_max_torsion; ++t) objs.push_back({wobj::ord, 0, x, t});
    return build("p1:window=" + std::to_string(lo) + ".." + std::to_string(hi) + ":points=" + std::to_string(npoints),
                 m, objs, lo, hi);
}

inline void check_point_order(const ambient& amb, const std::vector<std::string>& order) {
    auto a = order, b = amb.points;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw precondition_error("point order must list each sample point of " + amb.spec + " exactly once");
}

inline bits with_prefix(const ambient& amb, const std::string& pre) {
    bits b = 0;
    for (std::size_t i = 0; i < amb.size(); ++i)
        if (amb.carrier[i].rfind(pre, 0) == 0) b |= bit(static_cast<int>(i));
    return b;
}

inline bits torsion_at(const ambient& amb, const std::string& point) { return with_prefix(amb, "S[" + point + "]"); }

inline std::string p1_line(int n) { return "O(" + std::to_string(n) + ")"; }
inline std::string point_simple(const std::string& x) { return "S[" + x + "]^(1)"; }

// Every carrier line bundle gets an integer phase; points sit above them.
inline stability_data p1_finest(const ambient& amb, const std::vector<std::string>& point_order) {
    check_point_order(amb, point_order);
    stability_data sd;
    for (int n = amb.lo - 1; n <= amb.hi; ++n) {
        sd.order.push_back(phase::integer(n));
        sd.pieces.push_back(closure(amb, bit(amb.find(p1_line(n)))));
    }
    for (auto& x : point_order) {
        sd.order.push_back(phase::label_of(x));
        sd.pieces.push_back(closure(amb, bit(amb.find(point_simple(x)))));
    }
    return sd;
}

inline bits all_torsion(const ambient& amb) { return with_prefix(amb, "S["); }

inline stability_data p1_slope(const ambient& amb) {
    stability_data sd;
    for (int n = amb.lo - 1; n <= amb.hi; ++n) {
        sd.order.push_back(phase::integer(n));
        sd.pieces.push_back(closure(amb, bit(amb.find(p1_line(n)))));
    }
    sd.order.push_back(phase::infinity());
    sd.pieces.push_back(all_torsion(amb));
    return sd;
}

inline torsion_pair p1_points_pair(const ambient& amb, const std::set<std::string>& P) {
    if (P.empty()) throw precondition_error("the point set must be non-empty");
    bits T = 0;
    for (auto& x : P) {
        if (std::find(amb.points.begin(), amb.points.end(), x) == amb.points.end())
            throw precondition_error("'" + x + "' is not a sample point of " + amb.spec);
        T |= torsion_at(amb, x);
    }
    return {T, amb.full() & ~T};
}

inline torsion_pair p1_degree_pair(const ambient& amb, int n) {
    if (n - 1 < amb.lo || n + 1 > amb.hi)
        throw window_error("degree " + std::to_string(n) + " needs " + std::to_string(n - 1) + ".." +
                           std::to_string(n + 1) + " inside the window of " + amb.spec);
    bits F = 0;
    for (int m = amb.lo - 1; m <= n; ++m) F |= bit(amb.find(p1_line(m)));
    return {amb.full() & ~F, F};
}

// ---- Kronecker ----------------------------------------------------------

inline ambient make_kronecker_ambient(int K, int D, int npoints) {
    if (K < 1 || D < 1) throw window_error("Kronecker window needs K, D >= 1");
    model m;
    m.family = "kronecker";
    m.points = default_points(npoints);
    auto pts = m.points;
    m.name = [pts](const wobj& o) {
        switch (o.kind) {
        case wobj::prep: return "P_" + std::to_string(o.a);
        case wobj::prei: return "I_" + std::to_string(o.a);
        default: return "R[" + pts[o.x] + "]^(" + std::to_string(o.t) + ")";
        }
    };
    m.hom = [](const wobj& x, const wobj& y) {
        if (x.kind == wobj::prep) {
            if (y.kind == wobj::prep) return x.a <= y.a;
            if (y.kind == wobj::prei) return !(x.a == 1 && y.a == 1);
            return true;
        }
        if (x.kind == wobj::ord) {
            if (y.kind == wobj::ord) return x.x == y.x;
            return y.kind == wobj::prei;
        }
        return y.kind == wobj::prei && y.a <= x.a;
    };
    m.mid = [npoints, D](const wobj& a, const wobj& b) {
        std::vector<wmulti> out;
        auto pp = [&](wobj::kind_t k, int lo_, int hi_) {
            for (int c = lo_ + 1; 2 * c <= lo_ + hi_; ++c)
                if (lo_ + hi_ - c < hi_) out.push_back({{k, c}, {k, lo_ + hi_ - c}});
        };
        if (a.kind == wobj::prep && b.kind == wobj::prep) {
            if (a.a <= b.a - 2) pp(wobj::prep, a.a, b.a);
        } else if (a.kind == wobj::prei && b.kind == wobj::prei) {
            if (a.a >= b.a + 2) pp(wobj::prei, b.a, a.a);
        } else if (a.kind == wobj::prep && b.kind == wobj::ord) {
            for (int u = 0; u < b.t; ++u) {
                wmulti e{{wobj::prep, a.a + b.t - u}};
                if (u > 0) e.push_back({wobj::ord, 0, b.x, u});
                out.push_back(e);
            }
        } else if (a.kind == wobj::ord && b.kind == wobj::prei) {
            for (int u = 0; u < a.t; ++u) {
                wmulti e{{wobj::prei, b.a + a.t - u}};
                if (u > 0) e.push_back({wobj::ord, 0, a.x, u});
                out.push_back(e);
            }
        } else if (a.kind == wobj::prep && b.kind == wobj::prei) {
            // regular modules of total length a+b-1, at most one summand per point
            for (auto& prof : point_profiles(npoints, D, a.a + b.a - 1)) {
                wmulti e;
                for (auto [x, t] : prof) e.push_back({wobj::ord, 0, x, t});
                out.push_back(e);
            }
        } else if (a.kind == wobj::ord && b.kind == wobj::ord) {
            out = uniserial_point_mid(a, b, D);
        }
        return out;
    };
    m.decomps = [npoints, D](const wobj& o) {
        std::vector<std::pair<wmulti, wmulti>> out;
        int d1 = 0, d2 = 0;  // dimension vector at the source and sink
        if (o.kind == wobj::prep) d1 = o.a - 1, d2 = o.a;
        if (o.kind == wobj::prei) d1 = o.a, d2 = o.a - 1;
        if (o.kind == wobj::ord) d1 = d2 = o.t;
        if (d1 > 0 && d2 > 0) out.push_back({wmulti(d2, {wobj::prep, 1}), wmulti(d1, {wobj::prei, 1})});
        if (o.kind == wobj::ord) {
            auto u = uniserial_point_decomps(o);
            out.insert(out.end(), u.begin(), u.end());
        }
        for (int x = 0; x < npoints; ++x)
            for (int t = 1; t <= D && t < o.a; ++t) {
                if (o.kind == wobj::prep) out.push_back({{{wobj::prep, o.a - t}}, {{wobj::ord, 0, x, t}}});
                if (o.kind == wobj::prei) out.push_back({{{wobj::ord, 0, x, t}}, {{wobj::prei, o.a - t}}});
            }
        return out;
    };
    m.checked = [](const wobj&) { return true; };
    std::vector<wobj> objs;
    for (int k = 1; k <= K; ++k) objs.push_back({wobj::prep, k});
    for (int x = 0; x < npoints; ++x)
        for (int t = 1; t <= D; ++t) objs.push_back({wobj::ord, 0, x, t});
    for (int k = K; k >= 1; --k) objs.push_back({wobj::prei, k});
    auto amb = build("kronecker:window=" + std::to_string(K) + ":depth=" + std::to_string(D) +
                         ":points=" + std::to_string(npoints),
                     m, objs, 1, K);
    amb.rank = D;
    return amb;
}

inline std::string kron_p(int k) { return "P_" + std::to_string(k); }
inline std::string kron_i(int k) { return "I_" + std::to_string(k); }

// dimension vector (source, sink) of a Kronecker carrier object
inline std::pair<int, int> kron_dims(const std::string& d) {
    if (d.rfind("P_", 0) == 0) {
        int k = std::stoi(d.substr(2));
        return {k - 1, k};
    }
    if (d.rfind("I_", 0) == 0) {
        int k = std::stoi(d.substr(2));
        return {k, k - 1};
    }
    auto open = d.find("^(");
    if (d.rfind("R[", 0) != 0 || open == std::string::npos) throw parse_error("not a Kronecker descriptor: " + d);
    int t = std::stoi(d.substr(open + 2));
    return {t, t};
}

inline stability_data kron_finest_preprojective(const ambient& amb, const std::vector<std::string>& point_order) {
    check_point_order(amb, point_order);
    const int K = amb.hi;
    stability_data sd;
    for (int k = 1; k <= K; ++k) {
        sd.order.push_back(phase::pair(phase::integer(0), phase::integer(k)));
        sd.pieces.push_back(closure(amb, bit(amb.find(kron_p(k)))));
    }
    for (auto& x : point_order) {
        sd.order.push_back(phase::label_of(x));
        sd.pieces.push_back(closure(amb, bit(amb.find("R[" + x + "]^(1)"))));
    }
    for (int k = K; k >= 1; --k) {
        sd.order.push_back(phase::pair(phase::integer(1), phase::integer(k)));
        sd.pieces.push_back(closure(amb, bit(amb.find(kron_i(k)))));
    }
    return sd;
}

inline stability_data kron_finest_simples(const ambient& amb) {
    stability_data sd;
    sd.order = {phase::integer(1), phase::integer(2)};
    sd.pieces = {closure(amb, bit(amb.find(kron_i(1)))), closure(amb, bit(amb.find(kron_p(1))))};
    return sd;
}


// Rows of the Kronecker torsion table: 1 regular points P with all
// preinjectives, 2 the first n preinjectives, 3 all but the first n
// preprojectives, 4 the simple projective.
inline torsion_pair kron_table_pair(const ambient& amb, int row, const std::set<std::string>& P = {}, int n = 1) {
    const int K = amb.hi;
    bits prep = with_prefix(amb, "P_"), prei = with_prefix(amb, "I_"), reg = with_prefix(amb, "R[");
    switch (row) {
    case 1: {
        bits RP = 0;
        for (auto& x : P) {
            if (std::find(amb.points.begin(), amb.points.end(), x) == amb.points.end())
                throw precondition_error("'" + x + "' is not a sample point of " + amb.spec);
            RP |= with_prefix(amb, "R[" + x + "]");
        }
        return {RP | prei, prep | (reg & ~RP)};
    }
    case 2:
    case 3: {
        if (n < 1 || n >= K) throw window_error("n=" + std::to_string(n) + " needs 1 <= n < K=" + std::to_string(K));
        bits low = 0;
        for (int m = 1; m <= n; ++m) low |= bit(amb.find(row == 2 ? kron_i(m) : kron_p(m)));
        if (row == 2) return {low, amb.full() & ~low};
        return {amb.full() & ~low, low};
    }
    case 4:
        return {bit(amb.find(kron_p(1))), bit(amb.find(kron_i(1)))};
    default:
        throw precondition_error("Kronecker table has rows 1..4, got " + std::to_string(row));
    }
}

// ---- weighted projective line of weight type (2) ------------------------

inline constexpr int x2_max_exceptional = 6;
inline constexpr int x2_max_ordinary = 3;

// Line bundle O(l c + e x1) is stored by its degree 2l+e.
inline std::string x2_line(int d) {
    long long l = floor_div(d, 2);
    int e = static_cast<int>(d - 2 * l);
    if (e == 0) return l == 0 ? "O(0)" : "O(" + std::to_string(l) + "c)";
    return l == 0 ? "O(x1)" : "O(" + std::to_string(l) + "c+x1)";
}
inline std::string x2_exc(int j, int t) {
    return "S[1," + std::to_string(j) + "]^(" + std::to_string(t) + ")";
}

inline ambient make_x2_ambient(int lo, int hi, int npoints) {
    if (lo > hi) throw window_error("empty window " + std::to_string(lo) + ".." + std::to_string(hi));
    model m;
    m.family = "x2";
    m.points = default_points(npoints);
    auto pts = m.points;
    auto par = [](int v) { return tube::mod(v, 2); };
    m.name = [pts](const wobj& o) {
        if (o.kind == wobj::line) return x2_line(o.a);
        if (o.kind == wobj::exc) return x2_exc(o.x, o.t);
        return "S[" + pts[o.x] + "]^(" + std::to_string(o.t) + ")";
    };
    m.hom = [par](const wobj& x, const wobj& y) {
        if (x.kind == wobj::line) {
            if (y.kind == wobj::line) return y.a >= x.a;
            if (y.kind == wobj::exc) return tube::has_factor(tube::make(2, y.x, y.t), par(x.a));
            return true;
        }
        if (y.kind != x.kind) return false;
        if (x.kind == wobj::exc) return tube::hom_nonzero(tube::make(2, x.x, x.t), tube::make(2, y.x, y.t));
        return x.x == y.x;
    };
    m.mid = [par](const wobj& a, const wobj& b) {
        std::vector<wmulti> out;
        if (a.kind == wobj::line && b.kind == wobj::line) {
            int D = b.a - a.a;
            for (int d1 = 1; 2 * d1 <= D; ++d1) {
                int d2 = D - d1;
                if (d1 % 2 == 1 && d2 % 2 == 1) continue;
                out.push_back({{wobj::line, a.a + d1}, {wobj::line, a.a + d2}});
            }
        } else if (a.kind == wobj::line && b.kind == wobj::exc) {
            int s = par(b.x - b.t + 1);
            for (int u = 0; u < b.t; ++u) {
                if (par(s + u) != par(a.a + 1)) continue;
                wmulti e{{wobj::line, a.a + b.t - u}};
                if (u > 0) e.push_back({wobj::exc, 0, par(s + u - 1), u});
                out.push_back(e);
            }
        } else if (a.kind == wobj::line && b.kind == wobj::ord) {
            for (int u = 0; u < b.t; ++u) {
                wmulti e{{wobj::line, a.a + 2 * (b.t - u)}};
                if (u > 0) e.push_back({wobj::ord, 0, b.x, u});
                out.push_back(e);
            }
        } else if (a.kind == wobj::exc && b.kind == wobj::exc) {
            for (auto& ms : tube::middle_terms(tube::make(2, a.x, a.t), tube::make(2, b.x, b.t))) {
                wmulti e;
                for (auto& y : ms)
                    if (y.t <= x2_max_exceptional) e.push_back({wobj::exc, 0, y.j, y.t});
                out.push_back(e);
            }
        } else if (a.kind == wobj::ord && b.kind == wobj::ord) {
            out = uniserial_point_mid(a, b, x2_max_ordinary);
        }
        return out;
    };
    m.decomps = [npoints, par](const wobj& o) {
        std::vector<std::pair<wmulti, wmulti>> out;
        if (o.kind == wobj::ord) return uniserial_point_decomps(o);
        if (o.kind == wobj::exc) {
            int s = par(o.x - o.t + 1);
            for (int r = 1; r < o.t; ++r)
                out.push_back({{{wobj::exc, 0, par(s + r - 1), r}}, {{wobj::exc, 0, o.x, o.t - r}}});
            return out;
        }
        for (int se = 0; se <= x2_max_exceptional; ++se)
            for (int so = 0; so <= x2_max_ordinary * npoints; ++so) {
                if (se + so == 0) continue;
                for (auto& prof : point_profiles(npoints, x2_max_ordinary, so)) {
                    wmulti q;
                    if (se > 0) q.push_back({wobj::exc, 0, par(o.a), se});
                    for (auto [x, t] : prof) q.push_back({wobj::ord, 0, x, t});
                    out.push_back({{{wobj::line, o.a - se - 2 * so}}, q});
                }
            }
        return out;
    };
    m.checked = [lo](const wobj& o) { return o.kind != wobj::line || floor_div(o.a, 2) >= lo; };
    std::vector<wobj> objs;
    for (int d = 2 * (lo - 1); d <= 2 * hi + 1; ++d) objs.push_back({wobj::line, d});
    for (int t = 1; t <= x2_max_exceptional; ++t)
        for (int j = 0; j < 2; ++j) objs.push_back({wobj::exc, 0, j, t});
    for (int x = 0; x < npoints; ++x)
        for (int t = 1; t <= x2_max_ordinary; ++t) objs.push_back({wobj::ord, 0, x, t});
    return build("x2:window=" + std::to_string(lo) + ".." + std::to_string(hi) + ":points=" + std::to_string(npoints),
                 m, objs, lo, hi);
}

enum class x2_family { full, lm, coset };

inline std::string to_string(x2_family f) {
    switch (f) {
    case x2_family::full: return "full";
    case x2_family::lm: return "lm";
    default: return "coset";
    }
}

// Labels for the torsion phases: "inf0" < "inf1/2" < "inf1" is forced,
// ordinary points may be interleaved anywhere.
inline std::vector<std::string> x2_default_torsion_order(const ambient& amb) {
    std::vector<std::string> v{"inf0", "inf1/2", "inf1"};
    v.insert(v.end(), amb.points.begin(), amb.points.end());
    return v;
}

inline phase x2_torsion_phase(const std::string& label) {
    if (label == "inf0") return phase::pair(phase::infinity(), phase::integer(0));
    if (label == "inf1/2") return phase::pair(phase::infinity(), phase::rational(1, 2));
    if (label == "inf1") return phase::pair(phase::infinity(), phase::integer(1));
    return phase::pair(phase::infinity(), phase::label_of(label));
}

inline bits x2_torsion_piece(const ambient& amb, const std::string& label) {
    if (label == "inf0") return closure(amb, bit(amb.find(x2_exc(0, 1))));
    if (label == "inf1/2") return closure(amb, bit(amb.find(x2_exc(1, 2))));
    if (label == "inf1") return closure(amb, bit(amb.find(x2_exc(1, 1))));
    return closure(amb, bit(amb.find(point_simple(label))));
}

inline phase x2_line_phase(int d) { return phase::rational(d, 2); }

inline stability_data x2_finest(const ambient& amb, x2_family fam, int m = 0,
                                const std::vector<std::string>& torsion_order = {}) {
    auto order = torsion_order.empty() ? x2_default_torsion_order(amb) : torsion_order;
    {
        auto a = order, b = x2_default_torsion_order(amb);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) throw precondition_error("torsion order must list inf0, inf1/2, inf1 and every sample point once");
        auto pos = [&](const std::string& s) { return std::find(order.begin(), order.end(), s) - order.begin(); };
        if (!(pos("inf0") < pos("inf1/2") && pos("inf1/2") < pos("inf1")))
            throw precondition_error("torsion order must keep inf0 < inf1/2 < inf1");
        if (fam != x2_family::full && order.front() != "inf0")
            throw precondition_error("this family needs inf0 below every other torsion phase");
    }
    if (fam == x2_family::lm && (m < amb.lo || m > amb.hi))
        throw window_error("m=" + std::to_string(m) + " lies outside the window of " + amb.spec);
    stability_data sd;
    auto add_line = [&](int d) {
        sd.order.push_back(x2_line_phase(d));
        sd.pieces.push_back(closure(amb, bit(amb.find(x2_line(d)))));
    };
    auto add_torsion = [&](const std::string& lab) {
        sd.order.push_back(x2_torsion_phase(lab));
        sd.pieces.push_back(x2_torsion_piece(amb, lab));
    };
    const int dlo = 2 * (amb.lo - 1), dhi = 2 * amb.hi + 1;
    std::size_t rest = 0;
    if (fam == x2_family::full) {
        for (int d = dlo; d <= dhi; ++d) add_line(d);
    } else if (fam == x2_family::coset) {
        add_torsion("inf0");
        rest = 1;
        for (int d = dlo + 1; d <= dhi; d += 2) add_line(d);
    } else {
        for (int d = dlo; d <= 2 * m - 2; ++d) add_line(d);
        add_torsion("inf0");
        rest = 1;
        for (int d = 2 * m - 1; d <= dhi; d += 2) add_line(d);
    }
    for (std::size_t i = rest; i < order.size(); ++i) add_torsion(order[i]);
    return sd;
}

inline stability_data x2_slope(const ambient& amb) {
    stability_data sd;
    for (int d = 2 * (amb.lo - 1); d <= 2 * amb.hi + 1; ++d) {
        sd.order.push_back(phase::integer(d));
        sd.pieces.push_back(closure(amb, bit(amb.find(x2_line(d)))));
    }
    sd.order.push_back(phase::infinity());
    sd.pieces.push_back(all_torsion(amb));
    return sd;
}

inline bits x2_lines(const ambient& amb, const std::function<bool(int)>& keep) {
    bits b = 0;
    for (int d = 2 * (amb.lo - 1); d <= 2 * amb.hi + 1; ++d)
        if (keep(d)) b |= bit(amb.find(x2_line(d)));
    return b;
}

inline bits x2_exceptional(const ambient& amb) { return with_prefix(amb, "S[1,"); }

// Rows I..VI of the X(2) torsion table. P may contain "inf" for the
// exceptional tube; Q lists ordinary points; `shift` moves rows IV and V by
// multiples of c.
inline torsion_pair x2_table_pair(const ambient& amb, int row, const std::set<std::string>& P = {},
                                  const std::set<std::string>& Q = {}, int shift = 0) {
    auto ordinary = [&](const std::set<std::string>& S) {
        bits b = 0;
        for (auto& x : S) {
            if (x == "inf") continue;
            if (std::find(amb.points.begin(), amb.points.end(), x) == amb.points.end())
                throw precondition_error("'" + x + "' is not a sample point of " + amb.spec);
            b |= torsion_at(amb, x);
        }
        return b;
    };
    const bits exc = x2_exceptional(amb), ord_all = ordinary({amb.points.begin(), amb.points.end()});
    const bits vect = x2_lines(amb, [](int) { return true; });
    const bits s11 = closure(amb, bit(amb.find(x2_exc(1, 1))));
    const bits s11_2 = closure(amb, bit(amb.find(x2_exc(1, 2))));
    const bits s10 = closure(amb, bit(amb.find(x2_exc(0, 1))));
    if (Q.count("inf")) throw precondition_error("Q must avoid the exceptional point");
    switch (row) {
    case 1: {
        if (P.empty()) throw precondition_error("row I needs a non-empty point set P");
        bool inf = P.count("inf");
        bits T = closure(amb, ordinary(P) | (inf ? exc : 0));
        bits F = closure(amb, vect | (ord_all & ~ordinary(P)) | (inf ? 0 : exc));
        return {T, F};
    }
    case 2: {
        bits T = closure(amb, s11 | ordinary(Q));
        bits F = closure(amb, vect | s10 | s11_2 | (ord_all & ~ordinary(Q)));
        return {T, F};
    }
    case 3: {
        bits T = closure(amb, s11 | s11_2 | ordinary(Q));
        bits F = closure(amb, vect | s10 | (ord_all & ~ordinary(Q)));
        return {T, F};
    }
    case 4: {
        if (shift < amb.lo || shift > amb.hi) throw window_error("shift outside the window of " + amb.spec);
        bits F = x2_lines(amb, [&](int d) { return d < 2 * shift; });
        return {amb.full() & ~F, F};
    }
    case 5: {
        if (shift < amb.lo || shift > amb.hi) throw window_error("shift outside the window of " + amb.spec);
        bits T = closure(amb, x2_lines(amb, [&](int d) { return d % 2 != 0 && d >= 2 * shift + 1; }) | s11_2 | s11 |
                                  ord_all);
        bits F = closure(amb, x2_lines(amb, [&](int d) { return d < 2 * shift + 1; }) | s10);
        return {T, F};
    }
    case 6: {
        bits T = closure(amb, x2_lines(amb, [](int d) { return d % 2 != 0; }) | s11_2 | s11 | ord_all);
        return {T, s10};
    }
    default:
        throw precondition_error("X(2) table has rows 1..6, got " + std::to_string(row));
    }
}

} // namespace stabcat::windowed
