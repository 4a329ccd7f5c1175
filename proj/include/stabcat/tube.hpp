#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "stabcat/errors.hpp"

namespace stabcat::tube {

inline int mod(long long a, int n) {
    long long r = a % n;
    return static_cast<int>(r < 0 ? r + n : r);
}

// S_j^(t) in the rank n tube: top j, length t, socle j-t+1 (mod n).
struct indec {
    int n = 1;
    int j = 0;
    int t = 1;

    friend bool operator==(const indec& a, const indec& b) { return a.n == b.n && a.j == b.j && a.t == b.t; }
    friend bool operator!=(const indec& a, const indec& b) { return !(a == b); }
    friend bool operator<(const indec& a, const indec& b) {
        if (a.n != b.n) return a.n < b.n;
        if (a.t != b.t) return a.t < b.t;
        return a.j < b.j;
    }
};

using multiset = std::vector<indec>;

inline indec make(int n, int j, int t) {
    if (n < 1) throw precondition_error("tube rank must be positive");
    if (t < 1) throw precondition_error("tube object length must be positive");
    return {n, mod(j, n), t};
}

inline int top(const indec& x) { return x.j; }
inline int soc(const indec& x) { return mod(static_cast<long long>(x.j) - x.t + 1, x.n); }

inline std::set<int> comp_factor_set(const indec& x) {
    std::set<int> s;
    for (int k = 0; k < std::min(x.t, x.n); ++k) s.insert(mod(static_cast<long long>(x.j) - k, x.n));
    return s;
}

inline bool has_factor(const indec& x, int i) {
    if (x.t >= x.n) return true;
    // factors are j, j-1, ..., j-t+1
    return mod(static_cast<long long>(x.j) - i, x.n) < x.t;
}

inline indec tau(const indec& x, long long k = 1) { return {x.n, mod(static_cast<long long>(x.j) - k, x.n), x.t}; }

// Subobjects from the socle upwards: element r-1 has length r.
inline std::vector<indec> subobject_chain(const indec& x) {
    std::vector<indec> out;
    for (int r = 1; r <= x.t; ++r) out.push_back({x.n, mod(static_cast<long long>(x.j) - x.t + r, x.n), r});
    return out;
}

inline void same_rank(const indec& a, const indec& b) {
    if (a.n != b.n)
        throw precondition_error("rank mismatch: " + std::to_string(a.n) + " vs " + std::to_string(b.n));
}

inline bool hom_nonzero(const indec& x, const indec& y) {
    same_rank(x, y);
    return has_factor(y, top(x)) && has_factor(x, soc(y));
}

// Segment of the universal cover: positions lo..hi, top at hi.
struct segment {
    long long lo, hi;
};

inline indec from_segment(int n, long long lo, long long hi) {
    return {n, mod(hi, n), static_cast<int>(hi - lo + 1)};
}

// Middle terms of non-split extensions 0 -> a -> E -> b -> 0.
// A is lifted to [a1, a2] with a2 = top(a); b is lifted to [b1, b2] with
// b1 congruent to soc(b), a1 < b1 <= a2 + 1 and b2 > a2. b1 = a2 + 1 is the
// stacked case (single indecomposable), otherwise the union and intersection.
inline std::vector<multiset> middle_terms(const indec& a, const indec& b) {
    same_rank(a, b);
    const int n = a.n;
    const long long a2 = a.j, a1 = a2 - a.t + 1;
    std::vector<multiset> out;
    for (long long b1 = a1 + 1; b1 <= a2 + 1; ++b1) {
        if (mod(b1, n) != soc(b)) continue;
        long long b2 = b1 + b.t - 1;
        if (b2 <= a2) continue;
        multiset m;
        m.push_back(from_segment(n, a1, b2));
        if (b1 <= a2) m.push_back(from_segment(n, b1, a2));
        std::sort(m.begin(), m.end());
        if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Representative length: lengths above n collapse onto n+1..2n.
inline int rep_length(int t, int n) { return t <= n ? t : n + ((t - 1) % n) + 1; }

inline indec truncate_rep(const indec& x) { return {x.n, x.j, rep_length(x.t, x.n)}; }

inline std::string to_string(const indec& x) {
    return "S" + std::to_string(x.j) + "^(" + std::to_string(x.t) + ")@" + std::to_string(x.n);
}

} // namespace stabcat::tube
