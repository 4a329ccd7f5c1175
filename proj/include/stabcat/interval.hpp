#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "stabcat/errors.hpp"
#include "stabcat/tube.hpp"

namespace stabcat::interval {

// M[a,b] over 1 -> 2 -> ... -> n: top a, socle b.
struct module {
    int n = 1;
    int a = 1;
    int b = 1;

    friend bool operator==(const module& x, const module& y) { return x.n == y.n && x.a == y.a && x.b == y.b; }
    friend bool operator!=(const module& x, const module& y) { return !(x == y); }
    friend bool operator<(const module& x, const module& y) {
        if (x.n != y.n) return x.n < y.n;
        if (x.b - x.a != y.b - y.a) return x.b - x.a < y.b - y.a;
        return x.a < y.a;
    }
};

using multiset = std::vector<module>;

inline module make(int n, int a, int b) {
    if (n < 1 || a < 1 || b < a || b > n)
        throw precondition_error("malformed interval [" + std::to_string(a) + "," + std::to_string(b) +
                                 "] for A" + std::to_string(n));
    return {n, a, b};
}

inline int length(const module& m) { return m.b - m.a + 1; }
inline bool is_simple(const module& m) { return m.a == m.b; }
inline bool is_projective(const module& m) { return m.b == m.n; }
inline bool is_injective(const module& m) { return m.a == 1; }

inline void same_n(const module& x, const module& y) {
    if (x.n != y.n) throw precondition_error("interval modules over different quivers");
}

inline bool hom_nonzero(const module& x, const module& y) {
    same_n(x, y);
    return y.a <= x.a && x.a <= y.b && y.b <= x.b;
}

inline std::vector<multiset> middle_terms(const module& a, const module& b) {
    same_n(a, b);
    std::vector<multiset> out;
    if (b.b + 1 == a.a) {
        out.push_back({module{a.n, b.a, a.b}});
    } else if (b.a < a.a && a.a <= b.b && b.b < a.b) {
        multiset m{module{a.n, b.a, a.b}, module{a.n, a.a, b.b}};
        std::sort(m.begin(), m.end());
        out.push_back(m);
    }
    return out;
}

inline std::vector<module> all_modules(int n) {
    std::vector<module> out;
    for (int a = 1; a <= n; ++a)
        for (int b = a; b <= n; ++b) out.push_back({n, a, b});
    std::sort(out.begin(), out.end());
    return out;
}

// Total order with Hom(later, earlier) = 0: socle descending, then top
// descending. The vanishing property is re-checked on every call.
inline std::vector<module> directing_order(int n) {
    std::vector<module> all = all_modules(n);
    std::sort(all.begin(), all.end(), [](const module& x, const module& y) {
        if (x.b != y.b) return x.b > y.b;
        return x.a > y.a;
    });
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (hom_nonzero(all[i], all[j]))
                throw internal_error("directing order violated for A" + std::to_string(n));
    return all;
}

// [a,b] over A_{n-1} sits in the rank n tube as the segment with top n-a and
// socle n-b; shifting by tau gives the copy avoiding S_{n-1}.
inline tube::indec embed_in_tube(const module& m, int n, int shift = 0) {
    if (m.n != n - 1) throw precondition_error("embedding needs A_{n-1} intervals");
    return tube::make(n, n - m.a - shift, length(m));
}

inline std::string to_string(const module& m) {
    return "M[" + std::to_string(m.a) + "," + std::to_string(m.b) + "]@A" + std::to_string(m.n);
}

} // namespace stabcat::interval
