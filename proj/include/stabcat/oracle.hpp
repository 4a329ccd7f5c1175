#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "stabcat/errors.hpp"
#include "stabcat/interval.hpp"
#include "stabcat/tube.hpp"

namespace stabcat::oracle {

// ---- GF(p) -------------------------------------------------------------

struct field {
    int p = 2;
    explicit field(int prime = 2) : p(prime) {
        if (p != 2 && p != 3 && p != 5) throw precondition_error("field size must be 2, 3 or 5");
    }
    int add(int a, int b) const { return (a + b) % p; }
    int sub(int a, int b) const { return (a - b + p) % p; }
    int mul(int a, int b) const { return (a * b) % p; }
    int inv(int a) const {
        for (int x = 1; x < p; ++x)
            if (mul(a, x) == 1) return x;
        throw internal_error("zero has no inverse");
    }
};

struct mat {
    int r = 0, c = 0;
    std::vector<std::uint8_t> a;
    mat() = default;
    mat(int rows, int cols) : r(rows), c(cols), a(static_cast<std::size_t>(rows) * cols, 0) {}
    std::uint8_t& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * c + j]; }
    std::uint8_t operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * c + j]; }
    static mat identity(int n) {
        mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
};

inline mat mul(const field& F, const mat& x, const mat& y) {
    if (x.c != y.r) throw internal_error("matrix shape mismatch");
    mat z(x.r, y.c);
    for (int i = 0; i < x.r; ++i)
        for (int k = 0; k < x.c; ++k) {
            int v = x(i, k);
            if (!v) continue;
            for (int j = 0; j < y.c; ++j) z(i, j) = static_cast<std::uint8_t>((z(i, j) + v * y(k, j)) % F.p);
        }
    return z;
}

// Row reduces in place; returns pivot columns.
inline std::vector<int> rref(const field& F, mat& m) {
    std::vector<int> piv;
    int row = 0;
    for (int col = 0; col < m.c && row < m.r; ++col) {
        int sel = -1;
        for (int i = row; i < m.r; ++i)
            if (m(i, col)) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        for (int j = 0; j < m.c; ++j) std::swap(m(sel, j), m(row, j));
        int inv = F.inv(m(row, col));
        for (int j = 0; j < m.c; ++j) m(row, j) = static_cast<std::uint8_t>(F.mul(m(row, j), inv));
        for (int i = 0; i < m.r; ++i) {
            if (i == row || !m(i, col)) continue;
            int f = m(i, col);
            for (int j = 0; j < m.c; ++j) m(i, j) = static_cast<std::uint8_t>(F.sub(m(i, j), F.mul(f, m(row, j))));
        }
        piv.push_back(col);
        ++row;
    }
    return piv;
}

inline int rank(const field& F, mat m) { return static_cast<int>(rref(F, m).size()); }

inline std::vector<std::vector<std::uint8_t>> nullspace(const field& F, mat m) {
    auto piv = rref(F, m);
    std::vector<char> is_piv(m.c, 0);
    for (int c : piv) is_piv[c] = 1;
    std::vector<std::vector<std::uint8_t>> basis;
    for (int free = 0; free < m.c; ++free) {
        if (is_piv[free]) continue;
        std::vector<std::uint8_t> v(m.c, 0);
        v[free] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = static_cast<std::uint8_t>(F.sub(0, m(static_cast<int>(i), free)));
        basis.push_back(v);
    }
    return basis;
}

inline mat inverse(const field& F, const mat& m) {
    if (m.r != m.c) throw internal_error("inverse of a non-square matrix");
    const int n = m.r;
    if (n == 0) return m;
    mat aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    auto piv = rref(F, aug);
    if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1) throw internal_error("singular matrix");
    mat out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
    return out;
}

// ---- quiver representations ---------------------------------------------

struct shape {
    enum kind_t { cyclic, linear, kronecker } kind = cyclic;
    int n = 1;
    int vertices() const { return kind == kronecker ? 2 : n; }
    std::vector<std::pair<int, int>> arrows() const {
        std::vector<std::pair<int, int>> out;
        if (kind == cyclic)
            for (int v = 0; v < n; ++v) out.push_back({v, ((v - 1) % n + n) % n});
        else if (kind == linear)
            for (int v = 0; v + 1 < n; ++v) out.push_back({v, v + 1});
        else
            out = {{0, 1}, {0, 1}};
        return out;
    }
    friend bool operator==(const shape& a, const shape& b) { return a.kind == b.kind && a.n == b.n; }
};

struct rep {
    shape sh;
    std::vector<int> dims;
    std::vector<mat> maps;  // one per arrow, dims[to] x dims[from]
    int total() const { return std::accumulate(dims.begin(), dims.end(), 0); }
};

inline rep zero_rep(const shape& sh) {
    rep r{sh, std::vector<int>(sh.vertices(), 0), {}};
    for (auto [u, v] : sh.arrows()) r.maps.push_back(mat(0, 0));
    return r;
}

inline void check_rep(const field& F, const rep& r) {
    auto ar = r.sh.arrows();
    if (r.maps.size() != ar.size()) throw internal_error("arrow count mismatch");
    for (std::size_t i = 0; i < ar.size(); ++i)
        if (r.maps[i].r != r.dims[ar[i].second] || r.maps[i].c != r.dims[ar[i].first])
            throw internal_error("map dimensions inconsistent with vertex dimensions");
    if (r.sh.kind == shape::cyclic) {
        // composite around the cycle must be nilpotent
        const int n = r.sh.n;
        int v = 0;
        mat around = mat::identity(r.dims[v]);
        for (int k = 0; k < n; ++k) around = mul(F, r.maps[(v - k % n + n) % n], around);
        mat pw = around;
        for (int k = 0; k < r.dims[0]; ++k) pw = mul(F, around, pw);
        if (std::any_of(pw.a.begin(), pw.a.end(), [](std::uint8_t x) { return x != 0; }))
            throw precondition_error("cyclic representation is not nilpotent");
    }
}

// S_j^(t): basis b_k at vertex j-k, arrows push b_k to b_{k+1}.
inline rep build_cyclic(int n, int j, int t) {
    shape sh{shape::cyclic, n};
    rep r{sh, std::vector<int>(n, 0), {}};
    std::vector<std::vector<int>> at(n);  // basis indices per vertex
    std::vector<int> local(t);
    for (int k = 0; k < t; ++k) {
        int v = tube::mod(static_cast<long long>(j) - k, n);
        local[k] = r.dims[v]++;
        at[v].push_back(k);
    }
    for (auto [u, v] : sh.arrows()) {
        mat m(r.dims[v], r.dims[u]);
        for (int k = 0; k + 1 < t; ++k)
            if (tube::mod(static_cast<long long>(j) - k, n) == u) m(local[k + 1], local[k]) = 1;
        r.maps.push_back(m);
    }
    return r;
}

// M[a,b] over 1 -> ... -> n, stored on vertices 0..n-1.
inline rep build_linear(int n, int a, int b) {
    interval::make(n, a, b);
    shape sh{shape::linear, n};
    rep r{sh, std::vector<int>(n, 0), {}};
    for (int v = a; v <= b; ++v) r.dims[v - 1] = 1;
    for (auto [u, v] : sh.arrows()) {
        mat m(r.dims[v], r.dims[u]);
        if (r.dims[u] && r.dims[v]) m(0, 0) = 1;
        r.maps.push_back(m);
    }
    return r;
}

struct kron_obj {
    enum kind_t { prep, reg, prei } kind = prep;
    int k = 1;      // index for prep/prei, length for reg
    int point = 0;  // 0 -> 0, 1 -> 1, 2 -> infinity, i >= 3 -> i-1
    friend bool operator==(const kron_obj&, const kron_obj&) = default;
};

inline rep build_kronecker(const field& F, const kron_obj& o) {
    shape sh{shape::kronecker, 2};
    rep r{sh, {0, 0}, {}};
    if (o.kind == kron_obj::prep) {
        r.dims = {o.k - 1, o.k};
        mat al(o.k, o.k - 1), be(o.k, o.k - 1);
        for (int i = 0; i < o.k - 1; ++i) al(i, i) = 1, be(i + 1, i) = 1;
        r.maps = {al, be};
    } else if (o.kind == kron_obj::prei) {
        r.dims = {o.k, o.k - 1};
        mat al(o.k - 1, o.k), be(o.k - 1, o.k);
        for (int i = 0; i < o.k - 1; ++i) al(i, i) = 1, be(i, i + 1) = 1;
        r.maps = {al, be};
    } else {
        const int d = o.k;
        r.dims = {d, d};
        mat J(d, d);
        for (int i = 0; i + 1 < d; ++i) J(i + 1, i) = 1;
        if (o.point == 2) {
            r.maps = {J, mat::identity(d)};
        } else {
            int c = o.point < 2 ? o.point : o.point - 1;
            if (c >= F.p) throw precondition_error("point value does not exist in GF(" + std::to_string(F.p) + ")");
            mat be = J;
            for (int i = 0; i < d; ++i) be(i, i) = static_cast<std::uint8_t>(c);
            r.maps = {mat::identity(d), be};
        }
    }
    return r;
}

inline rep direct_sum(const std::vector<rep>& parts, const shape& sh) {
    rep out = zero_rep(sh);
    for (auto& p : parts)
        for (int v = 0; v < sh.vertices(); ++v) out.dims[v] += p.dims[v];
    auto ar = sh.arrows();
    std::vector<int> off(sh.vertices(), 0);
    for (std::size_t a = 0; a < ar.size(); ++a) out.maps[a] = mat(out.dims[ar[a].second], out.dims[ar[a].first]);
    for (auto& p : parts) {
        for (std::size_t a = 0; a < ar.size(); ++a) {
            auto [u, v] = ar[a];
            for (int i = 0; i < p.maps[a].r; ++i)
                for (int j = 0; j < p.maps[a].c; ++j) out.maps[a](off[v] + i, off[u] + j) = p.maps[a](i, j);
        }
        for (int v = 0; v < sh.vertices(); ++v) off[v] += p.dims[v];
    }
    return out;
}

// Commuting-square system for Hom(X, Y); unknowns are the per-vertex blocks.
struct hom_system {
    std::vector<int> offset;
    mat eqs;
    int unknowns = 0;
};

inline hom_system build_hom_system(const field& F, const rep& X, const rep& Y) {
    if (!(X.sh == Y.sh)) throw precondition_error("representations of different quivers");
    hom_system hs;
    const int nv = X.sh.vertices();
    for (int v = 0; v < nv; ++v) {
        hs.offset.push_back(hs.unknowns);
        hs.unknowns += Y.dims[v] * X.dims[v];
    }
    auto ar = X.sh.arrows();
    int rows = 0;
    for (auto [u, v] : ar) rows += Y.dims[v] * X.dims[u];
    hs.eqs = mat(rows, hs.unknowns);
    int row = 0;
    for (std::size_t a = 0; a < ar.size(); ++a) {
        auto [u, v] = ar[a];
        const mat& MX = X.maps[a];
        const mat& MY = Y.maps[a];
        for (int i = 0; i < Y.dims[v]; ++i)
            for (int j = 0; j < X.dims[u]; ++j, ++row) {
                // (MY f_u)[i][j] - (f_v MX)[i][j]
                for (int k = 0; k < Y.dims[u]; ++k)
                    if (MY(i, k)) {
                        auto& e = hs.eqs(row, hs.offset[u] + k * X.dims[u] + j);
                        e = static_cast<std::uint8_t>(F.add(e, MY(i, k)));
                    }
                for (int k = 0; k < X.dims[v]; ++k)
                    if (MX(k, j)) {
                        auto& e = hs.eqs(row, hs.offset[v] + i * X.dims[v] + k);
                        e = static_cast<std::uint8_t>(F.sub(e, MX(k, j)));
                    }
            }
    }
    return hs;
}

inline int hom_dim(const field& F, const rep& X, const rep& Y) {
    auto hs = build_hom_system(F, X, Y);
    if (hs.unknowns == 0) return 0;
    return hs.unknowns - rank(F, hs.eqs);
}

inline std::vector<mat> unpack_hom(const hom_system& hs, const rep& X, const rep& Y, const std::vector<std::uint8_t>& v) {
    std::vector<mat> f;
    for (int u = 0; u < X.sh.vertices(); ++u) {
        mat m(Y.dims[u], X.dims[u]);
        for (int i = 0; i < m.r; ++i)
            for (int j = 0; j < m.c; ++j) m(i, j) = v[hs.offset[u] + i * m.c + j];
        f.push_back(m);
    }
    return f;
}

// Cokernel of a monomorphism f: X -> Y, using a standard-vector complement.
inline rep cokernel(const field& F, const rep& Y, const std::vector<mat>& f) {
    const int nv = Y.sh.vertices();
    std::vector<mat> q(nv), s(nv);
    rep C = zero_rep(Y.sh);
    for (int v = 0; v < nv; ++v) {
        const int n = Y.dims[v];
        // basis = columns of f_v followed by standard vectors completing it
        std::vector<std::vector<std::uint8_t>> cols;
        for (int j = 0; j < f[v].c; ++j) {
            std::vector<std::uint8_t> col(n);
            for (int i = 0; i < n; ++i) col[i] = f[v](i, j);
            cols.push_back(col);
        }
        const int r = static_cast<int>(cols.size());
        std::vector<int> chosen;
        for (int e = 0; e < n && static_cast<int>(cols.size()) < n; ++e) {
            auto trial = cols;
            std::vector<std::uint8_t> col(n, 0);
            col[e] = 1;
            trial.push_back(col);
            mat m(n, static_cast<int>(trial.size()));
            for (std::size_t j = 0; j < trial.size(); ++j)
                for (int i = 0; i < n; ++i) m(i, static_cast<int>(j)) = trial[j][i];
            if (rank(F, m) == static_cast<int>(trial.size())) {
                cols = trial;
                chosen.push_back(e);
            }
        }
        mat B(n, n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) B(i, j) = cols[j][i];
        mat Binv = n ? inverse(F, B) : mat(0, 0);
        const int k = n - r;
        C.dims[v] = k;
        q[v] = mat(k, n);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < n; ++j) q[v](i, j) = Binv(r + i, j);
        s[v] = mat(n, k);
        for (int i = 0; i < k; ++i) s[v](chosen[i], i) = 1;
    }
    auto ar = Y.sh.arrows();
    for (std::size_t a = 0; a < ar.size(); ++a) {
        auto [u, v] = ar[a];
        C.maps[a] = mul(F, q[v], mul(F, Y.maps[a], s[u]));
    }
    return C;
}

inline bool is_mono(const field& F, const std::vector<mat>& f) {
    for (auto& m : f)
        if (rank(F, m) != m.c) return false;
    return true;
}

// ---- decomposition --------------------------------------------------------

// Path ranks r(v, k) for the cyclic quiver: rank of the k-step path out of v.
inline std::map<std::pair<int, int>, int> decompose_cyclic(const field& F, const rep& R) {
    const int n = R.sh.n;
    const int L = R.total();
    std::vector<std::vector<int>> r(n, std::vector<int>(L + 2, 0));
    for (int v = 0; v < n; ++v) {
        mat path = mat::identity(R.dims[v]);
        int at = v;
        for (int k = 0; k <= L + 1; ++k) {
            r[v][k] = rank(F, path);
            path = mul(F, R.maps[at], path);
            at = tube::mod(at - 1, n);
        }
    }
    // h(s, k): summands with socle s and length > k
    auto h = [&](int s, int k) { return r[tube::mod(s + k, n)][k] - r[tube::mod(s + k, n)][k + 1]; };
    std::map<std::pair<int, int>, int> out;  // (top, length) -> multiplicity
    for (int s = 0; s < n; ++s)
        for (int t = 1; t <= L; ++t) {
            int m = h(s, t - 1) - h(s, t);
            if (m < 0) throw internal_error("negative multiplicity in path-rank decomposition");
            if (m) out[{tube::mod(s + t - 1, n), t}] = m;
        }
    return out;
}

// Same idea on 1 -> 2 -> ... -> n: (a, b) -> multiplicity.
inline std::map<std::pair<int, int>, int> decompose_linear(const field& F, const rep& R) {
    const int n = R.sh.n;
    auto r = [&](int a, int k) {  // rank of the path from vertex a (1-based) of length k
        if (a < 1 || a + k > n) return 0;
        mat path = mat::identity(R.dims[a - 1]);
        for (int i = 0; i < k; ++i) path = mul(F, R.maps[a - 1 + i], path);
        return rank(F, path);
    };
    auto c = [&](int a, int b) { return r(a, b - a) - r(a, b - a + 1); };  // top <= a, socle exactly b
    std::map<std::pair<int, int>, int> out;
    for (int a = 1; a <= n; ++a)
        for (int b = a; b <= n; ++b) {
            int m = c(a, b) - (a > 1 ? c(a - 1, b) : 0);
            if (m < 0) throw internal_error("negative multiplicity in path-rank decomposition");
            if (m) out[{a, b}] = m;
        }
    return out;
}

struct frac {
    long long num = 0, den = 1;
    static frac of(long long n, long long d = 1) {
        if (d < 0) n = -n, d = -d;
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g == 0) g = 1;
        return {n / g, d / g};
    }
    frac operator-(const frac& o) const { return of(num * o.den - o.num * den, den * o.den); }
    frac operator*(const frac& o) const { return of(num * o.num, den * o.den); }
    frac operator/(const frac& o) const { return of(num * o.den, den * o.num); }
    bool zero() const { return num == 0; }
};

// Krull-Schmidt multiplicities from the Hom fingerprint against `basis`,
// solved exactly; the answer is re-checked against dims and fingerprint.
inline std::vector<int> decompose_fingerprint(const field& F, const rep& R, const std::vector<rep>& basis) {
    const int m = static_cast<int>(basis.size());
    std::vector<std::vector<frac>> A(m, std::vector<frac>(m + 1));
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < m; ++k) A[i][k] = frac::of(hom_dim(F, basis[i], basis[k]));
        A[i][m] = frac::of(hom_dim(F, basis[i], R));
    }
    int row = 0;
    std::vector<int> piv;
    for (int col = 0; col < m && row < m; ++col) {
        int sel = -1;
        for (int i = row; i < m; ++i)
            if (!A[i][col].zero()) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        std::swap(A[sel], A[row]);
        for (int i = 0; i < m; ++i) {
            if (i == row || A[i][col].zero()) continue;
            frac f = A[i][col] / A[row][col];
            for (int j = col; j <= m; ++j) A[i][j] = A[i][j] - f * A[row][j];
        }
        piv.push_back(col);
        ++row;
    }
    if (static_cast<int>(piv.size()) != m) throw internal_error("fingerprint matrix is singular; raise the bound");
    std::vector<int> mult(m, 0);
    for (int i = 0; i < m; ++i) {
        frac x = A[i][m] / A[i][piv[i]];
        if (x.den != 1 || x.num < 0) throw internal_error("fingerprint system inconsistent; raise the bound");
        mult[piv[i]] = static_cast<int>(x.num);
    }
    std::vector<rep> parts;
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < mult[i]; ++k) parts.push_back(basis[i]);
    rep S = direct_sum(parts, R.sh);
    if (S.dims != R.dims) throw internal_error("decomposition does not reproduce the dimension vector");
    for (int i = 0; i < m; ++i)
        if (hom_dim(F, basis[i], S) != hom_dim(F, basis[i], R))
            throw internal_error("decomposition does not reproduce the fingerprint");
    return mult;
}

// ---- brute-force middle terms --------------------------------------------

inline long long budget() {
    if (const char* s = std::getenv("STABCAT_BUDGET")) {
        char* end = nullptr;
        long long v = std::strtoll(s, &end, 10);
        if (end && *end == 0 && v > 0) return v;
        throw precondition_error(std::string("STABCAT_BUDGET must be a positive integer, got '") + s + "'");
    }
    return 1000000;
}

// Candidate objects with an isomorphism test; `same(C, i)` decides C = cands[i].
struct catalogue {
    field F;
    std::vector<std::string> names;
    std::vector<rep> reps;
    std::function<bool(const rep&, int)> same;
};

inline catalogue tube_catalogue(const field& F, int n, int maxlen) {
    catalogue c{F, {}, {}, {}};
    std::vector<tube::indec> objs;
    for (int t = 1; t <= maxlen; ++t)
        for (int j = 0; j < n; ++j) {
            objs.push_back(tube::make(n, j, t));
            c.names.push_back(tube::to_string(objs.back()));
            c.reps.push_back(build_cyclic(n, j, t));
        }
    c.same = [F, objs](const rep& C, int i) {
        auto d = decompose_cyclic(F, C);
        return d.size() == 1 && d.begin()->second == 1 && d.begin()->first == std::make_pair(objs[i].j, objs[i].t);
    };
    return c;
}

inline catalogue kronecker_catalogue(const field& F, int K, int D, int npoints) {
    catalogue c{F, {}, {}, {}};
    static const std::vector<std::string> labels{"0", "1", "λ"};
    for (int k = 1; k <= K; ++k) {
        c.names.push_back("P_" + std::to_string(k));
        c.reps.push_back(build_kronecker(F, {kron_obj::prep, k, 0}));
    }
    for (int x = 0; x < npoints; ++x)
        for (int d = 1; d <= D; ++d) {
            std::string lab = x < 3 ? labels[x] : "p" + std::to_string(x);
            c.names.push_back("R[" + lab + "]^(" + std::to_string(d) + ")");
            c.reps.push_back(build_kronecker(F, {kron_obj::reg, d, x}));
        }
    for (int k = K; k >= 1; --k) {
        c.names.push_back("I_" + std::to_string(k));
        c.reps.push_back(build_kronecker(F, {kron_obj::prei, k, 0}));
    }
    auto reps = c.reps;
    c.same = [F, reps](const rep& C, int i) {
        if (C.dims != reps[i].dims) return false;
        for (auto& X : reps) {
            if (X.total() > C.total()) continue;
            if (hom_dim(F, X, C) != hom_dim(F, X, reps[i])) return false;
            if (hom_dim(F, C, X) != hom_dim(F, reps[i], X)) return false;
        }
        return true;
    };
    return c;
}

// Multisets (sorted catalogue indices) whose dimension vectors add to `target`.
inline std::vector<std::vector<int>> multisets_with_dims(const catalogue& c, const std::vector<int>& target) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(std::size_t, std::vector<int>)> go = [&](std::size_t from, std::vector<int> left) {
        if (std::all_of(left.begin(), left.end(), [](int x) { return x == 0; })) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = from; i < c.reps.size(); ++i) {
            bool fits = true;
            for (std::size_t v = 0; v < left.size(); ++v) fits = fits && c.reps[i].dims[v] <= left[v];
            if (!fits || c.reps[i].total() == 0) continue;
            auto next = left;
            for (std::size_t v = 0; v < left.size(); ++v) next[v] -= c.reps[i].dims[v];
            cur.push_back(static_cast<int>(i));
            go(i, next);
            cur.pop_back();
        }
    };
    go(0, target);
    return out;
}

// All E (as catalogue multisets) admitting a non-split 0 -> A -> E -> B -> 0.
inline std::vector<std::vector<int>> middle_terms_bruteforce(const catalogue& c, int a, int b) {
    const field& F = c.F;
    const rep& A = c.reps[a];
    const rep& B = c.reps[b];
    std::vector<int> target(A.dims.size());
    for (std::size_t v = 0; v < target.size(); ++v) target[v] = A.dims[v] + B.dims[v];
    std::vector<int> split{a, b};
    std::sort(split.begin(), split.end());
    const long long cap = budget();
    std::vector<std::vector<int>> out;
    for (auto& E_idx : multisets_with_dims(c, target)) {
        if (E_idx == split) continue;
        std::vector<rep> parts;
        for (int i : E_idx) parts.push_back(c.reps[i]);
        rep E = direct_sum(parts, A.sh);
        auto hs = build_hom_system(F, A, E);
        auto basis = nullspace(F, hs.eqs);
        long long total = 1;
        for (std::size_t k = 0; k < basis.size(); ++k) {
            total *= F.p;
            if (total > cap)
                throw budget_error("Hom space of size " + std::to_string(F.p) + "^" + std::to_string(basis.size()) +
                                   " exceeds the budget of " + std::to_string(cap) + " maps");
        }
        std::vector<int> coef(basis.size(), 0);
        bool found = false;
        for (long long it = 0; it < total && !found; ++it) {
            std::vector<std::uint8_t> v(hs.unknowns, 0);
            for (std::size_t k = 0; k < basis.size(); ++k)
                if (coef[k])
                    for (int u = 0; u < hs.unknowns; ++u)
                        v[u] = static_cast<std::uint8_t>((v[u] + coef[k] * basis[k][u]) % F.p);
            for (std::size_t k = 0; k < coef.size(); ++k) {
                if (++coef[k] < F.p) break;
                coef[k] = 0;
            }
            auto f = unpack_hom(hs, A, E, v);
            if (!is_mono(F, f)) continue;
            if (c.same(cokernel(F, E, f), b)) found = true;
        }
        if (found) out.push_back(E_idx);
    }
    return out;
}

// ---- Ext and the closure fixpoint on tubes ---------------------------------

// Coboundary map Hom-vertex blocks -> arrow blocks for extensions of B by A.
struct ext_space {
    int cochains = 0;                  // dimension of the arrow-block space
    std::vector<int> arrow_offset;     // per arrow
    std::vector<std::vector<std::uint8_t>> classes;  // complement basis of the coboundaries
};

inline ext_space build_ext_space(const field& F, const rep& B, const rep& A) {
    ext_space es;
    auto ar = A.sh.arrows();
    for (auto [u, v] : ar) {
        es.arrow_offset.push_back(es.cochains);
        es.cochains += A.dims[v] * B.dims[u];
    }
    std::vector<int> voff;
    int vdim = 0;
    for (int v = 0; v < A.sh.vertices(); ++v) {
        voff.push_back(vdim);
        vdim += A.dims[v] * B.dims[v];
    }
    // columns: images of elementary vertex maps f_v = E_{ij}
    std::vector<std::vector<std::uint8_t>> image;
    for (int w = 0; w < A.sh.vertices(); ++w)
        for (int i = 0; i < A.dims[w]; ++i)
            for (int j = 0; j < B.dims[w]; ++j) {
                std::vector<std::uint8_t> col(es.cochains, 0);
                for (std::size_t a = 0; a < ar.size(); ++a) {
                    auto [u, v] = ar[a];
                    const int bc = B.dims[u];
                    // (A_a f_u - f_v B_a)
                    if (u == w)
                        for (int r = 0; r < A.dims[v]; ++r)
                            if (A.maps[a](r, i)) {
                                auto& e = col[es.arrow_offset[a] + r * bc + j];
                                e = static_cast<std::uint8_t>(F.add(e, A.maps[a](r, i)));
                            }
                    if (v == w)
                        for (int cc = 0; cc < bc; ++cc)
                            if (B.maps[a](j, cc)) {
                                auto& e = col[es.arrow_offset[a] + i * bc + cc];
                                e = static_cast<std::uint8_t>(F.sub(e, B.maps[a](j, cc)));
                            }
                }
                image.push_back(col);
            }
    // complement of span(image) by standard vectors
    std::vector<std::vector<std::uint8_t>> span = image;
    auto rank_of = [&](const std::vector<std::vector<std::uint8_t>>& vs) {
        if (vs.empty()) return 0;
        mat m(static_cast<int>(vs.size()), es.cochains);
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (int j = 0; j < es.cochains; ++j) m(static_cast<int>(i), j) = vs[i][j];
        return rank(F, m);
    };
    int cur = rank_of(span);
    for (int e = 0; e < es.cochains; ++e) {
        std::vector<std::uint8_t> sv(es.cochains, 0);
        sv[e] = 1;
        span.push_back(sv);
        int r = rank_of(span);
        if (r > cur) {
            cur = r;
            es.classes.push_back(sv);
        } else {
            span.pop_back();
        }
    }
    return es;
}

inline int ext_dim(const field& F, const rep& B, const rep& A) {
    return static_cast<int>(build_ext_space(F, B, A).classes.size());
}

// Middle object of the extension class with cocycle c.
inline rep extension(const rep& B, const rep& A, const ext_space& es, const std::vector<std::uint8_t>& c) {
    rep E = zero_rep(A.sh);
    for (int v = 0; v < A.sh.vertices(); ++v) E.dims[v] = A.dims[v] + B.dims[v];
    auto ar = A.sh.arrows();
    for (std::size_t a = 0; a < ar.size(); ++a) {
        auto [u, v] = ar[a];
        mat m(E.dims[v], E.dims[u]);
        for (int i = 0; i < A.dims[v]; ++i)
            for (int j = 0; j < A.dims[u]; ++j) m(i, j) = A.maps[a](i, j);
        for (int i = 0; i < B.dims[v]; ++i)
            for (int j = 0; j < B.dims[u]; ++j) m(A.dims[v] + i, A.dims[u] + j) = B.maps[a](i, j);
        for (int i = 0; i < A.dims[v]; ++i)
            for (int j = 0; j < B.dims[u]; ++j) m(i, A.dims[u] + j) = c[es.arrow_offset[a] + i * B.dims[u] + j];
        E.maps[a] = m;
    }
    return E;
}

// For every pair of multisets (X, Y) of tube objects with total length at
// most `bound`, the summands of all middle terms of extensions of Y by X.
struct ext_table {
    int n = 0, bound = 0;
    std::vector<tube::indec> objs;  // real lengths 1..bound
    struct entry {
        std::uint64_t support = 0;
        std::uint64_t summands = 0;
    };
    std::vector<entry> entries;
    int index(const tube::indec& x) const {
        return (x.t - 1) * n + x.j;
    }
};

inline ext_table build_ext_table(const field& F, int n, int bound) {
    ext_table tb;
    tb.n = n;
    tb.bound = bound;
    if (n * bound > 64) throw precondition_error("closure oracle supports at most 64 objects");
    for (int t = 1; t <= bound; ++t)
        for (int j = 0; j < n; ++j) tb.objs.push_back(tube::make(n, j, t));
    // multisets by total length
    std::vector<std::vector<std::vector<int>>> by_len(bound + 1);
    std::vector<int> cur;
    std::function<void(std::size_t, int)> go = [&](std::size_t from, int len) {
        if (len > 0) by_len[len].push_back(cur);
        for (std::size_t i = from; i < tb.objs.size(); ++i) {
            if (len + tb.objs[i].t > bound) continue;
            cur.push_back(static_cast<int>(i));
            go(i, len + tb.objs[i].t);
            cur.pop_back();
        }
    };
    go(0, 0);
    const long long cap = budget();
    auto build = [&](const std::vector<int>& ms) {
        std::vector<rep> parts;
        for (int i : ms) parts.push_back(build_cyclic(n, tb.objs[i].j, tb.objs[i].t));
        return direct_sum(parts, shape{shape::cyclic, n});
    };
    for (int la = 1; la < bound; ++la)
        for (int lb = 1; la + lb <= bound; ++lb)
            for (auto& X : by_len[la])
                for (auto& Y : by_len[lb]) {
                    rep RX = build(X), RY = build(Y);
                    auto es = build_ext_space(F, RY, RX);
                    long long total = 1;
                    for (std::size_t k = 0; k < es.classes.size(); ++k) {
                        total *= F.p;
                        if (total > cap) throw budget_error("Ext space exceeds the budget of " + std::to_string(cap));
                    }
                    ext_table::entry e;
                    for (int i : X) e.support |= std::uint64_t{1} << i;
                    for (int i : Y) e.support |= std::uint64_t{1} << i;
                    std::vector<int> coef(es.classes.size(), 0);
                    for (long long it = 0; it < total; ++it) {
                        std::vector<std::uint8_t> c(es.cochains, 0);
                        for (std::size_t k = 0; k < coef.size(); ++k)
                            if (coef[k])
                                for (int u = 0; u < es.cochains; ++u)
                                    c[u] = static_cast<std::uint8_t>((c[u] + coef[k] * es.classes[k][u]) % F.p);
                        for (std::size_t k = 0; k < coef.size(); ++k) {
                            if (++coef[k] < F.p) break;
                            coef[k] = 0;
                        }
                        for (auto& [jt, m] : decompose_cyclic(F, extension(RY, RX, es, c)))
                            e.summands |= std::uint64_t{1} << tb.index(tube::make(n, jt.first, jt.second));
                    }
                    if (e.summands & ~e.support) tb.entries.push_back(e);
                }
    return tb;
}

inline std::uint64_t closure_fixpoint(const ext_table& tb, std::uint64_t gens) {
    std::uint64_t cur = gens;
    for (bool changed = true; changed;) {
        changed = false;
        for (auto& e : tb.entries)
            if ((e.support & ~cur) == 0 && (e.summands & ~cur)) {
                cur |= e.summands;
                changed = true;
            }
    }
    return cur;
}

} // namespace stabcat::oracle
