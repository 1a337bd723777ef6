#pragma once

#include <vector>

#include "kleinjac/errors.hpp"
#include "kleinjac/rational.hpp"

namespace kleinjac {

// Dense integer matrix over arbitrary-precision integers. Homology data is
// tiny (2g x 2g, g <= 5), so simplicity beats cleverness here; exactness is
// the point.
struct IMat {
    int rows = 0, cols = 0;
    std::vector<BigInt> a;

    IMat() = default;
    IMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), BigInt(0)) {}

    BigInt& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)]; }
    const BigInt& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)]; }

    static IMat identity(int n) {
        IMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    IMat transposed() const {
        IMat t(cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool operator==(const IMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }

    std::vector<BigInt> col(int j) const {
        std::vector<BigInt> v(static_cast<std::size_t>(rows));
        for (int i = 0; i < rows; ++i) v[static_cast<std::size_t>(i)] = (*this)(i, j);
        return v;
    }
};

inline IMat operator*(const IMat& x, const IMat& y) {
    if (x.cols != y.rows) fail(ErrorKind::Internal, "matrix dimension mismatch");
    IMat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const BigInt& s = x(i, k);
            if (s == 0) continue;
            for (int j = 0; j < y.cols; ++j) z(i, j) += s * y(k, j);
        }
    return z;
}

// The intersection form used everywhere: J = ((0, -I), (I, 0)).
inline IMat standard_symplectic_form(int g) {
    IMat j(2 * g, 2 * g);
    for (int i = 0; i < g; ++i) {
        j(i, g + i) = -1;
        j(g + i, i) = 1;
    }
    return j;
}

// Fraction-free (Bareiss) determinant.
inline BigInt det(IMat m) {
    if (m.rows != m.cols) fail(ErrorKind::Internal, "det of non-square matrix");
    int n = m.rows;
    BigInt prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m(k, k) == 0) {
            int pivot = -1;
            for (int i = k + 1; i < n; ++i)
                if (m(i, k) != 0) {
                    pivot = i;
                    break;
                }
            if (pivot < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(m(k, j), m(pivot, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

struct SmithResult {
    IMat u, d, v;  // u * input * v = d, with u and v unimodular
};

// Smith normal form with transforms; diagonal entries satisfy the usual
// divisibility chain.
inline SmithResult smith_normal_form(const IMat& input) {
    SmithResult res;
    res.d = input;
    res.u = IMat::identity(input.rows);
    res.v = IMat::identity(input.cols);
    IMat& d = res.d;
    IMat& u = res.u;
    IMat& v = res.v;
    int n = std::min(d.rows, d.cols);

    auto swap_rows = [&](int a, int b) {
        for (int j = 0; j < d.cols; ++j) std::swap(d(a, j), d(b, j));
        for (int j = 0; j < u.cols; ++j) std::swap(u(a, j), u(b, j));
    };
    auto swap_cols = [&](int a, int b) {
        for (int i = 0; i < d.rows; ++i) std::swap(d(i, a), d(i, b));
        for (int i = 0; i < v.rows; ++i) std::swap(v(i, a), v(i, b));
    };
    auto add_row = [&](int dst, int src, const BigInt& c) {
        for (int j = 0; j < d.cols; ++j) d(dst, j) += c * d(src, j);
        for (int j = 0; j < u.cols; ++j) u(dst, j) += c * u(src, j);
    };
    auto add_col = [&](int dst, int src, const BigInt& c) {
        for (int i = 0; i < d.rows; ++i) d(i, dst) += c * d(i, src);
        for (int i = 0; i < v.rows; ++i) v(i, dst) += c * v(i, src);
    };

    // Clears row and column t of the trailing block, pivoting on the entry of
    // minimal absolute value; standard Euclid-style reduction.
    auto reduce_from = [&](int t) {
        while (true) {
            int pi = -1, pj = -1;
            BigInt best = 0;
            for (int i = t; i < d.rows; ++i)
                for (int j = t; j < d.cols; ++j) {
                    if (d(i, j) == 0) continue;
                    BigInt m = abs(d(i, j));
                    if (pi < 0 || m < best) {
                        best = m;
                        pi = i;
                        pj = j;
                    }
                }
            if (pi < 0) return;  // trailing block zero
            if (pi != t) swap_rows(pi, t);
            if (pj != t) swap_cols(pj, t);
            bool clean = true;
            for (int i = t + 1; i < d.rows; ++i)
                if (d(i, t) != 0) {
                    add_row(i, t, -(d(i, t) / d(t, t)));
                    if (d(i, t) != 0) clean = false;
                }
            for (int j = t + 1; j < d.cols; ++j)
                if (d(t, j) != 0) {
                    add_col(j, t, -(d(t, j) / d(t, t)));
                    if (d(t, j) != 0) clean = false;
                }
            if (clean) return;
        }
    };
    for (int t = 0; t < n; ++t) {
        reduce_from(t);
        if (d(t, t) == 0) break;
    }
    // divisibility chain: fold violating entries back and re-reduce; the
    // pivot gcd strictly shrinks, so this terminates
    for (int t = 0; t + 1 < n; ++t) {
        if (d(t, t) == 0) continue;
        for (int s = t + 1; s < n; ++s) {
            if (d(s, s) == 0) continue;
            while (d(s, s) % d(t, t) != 0) {
                add_col(t, s, 1);
                for (int r = t; r < n; ++r) reduce_from(r);
            }
        }
    }
    for (int t = 0; t < n; ++t)
        if (d(t, t) < 0) add_row(t, t, -2);
    return res;
}

// Basis of the integer kernel {x : m x = 0}; columns of the result. The SNF
// construction makes the span saturated (a direct summand).
inline IMat kernel_basis(const IMat& m) {
    SmithResult s = smith_normal_form(m);
    int n = m.cols;
    int r = std::min(m.rows, m.cols);
    std::vector<int> free_cols;
    for (int j = 0; j < n; ++j) {
        bool zero = j >= r || s.d(j, j) == 0;
        if (zero) free_cols.push_back(j);
    }
    IMat k(n, static_cast<int>(free_cols.size()));
    for (int idx = 0; idx < k.cols; ++idx)
        for (int i = 0; i < n; ++i) k(i, idx) = s.v(i, free_cols[static_cast<std::size_t>(idx)]);
    return k;
}

// Inverse of a unimodular matrix, exactly.
inline IMat inverse_unimodular(const IMat& m) {
    SmithResult s = smith_normal_form(m);
    for (int i = 0; i < m.rows; ++i)
        if (abs(s.d(i, i)) != 1) fail(ErrorKind::Internal, "matrix is not unimodular");
    // m = u^-1 d v^-1  =>  m^-1 = v d^-1 u
    IMat dinv(m.rows, m.rows);
    for (int i = 0; i < m.rows; ++i) dinv(i, i) = s.d(i, i);
    return s.v * (dinv * s.u);
}

namespace detail {

inline BigInt form_value(const IMat& form, const std::vector<BigInt>& x,
                         const std::vector<BigInt>& y) {
    BigInt acc = 0;
    for (int i = 0; i < form.rows; ++i) {
        if (x[static_cast<std::size_t>(i)] == 0) continue;
        BigInt row = 0;
        for (int j = 0; j < form.cols; ++j) row += form(i, j) * y[static_cast<std::size_t>(j)];
        acc += x[static_cast<std::size_t>(i)] * row;
    }
    return acc;
}

inline void axpy(std::vector<BigInt>& dst, const BigInt& c, const std::vector<BigInt>& src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += c * src[i];
}

// Divides out the content; primitive vectors pair to 1 under a unimodular
// form, which the completion below relies on.
inline void make_primitive(std::vector<BigInt>& v) {
    BigInt g = 0;
    for (const auto& e : v) g = gcd(g, abs(e));
    if (g > 1)
        for (auto& e : v) e /= g;
}

// From `pool`, build a vector v with <u, v> = 1 by gcd-combining; pool
// entries are modified in place. Fails if the gcd of all pairings is not 1.
inline std::vector<BigInt> pair_with(const IMat& form, const std::vector<BigInt>& u,
                                     std::vector<std::vector<BigInt>>& pool) {
    std::vector<std::pair<std::vector<BigInt>, BigInt>> live;
    for (auto& w : pool) {
        BigInt d = form_value(form, u, w);
        if (d != 0) live.emplace_back(w, d);
    }
    if (live.empty()) fail(ErrorKind::Internal, "degenerate pairing in symplectic completion");
    while (live.size() > 1) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < live.size(); ++i)
            if (abs(live[i].second) < abs(live[best].second)) best = i;
        std::vector<std::pair<std::vector<BigInt>, BigInt>> next;
        next.push_back(live[best]);
        for (std::size_t i = 0; i < live.size(); ++i) {
            if (i == best) continue;
            BigInt q = live[i].second / live[best].second;
            axpy(live[i].first, -q, live[best].first);
            live[i].second -= q * live[best].second;
            if (live[i].second != 0) next.push_back(live[i]);
        }
        live = std::move(next);
    }
    if (abs(live[0].second) != 1)
        fail(ErrorKind::Internal, "pairing gcd is not 1; form not unimodular on the complement");
    std::vector<BigInt> v = live[0].first;
    if (live[0].second == 1)
        for (auto& e : v) e = -e;  // arrange <u, v> = -1
    return v;
}

} // namespace detail

// Change of basis T with T^t M T = standard J, for an antisymmetric
// unimodular pairing M (the measured intersection matrix of candidate
// cycles). Column order of T: the g "alpha" vectors, then the g "beta"s.
inline IMat symplectic_reduce(const IMat& m) {
    int n = m.rows;
    if (n % 2 != 0) fail(ErrorKind::Internal, "odd rank symplectic reduction");
    int g = n / 2;
    BigInt dm = det(m);
    if (dm != 1 && dm != -1)
        fail(ErrorKind::CutCollision, "candidate cycles do not form a unimodular basis");

    std::vector<std::vector<BigInt>> pool;
    for (int i = 0; i < n; ++i) {
        std::vector<BigInt> e(static_cast<std::size_t>(n), BigInt(0));
        e[static_cast<std::size_t>(i)] = 1;
        pool.push_back(e);
    }
    std::vector<std::vector<BigInt>> gammas, deltas;
    for (int k = 0; k < g; ++k) {
        std::vector<BigInt> u = pool.front();
        pool.erase(pool.begin());
        detail::make_primitive(u);
        std::vector<BigInt> v = detail::pair_with(m, u, pool);
        // project the pool off the new hyperbolic pair: w += <w,v>u - <w,u>v
        for (auto& w : pool) {
            BigInt a = detail::form_value(m, w, v);
            BigInt b = detail::form_value(m, w, u);
            detail::axpy(w, a, u);
            detail::axpy(w, -b, v);
        }
        // drop vectors that became zero
        std::vector<std::vector<BigInt>> keep;
        for (auto& w : pool) {
            bool zero = true;
            for (const auto& e : w)
                if (e != 0) zero = false;
            if (!zero) keep.push_back(w);
        }
        pool = std::move(keep);
        gammas.push_back(u);
        deltas.push_back(v);
    }
    IMat t(n, n);
    for (int k = 0; k < g; ++k)
        for (int i = 0; i < n; ++i) {
            t(i, k) = gammas[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
            t(i, g + k) = deltas[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
        }
    IMat check = t.transposed() * (m * t);
    if (!(check == standard_symplectic_form(g)))
        fail(ErrorKind::Internal, "symplectic reduction check failed");
    return t;
}

// Unimodular T whose first g columns span the fixed sublattice ker(S - I)
// and whose Gram against the standard form is again the standard form.
// Requires S to be an anti-symplectic involution with fixed rank exactly g.
inline IMat symplectic_adapt_to_involution(const IMat& s) {
    int n = s.rows;
    int g = n / 2;
    IMat j = standard_symplectic_form(g);

    IMat s_minus = s;
    for (int i = 0; i < n; ++i) s_minus(i, i) -= 1;
    IMat fixed = kernel_basis(s_minus);
    if (fixed.cols < g)
        fail(ErrorKind::FixedRankDeficient,
             "fixed sublattice of the homology involution has rank " + std::to_string(fixed.cols) +
                 " < genus " + std::to_string(g));
    if (fixed.cols > g) fail(ErrorKind::SigmaActionInvalid, "fixed sublattice rank exceeds genus");
    for (int a = 0; a < g; ++a)
        for (int b = 0; b < g; ++b) {
            BigInt val = detail::form_value(j, fixed.col(a), fixed.col(b));
            if (val != 0)
                fail(ErrorKind::SigmaActionInvalid, "fixed sublattice is not isotropic");
        }

    std::vector<std::vector<BigInt>> pool;
    for (int i = 0; i < n; ++i) {
        std::vector<BigInt> e(static_cast<std::size_t>(n), BigInt(0));
        e[static_cast<std::size_t>(i)] = 1;
        pool.push_back(e);
    }
    std::vector<std::vector<BigInt>> gammas, deltas;
    for (int k = 0; k < g; ++k) {
        std::vector<BigInt> u = fixed.col(k);
        // project off the pairs built so far
        for (std::size_t i = 0; i < gammas.size(); ++i) {
            BigInt a = detail::form_value(j, u, deltas[i]);
            BigInt b = detail::form_value(j, u, gammas[i]);
            detail::axpy(u, a, gammas[i]);
            detail::axpy(u, -b, deltas[i]);
        }
        detail::make_primitive(u);
        std::vector<BigInt> v = detail::pair_with(j, u, pool);
        for (auto& w : pool) {
            BigInt a = detail::form_value(j, w, v);
            BigInt b = detail::form_value(j, w, u);
            detail::axpy(w, a, u);
            detail::axpy(w, -b, v);
        }
        gammas.push_back(u);
        deltas.push_back(v);
    }
    IMat t(n, n);
    for (int k = 0; k < g; ++k)
        for (int i = 0; i < n; ++i) {
            t(i, k) = gammas[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
            t(i, g + k) = deltas[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
        }
    IMat gram = t.transposed() * (j * t);
    if (!(gram == j)) fail(ErrorKind::Internal, "adapted basis is not canonical");
    IMat st = s * t;
    for (int k = 0; k < g; ++k)
        for (int i = 0; i < n; ++i)
            if (st(i, k) != t(i, k))
                fail(ErrorKind::Internal, "adapted gamma cycles are not fixed by the involution");
    return t;
}

} // namespace kleinjac
