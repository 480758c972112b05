#pragma once

#include <algorithm>
#include <vector>

#include "smf/util.hpp"

namespace smf {

using QVec = std::vector<Q>;
using QMat = std::vector<QVec>;  // row-major

inline QMat qmat_identity(size_t n) {
    QMat m(n, QVec(n, Q(0)));
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline QMat qmat_mul(const QMat& a, const QMat& b) {
    size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    QMat r(n, QVec(m, Q(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < k; ++j) {
            if (a[i][j] == 0) continue;
            for (size_t c = 0; c < m; ++c) r[i][c] += a[i][j] * b[j][c];
        }
    return r;
}

// In-place reduced row echelon form; returns pivot column per row.
inline std::vector<size_t> rref(QMat& m) {
    std::vector<size_t> pivots;
    if (m.empty()) return pivots;
    size_t rows = m.size(), cols = m[0].size(), r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t sel = r;
        while (sel < rows && m[sel][c] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(m[r], m[sel]);
        Q inv = Q(1) / m[r][c];
        for (size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Q f = m[i][c];
            for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    m.resize(r, QVec(cols, Q(0)));
    return pivots;
}

inline size_t rank(QMat m) { return rref(m).size(); }

// Basis of {x : A x = 0}, one vector per non-pivot column, RREF-normalized.
inline QMat kernel_basis(QMat a, size_t cols) {
    if (a.empty()) return qmat_identity(cols);
    if (a[0].size() != cols) throw std::invalid_argument("kernel_basis: column count mismatch");
    std::vector<size_t> piv = rref(a);
    std::vector<bool> is_piv(cols, false);
    for (size_t c : piv) is_piv[c] = true;
    QMat basis;
    for (size_t fc = 0; fc < cols; ++fc) {
        if (is_piv[fc]) continue;
        QVec v(cols, Q(0));
        v[fc] = 1;
        for (size_t r = 0; r < piv.size(); ++r)
            if (piv[r] < cols) v[piv[r]] = -a[r][fc];
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solves A x = b when the system is consistent with a unique solution.
// Throws Underdetermined / NoMatch otherwise.
inline QVec solve_unique(const QMat& a, const QVec& b) {
    size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    QMat aug(rows, QVec(cols + 1));
    for (size_t i = 0; i < rows; ++i) {
        for (size_t j = 0; j < cols; ++j) aug[i][j] = a[i][j];
        aug[i][cols] = b[i];
    }
    std::vector<size_t> piv = rref(aug);
    QVec x(cols, Q(0));
    size_t nsolved = 0;
    for (size_t r = 0; r < piv.size(); ++r) {
        if (piv[r] == cols) throw NoMatch("inconsistent linear system");
        x[piv[r]] = aug[r][cols];
        ++nsolved;
    }
    if (nsolved < cols) throw Underdetermined("linear system does not determine all unknowns");
    // piv == cols case caught above; consistency of dropped rows is implied by rref.
    return x;
}

// Scales a rational vector to primitive integers with positive leading entry.
inline void primitive_scale(QVec& v) {
    Z den(1), num(0);
    for (const Q& q : v) {
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
    }
    for (const Q& q : v) {
        Z t = q.get_num() * (den / q.get_den());
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.get_mpz_t());
    }
    if (num == 0) return;
    Q scale = Q(den) / Q(num);
    int lead_sign = 0;
    for (Q& q : v) {
        q *= scale;
        q.canonicalize();
        if (lead_sign == 0 && q != 0) lead_sign = sgn(q) > 0 ? 1 : -1;
    }
    if (lead_sign < 0)
        for (Q& q : v) q = -q;
}

// Characteristic polynomial, ascending coefficients c[0] + c[1] x + ... + x^n
// (Faddeev-LeVerrier).
inline QVec charpoly(const QMat& a) {
    size_t n = a.size();
    QVec c(n + 1, Q(0));
    c[n] = 1;
    QMat m = qmat_identity(n);
    for (size_t k = 1; k <= n; ++k) {
        m = qmat_mul(a, m);
        Q tr(0);
        for (size_t i = 0; i < n; ++i) tr += m[i][i];
        c[n - k] = -tr / Q(static_cast<long>(k));
        for (size_t i = 0; i < n; ++i) m[i][i] += c[n - k];
    }
    return c;
}

inline Q qmat_trace(const QMat& a) {
    Q t(0);
    for (size_t i = 0; i < a.size(); ++i) t += a[i][i];
    return t;
}

inline Q poly_eval(const QVec& p, const Q& x) {
    Q r(0);
    for (size_t i = p.size(); i-- > 0;) r = r * x + p[i];
    return r;
}

// p(x - s), ascending coefficients.
inline QVec poly_shift_arg(const QVec& p, const Q& s) {
    QVec r(1, Q(0));
    for (size_t i = p.size(); i-- > 0;) {
        // r = r*(x - s) + p[i]
        QVec nr(r.size() + 1, Q(0));
        for (size_t j = 0; j < r.size(); ++j) {
            nr[j + 1] += r[j];
            nr[j] -= s * r[j];
        }
        nr[0] += p[i];
        r = std::move(nr);
    }
    while (r.size() > 1 && r.back() == 0) r.pop_back();
    return r;
}

inline Q qmat_det(QMat m) {
    size_t n = m.size();
    Q det(1);
    for (size_t c = 0; c < n; ++c) {
        size_t sel = c;
        while (sel < n && m[sel][c] == 0) ++sel;
        if (sel == n) return Q(0);
        if (sel != c) {
            std::swap(m[sel], m[c]);
            det = -det;
        }
        det *= m[c][c];
        Q inv = Q(1) / m[c][c];
        for (size_t i = c + 1; i < n; ++i) {
            if (m[i][c] == 0) continue;
            Q f = m[i][c] * inv;
            for (size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return det;
}

// Res(f, g) via the Sylvester matrix. Coefficients ascending.
inline Q resultant(const QVec& f, const QVec& g) {
    long df = static_cast<long>(f.size()) - 1, dg = static_cast<long>(g.size()) - 1;
    while (df >= 0 && f[df] == 0) --df;
    while (dg >= 0 && g[dg] == 0) --dg;
    if (df < 0 || dg < 0) return Q(0);
    if (df == 0) {
        Q r(1);
        for (long i = 0; i < dg; ++i) r *= f[0];
        return r;
    }
    if (dg == 0) {
        Q r(1);
        for (long i = 0; i < df; ++i) r *= g[0];
        return r;
    }
    size_t n = static_cast<size_t>(df + dg);
    QMat s(n, QVec(n, Q(0)));
    for (long r = 0; r < dg; ++r)
        for (long i = 0; i <= df; ++i) s[r][r + i] = f[df - i];
    for (long r = 0; r < df; ++r)
        for (long i = 0; i <= dg; ++i) s[dg + r][r + i] = g[dg - i];
    return qmat_det(std::move(s));
}

// Square-free part of a non-zero integer (complete factorization by trial
// division; desk-scale inputs only).
inline Z squarefree_part(Z n) {
    if (n == 0) return Z(0);
    Z r(sgn(n) < 0 ? -1 : 1);
    n = abs(n);
    for (Z p(2); p * p <= n; ++p) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e & 1) r *= p;
    }
    return r * n;
}

}  // namespace smf
