#pragma once

#include <vector>

#include "smf/linalg.hpp"
#include "smf/util.hpp"

namespace smf::elliptic {

enum class Level { SL2Z, Gamma1_2 };

// One-variable expansion in Q = q^{1/2}; coeffs[m] is the Q^m coefficient.
// Modular forms on SL2Z only use even Q-exponents; delta lives on the odd
// ones.
struct EllipticSeries {
    int prec = 0;  // exponents tracked: 0..prec (Q-units)
    std::vector<Q> coeffs;
    int weight = 0;
    int quasi_depth = 0;
    Level level = Level::SL2Z;

    Q coeff_Q(int m) const {
        return (m < 0 || m > prec || m >= static_cast<int>(coeffs.size())) ? Q(0)
                                                                           : coeffs[static_cast<size_t>(m)];
    }
    Q coeff_q(int n) const { return coeff_Q(2 * n); }
    bool is_zero() const {
        for (const Q& c : coeffs)
            if (c != 0) return false;
        return true;
    }
    void trim_to(int n) {
        prec = n;
        if (static_cast<int>(coeffs.size()) > n + 1) coeffs.resize(static_cast<size_t>(n) + 1);
    }
};

inline EllipticSeries es_zero(int prec, int weight, Level level = Level::SL2Z) {
    EllipticSeries f;
    f.prec = prec;
    f.coeffs.assign(static_cast<size_t>(prec) + 1, Q(0));
    f.weight = weight;
    f.level = level;
    return f;
}

inline EllipticSeries es_add(const EllipticSeries& f, const EllipticSeries& g) {
    EllipticSeries r = es_zero(std::min(f.prec, g.prec), f.weight,
                               f.level == g.level ? f.level : Level::Gamma1_2);
    r.quasi_depth = std::max(f.quasi_depth, g.quasi_depth);
    for (int m = 0; m <= r.prec; ++m) r.coeffs[static_cast<size_t>(m)] = f.coeff_Q(m) + g.coeff_Q(m);
    return r;
}

inline EllipticSeries es_scale(EllipticSeries f, const Q& x) {
    for (Q& c : f.coeffs) c *= x;
    return f;
}

inline EllipticSeries es_mul(const EllipticSeries& f, const EllipticSeries& g) {
    EllipticSeries r = es_zero(std::min(f.prec, g.prec), f.weight + g.weight,
                               (f.level == Level::SL2Z && g.level == Level::SL2Z) ? Level::SL2Z
                                                                                  : Level::Gamma1_2);
    r.quasi_depth = f.quasi_depth + g.quasi_depth;
    for (int i = 0; i <= r.prec && i < static_cast<int>(f.coeffs.size()); ++i) {
        if (f.coeffs[static_cast<size_t>(i)] == 0) continue;
        int jmax = std::min(r.prec - i, static_cast<int>(g.coeffs.size()) - 1);
        for (int j = 0; j <= jmax; ++j) {
            if (g.coeffs[static_cast<size_t>(j)] == 0) continue;
            r.coeffs[static_cast<size_t>(i + j)] +=
                f.coeffs[static_cast<size_t>(i)] * g.coeffs[static_cast<size_t>(j)];
        }
    }
    return r;
}

inline Z sigma(long n, long r) {
    Z acc(0);
    for (long d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        Z dp, ep;
        mpz_ui_pow_ui(dp.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(r));
        acc += dp;
        long e = n / d;
        if (e != d) {
            mpz_ui_pow_ui(ep.get_mpz_t(), static_cast<unsigned long>(e), static_cast<unsigned long>(r));
            acc += ep;
        }
    }
    return acc;
}

// e_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n; prec in Q-units.
inline EllipticSeries eisenstein(int k, int prec) {
    if (k < 2 || k % 2) throw std::domain_error("eisenstein: weight must be even and >= 2");
    EllipticSeries f = es_zero(prec, k);
    f.quasi_depth = (k == 2) ? 1 : 0;
    auto bern = bernoulli_upto(k);
    Q factor = Q(-2 * k) / bern[static_cast<size_t>(k)];
    f.coeffs[0] = 1;
    for (int n = 1; 2 * n <= prec; ++n)
        f.coeffs[static_cast<size_t>(2 * n)] = factor * Q(sigma(n, k - 1));
    return f;
}

// prod_{n>=1} (1 - q^{sn})^{e}, as a Q-unit series.
inline EllipticSeries eta_like_product(int prec, int stride, int e) {
    EllipticSeries f = es_zero(prec, 0);
    f.coeffs[0] = 1;
    for (int n = 1; 2 * stride * n <= prec; ++n) {
        for (int rep = 0; rep < e; ++rep) {
            // multiply by (1 - Q^{2sn}) in place
            for (int m = prec; m >= 2 * stride * n; --m)
                f.coeffs[static_cast<size_t>(m)] -= f.coeffs[static_cast<size_t>(m - 2 * stride * n)];
        }
    }
    return f;
}

inline EllipticSeries delta(int prec) {
    EllipticSeries f = eta_like_product(prec, 1, 24);
    // shift by q = Q^2
    EllipticSeries r = es_zero(prec, 12);
    for (int m = 0; m + 2 <= prec; ++m) r.coeffs[static_cast<size_t>(m + 2)] = f.coeffs[static_cast<size_t>(m)];
    return r;
}

// delta = q^{1/2} prod (1-q^n)^{12}, weight 6 on Gamma1(2).
inline EllipticSeries little_delta(int prec) {
    EllipticSeries f = eta_like_product(prec, 1, 12);
    EllipticSeries r = es_zero(prec, 6, Level::Gamma1_2);
    for (int m = 0; m + 1 <= prec; ++m) r.coeffs[static_cast<size_t>(m + 1)] = f.coeffs[static_cast<size_t>(m)];
    return r;
}

// D = q d/dq: multiplies the Q^m coefficient by m/2.
inline EllipticSeries D_op(const EllipticSeries& f) {
    EllipticSeries r = f;
    r.weight += 2;
    r.quasi_depth += 1;
    for (int m = 0; m < static_cast<int>(r.coeffs.size()); ++m)
        r.coeffs[static_cast<size_t>(m)] *= Q(m) / 2;
    return r;
}

// X2 = 2 e2(2 tau) - e2(tau) = 1 + 24 sum (sum of odd divisors)(n) q^n,
// the weight-2 generator for Gamma0(2).
inline EllipticSeries x2_gamma0_2(int prec) {
    EllipticSeries f = es_zero(prec, 2, Level::Gamma1_2);
    f.coeffs[0] = 1;
    for (int n = 1; 2 * n <= prec; ++n) {
        Z s(0);
        for (long d = 1; d <= n; d += 2)
            if (n % d == 0) s += d;
        f.coeffs[static_cast<size_t>(2 * n)] = Q(24) * Q(s);
    }
    return f;
}

// Monomial basis of M_k(Gamma): e4^a e6^b for SL2Z, X2^a e4^b for Gamma1(2).
inline std::vector<EllipticSeries> m_basis(int k, int prec, Level level = Level::SL2Z) {
    std::vector<EllipticSeries> out;
    if (k < 0 || k % 2) return out;
    if (k == 0) {
        EllipticSeries one = es_zero(prec, 0, level);
        one.coeffs[0] = 1;
        out.push_back(one);
        return out;
    }
    if (level == Level::SL2Z) {
        EllipticSeries e4 = eisenstein(4, prec), e6 = eisenstein(6, prec);
        for (int a = 0; 4 * a <= k; ++a) {
            if ((k - 4 * a) % 6) continue;
            int b = (k - 4 * a) / 6;
            EllipticSeries m = es_zero(prec, 0);
            m.coeffs[0] = 1;
            for (int i = 0; i < a; ++i) m = es_mul(m, e4);
            for (int i = 0; i < b; ++i) m = es_mul(m, e6);
            out.push_back(m);
        }
    } else {
        EllipticSeries x2 = x2_gamma0_2(prec), e4 = eisenstein(4, prec);
        for (int b = 0; 4 * b <= k; ++b) {
            if ((k - 4 * b) % 2) continue;
            int a = (k - 4 * b) / 2;
            EllipticSeries m = es_zero(prec, 0, Level::Gamma1_2);
            m.coeffs[0] = 1;
            for (int i = 0; i < a; ++i) m = es_mul(m, x2);
            for (int i = 0; i < b; ++i) m = es_mul(m, e4);
            out.push_back(m);
        }
    }
    return out;
}

// Row-reduces a list of series against coefficients Q^0..Q^prec; returns an
// echelonized independent subset (deterministic).
inline std::vector<EllipticSeries> echelonize(std::vector<EllipticSeries> fs) {
    std::vector<EllipticSeries> basis;
    for (auto& f : fs) {
        for (const auto& b : basis) {
            int piv = 0;
            while (piv <= b.prec && b.coeff_Q(piv) == 0) ++piv;
            Q c = f.coeff_Q(piv);
            if (c != 0) f = es_add(f, es_scale(b, -c / b.coeff_Q(piv)));
        }
        int piv = 0;
        while (piv <= f.prec && f.coeff_Q(piv) == 0) ++piv;
        if (piv > f.prec) continue;
        f = es_scale(f, Q(1) / f.coeff_Q(piv));
        // back-substitute to make it reduced
        for (auto& b : basis) {
            Q c = b.coeff_Q(piv);
            if (c != 0) b = es_add(b, es_scale(f, -c));
        }
        basis.push_back(f);
    }
    std::sort(basis.begin(), basis.end(), [](const EllipticSeries& x, const EllipticSeries& y) {
        int px = 0, py = 0;
        while (px <= x.prec && x.coeff_Q(px) == 0) ++px;
        while (py <= y.prec && y.coeff_Q(py) == 0) ++py;
        return px < py;
    });
    return basis;
}

// Echelonized cusp basis of S_k(SL2Z) from monomials e4^a e6^b Delta^c, c>=1
// (Miller style), pivots at q^1, q^2, ...
inline std::vector<EllipticSeries> cusp_basis(int k, int prec) {
    std::vector<EllipticSeries> mons;
    EllipticSeries dl = delta(prec);
    for (int c = 1; 12 * c <= k; ++c) {
        for (auto& m : m_basis(k - 12 * c, prec)) {
            EllipticSeries f = m;
            for (int i = 0; i < c; ++i) f = es_mul(f, dl);
            f.weight = k;
            mons.push_back(f);
        }
    }
    return echelonize(std::move(mons));
}

// Spanning set of the quasi-modular forms of weight k per the decomposition
// M~_k = (+)_i D^i M_{k-2i} (+) <D^{k/2-1} e2>.
inline std::vector<EllipticSeries> quasi_basis(int k, int prec, Level level = Level::SL2Z) {
    std::vector<EllipticSeries> out;
    if (k < 0 || k % 2) return out;
    for (int i = 0; 2 * i <= k; ++i) {
        if (k - 2 * i == 0) continue;  // D^{k/2} kills constants
        for (auto& f : m_basis(k - 2 * i, prec, level)) {
            EllipticSeries g = f;
            for (int d = 0; d < i; ++d) g = D_op(g);
            out.push_back(g);
        }
    }
    if (k >= 2) {
        EllipticSeries g = eisenstein(2, prec);
        for (int d = 0; d < k / 2 - 1; ++d) g = D_op(g);
        out.push_back(g);
    }
    return out;
}

// Number of monomials e2^a e4^b e6^c of weight k: dim M~_k(SL2Z).
inline long quasi_dim_sl2z(int k) {
    long n = 0;
    for (int a = 0; 2 * a <= k; ++a)
        for (int b = 0; 2 * a + 4 * b <= k; ++b)
            if ((k - 2 * a - 4 * b) % 6 == 0) ++n;
    return n;
}

struct HeckeResult {
    QMat matrix;  // columns are images: T_p b_i = sum_j matrix[j][i] b_j
    std::vector<EllipticSeries> basis;
};

// T_p on the echelon basis of S_k(SL2Z): a(n) -> a(np) + p^{k-1} a(n/p).
inline HeckeResult elliptic_hecke(int k, int p, int prec_q) {
    int dim_guess = k / 12 + 1;
    if (prec_q < p * (dim_guess + 1))
        throw PrecisionError("elliptic_hecke: precision below p*(dim+1) q-units");
    int prec = 2 * prec_q;
    HeckeResult res;
    res.basis = cusp_basis(k, prec);
    size_t dim = res.basis.size();
    Z pk1;
    mpz_ui_pow_ui(pk1.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k - 1));
    std::vector<EllipticSeries> images;
    int out_prec = prec / p;
    for (const auto& f : res.basis) {
        EllipticSeries img = es_zero(out_prec, k);
        for (int n = 1; 2 * n <= out_prec; ++n) {
            Q a = f.coeff_q(static_cast<int>(n) * p);
            if (n % p == 0) a += Q(pk1) * f.coeff_q(n / p);
            img.coeffs[static_cast<size_t>(2 * n)] = a;
        }
        images.push_back(img);
    }
    // solve coordinates against the echelon basis using pivots q^1..q^dim
    res.matrix.assign(dim, QVec(dim, Q(0)));
    for (size_t i = 0; i < dim; ++i) {
        EllipticSeries rem = images[i];
        for (size_t j = 0; j < dim; ++j) {
            int piv = 0;
            while (piv <= res.basis[j].prec && res.basis[j].coeff_Q(piv) == 0) ++piv;
            Q c = rem.coeff_Q(piv);
            res.matrix[j][i] = c;
            if (c != 0) rem = es_add(rem, es_scale(res.basis[j], -c));
        }
        for (int m = 0; m <= rem.prec; ++m)
            if (rem.coeff_Q(m) != 0)
                throw std::logic_error("elliptic_hecke: image escapes the cusp basis");
    }
    return res;
}

}  // namespace smf::elliptic
