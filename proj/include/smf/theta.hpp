#pragma once

#include <array>
#include <utility>
#include <vector>

#include "smf/fourier.hpp"
#include "smf/series.hpp"

namespace smf::theta {

using fourier::SiegelExpansion;
using fourier::VectorExpansion;

// Characteristic (m', m'') in {0, 1/2}^4, stored as bit numerators.
struct ThetaCharacteristic {
    int mp1 = 0, mp2 = 0;    // numerators of m'
    int mpp1 = 0, mpp2 = 0;  // numerators of m''

    // 4 m'.m'' mod 2 distinguishes even (10) from odd (6) in genus 2.
    bool is_even() const { return ((mp1 * mpp1 + mp2 * mpp2) & 1) == 0; }
};

// Fixed lexicographic enumeration in (m', m'').
inline std::vector<ThetaCharacteristic> all_characteristics() {
    std::vector<ThetaCharacteristic> out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) out.push_back(ThetaCharacteristic{a, b, c, d});
    return out;
}

inline std::vector<ThetaCharacteristic> even_characteristics() {
    std::vector<ThetaCharacteristic> out;
    for (const auto& ch : all_characteristics())
        if (ch.is_even()) out.push_back(ch);
    return out;
}

inline std::vector<ThetaCharacteristic> odd_characteristics() {
    std::vector<ThetaCharacteristic> out;
    for (const auto& ch : all_characteristics())
        if (!ch.is_even()) out.push_back(ch);
    return out;
}

// Lattice sums live in units e^{pi i tau / 4}; coefficients are Gaussian
// rationals x + y*i stored as a pair of real series.
struct QuarterExpansion {
    int prec4 = 0;  // bound on a + b in quarter units (= 4N)
    TriSeries<Q> re, im;
};

namespace detail {

// Integer-coefficient variant used internally; gradient series carry twice
// the true coefficient so that everything stays in Z.
struct ZQuarter {
    TriSeries<Z> re, im;

    bool real() const {
        TriSeries<Z> t = im;
        t.trim();
        return t.is_zero();
    }
};

enum class Deriv { none, z1, z2 };

// theta_m(tau) = sum_n e^{pi i (n+m')^t tau (n+m')} e^{2 pi i (n+m') . m''},
// with an extra factor (n+m')_j for gradients (the 2 pi i of d/dz_j is
// dropped). Gradient output is doubled: coefficient 2(n+m')_j.
inline ZQuarter theta_sum(const ThetaCharacteristic& ch, int N, Deriv deriv) {
    ZQuarter out;
    int prec4 = 4 * N;
    out.re.prec = prec4;
    out.im.prec = prec4;
    long lim = 2 * isqrt(N) + 2;  // |2(n_i + m_i')| <= 2 sqrt(N) + 2 suffices
    for (long X = -lim; X <= lim; ++X) {
        if (((X & 1) != 0) != (ch.mp1 == 1)) continue;
        for (long Y = -lim; Y <= lim; ++Y) {
            if (((Y & 1) != 0) != (ch.mp2 == 1)) continue;
            long a = X * X, b = Y * Y;
            if (a + b > prec4) continue;
            long c = 2 * X * Y;
            long ipow = ((X * ch.mpp1 + Y * ch.mpp2) % 4 + 4) % 4;
            Z coeff(1);
            if (deriv == Deriv::z1) coeff = X;
            if (deriv == Deriv::z2) coeff = Y;
            if (coeff == 0) continue;
            switch (ipow) {
                case 0: out.re.add_term(static_cast<int>(a), static_cast<int>(b), static_cast<int>(c), coeff); break;
                case 1: out.im.add_term(static_cast<int>(a), static_cast<int>(b), static_cast<int>(c), coeff); break;
                case 2: out.re.add_term(static_cast<int>(a), static_cast<int>(b), static_cast<int>(c), -coeff); break;
                case 3: out.im.add_term(static_cast<int>(a), static_cast<int>(b), static_cast<int>(c), -coeff); break;
            }
        }
    }
    out.re.trim();
    out.im.trim();
    return out;
}

inline ZQuarter cmul(const ZQuarter& f, const ZQuarter& g) {
    ZQuarter r;
    bool fi = !f.im.is_zero(), gi = !g.im.is_zero();
    r.re = tri_mul(f.re, g.re);
    if (fi && gi) {
        TriSeries<Z> t = tri_mul(f.im, g.im);
        r.re = tri_add(r.re, tri_scale(t, Z(-1)));
    } else {
        r.re.prec = std::min({r.re.prec, f.im.prec, g.im.prec});
    }
    r.im.prec = r.re.prec;
    if (gi) r.im = tri_mul(f.re, g.im);
    if (fi) {
        TriSeries<Z> t = tri_mul(f.im, g.re);
        r.im = gi ? tri_add(r.im, t) : std::move(t);
    }
    r.im.prec = r.re.prec;
    return r;
}

// Checks the quarter-unit series is real with exponents divisible by 4 and
// rescales exponents to Q-units.
inline TriSeries<Z> to_qunits(const ZQuarter& f, const char* what) {
    if (!f.real()) throw std::logic_error(std::string(what) + ": non-real coefficients survive the product");
    TriSeries<Z> out;
    out.prec = f.re.prec / 4;
    for (const auto& [s, row] : f.re.rows) {
        for (int i = 0; i < static_cast<int>(row.v.size()); ++i) {
            const Z& x = row.v[static_cast<size_t>(i)];
            if (CoeffOps<Z>::is_zero(x)) continue;
            int c = row.cmin + i;
            if (s.a % 4 || s.b % 4 || ((c % 4) + 4) % 4)
                throw std::logic_error(std::string(what) + ": exponent not divisible by 4");
            out.add_term(s.a / 4, s.b / 4, c / 4, x);
        }
    }
    out.trim();
    return out;
}

inline TriSeries<Z> tri_div_scalar_exact(const TriSeries<Z>& f, const Z& d, const char* what) {
    TriSeries<Z> out;
    out.prec = f.prec;
    for (const auto& [s, row] : f.rows) {
        LaurentRow<Z> r;
        r.cmin = row.cmin;
        r.v.resize(row.v.size());
        for (size_t i = 0; i < row.v.size(); ++i) {
            if (!CoeffOps<Z>::divide(r.v[i], row.v[i], d))
                throw std::logic_error(std::string(what) + ": normalization leaves a remainder");
        }
        r.trim();
        if (!r.empty()) out.rows.emplace(s, std::move(r));
    }
    return out;
}

inline QuarterExpansion to_public(const ZQuarter& f, const Q& scale) {
    QuarterExpansion q;
    q.prec4 = f.re.prec;
    q.re = tri_to_rational(f.re);
    q.im = tri_to_rational(f.im);
    if (scale != 1) {
        q.re = tri_scale(q.re, scale);
        q.im = tri_scale(q.im, scale);
    }
    return q;
}

}  // namespace detail

inline QuarterExpansion even_theta_constant(const ThetaCharacteristic& ch, int N) {
    if (!ch.is_even()) throw std::invalid_argument("even_theta_constant: odd characteristic supplied");
    return detail::to_public(detail::theta_sum(ch, N, detail::Deriv::none), Q(1));
}

// The two gradient series (d/dz_j at z = 0, without the 2 pi i prefactor).
inline std::pair<QuarterExpansion, QuarterExpansion> odd_theta_gradient(const ThetaCharacteristic& ch,
                                                                        int N) {
    if (ch.is_even()) throw std::invalid_argument("odd_theta_gradient: even characteristic supplied");
    Q half(1, 2);
    return {detail::to_public(detail::theta_sum(ch, N, detail::Deriv::z1), half),
            detail::to_public(detail::theta_sum(ch, N, detail::Deriv::z2), half)};
}

// chi5: the product of the ten even theta constants, normalized so that the
// expansion starts (1/R - R) Q1 Q2.
inline SiegelExpansion chi5(int N) {
    if (N < 4) throw std::invalid_argument("chi5: precision must be >= 4");
    detail::ZQuarter prod = detail::theta_sum(even_characteristics()[0], N, detail::Deriv::none);
    auto evens = even_characteristics();
    for (size_t i = 1; i < evens.size(); ++i)
        prod = detail::cmul(prod, detail::theta_sum(evens[i], N, detail::Deriv::none));
    TriSeries<Z> z = detail::to_qunits(prod, "chi5");
    Z lead = z.coeff(1, 1, -1);
    if (lead == 0) throw std::logic_error("chi5: leading coefficient not a unit multiple of the target");
    z = detail::tri_div_scalar_exact(z, lead, "chi5");
    if (!(z.coeff(1, 1, -1) == 1 && z.coeff(1, 1, 1) == -1 && z.coeff(1, 1, 0) == 0))
        throw std::logic_error("chi5: leading slot does not match (1/R - R) Q1 Q2");
    return SiegelExpansion(tri_to_rational(z), 1);
}

inline SiegelExpansion chi10(int N) {
    SiegelExpansion c5 = chi5(N);
    return fourier::mul(c5, c5);
}

// chi63: Sym^6 of the six odd gradient linear forms, normalized so the Q1 Q2
// coefficient vector is (0, 0, R - 1/R, 2R + 2/R, R - 1/R, 0, 0)^t.
inline VectorExpansion chi63(int N) {
    if (N < 4) throw std::invalid_argument("chi63: precision must be >= 4");
    auto odds = odd_characteristics();
    // z-polynomial coefficients; gradients enter doubled, normalization fixes
    // the overall 2^6.
    std::vector<detail::ZQuarter> poly;
    {
        detail::ZQuarter g1 = detail::theta_sum(odds[0], N, detail::Deriv::z1);
        detail::ZQuarter g2 = detail::theta_sum(odds[0], N, detail::Deriv::z2);
        poly.push_back(std::move(g1));
        poly.push_back(std::move(g2));
    }
    for (size_t t = 1; t < odds.size(); ++t) {
        detail::ZQuarter a = detail::theta_sum(odds[t], N, detail::Deriv::z1);
        detail::ZQuarter b = detail::theta_sum(odds[t], N, detail::Deriv::z2);
        std::vector<detail::ZQuarter> next(poly.size() + 1);
        for (size_t s = 0; s < next.size(); ++s) {
            bool have = false;
            detail::ZQuarter acc;
            if (s < poly.size()) {
                acc = detail::cmul(poly[s], a);
                have = true;
            }
            if (s >= 1) {
                detail::ZQuarter t2 = detail::cmul(poly[s - 1], b);
                if (have) {
                    acc.re = tri_add(acc.re, t2.re);
                    acc.im = tri_add(acc.im, t2.im);
                } else {
                    acc = std::move(t2);
                }
            }
            next[s] = std::move(acc);
        }
        poly = std::move(next);
    }
    std::vector<TriSeries<Z>> entries;
    entries.reserve(7);
    for (auto& w : poly) entries.push_back(detail::to_qunits(w, "chi63"));
    Z lead = entries[2].coeff(1, 1, 1);
    if (lead == 0) throw std::logic_error("chi63: leading coefficient not a unit multiple of the target");
    VectorExpansion v;
    v.j = 6;
    v.k = 3;
    for (auto& e : entries) {
        TriSeries<Z> n = detail::tri_div_scalar_exact(e, lead, "chi63");
        v.entries.emplace_back(tri_to_rational(n), 1);
    }
    // leading-vector normalization check
    auto expect = [&](int idx, int c, long val) {
        if (v.entries[static_cast<size_t>(idx)].coeff(1, 1, c) != val)
            throw std::logic_error("chi63: leading vector does not match the normalization target");
    };
    expect(0, 1, 0);
    expect(1, 1, 0);
    expect(2, 1, 1);
    expect(2, -1, -1);
    expect(3, 1, 2);
    expect(3, -1, 2);
    expect(4, 1, 1);
    expect(4, -1, -1);
    expect(5, 1, 0);
    expect(6, 1, 0);
    return v;
}

inline VectorExpansion chi68(int N) {
    VectorExpansion c63 = chi63(N);
    SiegelExpansion c5 = chi5(N);
    VectorExpansion v;
    v.j = 6;
    v.k = 8;
    for (const auto& e : c63.entries) v.entries.push_back(fourier::mul(e, c5));
    return v;
}

}  // namespace smf::theta
