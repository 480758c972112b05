#pragma once

#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "smf/util.hpp"

namespace smf {

// Truncated series in Q1, Q2, R: coefficients indexed by (a, b, c) with
// a, b >= 0, a + b <= prec and positive-semidefinite support c^2 <= 4ab.
// Terms are grouped by the (a, b) slot into dense Laurent rows over c.
//
// The coefficient type is mpq_class for the public layer and mpz_class for
// the integer evaluation engine; mpz rows get the fused mpz_addmul kernel.

template <class C>
struct CoeffOps;

template <>
struct CoeffOps<Z> {
    static void addmul(Z& acc, const Z& x, const Z& y) {
        mpz_addmul(acc.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    }
    static bool divide(Z& out, const Z& num, const Z& den) {
        if (mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()) == 0) return false;
        mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        return true;
    }
    static bool is_zero(const Z& x) { return mpz_sgn(x.get_mpz_t()) == 0; }
};

template <>
struct CoeffOps<Q> {
    static void addmul(Q& acc, const Q& x, const Q& y) {
        static thread_local Q tmp;
        mpq_mul(tmp.get_mpq_t(), x.get_mpq_t(), y.get_mpq_t());
        mpq_add(acc.get_mpq_t(), acc.get_mpq_t(), tmp.get_mpq_t());
    }
    static bool divide(Q& out, const Q& num, const Q& den) {
        if (den == 0) return false;
        out = num / den;
        return true;
    }
    static bool is_zero(const Q& x) { return mpq_sgn(x.get_mpq_t()) == 0; }
};

struct Slot {
    int a = 0;
    int b = 0;
    friend bool operator<(const Slot& x, const Slot& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    }
    friend bool operator==(const Slot& x, const Slot& y) { return x.a == y.a && x.b == y.b; }
};

template <class C>
struct LaurentRow {
    int cmin = 0;
    std::vector<C> v;  // v[i] is the coefficient of R^(cmin+i)

    void trim() {
        size_t lo = 0, hi = v.size();
        while (hi > lo && CoeffOps<C>::is_zero(v[hi - 1])) --hi;
        while (lo < hi && CoeffOps<C>::is_zero(v[lo])) ++lo;
        if (lo == hi) {
            v.clear();
            cmin = 0;
            return;
        }
        if (lo > 0) v.erase(v.begin(), v.begin() + static_cast<long>(lo));
        v.resize(hi - lo);
        cmin += static_cast<int>(lo);
    }
    bool empty() const { return v.empty(); }
    int cmax() const { return cmin + static_cast<int>(v.size()) - 1; }
    const C* at(int c) const {
        if (c < cmin || c > cmax()) return nullptr;
        return &v[static_cast<size_t>(c - cmin)];
    }
};

template <class C>
struct TriSeries {
    int prec = 0;
    std::map<Slot, LaurentRow<C>> rows;

    bool is_zero() const { return rows.empty(); }

    void trim() {
        for (auto it = rows.begin(); it != rows.end();) {
            it->second.trim();
            if (it->second.empty())
                it = rows.erase(it);
            else
                ++it;
        }
    }

    void truncate_to(int n) {
        prec = n;
        for (auto it = rows.begin(); it != rows.end();)
            it = (it->first.a + it->first.b > n) ? rows.erase(it) : std::next(it);
    }

    C coeff(int a, int b, int c) const {
        auto it = rows.find(Slot{a, b});
        if (it == rows.end()) return C(0);
        const C* p = it->second.at(c);
        return p ? *p : C(0);
    }

    void add_term(int a, int b, int c, const C& x) {
        if (CoeffOps<C>::is_zero(x)) return;
        if (a < 0 || b < 0) throw std::domain_error("negative Q-exponent");
        if (a + b > prec) return;
        auto& row = rows[Slot{a, b}];
        if (row.v.empty()) {
            row.cmin = c;
            row.v.resize(1);
        } else if (c < row.cmin) {
            row.v.insert(row.v.begin(), static_cast<size_t>(row.cmin - c), C(0));
            row.cmin = c;
        } else if (c > row.cmax()) {
            row.v.resize(static_cast<size_t>(c - row.cmin) + 1);
        }
        row.v[static_cast<size_t>(c - row.cmin)] += x;
    }

    size_t term_count() const {
        size_t n = 0;
        for (const auto& [s, row] : rows)
            for (const C& x : row.v)
                if (!CoeffOps<C>::is_zero(x)) ++n;
        return n;
    }

    bool psd_supported() const {
        for (const auto& [s, row] : rows) {
            if (s.a < 0 || s.b < 0 || s.a + s.b > prec) return false;
            for (int i = 0; i < static_cast<int>(row.v.size()); ++i) {
                if (CoeffOps<C>::is_zero(row.v[static_cast<size_t>(i)])) continue;
                long c = row.cmin + i;
                if (c * c > 4L * s.a * s.b) return false;
            }
        }
        return true;
    }

    friend bool operator==(const TriSeries& f, const TriSeries& g) {
        TriSeries a = f, b = g;
        a.trim();
        b.trim();
        if (a.rows.size() != b.rows.size()) return false;
        for (auto ia = a.rows.begin(), ib = b.rows.begin(); ia != a.rows.end(); ++ia, ++ib) {
            if (!(ia->first == ib->first)) return false;
            if (ia->second.cmin != ib->second.cmin) return false;
            if (ia->second.v != ib->second.v) return false;
        }
        return true;
    }
};

// dst += scale * src, truncated at dst.prec.
template <class C>
inline void tri_axpy(TriSeries<C>& dst, const C& scale, const TriSeries<C>& src) {
    if (CoeffOps<C>::is_zero(scale)) return;
    for (const auto& [s, row] : src.rows) {
        if (s.a + s.b > dst.prec) continue;
        for (int i = 0; i < static_cast<int>(row.v.size()); ++i) {
            const C& x = row.v[static_cast<size_t>(i)];
            if (CoeffOps<C>::is_zero(x)) continue;
            C t = x;
            t *= scale;
            dst.add_term(s.a, s.b, row.cmin + i, t);
        }
    }
}

template <class C>
inline TriSeries<C> tri_add(const TriSeries<C>& f, const TriSeries<C>& g) {
    TriSeries<C> r = f;
    r.truncate_to(std::min(f.prec, g.prec));
    tri_axpy(r, C(1), g);
    r.trim();
    return r;
}

template <class C>
inline TriSeries<C> tri_scale(const TriSeries<C>& f, const C& scale) {
    TriSeries<C> r;
    r.prec = f.prec;
    tri_axpy(r, scale, f);
    r.trim();
    return r;
}

namespace detail {

template <class C>
struct MulTask {
    Slot out;
    std::vector<std::pair<const LaurentRow<C>*, const LaurentRow<C>*>> pairs;
};

}  // namespace detail

// Truncated product. Work is partitioned over output (a, b) slots; each slot
// accumulates into a private dense buffer with the fused addmul kernel.
template <class C>
inline TriSeries<C> tri_mul(const TriSeries<C>& f, const TriSeries<C>& g, int prec_override = -1) {
    TriSeries<C> r;
    r.prec = prec_override >= 0 ? std::min({f.prec, g.prec, prec_override})
                                : std::min(f.prec, g.prec);
    if (f.rows.empty() || g.rows.empty()) return r;

    std::vector<std::pair<Slot, const LaurentRow<C>*>> gs;
    gs.reserve(g.rows.size());
    for (const auto& [s, row] : g.rows) gs.emplace_back(s, &row);
    std::sort(gs.begin(), gs.end(), [](const auto& x, const auto& y) {
        return x.first.a + x.first.b < y.first.a + y.first.b;
    });

    std::unordered_map<long, detail::MulTask<C>> buckets;
    for (const auto& [fs, frow] : f.rows) {
        int budget = r.prec - fs.a - fs.b;
        if (budget < 0) continue;
        for (const auto& [gslot, grow] : gs) {
            if (gslot.a + gslot.b > budget) break;
            Slot out{fs.a + gslot.a, fs.b + gslot.b};
            long key = static_cast<long>(out.a) * 4096 + out.b;
            auto& task = buckets[key];
            task.out = out;
            task.pairs.emplace_back(&frow, grow);
        }
    }
    std::vector<detail::MulTask<C>*> tasks;
    tasks.reserve(buckets.size());
    for (auto& [k, t] : buckets) tasks.push_back(&t);

    std::vector<LaurentRow<C>> results(tasks.size());
    parallel_for(tasks.size(), [&](size_t ti) {
        const auto& task = *tasks[ti];
        int cmin = 0, cmax = 0;
        bool first = true;
        for (const auto& [fr, gr] : task.pairs) {
            int lo = fr->cmin + gr->cmin;
            int hi = fr->cmax() + gr->cmax();
            if (first || lo < cmin) cmin = lo;
            if (first || hi > cmax) cmax = hi;
            first = false;
        }
        LaurentRow<C>& out = results[ti];
        out.cmin = cmin;
        out.v.assign(static_cast<size_t>(cmax - cmin + 1), C(0));
        for (const auto& [fr, gr] : task.pairs) {
            int off = fr->cmin + gr->cmin - cmin;
            size_t nf = fr->v.size(), ng = gr->v.size();
            for (size_t i = 0; i < nf; ++i) {
                const C& fv = fr->v[i];
                if (CoeffOps<C>::is_zero(fv)) continue;
                C* dst = out.v.data() + off + i;
                for (size_t j = 0; j < ng; ++j) {
                    const C& gv = gr->v[j];
                    if (CoeffOps<C>::is_zero(gv)) continue;
                    CoeffOps<C>::addmul(dst[j], fv, gv);
                }
            }
        }
        out.trim();
    });

    for (size_t ti = 0; ti < tasks.size(); ++ti) {
        if (results[ti].empty()) continue;
        r.rows.emplace(tasks[ti]->out, std::move(results[ti]));
    }
    return r;
}

namespace detail {

// Exact Laurent-row division num / den; returns false on any remainder.
template <class C>
inline bool row_divide(const LaurentRow<C>& num, const LaurentRow<C>& den, LaurentRow<C>& out) {
    out = LaurentRow<C>{};
    if (num.empty()) return true;
    if (den.empty()) return false;
    LaurentRow<C> rem = num;
    rem.trim();
    // den's lowest non-zero coefficient is den.v[0] after trim.
    int dlo = den.cmin;
    const C& dl = den.v[0];
    std::vector<C> q;
    int qmin = rem.cmin - dlo;
    size_t qlen = rem.v.size() >= den.v.size() ? rem.v.size() - den.v.size() + 1 : 0;
    if (qlen == 0) return false;
    q.assign(qlen, C(0));
    for (size_t k = 0; k < qlen; ++k) {
        if (CoeffOps<C>::is_zero(rem.v[k])) continue;
        if (!CoeffOps<C>::divide(q[k], rem.v[k], dl)) return false;
        for (size_t j = 0; j < den.v.size(); ++j) {
            C t = q[k];
            t *= den.v[j];
            rem.v[k + j] -= t;
        }
    }
    for (const C& x : rem.v)
        if (!CoeffOps<C>::is_zero(x)) return false;
    out.cmin = qmin;
    out.v = std::move(q);
    out.trim();
    return true;
}

}  // namespace detail

// Exact division h = f / g where g's lowest total-degree part occupies the
// single slot (a0, b0). h is exact to f.prec - (a0 + b0). Throws NotDivisible
// when a slice division leaves a remainder or h escapes PSD support.
template <class C>
inline TriSeries<C> tri_div_exact(const TriSeries<C>& f, const TriSeries<C>& g) {
    TriSeries<C> gt = g;
    gt.trim();
    if (gt.rows.empty()) throw std::invalid_argument("division by zero series");
    int lead = -1;
    Slot g0{};
    for (const auto& [s, row] : gt.rows) {
        if (lead < 0 || s.a + s.b < lead) {
            lead = s.a + s.b;
            g0 = s;
        } else if (s.a + s.b == lead && !(s == g0)) {
            throw std::invalid_argument("divisor leading part is not a single slot");
        }
    }
    const LaurentRow<C>& glead = gt.rows.at(g0);

    TriSeries<C> ft = f;
    ft.trim();
    TriSeries<C> h;
    h.prec = f.prec - (g0.a + g0.b);
    if (h.prec < 0) throw PrecisionError("divide_exact: dividend precision too low");
    for (const auto& [s, row] : ft.rows)
        if (s.a < g0.a || s.b < g0.b)
            throw NotDivisible("dividend has support below the divisor leading slot");

    // Process quotient slots by increasing total degree; only lower-degree
    // quotient slots can contribute to the slice being solved.
    for (int deg = 0; deg <= h.prec; ++deg) {
        for (int A = 0; A <= deg; ++A) {
            int B = deg - A;
            LaurentRow<C> acc;
            auto itf = ft.rows.find(Slot{A + g0.a, B + g0.b});
            if (itf != ft.rows.end()) acc = itf->second;
            // acc -= sum over known h slots times matching g slots
            for (const auto& [hs, hrow] : h.rows) {
                Slot need{A - hs.a + g0.a, B - hs.b + g0.b};
                if (need.a < 0 || need.b < 0) continue;
                auto itg = gt.rows.find(need);
                if (itg == gt.rows.end()) continue;
                const LaurentRow<C>& grow = itg->second;
                int lo = hrow.cmin + grow.cmin;
                int hi = hrow.cmax() + grow.cmax();
                if (acc.empty()) {
                    acc.cmin = lo;
                    acc.v.assign(static_cast<size_t>(hi - lo + 1), C(0));
                } else {
                    if (lo < acc.cmin) {
                        acc.v.insert(acc.v.begin(), static_cast<size_t>(acc.cmin - lo), C(0));
                        acc.cmin = lo;
                    }
                    if (hi > acc.cmax()) acc.v.resize(static_cast<size_t>(hi - acc.cmin) + 1);
                }
                for (size_t i = 0; i < hrow.v.size(); ++i) {
                    if (CoeffOps<C>::is_zero(hrow.v[i])) continue;
                    C neg = hrow.v[i];
                    neg = -neg;
                    C* dst = acc.v.data() + (hrow.cmin + grow.cmin - acc.cmin) + i;
                    for (size_t j = 0; j < grow.v.size(); ++j) {
                        if (CoeffOps<C>::is_zero(grow.v[j])) continue;
                        CoeffOps<C>::addmul(dst[j], neg, grow.v[j]);
                    }
                }
            }
            acc.trim();
            if (acc.empty()) continue;
            LaurentRow<C> qrow;
            if (!detail::row_divide(acc, glead, qrow))
                throw NotDivisible("slice division leaves a remainder");
            qrow.trim();
            if (!qrow.empty()) {
                if (static_cast<long>(qrow.cmin) * qrow.cmin > 4L * A * B ||
                    static_cast<long>(qrow.cmax()) * qrow.cmax() > 4L * A * B)
                    throw NotDivisible("quotient violates positive-semidefinite support");
                h.rows.emplace(Slot{A, B}, std::move(qrow));
            }
        }
    }
    h.trim();
    return h;
}

// Raw m-th derivative along the third variable at 0; weight(c) = c for the
// s-normalization, c/2 for the t-normalization. Returns (a, b) -> rational.
template <class C>
inline std::map<Slot, Q> tri_restrict(const TriSeries<C>& f, int m, bool half_weight) {
    std::map<Slot, Q> out;
    for (const auto& [s, row] : f.rows) {
        Q acc(0);
        for (int i = 0; i < static_cast<int>(row.v.size()); ++i) {
            const C& x = row.v[static_cast<size_t>(i)];
            if (CoeffOps<C>::is_zero(x)) continue;
            long c = row.cmin + i;
            Z w(1);
            if (m > 0) {
                Z cz(c);
                mpz_pow_ui(w.get_mpz_t(), cz.get_mpz_t(), static_cast<unsigned long>(m));
            }
            acc += Q(w) * Q(x);
        }
        if (half_weight && m > 0) {
            Z two_m;
            mpz_ui_pow_ui(two_m.get_mpz_t(), 2, static_cast<unsigned long>(m));
            acc /= Q(two_m);
        }
        if (acc != 0) out[s] = acc;
    }
    return out;
}

inline TriSeries<Q> tri_to_rational(const TriSeries<Z>& f) {
    TriSeries<Q> r;
    r.prec = f.prec;
    for (const auto& [s, row] : f.rows) {
        LaurentRow<Q> q;
        q.cmin = row.cmin;
        q.v.reserve(row.v.size());
        for (const Z& x : row.v) q.v.push_back(Q(x));
        q.trim();
        if (!q.empty()) r.rows.emplace(s, std::move(q));
    }
    return r;
}

// Requires every coefficient to be integral.
inline TriSeries<Z> tri_to_integer(const TriSeries<Q>& f) {
    TriSeries<Z> r;
    r.prec = f.prec;
    for (const auto& [s, row] : f.rows) {
        LaurentRow<Z> z;
        z.cmin = row.cmin;
        z.v.reserve(row.v.size());
        for (const Q& x : row.v) {
            if (x.get_den() != 1) throw std::domain_error("tri_to_integer: non-integral coefficient");
            z.v.push_back(x.get_num());
        }
        z.trim();
        if (!z.empty()) r.rows.emplace(s, std::move(z));
    }
    return r;
}

}  // namespace smf
