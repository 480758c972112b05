#pragma once

#include <array>
#include <map>
#include <vector>

#include "smf/linalg.hpp"
#include "smf/util.hpp"

namespace smf::covariant {

// Exponent vector of a monomial in a0..a6.
using ExpVec = std::array<int, 7>;

inline int degree_of(const ExpVec& e) {
    int d = 0;
    for (int x : e) d += x;
    return d;
}

// a_i has sl2-weight 6 - 2i.
inline int weight_of(const ExpVec& e) {
    int w = 0;
    for (int i = 0; i < 7; ++i) w += (6 - 2 * i) * e[static_cast<size_t>(i)];
    return w;
}

// Graded-lexicographic order, highest first: larger degree first, then
// lexicographically larger exponent vector first.
struct GrlexDesc {
    bool operator()(const ExpVec& x, const ExpVec& y) const {
        int dx = degree_of(x), dy = degree_of(y);
        if (dx != dy) return dx > dy;
        return x > y;
    }
};

// Homogeneous polynomial in a0..a6 with rational coefficients.
struct APoly {
    std::map<ExpVec, Q, GrlexDesc> terms;

    bool is_zero() const { return terms.empty(); }
    void add(const ExpVec& e, const Q& c) {
        if (c == 0) return;
        auto [it, fresh] = terms.emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }
    int degree() const { return terms.empty() ? 0 : degree_of(terms.begin()->first); }
    int sl2_weight() const { return terms.empty() ? 0 : weight_of(terms.begin()->first); }

    friend APoly operator+(APoly f, const APoly& g) {
        for (const auto& [e, c] : g.terms) f.add(e, c);
        return f;
    }
    friend APoly operator*(const Q& x, APoly f) {
        if (x == 0) return APoly{};
        for (auto& [e, c] : f.terms) c *= x;
        return f;
    }
    friend APoly operator*(const APoly& f, const APoly& g) {
        APoly r;
        for (const auto& [e1, c1] : f.terms)
            for (const auto& [e2, c2] : g.terms) {
                ExpVec e;
                for (int i = 0; i < 7; ++i) e[static_cast<size_t>(i)] = e1[static_cast<size_t>(i)] + e2[static_cast<size_t>(i)];
                r.add(e, c1 * c2);
            }
        return r;
    }
    friend bool operator==(const APoly& f, const APoly& g) { return f.terms == g.terms; }
};

inline APoly apoly_monomial(const ExpVec& e, const Q& c = Q(1)) {
    APoly p;
    p.add(e, c);
    return p;
}

inline ExpVec unit_exp(int i) {
    ExpVec e{};
    e[static_cast<size_t>(i)] = 1;
    return e;
}

// raising = sum_{j=1..6} j a_{j-1} d/d a_j  (weight +2)
inline APoly raising(const APoly& p) {
    APoly out;
    for (const auto& [e, c] : p.terms) {
        for (int j = 1; j <= 6; ++j) {
            int ej = e[static_cast<size_t>(j)];
            if (ej == 0) continue;
            ExpVec f = e;
            --f[static_cast<size_t>(j)];
            ++f[static_cast<size_t>(j - 1)];
            out.add(f, c * Q(j) * Q(ej));
        }
    }
    return out;
}

// lowering = sum_{j=0..5} (6-j) a_{j+1} d/d a_j  (weight -2)
inline APoly lowering(const APoly& p) {
    APoly out;
    for (const auto& [e, c] : p.terms) {
        for (int j = 0; j <= 5; ++j) {
            int ej = e[static_cast<size_t>(j)];
            if (ej == 0) continue;
            ExpVec f = e;
            --f[static_cast<size_t>(j)];
            ++f[static_cast<size_t>(j + 1)];
            out.add(f, c * Q(6 - j) * Q(ej));
        }
    }
    return out;
}

// All degree-d monomials of sl2-weight w, in descending grlex order.
inline std::vector<ExpVec> monomials(int d, int w) {
    std::vector<ExpVec> out;
    ExpVec e{};
    auto rec = [&](auto&& self, int idx, int left, int wleft) -> void {
        if (idx == 6) {
            // a6 has weight -6
            if (wleft == -6 * left) {
                e[6] = left;
                out.push_back(e);
                e[6] = 0;
            }
            return;
        }
        int wi = 6 - 2 * idx;
        for (int t = left; t >= 0; --t) {
            e[static_cast<size_t>(idx)] = t;
            // remaining weights range in [-6(left-t), 6(left-t)]
            int rem = wleft - wi * t;
            if (rem < -6 * (left - t) || rem > 6 * (left - t)) continue;
            self(self, idx + 1, left - t, rem);
        }
        e[static_cast<size_t>(idx)] = 0;
    };
    rec(rec, 0, d, w);
    std::sort(out.begin(), out.end(), GrlexDesc{});
    return out;
}

inline long monomial_count(int d, int w) { return static_cast<long>(monomials(d, w).size()); }

// Multiplicity of A[lambda] in Sym^d(Sym^6): N_d(p) - N_d(p+2) with
// p = lambda1 - lambda2.
inline long multiplicity(int d, std::pair<int, int> lambda) {
    auto [l1, l2] = lambda;
    if (l1 < l2 || l2 < 0) throw std::invalid_argument("multiplicity: need lambda1 >= lambda2 >= 0");
    if (l1 + l2 != 6 * d) throw std::invalid_argument("multiplicity: lambda1 + lambda2 must equal 6d");
    int p = l1 - l2;
    return monomial_count(d, p) - monomial_count(d, p + 2);
}

// All lambda with positive multiplicity, largest lambda1 first.
inline std::vector<std::pair<std::pair<int, int>, long>> decomposition(int d) {
    std::vector<std::pair<std::pair<int, int>, long>> out;
    for (int l1 = 6 * d; 2 * l1 >= 6 * d; --l1) {
        int l2 = 6 * d - l1;
        if (l2 > l1) continue;
        long m = multiplicity(d, {l1, l2});
        if (m > 0) out.push_back({{l1, l2}, m});
    }
    return out;
}

// Basis of ker(raising) on the degree-d, weight-(lambda1-lambda2) monomial
// space: reduced echelon form against descending grlex monomials, scaled to
// primitive integers with positive leading coefficient.
inline std::vector<APoly> highest_weight_basis(int d, std::pair<int, int> lambda) {
    long mult = multiplicity(d, lambda);
    int p = lambda.first - lambda.second;
    auto mons = monomials(d, p);
    auto image_mons = monomials(d, p + 2);
    std::map<ExpVec, size_t, GrlexDesc> image_index;
    for (size_t i = 0; i < image_mons.size(); ++i) image_index.emplace(image_mons[i], i);

    QMat m(image_mons.size(), QVec(mons.size(), Q(0)));
    for (size_t col = 0; col < mons.size(); ++col) {
        APoly up = raising(apoly_monomial(mons[col]));
        for (const auto& [e, c] : up.terms) m[image_index.at(e)][col] += c;
    }
    QMat ker = kernel_basis(std::move(m), mons.size());
    // RREF against grlex-ordered columns, then primitive integer scaling.
    rref(ker);
    std::vector<APoly> out;
    for (auto& v : ker) {
        primitive_scale(v);
        APoly poly;
        for (size_t i = 0; i < mons.size(); ++i) poly.add(mons[i], v[i]);
        if (!poly.is_zero()) out.push_back(std::move(poly));
    }
    if (static_cast<long>(out.size()) != mult)
        throw std::logic_error("highest_weight_basis: kernel dimension disagrees with multiplicity");
    return out;
}

// Covariant of Sym^d(Sym^6): p+1 coordinate polynomials, entry k belonging
// to x1^{p-k} x2^k.
struct CovariantPoly {
    int d = 0;
    std::pair<int, int> lambda{0, 0};
    std::vector<APoly> entries;

    int p() const { return lambda.first - lambda.second; }
};

// Product under the canonical Sym projection: coordinate polynomials in
// (x1, x2) multiplied out.
inline CovariantPoly cov_mul(const CovariantPoly& f, const CovariantPoly& g) {
    CovariantPoly r;
    r.d = f.d + g.d;
    int p = f.p() + g.p();
    r.lambda = {(6 * r.d + p) / 2, (6 * r.d - p) / 2};
    r.entries.assign(static_cast<size_t>(p + 1), APoly{});
    for (int i = 0; i <= f.p(); ++i)
        for (int l = 0; l <= g.p(); ++l)
            r.entries[static_cast<size_t>(i + l)] =
                r.entries[static_cast<size_t>(i + l)] +
                f.entries[static_cast<size_t>(i)] * g.entries[static_cast<size_t>(l)];
    return r;
}

// entry_k = lowering^k(v) / k!
inline CovariantPoly covariant_from_hw(const APoly& v) {
    if (!raising(v).is_zero()) throw std::invalid_argument("covariant_from_hw: input is not highest-weight");
    CovariantPoly c;
    c.d = v.degree();
    int p = v.sl2_weight();
    c.lambda = {(6 * c.d + p) / 2, (6 * c.d - p) / 2};
    APoly cur = v;
    Z fact(1);
    for (int k = 0; k <= p; ++k) {
        if (k > 0) {
            cur = lowering(cur);
            fact *= k;
        }
        c.entries.push_back(Q(1) / Q(fact) * cur);
    }
    if (!lowering(cur).is_zero())
        throw std::logic_error("covariant_from_hw: lowering^{p+1} does not vanish");
    return c;
}

}  // namespace smf::covariant
