#pragma once

#include <map>
#include <string>
#include <vector>

#include "smf/series.hpp"

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif

namespace smf::fourier {

using Json = nlohmann::json;

// Normal-direction parameter for diagonal restrictions: R = e^s with
// s = pi*i*tau12, and t = 2*pi*i*tau12 = 2s.
enum class Unit { s, t };

// Truncated Fourier expansion of a degree-2 form. Exponent keys (a, b, c)
// denote Q1^a Q2^b R^c with Q_i = e^{pi i tau_i}, R = e^{pi i tau12}; the
// q-unit term q1^n q2^m r^l corresponds to the key (2n, 2m, 2l).
class SiegelExpansion {
  public:
    SiegelExpansion() = default;
    SiegelExpansion(int prec, int character) : character_(character & 1) { s_.prec = prec; }
    SiegelExpansion(TriSeries<Q> s, int character) : s_(std::move(s)), character_(character & 1) {
        s_.trim();
    }

    int prec() const { return s_.prec; }
    int character() const { return character_; }
    bool is_zero() const { return s_.is_zero(); }
    Q coeff(int a, int b, int c) const { return s_.coeff(a, b, c); }
    void set_coeff(int a, int b, int c, const Q& x) {
        if (c * static_cast<long>(c) > 4L * a * b)
            throw std::domain_error("coefficient outside positive-semidefinite support");
        Q delta = x - s_.coeff(a, b, c);
        s_.add_term(a, b, c, delta);
        s_.trim();
    }
    const TriSeries<Q>& series() const { return s_; }
    TriSeries<Q>& series() { return s_; }

    size_t term_count() const { return s_.term_count(); }
    bool psd_supported() const { return s_.psd_supported(); }

    // Laurent polynomial in R sitting at Q1^a Q2^b, as c -> coefficient.
    std::map<int, Q> slot(int a, int b) const {
        std::map<int, Q> out;
        auto it = s_.rows.find(Slot{a, b});
        if (it == s_.rows.end()) return out;
        for (int i = 0; i < static_cast<int>(it->second.v.size()); ++i) {
            const Q& x = it->second.v[static_cast<size_t>(i)];
            if (x != 0) out[it->second.cmin + i] = x;
        }
        return out;
    }

    friend bool operator==(const SiegelExpansion& f, const SiegelExpansion& g) {
        return f.character_ == g.character_ && f.s_ == g.s_;
    }

  private:
    TriSeries<Q> s_;
    int character_ = 0;
};

// Two-variable restriction target on H1 x H1; keys (a, b) are Q-units per
// factor (Q = q^{1/2}).
struct PairSeries {
    int prec = 0;
    std::map<Slot, Q> coeffs;

    Q coeff(int a, int b) const {
        auto it = coeffs.find(Slot{a, b});
        return it == coeffs.end() ? Q(0) : it->second;
    }
    bool is_zero() const { return !any_nonzero(); }
    bool any_nonzero() const {
        for (const auto& [s, q] : coeffs)
            if (q != 0) return true;
        return false;
    }
    void trim() {
        for (auto it = coeffs.begin(); it != coeffs.end();)
            it = (it->second == 0) ? coeffs.erase(it) : std::next(it);
    }
    friend PairSeries operator*(const Q& x, PairSeries p) {
        for (auto& [s, q] : p.coeffs) q *= x;
        p.trim();
        return p;
    }
    friend PairSeries operator+(PairSeries x, const PairSeries& y) {
        x.prec = std::min(x.prec, y.prec);
        for (const auto& [s, q] : y.coeffs)
            if (s.a + s.b <= x.prec) x.coeffs[s] += q;
        for (auto it = x.coeffs.begin(); it != x.coeffs.end();)
            it = (it->first.a + it->first.b > x.prec) ? x.coeffs.erase(it) : std::next(it);
        x.trim();
        return x;
    }
    friend PairSeries operator-(PairSeries x, const PairSeries& y) { return x + Q(-1) * y; }
    friend bool operator==(const PairSeries& x, const PairSeries& y) {
        PairSeries a = x, b = y;
        a.trim();
        b.trim();
        return a.coeffs == b.coeffs;
    }
};

// Vector-valued expansion of weight (j, k); entry i is the coordinate of
// X^{j-i} Y^i.
struct VectorExpansion {
    int j = 0;
    int k = 0;
    std::vector<SiegelExpansion> entries;

    int prec() const { return entries.empty() ? 0 : entries.front().prec(); }
    int character() const { return entries.empty() ? 0 : entries.front().character(); }
    bool is_zero() const {
        for (const auto& e : entries)
            if (!e.is_zero()) return false;
        return true;
    }
    void validate() const {
        if (static_cast<int>(entries.size()) != j + 1)
            throw std::logic_error("VectorExpansion must have j+1 entries");
        for (const auto& e : entries)
            if (e.prec() != prec() || e.character() != character())
                throw std::logic_error("VectorExpansion entries disagree on prec/character");
    }
    friend bool operator==(const VectorExpansion& f, const VectorExpansion& g) {
        return f.j == g.j && f.k == g.k && f.entries == g.entries;
    }
};

inline SiegelExpansion add(const SiegelExpansion& f, const SiegelExpansion& g) {
    if (f.character() != g.character())
        throw CharacterMismatch("add: character flags differ");
    return SiegelExpansion(tri_add(f.series(), g.series()), f.character());
}

inline SiegelExpansion scale(const SiegelExpansion& f, const Q& x) {
    return SiegelExpansion(tri_scale(f.series(), x), f.character());
}

inline SiegelExpansion mul(const SiegelExpansion& f, const SiegelExpansion& g) {
    return SiegelExpansion(tri_mul(f.series(), g.series()), f.character() ^ g.character());
}

inline SiegelExpansion divide_exact(const SiegelExpansion& f, const SiegelExpansion& g) {
    return SiegelExpansion(tri_div_exact(f.series(), g.series()), f.character() ^ g.character());
}

inline PairSeries restrict_diagonal(const SiegelExpansion& f, int m, Unit unit) {
    if (m < 0) throw std::domain_error("restrict_diagonal: m must be >= 0");
    PairSeries p;
    p.prec = f.prec();
    p.coeffs = tri_restrict(f.series(), m, unit == Unit::t);
    return p;
}

struct VanishingOptions {
    int max_order = 8;        // AllZero beyond this
    int reliability_floor = 12;  // minimum precision accepted
};

// Smallest m with a non-vanishing m-th normal derivative along H1 x H1.
inline int vanishing_order(const VectorExpansion& f, VanishingOptions opt = {}) {
    if (f.prec() < opt.reliability_floor)
        throw PrecisionError("vanishing_order: precision below reliability floor");
    for (int m = 0; m <= opt.max_order; ++m)
        for (const auto& e : f.entries)
            if (restrict_diagonal(e, m, Unit::s).any_nonzero()) return m;
    throw AllZero("vanishing_order: all derivatives vanish up to the configured bound");
}

inline int vanishing_order(const SiegelExpansion& f, VanishingOptions opt = {}) {
    VectorExpansion v;
    v.j = 0;
    v.k = 0;
    v.entries = {f};
    return vanishing_order(v, opt);
}

// Product under the canonical projection Sym^{j1} x Sym^{j2} -> Sym^{j1+j2}:
// plain multiplication of the coordinate polynomials in (X, Y).
inline VectorExpansion vv_multiply(const VectorExpansion& f, const VectorExpansion& g) {
    VectorExpansion r;
    r.j = f.j + g.j;
    r.k = f.k + g.k;
    int prec = std::min(f.prec(), g.prec());
    int chr = f.character() ^ g.character();
    r.entries.assign(static_cast<size_t>(r.j + 1), SiegelExpansion(prec, chr));
    for (int i = 0; i <= f.j; ++i) {
        if (f.entries[static_cast<size_t>(i)].is_zero()) continue;
        for (int l = 0; l <= g.j; ++l) {
            if (g.entries[static_cast<size_t>(l)].is_zero()) continue;
            auto prod = mul(f.entries[static_cast<size_t>(i)], g.entries[static_cast<size_t>(l)]);
            auto& dst = r.entries[static_cast<size_t>(i + l)];
            dst = add(dst, prod);
        }
    }
    return r;
}

inline VectorExpansion vv_scale(const VectorExpansion& f, const Q& x) {
    VectorExpansion r = f;
    for (auto& e : r.entries) e = scale(e, x);
    return r;
}

inline VectorExpansion vv_add(const VectorExpansion& f, const VectorExpansion& g) {
    if (f.j != g.j || f.k != g.k) throw std::invalid_argument("vv_add: weight mismatch");
    VectorExpansion r = f;
    for (size_t i = 0; i < r.entries.size(); ++i) r.entries[i] = add(r.entries[i], g.entries[i]);
    return r;
}

inline VectorExpansion vv_divide_exact(const VectorExpansion& f, const SiegelExpansion& g) {
    VectorExpansion r;
    r.j = f.j;
    r.k = f.k;
    r.entries.reserve(f.entries.size());
    for (const auto& e : f.entries) r.entries.push_back(divide_exact(e, g));
    return r;
}

// ---- JSON serialization -------------------------------------------------
// {"prec": N, "character": 0|1, "coeffs": [[a, b, c, "num/den"], ...]} with
// keys sorted lexicographically; vector forms add "j", "k" and "entries".

inline Json coeffs_to_json(const SiegelExpansion& f) {
    Json arr = Json::array();
    for (const auto& [s, row] : f.series().rows) {
        for (int i = 0; i < static_cast<int>(row.v.size()); ++i) {
            const Q& x = row.v[static_cast<size_t>(i)];
            if (x == 0) continue;
            arr.push_back(Json::array({s.a, s.b, row.cmin + i, rational_str(x)}));
        }
    }
    return arr;
}

inline Json to_json(const SiegelExpansion& f) {
    return Json{{"prec", f.prec()}, {"character", f.character()}, {"coeffs", coeffs_to_json(f)}};
}

inline SiegelExpansion expansion_from_json(const Json& j) {
    SiegelExpansion f(j.at("prec").get<int>(), j.at("character").get<int>());
    for (const auto& t : j.at("coeffs")) {
        f.series().add_term(t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>(),
                            parse_rational(t.at(3).get<std::string>()));
    }
    f.series().trim();
    return f;
}

inline Json to_json(const VectorExpansion& f) {
    Json entries = Json::array();
    for (const auto& e : f.entries) entries.push_back(coeffs_to_json(e));
    return Json{{"prec", f.prec()},
                {"character", f.character()},
                {"j", f.j},
                {"k", f.k},
                {"entries", entries}};
}

inline VectorExpansion vector_from_json(const Json& j) {
    VectorExpansion f;
    f.j = j.at("j").get<int>();
    f.k = j.at("k").get<int>();
    int prec = j.at("prec").get<int>();
    int chr = j.at("character").get<int>();
    for (const auto& ej : j.at("entries")) {
        SiegelExpansion e(prec, chr);
        for (const auto& t : ej)
            e.series().add_term(t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>(),
                                parse_rational(t.at(3).get<std::string>()));
        e.series().trim();
        f.entries.push_back(std::move(e));
    }
    f.validate();
    return f;
}

}  // namespace smf::fourier
