#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "smf/covariant.hpp"
#include "smf/elliptic.hpp"
#include "smf/fourier.hpp"
#include "smf/linalg.hpp"

namespace smf::construct {

using covariant::APoly;
using covariant::CovariantPoly;
using covariant::ExpVec;
using fourier::PairSeries;
using fourier::SiegelExpansion;
using fourier::Unit;
using fourier::VectorExpansion;

// dst(Q) += scale * src(Z)
inline void axpy_zq(TriSeries<Q>& dst, const Q& scale, const TriSeries<Z>& src) {
    if (scale == 0) return;
    for (const auto& [s, row] : src.rows) {
        if (s.a + s.b > dst.prec) continue;
        for (int i = 0; i < static_cast<int>(row.v.size()); ++i) {
            const Z& x = row.v[static_cast<size_t>(i)];
            if (CoeffOps<Z>::is_zero(x)) continue;
            dst.add_term(s.a, s.b, row.cmin + i, scale * Q(x));
        }
    }
}

// Shared substitution engine for the gamma map. Holds the integer entry
// series beta_i of chi_{6,3} (so alpha_i = beta_i / binom(6, i)) and a memo
// of monomial power products keyed by exponent vector. Values of degree up
// to kMemoDegree stay cached across batches; higher degrees are transient.
class GammaEngine {
  public:
    static constexpr int kMemoDegree = 5;

    explicit GammaEngine(const VectorExpansion& chi63) : prec_(chi63.prec()) {
        if (chi63.j != 6 || chi63.entries.size() != 7)
            throw std::invalid_argument("GammaEngine: chi63 must have weight (6,3)");
        for (int i = 0; i < 7; ++i)
            beta_[static_cast<size_t>(i)] = tri_to_integer(chi63.entries[static_cast<size_t>(i)].series());
    }

    int prec() const { return prec_; }

    // Images of a whole covariant list; each distinct monomial is evaluated
    // once and accumulated into every destination entry that uses it.
    std::vector<VectorExpansion> run(const std::vector<CovariantPoly>& covs) {
        struct Use {
            size_t cov, entry;
            Q scalar;
        };
        std::map<ExpVec, std::vector<Use>> plan;
        std::vector<VectorExpansion> out(covs.size());
        for (size_t ci = 0; ci < covs.size(); ++ci) {
            const CovariantPoly& h = covs[ci];
            int p = h.p();
            out[ci].j = p;
            out[ci].k = h.lambda.second + 3 * h.d;
            int chr = h.d & 1;
            out[ci].entries.assign(static_cast<size_t>(p + 1), SiegelExpansion(prec_, chr));
            for (size_t ei = 0; ei < h.entries.size(); ++ei) {
                for (const auto& [e, c] : h.entries[ei].terms) {
                    Q scalar = c;
                    for (int i = 0; i < 7; ++i)
                        for (int rep = 0; rep < e[static_cast<size_t>(i)]; ++rep)
                            scalar /= Q(binom(6, i));
                    plan[e].push_back(Use{ci, ei, scalar});
                }
            }
        }
        for (const auto& [e, uses] : plan) {
            TriSeries<Z> value = eval(e);
            for (const Use& u : uses)
                axpy_zq(out[u.cov].entries[u.entry].series(), u.scalar, value);
        }
        for (auto& v : out)
            for (auto& entr : v.entries) entr.series().trim();
        return out;
    }

    void clear_memo() { memo_.clear(); }

  private:
    static uint32_t key_of(const ExpVec& e) {
        uint32_t k = 0;
        for (int i = 0; i < 7; ++i) k = (k << 4) | static_cast<uint32_t>(e[static_cast<size_t>(i)]);
        return k;
    }

    // Splits e into two non-trivial halves of near-equal degree.
    static void split(const ExpVec& e, ExpVec& lo, ExpVec& hi) {
        lo = ExpVec{};
        hi = ExpVec{};
        bool squarefree = true;
        for (int i = 0; i < 7; ++i)
            if (e[static_cast<size_t>(i)] >= 2) squarefree = false;
        if (!squarefree) {
            for (int i = 0; i < 7; ++i) {
                lo[static_cast<size_t>(i)] = e[static_cast<size_t>(i)] / 2;
                hi[static_cast<size_t>(i)] = e[static_cast<size_t>(i)] - lo[static_cast<size_t>(i)];
            }
            return;
        }
        int d = covariant::degree_of(e), taken = 0;
        for (int i = 0; i < 7; ++i) {
            if (e[static_cast<size_t>(i)] == 1 && taken < d / 2) {
                lo[static_cast<size_t>(i)] = 1;
                ++taken;
            } else {
                hi[static_cast<size_t>(i)] = e[static_cast<size_t>(i)];
            }
        }
    }

    TriSeries<Z> eval(const ExpVec& e) {
        int d = covariant::degree_of(e);
        if (d <= kMemoDegree) return eval_memo(e);
        ExpVec lo, hi;
        split(e, lo, hi);
        return tri_mul(eval(lo), eval(hi));
    }

    const TriSeries<Z>& eval_memo(const ExpVec& e) {
        int d = covariant::degree_of(e);
        uint32_t key = key_of(e);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        TriSeries<Z> value;
        if (d == 0) {
            value.prec = prec_;
            value.add_term(0, 0, 0, Z(1));
        } else if (d == 1) {
            for (int i = 0; i < 7; ++i)
                if (e[static_cast<size_t>(i)] == 1) value = beta_[static_cast<size_t>(i)];
        } else {
            ExpVec lo, hi;
            split(e, lo, hi);
            value = tri_mul(eval_memo(lo), eval_memo(hi));
        }
        return memo_.emplace(key, std::move(value)).first->second;
    }

    int prec_;
    std::array<TriSeries<Z>, 7> beta_;
    std::unordered_map<uint32_t, TriSeries<Z>> memo_;
};

struct GammaOptions {
    int precision_floor = 8;
};

// Substitutes alpha_i for a_i in h, where chi63 = sum binom(6,i) alpha_i
// X^{6-i} Y^i. Output weight (p, q + 3d), character d mod 2.
inline VectorExpansion gamma(const CovariantPoly& h, const VectorExpansion& chi63,
                             GammaOptions opt = {}) {
    if (chi63.prec() < opt.precision_floor)
        throw PrecisionError("gamma: chi63 precision below the configured floor");
    GammaEngine engine(chi63);
    return engine.run({h})[0];
}

// ---- diagonal restriction machinery --------------------------------------

// Flattened m-th restriction of a vector form: (entry, a, b) -> Q.
struct RestrictionKey {
    int entry, a, b;
    friend bool operator<(const RestrictionKey& x, const RestrictionKey& y) {
        if (x.entry != y.entry) return x.entry < y.entry;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    }
};

inline std::map<RestrictionKey, Q> restriction_coords(const VectorExpansion& f, int m) {
    std::map<RestrictionKey, Q> out;
    for (int e = 0; e < static_cast<int>(f.entries.size()); ++e) {
        PairSeries p = fourier::restrict_diagonal(f.entries[static_cast<size_t>(e)], m, Unit::s);
        for (const auto& [s, q] : p.coeffs)
            if (q != 0) out[RestrictionKey{e, s.a, s.b}] = q;
    }
    return out;
}

// Nested kernels of the order-m restriction maps. orders is the multiset of
// vanishing orders (one entry per dimension); v_geq[m] is a basis, in input
// coordinates, of the subspace vanishing to order >= m.
struct Filtration {
    std::vector<int> orders;
    std::vector<QMat> v_geq;  // index m = 0..max+1
};

inline Filtration filtration(const std::vector<VectorExpansion>& space, int max_order = 8) {
    size_t n = space.size();
    Filtration out;
    QMat cur = qmat_identity(n);
    out.v_geq.push_back(cur);
    for (int m = 0; m <= max_order && !cur.empty(); ++m) {
        std::vector<std::map<RestrictionKey, Q>> rho(n);
        std::map<RestrictionKey, size_t> keys;
        for (size_t i = 0; i < n; ++i) {
            rho[i] = restriction_coords(space[i], m);
            for (const auto& [k, q] : rho[i]) keys.emplace(k, 0);
        }
        size_t idx = 0;
        for (auto& [k, v] : keys) v = idx++;
        // constraint matrix: rows keys, columns current basis elements
        QMat a(keys.size(), QVec(cur.size(), Q(0)));
        for (size_t col = 0; col < cur.size(); ++col)
            for (size_t i = 0; i < n; ++i) {
                if (cur[col][i] == 0) continue;
                for (const auto& [k, q] : rho[i]) a[keys.at(k)][col] += cur[col][i] * q;
            }
        QMat ker = kernel_basis(std::move(a), cur.size());
        QMat next;
        for (const auto& kv : ker) {
            QVec comb(n, Q(0));
            for (size_t col = 0; col < cur.size(); ++col)
                for (size_t i = 0; i < n; ++i) comb[i] += kv[col] * cur[col][i];
            next.push_back(std::move(comb));
        }
        rref(next);
        for (auto& row : next) primitive_scale(row);
        size_t drop = cur.size() - next.size();
        for (size_t t = 0; t < drop; ++t) out.orders.push_back(m);
        cur = std::move(next);
        out.v_geq.push_back(cur);
    }
    if (!cur.empty())
        throw PrecisionError("filtration: insufficient precision to separate the top order");
    std::sort(out.orders.begin(), out.orders.end());
    return out;
}

// Orders of vanishing along H1 x H1 in the space of gamma images at (d,
// lambda), as a multiset.
inline std::vector<int> order_table(GammaEngine& engine, int d, std::pair<int, int> lambda,
                                    int max_order = 8) {
    auto hw = covariant::highest_weight_basis(d, lambda);
    std::vector<CovariantPoly> covs;
    covs.reserve(hw.size());
    for (const auto& v : hw) covs.push_back(covariant::covariant_from_hw(v));
    auto images = engine.run(covs);
    return filtration(images, max_order).orders;
}

// ---- reduction by chi5 powers ---------------------------------------------

struct ConstructedForm {
    int d = 0;
    std::pair<int, int> lambda{0, 0};
    QVec combo;  // coordinates over the hw-basis gamma images
    int divisions = 0;
    VectorExpansion form;

    void check_bookkeeping() const {
        int p = lambda.first - lambda.second, q = lambda.second;
        if (form.j != p) throw std::logic_error("ConstructedForm: j mismatch");
        if (form.k != q + 3 * d - 5 * divisions) throw std::logic_error("ConstructedForm: k mismatch");
        if (form.character() != ((d - divisions) % 2 + 2) % 2)
            throw std::logic_error("ConstructedForm: character mismatch");
        if (p + 2 * q != 6 * d) throw std::logic_error("ConstructedForm: lambda weight-sum mismatch");
    }
};

// Division by chi5^{nu} with nu = vanishing_order(F); one factor at a time,
// character flips tracked by divide_exact.
inline ConstructedForm reduce(const VectorExpansion& f, const SiegelExpansion& chi5,
                              fourier::VanishingOptions opt = {}) {
    if (f.is_zero()) throw std::invalid_argument("reduce: zero input");
    ConstructedForm out;
    int nu = fourier::vanishing_order(f, opt);
    VectorExpansion cur = f;
    for (int t = 0; t < nu; ++t) {
        cur = fourier::vv_divide_exact(cur, chi5);
        cur.k -= 5;
    }
    out.divisions = nu;
    out.form = std::move(cur);
    return out;
}

// Basis of the subspace of gamma images at (d, lambda) vanishing to order
// >= nu, divided by chi5^nu. Combos are primitive-integer rows of the
// filtration basis.
inline std::vector<ConstructedForm> reduced_space(GammaEngine& engine, int d,
                                                  std::pair<int, int> lambda, int nu,
                                                  const SiegelExpansion& chi5, int max_order = 8) {
    auto hw = covariant::highest_weight_basis(d, lambda);
    std::vector<CovariantPoly> covs;
    covs.reserve(hw.size());
    for (const auto& v : hw) covs.push_back(covariant::covariant_from_hw(v));
    auto images = engine.run(covs);
    Filtration fil = filtration(images, max_order);
    if (nu >= static_cast<int>(fil.v_geq.size()))
        throw std::invalid_argument("reduced_space: no subspace with the requested order");
    const QMat& basis = fil.v_geq[static_cast<size_t>(nu)];
    std::vector<ConstructedForm> out;
    for (const auto& row : basis) {
        VectorExpansion comb;
        comb.j = images[0].j;
        comb.k = images[0].k;
        comb.entries.assign(images[0].entries.size(),
                            SiegelExpansion(images[0].prec(), images[0].character()));
        for (size_t i = 0; i < images.size(); ++i) {
            if (row[i] == 0) continue;
            for (size_t e = 0; e < comb.entries.size(); ++e)
                comb.entries[e] = fourier::add(comb.entries[e],
                                               fourier::scale(images[i].entries[e], row[i]));
        }
        for (int t = 0; t < nu; ++t) {
            comb = fourier::vv_divide_exact(comb, chi5);
            comb.k -= 5;
        }
        ConstructedForm cf;
        cf.d = d;
        cf.lambda = lambda;
        cf.combo = row;
        cf.divisions = nu;
        cf.form = std::move(comb);
        cf.check_bookkeeping();
        out.push_back(std::move(cf));
    }
    return out;
}

// ---- identification against elliptic tensors ------------------------------

inline PairSeries tensor(const elliptic::EllipticSeries& f, const elliptic::EllipticSeries& g,
                         int prec) {
    PairSeries p;
    p.prec = std::min(prec, std::min(f.prec, g.prec));
    for (int a = 0; a <= p.prec; ++a) {
        Q fa = f.coeff_Q(a);
        if (fa == 0) continue;
        for (int b = 0; a + b <= p.prec; ++b) {
            Q gb = g.coeff_Q(b);
            if (gb == 0) continue;
            p.coeffs[Slot{a, b}] = fa * gb;
        }
    }
    return p;
}

// Exact coordinates of P in the span of the candidates, matching every
// coefficient with a + b <= the shared precision.
inline QVec identify_restriction(const PairSeries& p, const std::vector<PairSeries>& candidates) {
    int prec = p.prec;
    for (const auto& c : candidates) prec = std::min(prec, c.prec);
    std::map<Slot, size_t> keys;
    for (const auto& [s, q] : p.coeffs)
        if (s.a + s.b <= prec && q != 0) keys.emplace(s, 0);
    for (const auto& c : candidates)
        for (const auto& [s, q] : c.coeffs)
            if (s.a + s.b <= prec && q != 0) keys.emplace(s, 0);
    size_t idx = 0;
    for (auto& [s, v] : keys) v = idx++;
    QMat a(keys.size(), QVec(candidates.size(), Q(0)));
    QVec b(keys.size(), Q(0));
    for (size_t ci = 0; ci < candidates.size(); ++ci)
        for (const auto& [s, q] : candidates[ci].coeffs)
            if (s.a + s.b <= prec && q != 0) a[keys.at(s)][ci] = q;
    for (const auto& [s, q] : p.coeffs)
        if (s.a + s.b <= prec && q != 0) b[keys.at(s)] = q;
    return solve_unique(a, b);
}

// ---- leading-vector normalization --------------------------------------------

// Target leading data at a fixed (a, b) slot: per entry, a Laurent
// polynomial in R given as c -> coefficient.
struct LeadingSpec {
    Slot slot;
    std::vector<std::map<int, Q>> entries;
};

// Unique basis of span(space) whose leading coefficient vectors equal the
// specs.
inline std::vector<VectorExpansion> normalize_to_leading(
    const std::vector<VectorExpansion>& space, const std::vector<LeadingSpec>& specs) {
    if (space.empty() || specs.empty() || space.size() != specs.size())
        throw std::invalid_argument("normalize_to_leading: need dim(space) == #specs");
    Slot slot = specs[0].slot;
    using Key = std::pair<int, int>;  // (entry, c)
    std::map<Key, size_t> keys;
    auto harvest = [&](const std::map<int, Q>& row, int entry) {
        for (const auto& [c, q] : row)
            if (q != 0) keys.emplace(Key{entry, c}, 0);
    };
    for (const auto& f : space)
        for (int e = 0; e < static_cast<int>(f.entries.size()); ++e)
            harvest(f.entries[static_cast<size_t>(e)].slot(slot.a, slot.b), e);
    for (const auto& s : specs)
        for (int e = 0; e < static_cast<int>(s.entries.size()); ++e) harvest(s.entries[static_cast<size_t>(e)], e);
    size_t idx = 0;
    for (auto& [k, v] : keys) v = idx++;

    QMat lead(keys.size(), QVec(space.size(), Q(0)));
    for (size_t i = 0; i < space.size(); ++i)
        for (int e = 0; e < static_cast<int>(space[i].entries.size()); ++e)
            for (const auto& [c, q] : space[i].entries[static_cast<size_t>(e)].slot(slot.a, slot.b))
                if (q != 0) lead[keys.at(Key{e, c})][i] = q;

    std::vector<VectorExpansion> out;
    for (const auto& s : specs) {
        QVec target(keys.size(), Q(0));
        for (int e = 0; e < static_cast<int>(s.entries.size()); ++e)
            for (const auto& [c, q] : s.entries[static_cast<size_t>(e)])
                if (q != 0) target[keys.at(Key{e, c})] = q;
        QVec x;
        try {
            x = solve_unique(lead, target);
        } catch (const std::exception&) {
            throw std::runtime_error("normalize_to_leading: singular change-of-basis");
        }
        VectorExpansion g;
        g.j = space[0].j;
        g.k = space[0].k;
        g.entries.assign(space[0].entries.size(),
                         SiegelExpansion(space[0].prec(), space[0].character()));
        for (size_t i = 0; i < space.size(); ++i) {
            if (x[i] == 0) continue;
            for (size_t e = 0; e < g.entries.size(); ++e)
                g.entries[e] = fourier::add(g.entries[e], fourier::scale(space[i].entries[e], x[i]));
        }
        out.push_back(std::move(g));
    }
    return out;
}

}  // namespace smf::construct
