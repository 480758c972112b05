#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smf/fourier.hpp"
#include "smf/linalg.hpp"

namespace smf::hecke {

using fourier::VectorExpansion;

// Matrix of Sym^j(M) acting on coordinate vectors (v_0..v_j) of
// P(X, Y) = sum v_i X^{j-i} Y^i via (M.P)(X, Y) = P((X, Y) M),
// M = (a b; c d). out[s][i] is the X^{j-s} Y^s coefficient of
// (a X + c Y)^{j-i} (b X + d Y)^i.
inline QMat symj_matrix(int j, long a, long b, long c, long d) {
    QMat m(static_cast<size_t>(j + 1), QVec(static_cast<size_t>(j + 1), Q(0)));
    for (int i = 0; i <= j; ++i) {
        // (aX + cY)^{j-i}: term u -> binom(j-i,u) a^{j-i-u} c^u Y^u
        // (bX + dY)^i:     term v -> binom(i,v)   b^{i-v}   d^v Y^v
        for (int u = 0; u <= j - i; ++u) {
            Z pa(1), pc(1);
            mpz_pow_ui(pa.get_mpz_t(), Z(a).get_mpz_t(), static_cast<unsigned long>(j - i - u));
            mpz_pow_ui(pc.get_mpz_t(), Z(c).get_mpz_t(), static_cast<unsigned long>(u));
            Z left = binom(j - i, u) * pa * pc;
            if (left == 0) continue;
            for (int v = 0; v <= i; ++v) {
                Z pb(1), pd(1);
                mpz_pow_ui(pb.get_mpz_t(), Z(b).get_mpz_t(), static_cast<unsigned long>(i - v));
                mpz_pow_ui(pd.get_mpz_t(), Z(d).get_mpz_t(), static_cast<unsigned long>(v));
                Z right = binom(i, v) * pb * pd;
                if (right == 0) continue;
                m[static_cast<size_t>(u + v)][static_cast<size_t>(i)] += Q(left * right);
            }
        }
    }
    return m;
}

// Fourier data of a trivial-character form in q-units: (n, m, l) -> vector.
struct QIndex {
    int n, m, l;
    friend bool operator<(const QIndex& x, const QIndex& y) {
        if (x.n != y.n) return x.n < y.n;
        if (x.m != y.m) return x.m < y.m;
        return x.l < y.l;
    }
};

struct QCoeffs {
    int j = 0;
    int prec_q = 0;  // indices with n + m <= prec_q are exact
    std::map<QIndex, QVec> table;

    QVec at(const QIndex& s) const {
        auto it = table.find(s);
        if (it != table.end()) return it->second;
        return QVec(static_cast<size_t>(j + 1), Q(0));
    }
    bool in_range(const QIndex& s) const {
        return s.n >= 0 && s.m >= 0 && s.n + s.m <= prec_q;
    }
};

inline QCoeffs to_q_units(const VectorExpansion& f) {
    if (f.character() != 0)
        throw std::invalid_argument("hecke: only trivial-character spaces are supported");
    QCoeffs out;
    out.j = f.j;
    out.prec_q = f.prec() / 2;
    for (int e = 0; e <= f.j; ++e) {
        for (const auto& [s, row] : f.entries[static_cast<size_t>(e)].series().rows) {
            if (s.a % 2 || s.b % 2)
                throw std::invalid_argument("hecke: form has odd Fourier support");
            for (int i = 0; i < static_cast<int>(row.v.size()); ++i) {
                const Q& x = row.v[static_cast<size_t>(i)];
                if (x == 0) continue;
                int c = row.cmin + i;
                if (c % 2) throw std::invalid_argument("hecke: form has odd Fourier support");
                QIndex idx{s.a / 2, s.b / 2, c / 2};
                auto [it, fresh] = out.table.emplace(idx, QVec(static_cast<size_t>(f.j + 1), Q(0)));
                it->second[static_cast<size_t>(e)] = x;
            }
        }
    }
    return out;
}

struct HeckeMatrix {
    int j = 0, k = 0, character = 0;
    int p = 0;
    QMat matrix;  // columns are images: T(p) b_i = sum_j matrix[j][i] b_j
};

namespace detail {

// The classical similitude-p double coset splits into p^3 + p^2 + p + 1 left
// cosets with upper block triangular representatives (A B; 0 D), A^t D = p.
// Summed against a Fourier expansion this gives, per output index S (with
// the global normalization p^{j+2k-3} and S = (n, m, l) ~ (n l/2; l/2 m)):
//
//   a(pS)
// + p^{j+2k-3} a(S/p)                              (S/p integral)
// + p^{k-2} sum_{j0 mod p} Sym^j((1 0; j0 p)) a(p n, (m - j0 l + j0^2 n)/p,
//                                               l - 2 j0 n)   (middle integral)
// + p^{k-2} [p | n] Sym^j((p 0; 0 1)) a(n/p, p m, l)
struct CosetTerm {
    QMat sym;     // (j+1)^2 action on the coefficient vector
    Q scale;      // p-power prefactor
    // preimage map applied to the output index
    std::function<std::optional<QIndex>(const QIndex&)> pre;
};

inline std::vector<CosetTerm> coset_terms(int j, int k, int p) {
    std::vector<CosetTerm> out;
    Z pz(p);
    auto ppow = [&](long e) {
        Q r(1);
        Z t;
        if (e >= 0) {
            mpz_pow_ui(t.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(e));
            r = Q(t);
        } else {
            mpz_pow_ui(t.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(-e));
            r = Q(1) / Q(t);
        }
        return r;
    };
    QMat id = qmat_identity(static_cast<size_t>(j + 1));
    // class 2: index pS, weight 1
    out.push_back(CosetTerm{id, Q(1), [p](const QIndex& s) -> std::optional<QIndex> {
                                return QIndex{s.n * p, s.m * p, s.l * p};
                            }});
    // class 1: index S/p, weight p^{j+2k-3}
    out.push_back(CosetTerm{id, ppow(j + 2 * k - 3), [p](const QIndex& s) -> std::optional<QIndex> {
                                if (s.n % p || s.m % p || s.l % p) return std::nullopt;
                                return QIndex{s.n / p, s.m / p, s.l / p};
                            }});
    // class 3: A = (1 j0; 0 p)
    for (int j0 = 0; j0 < p; ++j0) {
        out.push_back(CosetTerm{symj_matrix(j, 1, 0, j0, p), ppow(k - 2),
                                [p, j0](const QIndex& s) -> std::optional<QIndex> {
                                    long mid = static_cast<long>(s.m) - static_cast<long>(j0) * s.l +
                                               static_cast<long>(j0) * j0 * s.n;
                                    if (mid % p) return std::nullopt;
                                    return QIndex{s.n * p, static_cast<int>(mid / p), s.l - 2 * j0 * s.n};
                                }});
    }
    // class 4: A = (p 0; 0 1)
    out.push_back(CosetTerm{symj_matrix(j, p, 0, 0, 1), ppow(k - 2),
                            [p](const QIndex& s) -> std::optional<QIndex> {
                                if (s.n % p) return std::nullopt;
                                return QIndex{s.n / p, s.m * p, s.l};
                            }});
    return out;
}

}  // namespace detail

// Conservative default precondition: all indices of q-trace <= 2p^2 valid.
inline int required_precision_q(int p) { return 2 * p * p; }

struct SiegelHeckeOptions {
    int max_output_trace = 6;
    bool enforce_default_precision = false;
};

// Matrix of T(p) on the given basis, solved from Fourier coefficients and
// cross-checked on every output index whose preimages are within precision.
inline HeckeMatrix siegel_hecke(int p, const std::vector<VectorExpansion>& basis,
                                SiegelHeckeOptions opt = {}) {
    if (basis.empty()) throw std::invalid_argument("siegel_hecke: empty basis");
    int j = basis[0].j, k = basis[0].k;
    for (const auto& f : basis)
        if (f.j != j || f.k != k) throw std::invalid_argument("siegel_hecke: mixed weights");
    std::vector<QCoeffs> qf;
    qf.reserve(basis.size());
    for (const auto& f : basis) qf.push_back(to_q_units(f));
    int prec_q = qf[0].prec_q;
    for (const auto& f : qf) prec_q = std::min(prec_q, f.prec_q);
    for (auto& f : qf) f.prec_q = prec_q;
    if (opt.enforce_default_precision && prec_q < required_precision_q(p))
        throw PrecisionError("siegel_hecke: precision below the 2p^2 default floor");

    auto terms = detail::coset_terms(j, k, p);
    size_t dim = basis.size();

    // usable output indices: every preimage within precision
    std::vector<QIndex> outputs;
    for (int tr = 2; tr <= opt.max_output_trace; ++tr) {
        for (int n = 1; n < tr; ++n) {
            int m = tr - n;
            long lmax = isqrt(4L * n * m);
            for (long l = -lmax; l <= lmax; ++l) {
                QIndex s{n, m, static_cast<int>(l)};
                bool ok = true;
                for (const auto& t : terms) {
                    auto pre = t.pre(s);
                    if (!pre) continue;
                    if (pre->n < 0 || pre->m < 0) continue;
                    if (static_cast<long>(pre->l) * pre->l > 4L * pre->n * pre->m) continue;
                    if (!qf[0].in_range(*pre)) {
                        ok = false;
                        break;
                    }
                }
                if (ok) outputs.push_back(s);
            }
        }
    }
    if (outputs.empty()) throw PrecisionError("siegel_hecke: no usable output indices at this precision");

    auto image_at = [&](const QCoeffs& f, const QIndex& s) {
        QVec acc(static_cast<size_t>(j + 1), Q(0));
        for (const auto& t : terms) {
            auto pre = t.pre(s);
            if (!pre || pre->n < 0 || pre->m < 0) continue;
            if (static_cast<long>(pre->l) * pre->l > 4L * pre->n * pre->m) continue;
            auto it = f.table.find(*pre);
            if (it == f.table.end()) continue;
            for (int r = 0; r <= j; ++r) {
                Q v(0);
                for (int c2 = 0; c2 <= j; ++c2) {
                    const Q& mv = t.sym[static_cast<size_t>(r)][static_cast<size_t>(c2)];
                    if (mv == 0) continue;
                    v += mv * it->second[static_cast<size_t>(c2)];
                }
                acc[static_cast<size_t>(r)] += t.scale * v;
            }
        }
        return acc;
    };

    // rows: (output index, vector entry); unknowns: coordinates over basis
    QMat rows;
    std::vector<QVec> rhs(dim);
    for (const auto& s : outputs) {
        std::vector<QVec> images(dim);
        for (size_t i = 0; i < dim; ++i) images[i] = image_at(qf[i], s);
        for (int e = 0; e <= j; ++e) {
            QVec row(dim, Q(0));
            bool nonzero = false;
            for (size_t i = 0; i < dim; ++i) {
                row[i] = qf[i].at(s)[static_cast<size_t>(e)];
                if (row[i] != 0) nonzero = true;
            }
            bool rhs_nonzero = false;
            for (size_t i = 0; i < dim; ++i)
                if (images[i][static_cast<size_t>(e)] != 0) rhs_nonzero = true;
            if (!nonzero && !rhs_nonzero) continue;
            rows.push_back(row);
            for (size_t i = 0; i < dim; ++i) rhs[i].push_back(images[i][static_cast<size_t>(e)]);
        }
    }

    HeckeMatrix out;
    out.j = j;
    out.k = k;
    out.character = 0;
    out.p = p;
    out.matrix.assign(dim, QVec(dim, Q(0)));
    for (size_t i = 0; i < dim; ++i) {
        QVec x;
        try {
            x = solve_unique(rows, rhs[i]);
        } catch (const NoMatch&) {
            throw NoMatch("siegel_hecke: basis is not T(p)-stable within precision");
        } catch (const Underdetermined&) {
            throw PrecisionError("siegel_hecke: precision shortfall, system underdetermined");
        }
        for (size_t r = 0; r < dim; ++r) out.matrix[r][i] = x[r];
    }
    return out;
}

inline QVec hecke_charpoly(const HeckeMatrix& m) { return charpoly(m.matrix); }

// ---- algebraic numbers ------------------------------------------------------

// Element of Q[x]/(f): minimal-polynomial context plus residue polynomial.
struct AlgebraicNumber {
    QVec minpoly;  // monic, ascending coefficients
    QVec residue;  // degree < deg minpoly

    static AlgebraicNumber generator(const QVec& f) {
        AlgebraicNumber a;
        a.minpoly = f;
        a.residue = QVec{Q(0), Q(1)};
        a.reduce();
        return a;
    }
    void reduce() {
        size_t n = minpoly.size() - 1;
        while (residue.size() > n) {
            Q lead = residue.back();
            size_t d = residue.size() - 1;
            residue.pop_back();
            if (lead == 0) continue;
            for (size_t i = 0; i < n; ++i) residue[d - n + i] -= lead * minpoly[i];
        }
        while (residue.size() > 1 && residue.back() == 0) residue.pop_back();
    }
    friend AlgebraicNumber operator+(AlgebraicNumber a, const AlgebraicNumber& b) {
        a.residue.resize(std::max(a.residue.size(), b.residue.size()), Q(0));
        for (size_t i = 0; i < b.residue.size(); ++i) a.residue[i] += b.residue[i];
        a.reduce();
        return a;
    }
    friend AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        AlgebraicNumber r;
        r.minpoly = a.minpoly;
        r.residue.assign(a.residue.size() + b.residue.size() - 1, Q(0));
        for (size_t i = 0; i < a.residue.size(); ++i)
            for (size_t l = 0; l < b.residue.size(); ++l) r.residue[i + l] += a.residue[i] * b.residue[l];
        r.reduce();
        return r;
    }
};

// Desk-scale irreducibility: rational-root test through degree 3, quadratic
// discriminant check; higher degrees are reported as unverified.
inline bool is_irreducible_desk_scale(const QVec& f) {
    size_t deg = f.size() - 1;
    if (deg == 0) throw std::invalid_argument("irreducibility: constant polynomial");
    if (deg == 1) return true;
    if (deg == 2) {
        Q disc = f[1] * f[1] - 4 * f[2] * f[0];
        if (disc == 0) return false;
        Z num = disc.get_num() * disc.get_den();
        if (num < 0) return true;
        Z root;
        mpz_sqrt(root.get_mpz_t(), num.get_mpz_t());
        return root * root != num;
    }
    if (deg == 3) {
        // reducible cubic over Q has a rational root
        Z den(1);
        for (const Q& c : f) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
        std::vector<Z> zc;
        for (const Q& c : f) zc.push_back(c.get_num() * (den / c.get_den()));
        Z a0 = abs(zc[0]), a3 = abs(zc[3]);
        if (a0 == 0) return false;
        for (Z r(1); r * r <= a0; ++r) {
            if (a0 % r != 0) continue;
            std::array<Z, 2> nums = {r, Z(a0 / r)};
            for (const Z& num : nums) {
                for (Z s(1); s * s <= a3; ++s) {
                    if (a3 % s != 0) continue;
                    std::array<Z, 2> dens = {s, Z(a3 / s)};
                    for (const Z& dd : dens) {
                        for (int sign = -1; sign <= 1; sign += 2) {
                            Q cand = Q(sign > 0 ? num : Z(-num)) / Q(dd);
                            cand.canonicalize();
                            if (poly_eval(f, cand) == 0) return false;
                        }
                    }
                }
            }
        }
        return true;
    }
    throw std::runtime_error("irreducibility test not available at this degree (desk scale)");
}

// Res(f, g) for monic f as an exact integer; the norm of g(alpha) over
// Q[x]/(f).
inline Z norm_and_resultant(const QVec& f, const QVec& g) {
    if (f.empty() || f.back() != 1) throw std::invalid_argument("norm_and_resultant: f must be monic");
    Q r = resultant(f, g);
    if (r.get_den() != 1) throw std::logic_error("norm_and_resultant: non-integral resultant");
    return r.get_num();
}

}  // namespace smf::hecke
