#pragma once

#include <optional>
#include <vector>

#include "smf/construct.hpp"
#include "smf/theta.hpp"

namespace smf::catalog {

using construct::ConstructedForm;
using construct::GammaEngine;
using construct::LeadingSpec;
using fourier::SiegelExpansion;
using fourier::VectorExpansion;

// Laurent-row helpers for leading-vector tables. q-unit rows sit at the
// q1 q2 slot (2, 2) with r^{+-1} at c = +-2; R-unit rows sit at (1, 1).
inline std::map<int, Q> r_row(long cm2, long c0, long cp2) {
    std::map<int, Q> m;
    if (cm2) m[-2] = cm2;
    if (c0) m[0] = c0;
    if (cp2) m[2] = cp2;
    return m;
}
inline std::map<int, Q> R_row(long cm1, long cp1) {
    std::map<int, Q> m;
    if (cm1) m[-1] = cm1;
    if (cp1) m[1] = cp1;
    return m;
}
// x (r - 2 + 1/r), x (r - 1/r), x r + c0 + x / r
inline std::map<int, Q> r_sq(long x) { return r_row(x, -2 * x, x); }
inline std::map<int, Q> r_as(long x) { return r_row(-x, 0, x); }
inline std::map<int, Q> r_pl(long x, long c0) { return r_row(x, c0, x); }

struct SpaceRoute {
    int d;
    std::pair<int, int> lambda;
    int nu;
};

inline std::optional<SpaceRoute> route_for(int j, int k) {
    if (j == 12 && k == 6) return SpaceRoute{2, {12, 0}, 0};
    if (j == 8 && k == 8) return SpaceRoute{2, {10, 2}, 0};
    if (j == 4 && k == 10) return SpaceRoute{2, {8, 4}, 0};
    if (j == 0 && k == 12) return SpaceRoute{2, {6, 6}, 0};
    if (j == 12 && k == 2) return SpaceRoute{3, {15, 3}, 2};
    if (j == 6 && k == 5) return SpaceRoute{3, {12, 6}, 2};
    if (j == 8 && k == 10) return SpaceRoute{4, {16, 8}, 2};
    if (j == 6 && k == 12) return SpaceRoute{5, {18, 12}, 3};
    if (j == 10 && k == 10) return SpaceRoute{5, {20, 10}, 3};
    if (j == 12 && k == 9) return SpaceRoute{5, {21, 9}, 3};
    if (j == 14 && k == 8) return SpaceRoute{5, {22, 8}, 3};
    if (j == 4 && k == 16) return SpaceRoute{8, {26, 22}, 6};
    return std::nullopt;
}

// Printed normalizations, where the expansions are pinned by a leading
// Fourier vector.
inline std::optional<std::vector<LeadingSpec>> leading_specs(int j, int k) {
    using std::vector;
    if (j == 8 && k == 8)
        return vector<LeadingSpec>{{Slot{2, 2},
                                    {{}, {}, r_sq(1), r_as(3), r_pl(4, 10), r_as(3), r_sq(1), {}, {}}}};
    if (j == 4 && k == 10)
        return vector<LeadingSpec>{{Slot{2, 2}, {r_sq(1), r_as(2), r_pl(3, 18), r_as(2), r_sq(1)}}};
    if (j == 0 && k == 12) return vector<LeadingSpec>{{Slot{2, 2}, {r_pl(1, 10)}}};
    if (j == 12 && k == 2)
        return vector<LeadingSpec>{{Slot{1, 1},
                                    {{}, {}, {}, R_row(-2, 2), R_row(9, 9), R_row(-12, 12), {},
                                     R_row(12, -12), R_row(-9, -9), R_row(2, -2), {}, {}, {}}}};
    if (j == 6 && k == 5)
        return vector<LeadingSpec>{{Slot{1, 1},
                                    {R_row(-2, 2), R_row(6, 6), R_row(-5, 5), {}, R_row(-5, 5),
                                     R_row(6, 6), R_row(-2, 2)}}};
    if (j == 8 && k == 10)
        return vector<LeadingSpec>{
            {Slot{2, 2},
             {r_sq(1), r_as(4), r_pl(9, 34), r_as(13), r_sq(15), r_as(13), r_pl(9, 34), r_as(4), r_sq(1)}},
            {Slot{2, 2},
             {r_sq(3), r_as(12), r_pl(22, 52), r_as(24), r_sq(25), r_as(24), r_pl(22, 52), r_as(12),
              r_sq(3)}}};
    if (j == 6 && k == 12)
        return vector<LeadingSpec>{
            {Slot{2, 2},
             {r_pl(2, 20), r_as(6), r_sq(33), r_as(56), r_sq(33), r_as(6), r_pl(2, 20)}},
            {Slot{2, 2}, {{}, {}, r_sq(1), r_as(2), r_sq(1), {}, {}}}};
    if (j == 4 && k == 16)
        return vector<LeadingSpec>{
            {Slot{2, 2}, {r_pl(1, 10), r_as(2), r_sq(3), r_as(2), r_pl(1, 10)}},
            {Slot{2, 2}, {r_pl(1, 10), r_as(2), r_row(3, -42, 3), r_as(2), r_pl(1, 10)}},
            {Slot{2, 2}, {r_pl(5, 104), r_as(10), r_row(15, -138, 15), r_as(10), r_pl(5, 104)}}};
    return std::nullopt;
}

// Seeds plus the shared gamma engine; the engine's monomial memo is reused
// across every construction at this precision.
class Catalog {
  public:
    explicit Catalog(int prec)
        : prec_(prec),
          chi5_(theta::chi5(prec)),
          chi63_(theta::chi63(prec)),
          engine_(chi63_) {}

    Catalog(SiegelExpansion chi5, VectorExpansion chi63)
        : prec_(chi5.prec()), chi5_(std::move(chi5)), chi63_(std::move(chi63)), engine_(chi63_) {
        if (chi63_.prec() != prec_)
            throw std::invalid_argument("Catalog: chi5 and chi63 precisions differ");
    }

    int prec() const { return prec_; }
    const SiegelExpansion& chi5() const { return chi5_; }
    const VectorExpansion& chi63() const { return chi63_; }
    SiegelExpansion chi10() const { return fourier::mul(chi5_, chi5_); }
    VectorExpansion chi68() const {
        VectorExpansion v;
        v.j = 6;
        v.k = 8;
        for (const auto& e : chi63_.entries) v.entries.push_back(fourier::mul(e, chi5_));
        return v;
    }
    GammaEngine& engine() { return engine_; }

    // Cusp space S_{j,k}, reference-normalized when a classical leading-vector
    // normalization exists, echelon-normalized otherwise.
    std::vector<VectorExpansion> space(int j, int k) {
        auto route = route_for(j, k);
        if (!route) throw std::invalid_argument("catalog: no construction route for this weight");
        auto forms = construct::reduced_space(engine_, route->d, route->lambda, route->nu, chi5_);
        std::vector<VectorExpansion> basis;
        basis.reserve(forms.size());
        for (auto& f : forms) basis.push_back(std::move(f.form));
        if (auto specs = leading_specs(j, k)) return construct::normalize_to_leading(basis, *specs);
        return basis;
    }

    VectorExpansion form(int j, int k) {
        auto basis = space(j, k);
        if (basis.size() != 1) throw std::logic_error("catalog: weight does not cut out a single form");
        return basis[0];
    }

  private:
    int prec_;
    SiegelExpansion chi5_;
    VectorExpansion chi63_;
    GammaEngine engine_;
};

}  // namespace smf::catalog
