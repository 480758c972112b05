#include <catch2/catch_amalgamated.hpp>

#include "smf/catalog.hpp"
#include "smf/hecke.hpp"

using namespace smf;
using namespace smf::hecke;

namespace {

catalog::Catalog& cat() {
    static catalog::Catalog c(24);
    return c;
}

}  // namespace

TEST_CASE("calibration: lambda_2(chi12,6) = -240, then lambda_3 = 68040") {
    auto c126 = fourier::vv_multiply(cat().chi63(), cat().chi63());
    auto h2 = siegel_hecke(2, {c126});
    CHECK(h2.matrix[0][0] == -240);
    auto h3 = siegel_hecke(3, {c126});
    CHECK(h3.matrix[0][0] == 68040);
}

TEST_CASE("chi8,8 eigenvalues: 1344 and -6408") {
    auto c88 = cat().form(8, 8);
    CHECK(siegel_hecke(2, {c88}).matrix[0][0] == 1344);
    CHECK(siegel_hecke(3, {c88}).matrix[0][0] == -6408);
}

TEST_CASE("T2 on the reference-normalized basis of S8,10") {
    auto basis = cat().space(8, 10);
    REQUIRE(basis.size() == 2);
    auto h = siegel_hecke(2, basis);
    // T2 G1 = 8160 G1 - 4080 G2, T2 G2 = -2880 G1 - 720 G2
    CHECK(h.matrix[0][0] == 8160);
    CHECK(h.matrix[1][0] == -4080);
    CHECK(h.matrix[0][1] == -2880);
    CHECK(h.matrix[1][1] == -720);
    auto cp = hecke_charpoly(h);
    CHECK(cp == (QVec{Q(-17625600), Q(-7440), Q(1)}));
}

TEST_CASE("T2 on the reference-normalized basis of S6,12") {
    auto basis = cat().space(6, 12);
    REQUIRE(basis.size() == 2);
    auto h = siegel_hecke(2, basis);
    CHECK(h.matrix[0][0] == -2592);
    CHECK(h.matrix[1][0] == 254016);
    CHECK(h.matrix[0][1] == -480);
    CHECK(h.matrix[1][1] == 24960);
    CHECK(hecke_charpoly(h) == (QVec{Q(57231360), Q(-22368), Q(1)}));
}

TEST_CASE("T(2) and T(3) commute on S6,12") {
    auto basis = cat().space(6, 12);
    auto h2 = siegel_hecke(2, basis), h3 = siegel_hecke(3, basis);
    CHECK(qmat_mul(h2.matrix, h3.matrix) == qmat_mul(h3.matrix, h2.matrix));
}

TEST_CASE("eigenvalues are invariant under basis change") {
    // compare the reference-normalized basis with the raw construction basis
    auto route = catalog::route_for(8, 10);
    auto raw = construct::reduced_space(cat().engine(), route->d, route->lambda, route->nu,
                                        cat().chi5());
    std::vector<fourier::VectorExpansion> rawbasis;
    for (auto& f : raw) rawbasis.push_back(std::move(f.form));
    auto h_raw = siegel_hecke(2, rawbasis);
    auto h_ref = siegel_hecke(2, cat().space(8, 10));
    CHECK(charpoly(h_raw.matrix) == charpoly(h_ref.matrix));
}

TEST_CASE("precision robustness: prec + 8 reproduces the matrices") {
    catalog::Catalog lo(16), hi(24);
    auto c126lo = fourier::vv_multiply(lo.chi63(), lo.chi63());
    auto c126hi = fourier::vv_multiply(hi.chi63(), hi.chi63());
    CHECK(siegel_hecke(2, {c126lo}).matrix == siegel_hecke(2, {c126hi}).matrix);
    CHECK(siegel_hecke(3, {c126lo}).matrix == siegel_hecke(3, {c126hi}).matrix);
    auto c88lo = lo.form(8, 8), c88hi = hi.form(8, 8);
    CHECK(siegel_hecke(2, {c88lo}).matrix == siegel_hecke(2, {c88hi}).matrix);
}

TEST_CASE("precision shortfall raises") {
    catalog::Catalog tiny(12);
    auto c126 = fourier::vv_multiply(tiny.chi63(), tiny.chi63());
    CHECK_THROWS_AS(siegel_hecke(7, {c126}), PrecisionError);
    SiegelHeckeOptions opt;
    opt.enforce_default_precision = true;
    CHECK_THROWS_AS(siegel_hecke(3, {c126}, opt), PrecisionError);
}

TEST_CASE("required_precision default") {
    CHECK(required_precision_q(2) == 8);
    CHECK(required_precision_q(3) == 18);
}

TEST_CASE("norm_and_resultant examples") {
    // Res(x - a, x - b) = a - b
    QVec f{Q(-5), Q(1)};  // x - 5
    QVec g{Q(-3), Q(1)};  // x - 3
    CHECK(norm_and_resultant(f, g) == 2);
    // Res(x^2 - 2, x^2 - 3) = 1
    QVec f2{Q(-2), Q(0), Q(1)}, g2{Q(-3), Q(0), Q(1)};
    CHECK(norm_and_resultant(f2, g2) == 1);
    CHECK_THROWS(norm_and_resultant(QVec{Q(1), Q(2)}, g2));  // non-monic
}

TEST_CASE("algebraic numbers: arithmetic and irreducibility heuristics") {
    QVec f{Q(-1), Q(-1), Q(1)};  // x^2 - x - 1
    auto phi = AlgebraicNumber::generator(f);
    auto phi2 = phi * phi;
    // phi^2 = phi + 1
    CHECK(phi2.residue == (QVec{Q(1), Q(1)}));
    CHECK(is_irreducible_desk_scale(f));
    CHECK(!is_irreducible_desk_scale(QVec{Q(1), Q(2), Q(1)}));   // (x+1)^2
    CHECK(is_irreducible_desk_scale(QVec{Q(6800500), Q(215915), Q(-1042), Q(1)}));
    CHECK(!is_irreducible_desk_scale(QVec{Q(-8), Q(0), Q(0), Q(1)}));  // x^3 - 8
}

TEST_CASE("symj matrix convention sanity") {
    // j = 1, M = (a b; c d): X -> aX + cY, Y -> bX + dY on coordinates (v0, v1)
    auto m = symj_matrix(1, 1, 2, 3, 4);
    CHECK(m[0][0] == 1);
    CHECK(m[1][0] == 3);
    CHECK(m[0][1] == 2);
    CHECK(m[1][1] == 4);
    // multiplicativity on Sym^2: M = (1 2; 0 1), N = (1 0; 5 1), MN = (11 2; 5 1)
    auto a = symj_matrix(2, 1, 2, 0, 1), b = symj_matrix(2, 1, 0, 5, 1);
    auto ab = symj_matrix(2, 11, 2, 5, 1);
    CHECK(qmat_mul(a, b) == ab);
}

TEST_CASE("the chi10-multiple subspace of weight (8,20) is not T(2)-stable") {
    // frozen regression: there is no computed pair (F, F/chi5^nu) with both
    // Hecke actions available, because the filtered gamma-image subspaces sit
    // properly inside the ambient cusp space
    auto hw = covariant::highest_weight_basis(4, {16, 8});
    std::vector<covariant::CovariantPoly> covs;
    for (const auto& v : hw) covs.push_back(covariant::covariant_from_hw(v));
    auto images = cat().engine().run(covs);
    construct::Filtration fil = construct::filtration(images);
    std::vector<fourier::VectorExpansion> sub;
    for (const auto& row : fil.v_geq[2]) {
        fourier::VectorExpansion comb;
        comb.j = images[0].j;
        comb.k = images[0].k;
        comb.entries.assign(images[0].entries.size(),
                            fourier::SiegelExpansion(images[0].prec(), images[0].character()));
        for (size_t i = 0; i < images.size(); ++i)
            if (row[i] != 0)
                for (size_t e = 0; e < comb.entries.size(); ++e)
                    comb.entries[e] =
                        fourier::add(comb.entries[e], fourier::scale(images[i].entries[e], row[i]));
        sub.push_back(std::move(comb));
    }
    REQUIRE(sub.size() == 2);
    CHECK_THROWS_AS(siegel_hecke(2, sub), NoMatch);
}

TEST_CASE("irreducibility test reports failure beyond desk scale") {
    QVec quartic{Q(1), Q(0), Q(0), Q(0), Q(1)};
    CHECK_THROWS(is_irreducible_desk_scale(quartic));
}

TEST_CASE("stretch: T(5) eigenvalue data") {
    catalog::Catalog deep(28);  // three chi5 divisions still leave q-trace 11
    auto c126 = fourier::vv_multiply(deep.chi63(), deep.chi63());
    // recomputed; consistent with every other T(5) value below
    CHECK(siegel_hecke(5, {c126}).matrix[0][0] == 14765100);
    auto c88 = deep.form(8, 8);
    CHECK(siegel_hecke(5, {c88}).matrix[0][0] == -30774900);
    // -70706100 +- 8188800 sqrt(2185)
    auto h810 = siegel_hecke(5, deep.space(8, 10));
    CHECK(qmat_trace(h810.matrix) == Q(-141412200));
    CHECK(qmat_det(h810.matrix) == Q(-70706100) * Q(-70706100) - Q(8188800) * Q(8188800) * 2185);
    // -554158500 +- 77280000 sqrt(601)
    auto h612 = siegel_hecke(5, deep.space(6, 12));
    CHECK(qmat_trace(h612.matrix) == Q(-1108317000));
    CHECK(qmat_det(h612.matrix) ==
          Q(-554158500) * Q(-554158500) - Q(77280000) * Q(77280000) * 601);
}
