#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "smf/fourier.hpp"
#include "smf/theta.hpp"

using namespace smf;
using fourier::SiegelExpansion;
using fourier::Unit;
using fourier::VectorExpansion;

namespace {

struct Term {
    int a, b, c;
    Q q;
};

SiegelExpansion from_terms(int prec, int character, const std::vector<Term>& terms) {
    SiegelExpansion f(prec, character);
    for (const auto& t : terms) f.series().add_term(t.a, t.b, t.c, t.q);
    f.series().trim();
    return f;
}

std::vector<Term> random_terms(std::mt19937_64& rng, int prec, size_t count) {
    std::uniform_int_distribution<int> slot(0, prec);
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 3);
    std::vector<Term> out;
    while (out.size() < count) {
        int a = slot(rng), b = slot(rng);
        if (a + b > prec) continue;
        long cmax = isqrt(4L * a * b);
        std::uniform_int_distribution<long> cd(-cmax, cmax);
        int c = static_cast<int>(cd(rng));
        Q q(num(rng), den(rng));
        q.canonicalize();
        if (q == 0) continue;
        out.push_back(Term{a, b, c, q});
    }
    return out;
}

// Brute-force term-by-term convolution oracle, independent of the slot/row
// layout used by the implementation.
SiegelExpansion naive_mul(const SiegelExpansion& f, const SiegelExpansion& g) {
    int prec = std::min(f.prec(), g.prec());
    std::map<std::array<int, 3>, Q> acc;
    for (const auto& [s1, r1] : f.series().rows)
        for (int i = 0; i < static_cast<int>(r1.v.size()); ++i) {
            if (r1.v[static_cast<size_t>(i)] == 0) continue;
            for (const auto& [s2, r2] : g.series().rows)
                for (int l = 0; l < static_cast<int>(r2.v.size()); ++l) {
                    if (r2.v[static_cast<size_t>(l)] == 0) continue;
                    int a = s1.a + s2.a, b = s1.b + s2.b;
                    if (a + b > prec) continue;
                    acc[{a, b, r1.cmin + i + r2.cmin + l}] +=
                        r1.v[static_cast<size_t>(i)] * r2.v[static_cast<size_t>(l)];
                }
        }
    SiegelExpansion out(prec, f.character() ^ g.character());
    for (const auto& [k, q] : acc) out.series().add_term(k[0], k[1], k[2], q);
    out.series().trim();
    return out;
}

SiegelExpansion naive_add(const SiegelExpansion& f, const SiegelExpansion& g) {
    int prec = std::min(f.prec(), g.prec());
    SiegelExpansion out(prec, f.character());
    for (const auto* h : {&f, &g})
        for (const auto& [s, r] : h->series().rows)
            for (int i = 0; i < static_cast<int>(r.v.size()); ++i)
                if (s.a + s.b <= prec) out.series().add_term(s.a, s.b, r.cmin + i, r.v[static_cast<size_t>(i)]);
    out.series().trim();
    return out;
}

}  // namespace

TEST_CASE("add: identity and inverse") {
    auto c5 = theta::chi5(8);
    SiegelExpansion zero(8, 1);
    CHECK(fourier::add(c5, zero) == c5);
    CHECK(fourier::add(c5, fourier::scale(c5, Q(-1))).is_zero());
    SiegelExpansion wrong_char(8, 0);
    CHECK_THROWS_AS(fourier::add(c5, wrong_char), CharacterMismatch);
}

TEST_CASE("add: random series against naive term merge") {
    std::mt19937_64 rng(12345);
    for (int rep = 0; rep < 10; ++rep) {
        auto f = from_terms(10, 0, random_terms(rng, 10, 5));
        auto g = from_terms(10, 0, random_terms(rng, 10, 5));
        CHECK(fourier::add(f, g) == naive_add(f, g));
    }
}

TEST_CASE("mul: chi5 squared gives the printed chi10 leading slot") {
    auto c5 = theta::chi5(8);
    auto c10 = fourier::mul(c5, c5);
    CHECK(c10.character() == 0);
    CHECK(c10.coeff(2, 2, -2) == 1);
    CHECK(c10.coeff(2, 2, 0) == -2);
    CHECK(c10.coeff(2, 2, 2) == 1);
}

TEST_CASE("mul: identity, commutativity, associativity, naive oracle") {
    std::mt19937_64 rng(777);
    SiegelExpansion one(12, 0);
    one.series().add_term(0, 0, 0, Q(1));
    for (int rep = 0; rep < 8; ++rep) {
        auto f = from_terms(12, 0, random_terms(rng, 12, 6));
        auto g = from_terms(12, 0, random_terms(rng, 12, 6));
        auto h = from_terms(12, 0, random_terms(rng, 12, 4));
        CHECK(fourier::mul(f, one) == f);
        auto fg = fourier::mul(f, g);
        CHECK(fg == naive_mul(f, g));
        CHECK(fg == fourier::mul(g, f));
        CHECK(fourier::mul(fg, h) == fourier::mul(f, fourier::mul(g, h)));
        CHECK(fg.psd_supported());
    }
}

TEST_CASE("divide_exact: mul round-trip and remainder detection") {
    std::mt19937_64 rng(999);
    for (int rep = 0; rep < 8; ++rep) {
        auto f = from_terms(12, 0, random_terms(rng, 12, 6));
        // force a usable divisor: single leading slot at (1,1)
        std::vector<Term> terms = random_terms(rng, 12, 5);
        for (auto& t : terms) {
            t.a = std::max(t.a, 1);
            t.b = std::max(t.b, 1);
            if (static_cast<long>(t.c) * t.c > 4L * t.a * t.b) t.c = 0;
        }
        auto g = from_terms(12, 0, terms);
        g.series().add_term(1, 1, 1, Q(1));
        g.series().trim();
        auto prod = fourier::mul(f, g);
        auto back = fourier::divide_exact(prod, g);
        SiegelExpansion expect = f;
        expect.series().truncate_to(back.prec());
        CHECK(back == expect);
        CHECK(back.psd_supported());
    }
    // remainder case: (1/R - R) Q1 Q2 does not divide Q1 Q2
    SiegelExpansion g(8, 1);
    g.series().add_term(1, 1, -1, Q(1));
    g.series().add_term(1, 1, 1, Q(-1));
    SiegelExpansion f(8, 0);
    f.series().add_term(1, 1, 0, Q(1));
    CHECK_THROWS_AS(fourier::divide_exact(f, g), NotDivisible);
}

TEST_CASE("divide_exact: chi10 / chi5 = chi5 and chi68 / chi5 = chi63") {
    auto c5 = theta::chi5(10);
    auto c10 = fourier::mul(c5, c5);
    auto quot = fourier::divide_exact(c10, c5);
    SiegelExpansion expect = c5;
    expect.series().truncate_to(quot.prec());
    CHECK(quot == expect);
    CHECK(quot.character() == 1);

    auto c63 = theta::chi63(10);
    auto c5b = theta::chi5(10);
    for (int i = 0; i <= 6; ++i) {
        auto c68i = fourier::mul(c63.entries[static_cast<size_t>(i)], c5b);
        auto back = fourier::divide_exact(c68i, c5b);
        SiegelExpansion e = c63.entries[static_cast<size_t>(i)];
        e.series().truncate_to(back.prec());
        CHECK(back == e);
    }
}

TEST_CASE("restrict_diagonal: t-unit equals 2^-m times s-unit") {
    std::mt19937_64 rng(31337);
    for (int rep = 0; rep < 6; ++rep) {
        auto f = from_terms(10, 0, random_terms(rng, 10, 6));
        for (int m = 0; m <= 4; ++m) {
            auto rs = fourier::restrict_diagonal(f, m, Unit::s);
            auto rt = fourier::restrict_diagonal(f, m, Unit::t);
            Z pow2;
            mpz_ui_pow_ui(pow2.get_mpz_t(), 2, static_cast<unsigned long>(m));
            CHECK(rt == Q(1) / Q(pow2) * rs);
        }
    }
}

TEST_CASE("vanishing_order: chi5, chi10, zero input") {
    auto c5 = theta::chi5(12);
    auto c10 = fourier::mul(c5, c5);
    CHECK(fourier::vanishing_order(c5) == 1);
    CHECK(fourier::vanishing_order(c10) == 2);
    SiegelExpansion zero(12, 0);
    CHECK_THROWS_AS(fourier::vanishing_order(zero), AllZero);
    SiegelExpansion lowprec(4, 0);
    lowprec.series().add_term(1, 1, 0, Q(1));
    CHECK_THROWS_AS(fourier::vanishing_order(lowprec), PrecisionError);
}

TEST_CASE("vanishing_order: invariant under unit-leading scalar multiplication") {
    auto c5 = theta::chi5(14);
    SiegelExpansion unit(14, 0);
    unit.series().add_term(0, 0, 0, Q(3));
    unit.series().add_term(2, 0, 0, Q(-5));
    unit.series().add_term(1, 1, 1, Q(7, 2));
    CHECK(fourier::vanishing_order(fourier::mul(c5, unit)) == fourier::vanishing_order(c5));
}

TEST_CASE("vv_multiply: identity scalar and weight bookkeeping") {
    auto c63 = theta::chi63(8);
    VectorExpansion one;
    one.j = 0;
    one.k = 0;
    SiegelExpansion s(8, 0);
    s.series().add_term(0, 0, 0, Q(1));
    one.entries = {s};
    auto prod = fourier::vv_multiply(c63, one);
    CHECK(prod.j == 6);
    CHECK(prod.k == 3);
    CHECK(prod == c63);
}

TEST_CASE("json: round trip") {
    auto c5 = theta::chi5(8);
    auto j = fourier::to_json(c5);
    auto back = fourier::expansion_from_json(j);
    CHECK(back == c5);
    auto c63 = theta::chi63(6);
    auto jv = fourier::to_json(c63);
    auto backv = fourier::vector_from_json(jv);
    CHECK(backv == c63);
}
