#include "lognorm/chars.hpp"
#include "lognorm/numfield.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace lognorm;
using namespace lognorm::numfield;
using lognorm::padic::Integer;
using lognorm::padic::Rational;

namespace {

int kronecker(long a, long n)
{
    // (a / n) for n > 0
    int result = 1;
    while (n % 2 == 0) {
        n /= 2;
        long r = ((a % 8) + 8) % 8;
        if (r == 0 || r == 2 || r == 4 || r == 6)
            return 0;
        if (r == 3 || r == 5)
            result = -result;
    }
    if (n == 1)
        return result;
    return result * mpz_jacobi(Integer(a).get_mpz_t(), Integer(n).get_mpz_t());
}

/// Class number from the analytic class number formula.
long analytic_class_number(long d)
{
    const long disc = padic::mod(Integer(d), 4) == 1 ? d : 4 * d;
    const long m = std::labs(disc);
    if (d < 0) {
        double w = static_cast<double>(quad::torsion_order(Integer(d)));
        double s = 0;
        for (long a = 1; a < m; ++a)
            s += kronecker(disc, a) * static_cast<double>(a);
        return std::lround(-w * s / (2.0 * static_cast<double>(m)));
    }
    auto eps = quad::fundamental_unit(Integer(d));
    double reg = std::log(eps.a.get_d() + eps.b.get_d() * std::sqrt(static_cast<double>(d)));
    double s = 0;
    for (long a = 1; a < m; ++a)
        s += kronecker(disc, a) * std::log(std::sin(std::numbers::pi * static_cast<double>(a) / static_cast<double>(m)));
    return std::lround(-0.5 * s / reg);
}

std::vector<long> squarefree_radicands(long dmax)
{
    std::vector<long> out;
    for (long a = 1; a <= dmax; ++a)
        for (long d : {a, -a})
            if (d != 1 && quad::is_squarefree(Integer(d)))
                out.push_back(d);
    return out;
}

const std::vector<long> kEll = {2, 3, 5, 7, 11, 13};

}  // namespace

TEST(Parse, Grammar)
{
    EXPECT_TRUE(std::holds_alternative<RationalSpec>(parse_field_spec("q:1")));
    EXPECT_EQ(std::get<QuadraticSpec>(parse_field_spec("q:-5")).d, -5);
    auto bq = std::get<BiquadraticSpec>(parse_field_spec("bq:2,-3"));
    EXPECT_EQ(bq.d1, 2);
    EXPECT_EQ(bq.d2, -3);
    EXPECT_EQ(std::get<CyclotomicSpec>(parse_field_spec("cyc:20")).n, 20);
    EXPECT_EQ(to_string(parse_field_spec("bq:2,-3")), "bq:2,-3");
    for (const char* bad : {"q:", "q:4", "q:0", "q:2x", "bq:2", "bq:3,3", "cyc:2", "z:1", "nonsense", "abs:"})
        EXPECT_THROW(parse_field_spec(bad), ParseError) << bad;
    EXPECT_THROW(parse_field_spec("abs:/nonexistent.json"), ParseError);
}

TEST(Decomposition, Examples)
{
    auto a = decomposition_data(QuadraticSpec{2}, 7);
    EXPECT_EQ(a.l, 2);
    EXPECT_EQ(a.r, 2);
    EXPECT_EQ(a.c, 0);
    auto b = decomposition_data(QuadraticSpec{-1}, 2);
    EXPECT_EQ(b.l, 1);
    EXPECT_EQ(b.r, 0);
    EXPECT_EQ(b.c, 1);
    EXPECT_EQ(*b.e, 2);
    auto c = decomposition_data(CyclotomicSpec{5}, 2);
    EXPECT_EQ(c.d_ell.order(), 4);
    EXPECT_EQ(c.l, 1);
    EXPECT_THROW(decomposition_data(CyclotomicSpec{10}, 5), UnsupportedInput);
    EXPECT_THROW(decomposition_data(QuadraticSpec{2}, 9), ParseError);
}

TEST(Decomposition, DegreeIdentity)
{
    for (long ell : kEll) {
        for (long d : squarefree_radicands(50)) {
            auto dec = decomposition_data(QuadraticSpec{d}, ell);
            EXPECT_EQ(*dec.e * *dec.f * dec.l, 2);
            EXPECT_EQ(dec.r + 2 * dec.c, 2);
        }
        for (long n = 3; n <= 25; ++n) {
            if (n % ell == 0)
                continue;
            auto dec = decomposition_data(CyclotomicSpec{n}, ell);
            EXPECT_EQ(*dec.e * *dec.f * dec.l, dec.degree());
        }
        for (long d1 : {-1, 2, 3, 5, -3, 7})
            for (long d2 : {-1, 2, 3, 5, -3, 7, 13}) {
                if (d1 == d2)
                    continue;
                auto dec = decomposition_data(BiquadraticSpec{d1, d2}, ell);
                EXPECT_EQ(*dec.e * *dec.f * dec.l, 4) << d1 << "," << d2 << " at " << ell;
                EXPECT_EQ(dec.r + 2 * dec.c, 4);
            }
    }
}

TEST(Decomposition, BiquadraticExamples)
{
    // Q(zeta_8) = Q(i, sqrt 2): totally ramified at 2, complex.
    auto z8 = decomposition_data(BiquadraticSpec{-1, 2}, 2);
    EXPECT_EQ(*z8.e, 4);
    EXPECT_EQ(z8.c, 2);
    // Q(i, sqrt 2) at 17: 17 splits in both.
    EXPECT_EQ(decomposition_data(BiquadraticSpec{-1, 2}, 17).l, 4);
    // 3 is inert in Q(i) and Q(sqrt 2) and splits in Q(sqrt -2).
    auto m = decomposition_data(BiquadraticSpec{-1, 2}, 3);
    EXPECT_EQ(m.l, 2);
    EXPECT_EQ(*m.f, 2);
    auto layers = quadratic_layers(BiquadraticSpec{-1, 2}, 3);
    EXPECT_EQ(layers[2].d, -2);
}

TEST(Units, FundamentalUnitExamples)
{
    EXPECT_EQ(quad::fundamental_unit(2), (QuadElement{2, 1, 1}));
    EXPECT_EQ(quad::fundamental_unit(5), (QuadElement{5, Rational(1, 2), Rational(1, 2)}));
    EXPECT_EQ(quad::fundamental_unit(94), (QuadElement{94, 2143295, 221064}));
    EXPECT_EQ(quad::fundamental_unit(3), (QuadElement{3, 2, 1}));
    EXPECT_EQ(quad::fundamental_unit(13), (QuadElement{13, Rational(3, 2), Rational(1, 2)}));
    EXPECT_THROW(quad::fundamental_unit(1), std::invalid_argument);
    EXPECT_THROW(quad::fundamental_unit(-2), std::invalid_argument);
}

TEST(Units, FundamentalUnitIsMinimal)
{
    // Smallest unit > 1 by brute force over the integral basis for small d.
    for (long d : squarefree_radicands(60)) {
        if (d < 2)
            continue;
        auto eps = quad::fundamental_unit(d);
        EXPECT_TRUE(eps.norm() == 1 || eps.norm() == -1) << d;
        EXPECT_TRUE(eps.is_integral());
        EXPECT_GT(eps.b, 0);
        EXPECT_GT(eps.a, 0);
        auto [x, y] = eps.basis_coordinates();
        if (y > 2000)
            continue;
        for (long yy = 1; yy < y; ++yy)
            for (long xx = -3 * yy - 5; xx <= 9 * yy + 5; ++xx) {
                auto cand = QuadElement::from_basis(d, xx, yy);
                Rational n = cand.norm();
                if ((n == 1 || n == -1) && cand.a > 0 && cand.b > 0)
                    ADD_FAILURE() << "smaller unit for d = " << d << ": " << cand.to_string();
            }
    }
}

TEST(ClassNumber, Examples)
{
    EXPECT_EQ(quad::class_number(-5), 2);
    EXPECT_EQ(quad::class_number(-1), 1);
    EXPECT_EQ(quad::class_number(-23), 3);
    EXPECT_EQ(quad::class_number(-47), 5);
    EXPECT_EQ(quad::class_number(10), 2);
    EXPECT_EQ(quad::class_number(79), 3);
    EXPECT_EQ(quad::class_number(82), 4);
    EXPECT_THROW(quad::class_number(-201), UnsupportedInput);
}

TEST(ClassNumber, MatchesAnalyticFormula)
{
    for (long d : squarefree_radicands(200))
        EXPECT_EQ(quad::class_number(d), analytic_class_number(d)) << d;
}

TEST(Generators, Examples)
{
    auto g = quad::principal_power_generator(-1, 5);
    EXPECT_EQ(g.exponent, 1);
    EXPECT_EQ(g.generator.norm(), 5);
    EXPECT_TRUE(g.generator == (QuadElement{-1, 2, 1}) || g.generator == (QuadElement{-1, 2, -1}) ||
                g.generator == (QuadElement{-1, 1, 2}) || g.generator == (QuadElement{-1, 1, -2}) ||
                g.generator == (QuadElement{-1, -2, 1}) || g.generator == (QuadElement{-1, -2, -1}) ||
                g.generator == (QuadElement{-1, -1, 2}) || g.generator == (QuadElement{-1, -1, -2}))
        << g.generator.to_string();
    auto h = quad::principal_power_generator(2, 7);
    EXPECT_EQ(h.exponent, 1);
    EXPECT_EQ(abs(h.generator.norm()), 7);
    // Up to units, the generator is 3 + sqrt 2 or its conjugate.
    auto ratio_norm = (h.generator * QuadElement{2, 3, -1}).norm();
    EXPECT_TRUE(ratio_norm == 49 || ratio_norm == -49);
    EXPECT_EQ(quad::principal_power_generator(2, 5).generator, (QuadElement{2, 5, 0}));
    // h(-5) = 2 and 3 splits into non-principal primes.
    EXPECT_EQ(quad::principal_power_generator(-5, 3).exponent, 2);
    // 2 ramifies in Q(sqrt -5) with non-principal prime above it.
    auto r = quad::principal_power_generator(-5, 2);
    EXPECT_EQ(r.exponent, 2);
    EXPECT_EQ(r.generator, (QuadElement{-5, 2, 0}));
}

TEST(Generators, NormsAndBranchOverCorpus)
{
    for (long ell : kEll)
        for (long d : squarefree_radicands(200)) {
            auto kind = quad::splitting(d, ell);
            auto g = quad::principal_power_generator(d, ell);
            long h = quad::class_number(d);
            EXPECT_EQ(h % g.exponent, 0);
            EXPECT_TRUE(g.generator.is_integral());
            Rational n = abs(g.generator.norm());
            if (kind == padic::LocalSplitting::split) {
                EXPECT_EQ(n, Rational(padic::ipow(ell, g.exponent))) << d << " " << ell;
                // Not divisible by ell, and in the branch 0 prime.
                auto [x, y] = g.generator.basis_coordinates();
                EXPECT_FALSE(x % ell == 0 && y % ell == 0);
                auto e0 = padic::local_norm_quad(g.generator.a, g.generator.b, d, {kind, 0}, ell, 4);
                auto e1 = padic::local_norm_quad(g.generator.a, g.generator.b, d, {kind, 1}, ell, 4);
                EXPECT_EQ(e0.valuation(), g.exponent);
                EXPECT_EQ(e1.valuation(), 0);
                // Smaller powers are not principal: no element of norm ell^k.
                for (long k = 1; k < g.exponent; ++k)
                    EXPECT_FALSE(quad::detail::principal_generator(d, ell, k, quad::detail::basis_root(d, ell, k, kind)))
                        << d;
            } else if (kind == padic::LocalSplitting::ramified) {
                EXPECT_EQ(n, g.exponent == 1 ? Rational(ell) : Rational(ell * ell));
            } else {
                EXPECT_EQ(n, Rational(ell * ell));
            }
        }
}

TEST(LogValuation, Examples)
{
    Place above5{5, padic::LocalSplitting::inert, 0};
    auto v = std::get<padic::PadicNumber>(log_valuation(QuadElement{2, 5, 0}, above5, 5, 10));
    EXPECT_TRUE(v.is_zero());
    auto u = std::get<padic::PadicNumber>(log_valuation(QuadElement{2, 1, 1}, above5, 5, 10));
    EXPECT_TRUE(u.is_zero());
    Place above5i{5, padic::LocalSplitting::split, 0};
    auto i = std::get<padic::PadicNumber>(log_valuation(QuadElement{-1, 0, 1}, above5i, 5, 10));
    EXPECT_TRUE(i.is_zero());
    auto a = std::get<padic::PadicNumber>(log_valuation(QuadElement{-1, 2, 1}, above5i, 5, 10));
    EXPECT_FALSE(a.is_zero());
    EXPECT_EQ(std::get<long>(log_valuation(QuadElement{-1, 2, 1}, Place{2, padic::LocalSplitting::ramified, 0}, 5, 10)), 0);
    EXPECT_EQ(std::get<long>(log_valuation(QuadElement{-1, 1, 1}, Place{2, padic::LocalSplitting::ramified, 0}, 5, 10)), 1);
    EXPECT_EQ(std::get<long>(log_valuation(QuadElement{-1, 2, 0}, Place{2, padic::LocalSplitting::ramified, 0}, 5, 10)), 2);
    EXPECT_EQ(std::get<long>(log_valuation(QuadElement{2, 3, 0}, Place{3, padic::LocalSplitting::inert, 0}, 5, 10)), 1);
    EXPECT_THROW(log_valuation(QuadElement{2, 0, 0}, above5, 5, 10), std::domain_error);
}

TEST(ProductFormula, Examples)
{
    EXPECT_TRUE(product_formula_residual(QuadElement{1, 5, 0}, 5, 10).is_zero());
    EXPECT_TRUE(product_formula_residual(QuadElement{-1, 2, 1}, 5, 10).is_zero());
    EXPECT_TRUE(product_formula_residual(QuadElement{2, 1, 1}, 7, 10).is_zero());
    EXPECT_GE(product_formula_residual(QuadElement{2, 1, 1}, 7, 10).absolute_precision(), 8);
    EXPECT_THROW(product_formula_residual(QuadElement{2, 0, 0}, 7, 10), std::domain_error);
}

TEST(ProductFormula, RandomElements)
{
    std::mt19937_64 rng(20260418);
    std::uniform_int_distribution<long> coef(-60, 60);
    std::uniform_int_distribution<long> den(1, 12);
    for (long ell : kEll)
        for (long d : {1L, -1L, 2L, -3L, 5L, -5L, 6L, 17L, -23L, 41L}) {
            int checked = 0;
            while (checked < 40) {
                QuadElement x{d, Rational(coef(rng), den(rng)), d == 1 ? Rational(0) : Rational(coef(rng), den(rng))};
                x.a.canonicalize();
                x.b.canonicalize();
                if (x.is_zero())
                    continue;
                auto r = product_formula_residual(x, ell, 10);
                EXPECT_TRUE(r.is_zero()) << x.to_string() << " at " << ell;
                EXPECT_GE(r.absolute_precision(), 8);
                ++checked;
            }
        }
}

TEST(Oracle, Examples)
{
    for (long ell : kEll)
        EXPECT_EQ(naive_rank_oracle(RationalSpec{}, ell).rank, 1);
    auto a = naive_rank_oracle(QuadraticSpec{-1}, 5, 12);
    EXPECT_EQ(a.rank, 1);
    EXPECT_FALSE(a.ambiguous);
    auto b = naive_rank_oracle(QuadraticSpec{2}, 5, 12);
    EXPECT_EQ(b.rank, 2);
    EXPECT_FALSE(b.ambiguous);
    // Q_ell-rank and integer kernel differ for real quadratic fields with ell split.
    auto c = naive_rank_oracle(QuadraticSpec{2}, 7, 12);
    EXPECT_EQ(c.rank, 1);
    EXPECT_EQ(c.generators, 3);
    EXPECT_THROW(naive_rank_oracle(CyclotomicSpec{5}, 2), UnsupportedInput);
}

TEST(Oracle, AgreesWithCharacterFormula)
{
    auto check = [](const FieldSpec& spec, long ell) {
        auto dec = decomposition_data(spec, ell);
        auto res = naive_rank_oracle_with_retry(spec, ell);
        EXPECT_FALSE(res.ambiguous) << to_string(spec) << " at " << ell;
        auto expected = chars::naive_rank_galois(chars::character_table(dec.group), dec.d_inf, dec.d_ell);
        EXPECT_EQ(res.rank, expected) << to_string(spec) << " at " << ell;
        EXPECT_EQ(res.generators, dec.r + dec.c - 1 + dec.l);
        EXPECT_GE(res.rank, 1);
    };
    for (long ell : kEll) {
        for (long d : squarefree_radicands(30))
            check(QuadraticSpec{d}, ell);
        for (auto [d1, d2] : std::vector<std::pair<long, long>>{{-1, 2}, {-1, 5}, {2, 3}, {-3, 5}, {-1, -3}, {2, 17},
                                                                 {-7, 2}, {5, 13}, {-1, 17}, {-2, -7}})
            check(BiquadraticSpec{d1, d2}, ell);
    }
    check(BiquadraticSpec{-1, 2}, 17);
    check(BiquadraticSpec{2, 17}, 103);
}
