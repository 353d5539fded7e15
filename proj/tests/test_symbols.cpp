#include <cmath>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "hypojac/specs.hpp"
#include "hypojac/symbols.hpp"
#include "oracles.hpp"

using hypojac::complex;
using hypojac::RadialMeasure;
using hypojac::RadialSymbol;

TEST(Hhat, Examples) {
    const auto area = RadialMeasure::beta_weight(0.0);
    EXPECT_NEAR(hypojac::hhat(RadialSymbol::power(2.0), 2.0, area).real(), 1.0 / 3.0, 1e-15);
    for (double beta : {0.0, 0.5, 2.0}) {
        EXPECT_NEAR(std::abs(hypojac::hhat(RadialSymbol::poly({1.0}), 0.0, RadialMeasure::beta_weight(beta)) - 1.0),
                    0.0, 1e-15);
    }
    EXPECT_NEAR(hypojac::hhat(RadialSymbol::sqrt_deficit(), 0.0, area).real(), 2.0 / 3.0, 1e-12);
}

TEST(Hhat, SqrtDeficitAgainstBetaFunction) {
    // ∫ sqrt(1-x²) x^m 2x dx = B(m/2+1, 3/2)
    const auto area = RadialMeasure::beta_weight(0.0);
    for (int m : {0, 3, 10, 40}) {
        const double ref = std::beta(m / 2.0 + 1.0, 1.5);
        EXPECT_NEAR(hypojac::hhat(RadialSymbol::sqrt_deficit(), m, area).real(), ref, 1e-14) << m;
    }
    // B(501, 3/2), mpmath
    EXPECT_NEAR(hypojac::hhat(RadialSymbol::sqrt_deficit(), 1000.0, area).real(), 0.000078970247163196377844,
                1e-13 * 7.9e-5);
}

TEST(Hhat, PowerRoutesThroughMomentExactly) {
    for (double beta : {0.0, 1.0, 3.0}) {
        const auto mu = RadialMeasure::beta_weight(beta);
        for (double s : {0.5, 2.0, 7.25}) {
            for (double m : {0.0, 4.0, 1e5}) {
                EXPECT_EQ(hypojac::hhat(RadialSymbol::power(s), m, mu), complex(mu.moment(m + s)));
            }
        }
    }
}

TEST(Hhat, ConjugateLinearInSymbol) {
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    auto& gen = oracle::rng();
    const auto mu = RadialMeasure::beta_weight(0.5);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<complex> c1(4), c2(4);
        for (auto& c : c1) c = {coef(gen), coef(gen)};
        for (auto& c : c2) c = {coef(gen), coef(gen)};
        const complex a(coef(gen), coef(gen));
        std::vector<complex> combo(4);
        for (int j = 0; j < 4; ++j) combo[j] = a * c1[j] + c2[j];
        for (double m : {0.0, 5.0, 31.0}) {
            const complex lhs = hypojac::hhat(RadialSymbol::poly(combo), m, mu);
            const complex rhs = std::conj(a) * hypojac::hhat(RadialSymbol::poly(c1), m, mu) +
                                hypojac::hhat(RadialSymbol::poly(c2), m, mu);
            EXPECT_LT(std::abs(lhs - rhs), 1e-12);
        }
    }
}

TEST(Hhat, ConjugatesComplexTabulatedSymbol) {
    hypojac::Tabulated t;
    t.eval = [](double x) { return complex(x * x, 2.0 * x); };
    t.deriv_at_one = hypojac::DerivStatus::finite(complex(2.0, 2.0));
    const auto tab = RadialSymbol::tabulated(t);
    const auto area = RadialMeasure::beta_weight(0.0);
    const complex want(oracle::area_moment(5.0), -2.0 * oracle::area_moment(4.0));
    EXPECT_LT(std::abs(hypojac::hhat(tab, 3.0, area) - want), 1e-12);
}

TEST(Hhat, BoundedBySupNormTimesMoment) {
    std::vector<RadialSymbol> symbols = {RadialSymbol::power(3.0), RadialSymbol::sqrt_deficit(),
                                         RadialSymbol::poly({0.5, complex(0.0, -1.0), 2.0})};
    for (double beta : {0.0, 1.0}) {
        const auto mu = RadialMeasure::beta_weight(beta);
        for (const auto& q : symbols) {
            for (double m : {0.0, 1.0, 10.0, 100.0, 1000.0}) {
                EXPECT_LE(std::abs(hypojac::hhat(q, m, mu)), q.sup_norm() * mu.moment(m) * (1.0 + 1e-12));
            }
        }
    }
}

TEST(Alpha, Examples) {
    EXPECT_EQ(hypojac::alpha(RadialSymbol::power(4.0), 2).value(), complex(1.0));
    EXPECT_EQ(hypojac::alpha(RadialSymbol::poly({complex(3.0, -1.0)}), 1).value(), complex(0.0));
    EXPECT_FALSE(hypojac::alpha(RadialSymbol::sqrt_deficit(), 1).is_finite());
    EXPECT_EQ(RadialSymbol::poly({1.0, 2.0, complex(0.0, 1.0)}).deriv_at_one().value(), complex(2.0, 2.0));
    EXPECT_THROW(hypojac::alpha(RadialSymbol::power(1.0), 0), hypojac::DomainError);
}

TEST(HhatRatioDifference, SqrtDeficitDirectAndCompensatedBranches) {
    // ĥ(t)/γ_t - ĥ(t+δ)/γ_{t+δ} for area measure, from 50-digit mpmath Beta functions.
    const auto area = RadialMeasure::beta_weight(0.0);
    const auto q = RadialSymbol::sqrt_deficit();
    EXPECT_NEAR(hypojac::hhat_ratio_difference(q, 0.0, 2.0, area).real(), 0.13333333333333333333, 1e-12);
    EXPECT_NEAR(hypojac::hhat_ratio_difference(q, 2e4, 2.0, area).real(), 4.4296395432874122522e-7, 1e-7 * 4.43e-7);
    EXPECT_NEAR(hypojac::hhat_ratio_difference(q, 4e6, 2.0, area).real(), 1.5666400279386152241e-10,
                1e-6 * 1.57e-10);
    EXPECT_NEAR(hypojac::hhat_ratio_difference(q, 1e7, 4.0, area).real(), 7.9266480557266502685e-11,
                1e-6 * 7.93e-11);
}

TEST(HhatRatioDifference, ConstantSymbolGivesZero) {
    for (double beta : {0.0, 2.0}) {
        const auto mu = RadialMeasure::beta_weight(beta);
        EXPECT_EQ(hypojac::hhat_ratio_difference(RadialSymbol::poly({complex(2.0, 1.0)}), 100.0, 2.0, mu),
                  complex(0.0));
    }
}

TEST(SymbolSpec, ParsesAllFamilies) {
    using hypojac::specs::parse_symbol;
    EXPECT_EQ(std::get<hypojac::Power>(parse_symbol("power:2.5").family()).s, 2.5);
    const auto poly = std::get<hypojac::Poly>(parse_symbol("poly:1,0.5-2i,3i,-1e-3+1e-2i").family());
    ASSERT_EQ(poly.coeffs.size(), 4u);
    EXPECT_EQ(poly.coeffs[1], complex(0.5, -2.0));
    EXPECT_EQ(poly.coeffs[2], complex(0.0, 3.0));
    EXPECT_EQ(poly.coeffs[3], complex(-1e-3, 1e-2));
    EXPECT_TRUE(std::holds_alternative<hypojac::SqrtDeficit>(parse_symbol("sqrtdef").family()));
    EXPECT_THROW(parse_symbol("power:-1"), hypojac::DomainError);
    EXPECT_THROW(parse_symbol("cosine:1"), hypojac::DomainError);
    EXPECT_THROW(parse_symbol("poly:1,,2"), hypojac::DomainError);
}

TEST(SymbolSpec, TabulatedDerivativeIsExplicitOrHeuristic) {
    const std::string path = ::testing::TempDir() + "square_symbol.csv";
    {
        std::ofstream f(path);
        for (int i = 0; i <= 1000; ++i) f << i / 1000.0 << ',' << (i / 1000.0) * (i / 1000.0) << '\n';
    }
    const auto explicit_sym = hypojac::specs::parse_symbol("table:" + path + ":2");
    EXPECT_FALSE(explicit_sym.heuristic());
    EXPECT_EQ(explicit_sym.deriv_at_one().value(), complex(2.0));
    EXPECT_EQ(explicit_sym.describe(), "table:" + path + ":2");
    EXPECT_FALSE(hypojac::specs::parse_symbol("table:" + path + ":inf").deriv_at_one().is_finite());
    const auto guessed = hypojac::specs::parse_symbol("table:" + path + ":auto");
    EXPECT_TRUE(guessed.heuristic());
    EXPECT_NEAR(guessed.deriv_at_one().value().real(), 2.0, 1e-5);
    // the table reproduces t² up to interpolation error
    const auto area = RadialMeasure::beta_weight(0.0);
    EXPECT_NEAR(hypojac::hhat(explicit_sym, 2.0, area).real(), 1.0 / 3.0, 1e-6);
}
