#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "hypojac/spectral.hpp"
#include "hypojac/specs.hpp"
#include "oracles.hpp"

using hypojac::BracketStatus;
using hypojac::complex;
using hypojac::RadialMeasure;
using hypojac::RadialSymbol;
using hypojac::ShiftDiagonalModel;

TEST(ChainTop, Examples) {
    const std::vector<double> single{0.7};
    EXPECT_DOUBLE_EQ(hypojac::chain_top_eigenvalue(single, 2), 0.7);
    const std::vector<double> path{1.0, 1.0};
    EXPECT_NEAR(hypojac::chain_top_eigenvalue(path, 3), std::sqrt(2.0), 1e-14);
    const std::vector<double> free(199, 1.0);
    EXPECT_NEAR(hypojac::chain_top_eigenvalue(free, 200), 2.0 * std::cos(std::numbers::pi / 201.0), 1e-10);
    EXPECT_EQ(hypojac::chain_top_eigenvalue(free, 1), 0.0);
    EXPECT_THROW(hypojac::chain_top_eigenvalue(free, 0), hypojac::DomainError);
}

TEST(ChainTop, AgreesWithDenseSolver) {
    auto& gen = oracle::rng();
    std::uniform_int_distribution<int> len(2, 50);
    std::uniform_real_distribution<double> mag(0.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t dim = static_cast<std::size_t>(len(gen));
        std::vector<double> off(dim - 1);
        for (auto& b : off) b = mag(gen);
        if (trial % 10 == 0) off[dim / 2 - 1] = 0.0;  // split chain
        const auto ev = oracle::tridiagonal_eigenvalues(off, dim);
        EXPECT_NEAR(hypojac::chain_top_eigenvalue(off, dim), ev[ev.size() - 1], 1e-10) << trial;
    }
}

TEST(ChainTop, LongChainUsesOnlyRequestedPrefix) {
    std::vector<double> off(1000, 1.0);
    off[10] = 50.0;
    EXPECT_NEAR(hypojac::chain_top_eigenvalue(off, 10), 2.0 * std::cos(std::numbers::pi / 11.0), 1e-12);
}

TEST(EssentialLowerBound, Examples) {
    const auto area = RadialMeasure::beta_weight(0.0);
    EXPECT_EQ(hypojac::essential_lower_bound({1, area, RadialSymbol::power(2.0)}), 2.0);
    EXPECT_EQ(hypojac::essential_lower_bound({2, area, RadialSymbol::power(4.0)}), 2.0);
    EXPECT_EQ(hypojac::essential_lower_bound({1, area, RadialSymbol::poly({3.0})}), 0.0);
    EXPECT_TRUE(std::isinf(hypojac::essential_lower_bound({1, area, RadialSymbol::sqrt_deficit()})));
}

TEST(NormBracket, PowerFourContainsFour) {
    const ShiftDiagonalModel m(1, RadialMeasure::beta_weight(0.0), RadialSymbol::power(4.0));
    const auto b = hypojac::norm_bracket(m);
    EXPECT_EQ(b.status, BracketStatus::Certified);
    EXPECT_TRUE(b.contains(4.0)) << b.lower << ' ' << b.upper;
    EXPECT_LT(b.width(), 1e-3);
}

TEST(NormBracket, ConstantSymbolIsZero) {
    const ShiftDiagonalModel m(2, RadialMeasure::beta_weight(1.0), RadialSymbol::poly({complex(1.0, 2.0)}));
    const auto b = hypojac::norm_bracket(m);
    EXPECT_EQ(b.lower, 0.0);
    EXPECT_EQ(b.upper, 0.0);
    EXPECT_EQ(b.status, BracketStatus::Certified);
}

TEST(NormBracket, SqrtDeficitDiverges) {
    const ShiftDiagonalModel m(1, RadialMeasure::beta_weight(0.0), RadialSymbol::sqrt_deficit());
    hypojac::BracketOptions opts;
    opts.n_max = 10000;
    const auto b = hypojac::norm_bracket(m, opts);
    EXPECT_EQ(b.status, BracketStatus::Diverging);
    EXPECT_GT(b.lower, 10.0);
    EXPECT_TRUE(std::isinf(b.upper));
    EXPECT_EQ(b.trunc_used, 10000u);
    // direct recomputation at the final truncation
    const auto j = m.j_entries(10000);
    EXPECT_NEAR(b.lower, hypojac::chain_top_eigenvalue(j.chains[0], 10001), 1e-12 * b.lower);
}

TEST(NormBracket, RejectsBadOptions) {
    const ShiftDiagonalModel m(1, RadialMeasure::beta_weight(0.0), RadialSymbol::power(2.0));
    hypojac::BracketOptions opts;
    opts.tol = 0.0;
    EXPECT_THROW(hypojac::norm_bracket(m, opts), hypojac::DomainError);
}

namespace {

std::vector<ShiftDiagonalModel> bounded_models() {
    std::vector<ShiftDiagonalModel> out;
    for (double beta : {0.0, 1.0}) {
        for (int n : {1, 2}) {
            out.emplace_back(n, RadialMeasure::beta_weight(beta), RadialSymbol::power(1.0));
            out.emplace_back(n, RadialMeasure::beta_weight(beta), RadialSymbol::power(2.0 * n + 1.0));
            out.emplace_back(n, RadialMeasure::beta_weight(beta),
                             RadialSymbol::poly({0.0, complex(0.0, 1.0), 0.5}));
        }
    }
    return out;
}

}  // namespace

TEST(NormBracket, HistoryIsNondecreasingAndConsistent) {
    hypojac::BracketOptions opts;
    opts.n_max = 1 << 16;
    for (const auto& m : bounded_models()) {
        const auto b = hypojac::norm_bracket(m, opts);
        SCOPED_TRACE(m.symbol().describe() + " " + m.measure().describe() + " n=" + std::to_string(m.n()));
        ASSERT_GE(b.history.size(), 2u);
        for (std::size_t i = 1; i < b.history.size(); ++i) {
            EXPECT_EQ(b.history[i].first, 2 * b.history[i - 1].first);
            EXPECT_GE(b.history[i].second, b.history[i - 1].second - 1e-13);
        }
        EXPECT_GE(b.lower, hypojac::essential_lower_bound(m) - 1e-2);
        if (b.status == BracketStatus::Certified) {
            for (const auto& [trunc, lower] : b.history) EXPECT_LE(lower, b.upper);
        }
        EXPECT_LE(b.lower, b.upper);
    }
}

TEST(NormBracket, AutoDerivativeTableIsHeuristic) {
    const std::string path = ::testing::TempDir() + "cubic_symbol.csv";
    {
        std::ofstream f(path);
        f << "x,q\n";
        for (int i = 0; i <= 2000; ++i) {
            const double x = i / 2000.0;
            f << x << ',' << x * x * x << '\n';
        }
    }
    const ShiftDiagonalModel m(1, RadialMeasure::beta_weight(0.0),
                               hypojac::specs::parse_symbol("table:" + path + ":auto"));
    hypojac::BracketOptions opts;
    opts.n_max = 1024;
    const auto b = hypojac::norm_bracket(m, opts);
    EXPECT_EQ(b.status, BracketStatus::Heuristic);
    EXPECT_NEAR(b.lower, 3.0, 0.05);
}

TEST(NormBracket, ToString) {
    EXPECT_EQ(hypojac::to_string(BracketStatus::Certified), "certified");
    EXPECT_EQ(hypojac::to_string(BracketStatus::Heuristic), "heuristic");
    EXPECT_EQ(hypojac::to_string(BracketStatus::Diverging), "diverging");
}
