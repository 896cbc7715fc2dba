#include "fluxcheck/errors.hpp"
#include "fluxcheck/product.hpp"
#include "generators.hpp"

#include <gtest/gtest.h>

using namespace fluxcheck;
using fluxcheck::testing::random_form;
using fluxcheck::testing::random_metric;

namespace {

Polynomial P(const char* s) { return Polynomial::parse(s); }

ChartMetric euclid5() {
    const auto c = make_chart("M", {"y1", "y2", "y3", "y4", "y5"});
    return diagonal_metric(c, std::vector<Rational>(5, Rational(-1)));
}

ChartMetric walker(const Polynomial& H) {
    const auto c = make_chart("W", {"v", "x1", "x2", "x3", "x4", "u"});
    PolyMatrix g(6, std::vector<Polynomial>(6));
    g[0][5] = g[5][0] = Polynomial(1);
    g[5][5] = H;
    for (std::size_t i = 1; i <= 4; ++i) g[i][i] = Polynomial(-1);
    return make_metric(c, g, Signature{1, 5});
}

}  // namespace

TEST(Product, AssemblyAndVolume) {
    const auto pc = build_product(euclid5(), walker(P("x1^2")), Polynomial(1));
    EXPECT_EQ(pc.chart()->dimension(), 11u);
    EXPECT_EQ(pc.chart()->coordinates().front(), "y1");
    EXPECT_EQ(pc.assembled.signature(), (Signature{1, 10}));
    EXPECT_EQ(volume_form(pc.assembled), wedge(pc.lift(volume_form(pc.base)), pc.lift(volume_form(pc.fiber))));
}

TEST(Product, ConstantWarpVolume) {
    const auto pc = build_product(euclid5(), walker(P("x1^2")), Polynomial(2));
    EXPECT_EQ(volume_form(pc.assembled),
              Polynomial(64) * wedge(pc.lift(volume_form(pc.base)), pc.lift(volume_form(pc.fiber))));
}

TEST(Product, Rejections) {
    EXPECT_THROW(build_product(euclid5(), walker(P("x1^2")), P("y1")), NonPolynomialInverse);
    EXPECT_THROW(build_product(euclid5(), walker(P("x1^2")), P("x1")), ChartMismatch);
    EXPECT_THROW(build_product(euclid5(), euclid5(), Polynomial(1)), ChartMismatch);
}

TEST(Product, OracleRejectsNonDivisible) {
    // The oracle alone is usable with non-constant f when divisions are exact.
    const auto base = euclid5();
    const auto fiber = walker(P("x1^2"));
    ProductChart pc = build_product(base, fiber, Polynomial(1));
    pc.warping = P("1 + y1^2");
    EXPECT_THROW(warped_ricci_oracle(pc), NonPolynomialDivision);
    pc.warping = P("y1");
    // Hessian of a linear function on a flat base vanishes; f̂ is polynomial.
    const auto oracle = warped_ricci_oracle(pc);
    // −½ΔH − g̃_uu (f Δf + 5 g(grad f, grad f)) with g(grad f, grad f) = −1
    EXPECT_EQ(oracle[10][10], Polynomial(1) + P("5*x1^2"));
}

TEST(Product, WalkerFiberOracle) {
    const auto pc = build_product(euclid5(), walker(P("1/8*x1^2 + 1/8*x2^2 + 1/8*x3^2 + 1/8*x4^2")), Polynomial(1));
    const auto oracle = warped_ricci_oracle(pc);
    EXPECT_EQ(oracle[10][10], Polynomial(Rational(1, 2)));
    EXPECT_EQ(oracle, ricci(pc.assembled));
}

TEST(ProductProperty, OracleMatchesDirect) {
    std::mt19937_64 rng(9001);
    const auto bc = make_chart("B", {"y1", "y2", "y3"});
    const auto fc = make_chart("F", {"z1", "z2", "z3"});
    for (int i = 0; i < 12; ++i) {
        const auto base = random_metric(rng, bc, 3);
        const auto fiber = random_metric(rng, fc, 2);
        for (int f : {1, 2}) {
            const auto pc = build_product(base, fiber, Polynomial(f));
            ASSERT_EQ(warped_ricci_oracle(pc), ricci(pc.assembled));
        }
    }
}

TEST(ProductProperty, WarpedNormAndHodgeLaws) {
    std::mt19937_64 rng(2718);
    const auto bc = make_chart("M", {"y1", "y2", "y3", "y4", "y5"});
    const auto fc = make_chart("N", {"v", "x1", "x2", "x3", "x4", "u"});
    std::uniform_int_distribution<unsigned> bdeg(1, 4), fdeg(1, 4);
    for (int i = 0; i < 20; ++i) {
        const auto base = random_metric(rng, bc, 5);
        const auto fiber = random_metric(rng, fc, 5);
        const int f = 1 + i % 2;
        const auto pc = build_product(base, fiber, Polynomial(f));
        const unsigned kt = fdeg(rng), k = bdeg(rng);
        const auto at = random_form(rng, fc, kt, 4), b = random_form(rng, bc, k, 3);
        const auto ab = wedge(pc.lift(at), pc.lift(b));
        const Rational fpow_norm = Rational(f).pow(2 * kt);
        ASSERT_EQ(norm_squared(pc.assembled, ab) * fpow_norm, norm_squared(fiber, at) * norm_squared(base, b));
        const unsigned pdim = 6;
        const int sign = (k * (pdim - kt)) % 2 ? -1 : 1;
        // f^{p − 2k̃} with p − 2k̃ possibly negative
        const int e = static_cast<int>(pdim) - 2 * static_cast<int>(kt);
        const Rational scale = e >= 0 ? Rational(f).pow(static_cast<unsigned>(e))
                                      : Rational(1) / Rational(f).pow(static_cast<unsigned>(-e));
        const auto rhs = wedge(pc.lift(hodge_star(fiber, at)), pc.lift(hodge_star(base, b)));
        ASSERT_EQ(hodge_star(pc.assembled, ab), Polynomial(scale * Rational(sign)) * rhs);
    }
}
