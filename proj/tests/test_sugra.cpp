#include "fluxcheck/errors.hpp"
#include "fluxcheck/sugra.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

#include <gtest/gtest.h>

using namespace fluxcheck;
using fluxcheck::testing::random_form;
using fluxcheck::testing::random_metric;
using namespace fluxcheck::testing;

TEST(Walker, Builder) {
    const auto W = walker_metric(rho(), P("x1^2 + u*x2"));
    EXPECT_EQ(W.chart()->coordinates(), (std::vector<std::string>{"v", "x1", "x2", "x3", "x4", "u"}));
    EXPECT_EQ(W.signature(), (Signature{1, 5}));
    EXPECT_EQ(W.g(5, 5), P("x1^2 + u*x2"));
    EXPECT_EQ(W.g_inv(0, 0), P("-x1^2 - u*x2"));
    EXPECT_THROW(walker_metric(rho(), P("v")), ShapeMismatch);
    EXPECT_THROW(walker_metric(rho(), P("y1")), ShapeMismatch);
}

TEST(Assemble, Shapes) {
    const auto s1 = sol1();
    const ChartPtr& X = s1.background.product.chart();
    EXPECT_EQ(s1.background.flux, DifferentialForm::basis(X, {"u", "x2", "x3", "x4"}));
    const auto s2 = sol2();
    const ChartPtr& X2 = s2.background.product.chart();
    EXPECT_EQ(s2.background.flux,
              DifferentialForm::basis(X2, {"u", "x1", "x2", "t"}) + DifferentialForm::basis(X2, {"u", "x3", "x4", "t"}));

    const auto pc = flat_product();
    EXPECT_THROW(assemble_flux(pc, FluxAnsatz{}), ShapeMismatch);
    FluxAnsatz unpaired;
    unpaired.beta_t = wf(pc, {"u", "x1", "x2"});
    EXPECT_THROW(assemble_flux(pc, unpaired), ShapeMismatch);
    FluxAnsatz wrong_degree;
    wrong_degree.theta = mf({"y1", "y2"});
    EXPECT_THROW(assemble_flux(pc, wrong_degree), DegreeError);
    FluxAnsatz wrong_chart;
    wrong_chart.alpha_t = mf({"y1", "y2", "y3", "y4"});
    EXPECT_THROW(assemble_flux(pc, wrong_chart), ChartMismatch);
    const auto small = build_product(p_metric(), walker_metric(rho(), Polynomial(0)), Polynomial(1));
    FluxAnsatz a;
    a.alpha_t = wf(pc, {"u", "x1", "x2", "x3"});
    EXPECT_THROW(assemble_flux(small, a), ShapeMismatch);
}

TEST(FluxNorm, Examples) {
    const auto s1 = sol1();
    EXPECT_TRUE(flux_norm_sq(s1.background).direct.is_zero());
    EXPECT_TRUE(check_flux_norm(s1.background).passed());

    // θ = ⋆η, η = dy5: ‖⋆η‖² = det_sign·‖η‖² with det_sign = −1 and ‖dy5‖² = −1.
    const auto pc = flat_product();
    FluxAnsatz a;
    a.theta = hodge_star(pc.base, mf({"y5"}));
    const auto bg = assemble_flux(pc, a);
    const auto n = flux_norm_sq(bg);
    EXPECT_EQ(n.direct, Polynomial(pc.base.det_sign() * -1));
    EXPECT_EQ(n.direct, Polynomial(1));
    EXPECT_EQ(n.direct, n.blocks);
}

TEST(Closedness, Examples) {
    EXPECT_TRUE(check_closedness(sol1().background).passed());

    const auto pc = flat_product();
    FluxAnsatz a;
    a.theta = mf({"y1", "y2", "y3", "y4"}, "y5");
    const auto bg = assemble_flux(pc, a);
    const Section s = check_closedness(bg);
    EXPECT_FALSE(s.passed());
    const auto dF = exterior_derivative(bg.flux);
    EXPECT_FALSE(dF.is_zero());
    EXPECT_EQ(dF, restrict_type(dF, pc.fiber_mask(), 0));
    EXPECT_FALSE(s.find("d theta")->zero());
    EXPECT_TRUE(s.find("component system <=> dF = 0")->zero());

    FluxAnsatz zero;
    zero.alpha_t = DifferentialForm(pc.fiber.chart(), 4);
    const auto z = assemble_flux(pc, zero);
    EXPECT_TRUE(check_closedness(z).passed());
    EXPECT_TRUE(check_maxwell(z).passed());
    EXPECT_TRUE(check_einstein(z).passed());
}

TEST(Maxwell, Examples) {
    const Section s = check_maxwell(sol1().background);
    EXPECT_TRUE(s.passed());
    EXPECT_NE(s.find("F^F (aligned flux)"), nullptr);

    // Non co-closed θ on N breaks d⋆F = 0.
    const auto bad = build_sol1(rho(), nf({"x2", "x3", "x4"}, "x2"), P(kH1), euclid5());
    const Section b = check_maxwell(bad.background);
    EXPECT_FALSE(b.passed());
    EXPECT_FALSE(b.find("d*F - 1/2 F^F")->zero());
    EXPECT_TRUE(b.find("*F - block formula")->zero());
    EXPECT_TRUE(b.find("typed system = d*F - 1/2 F^F by type")->zero());
}

TEST(Einstein, Families) {
    for (const auto& s : {sol1(), sol2(), sol3(), sol4_corrected()}) {
        EXPECT_TRUE(s.condition_residual().is_zero()) << s.background.name;
        EXPECT_TRUE(all_zero(einstein_residual(s.background))) << s.background.name;
        EXPECT_TRUE(check_closedness(s.background).passed()) << s.background.name;
        EXPECT_TRUE(check_maxwell(s.background).passed()) << s.background.name;
        EXPECT_TRUE(split_einstein(s.background).passed()) << s.background.name;
    }
    const auto pc = build_product(euclid5(), walker_metric(rho(), Polynomial(0)), Polynomial(1));
    FluxAnsatz a;
    a.alpha_t = DifferentialForm(pc.fiber.chart(), 4);
    EXPECT_TRUE(all_zero(einstein_residual(assemble_flux(pc, a))));
}

TEST(Einstein, WrongPotentialLeavesUU) {
    // sol1 with H = ¼Σx²: ΔH = −2 while ‖θ‖² = −1. Ric_uu = −½ΔH = 1 and
    // ½⟨i_u F, i_u F⟩ = ½‖θ‖² = −½, so the uu entry is ½.
    const auto s = build_sol1(rho(), nf({"x2", "x3", "x4"}), P(kH4), euclid5());
    const auto& X = s.background.product.chart();
    const auto r = einstein_residual(s.background);
    const std::size_t u = *X->index_of("u");
    EXPECT_EQ(r[u][u], Polynomial(Rational(1, 2)));
    EXPECT_EQ(s.condition_residual(), Polynomial(-1));
}

TEST(Sol4, LiteralInstance) {
    const auto s = sol4_literal();
    // ΔH = −(∂₁² + ∂₂²)H for ρ = −I; required = ‖Ω‖² + ‖ν‖²‖ω‖² = −x2² − y1²·1.
    EXPECT_EQ(s.laplacian, P("-x1^2 - x2^2"));
    EXPECT_EQ(s.required, P("-x2^2 - y1^2"));
    EXPECT_EQ(s.condition_residual(), P("y1^2 - x1^2"));
    EXPECT_TRUE(check_closedness(s.background).passed());
    EXPECT_TRUE(check_maxwell(s.background).passed());
    const auto& X = s.background.product.chart();
    const auto r = einstein_residual(s.background);
    const std::size_t u = *X->index_of("u");
    // −½ΔH + ½·required
    EXPECT_EQ(r[u][u], P("1/2*x1^2 - 1/2*y1^2"));
    std::size_t nonzero = 0;
    for (const auto& row : r)
        for (const auto& e : row) nonzero += !e.is_zero();
    EXPECT_EQ(nonzero, 1u);

    // Engine signs: ⋆d⋆Ω⁺ = −dx3∧dx4 and d⋆(y1 dy1) = −vol.
    const DifferentialForm w = hodge_star(rho(), exterior_derivative(hodge_star(rho(), nf({"x2", "x3", "x4"}, "x2"))));
    EXPECT_EQ(w, -nf({"x3", "x4"}));
    EXPECT_EQ(exterior_derivative(hodge_star(euclid5(), mf({"y1"}, "y1"))), -volume_form(euclid5()));
    EXPECT_EQ(hodge_star(rho(), nf({"x2", "x3", "x4"}, "x2")), nf({"x1"}, "x2"));
    EXPECT_EQ(*s.background.ansatz.beta_t, DifferentialForm::basis(s.background.product.fiber.chart(), {"u", "x3", "x4"}, P("-1")));

    const Section c6 = check_special_case(s.background, 6);
    EXPECT_TRUE(c6.passed());
    // With c pinned to 1 the vol_M condition fails by exactly 2 vol_M.
    Background pinned = s.background;
    pinned.ansatz.c = Rational(1);
    const Section p6 = check_special_case(pinned, 6);
    EXPECT_FALSE(p6.passed());
    const Condition* dv = p6.find("d*nu - (c/f^2) vol_M");
    ASSERT_EQ(dv->entries.size(), 1u);
    EXPECT_EQ(dv->entries[0].second, Polynomial(-2));
}

TEST(Sol4, CorrectedInstance) {
    const auto s = sol4_corrected();
    EXPECT_TRUE(check_special_case(s.background, 6).passed());
    EXPECT_TRUE(check_theorem_conditions(s.background, Theorem::MixedNull).passed());
    EXPECT_TRUE(all_zero(einstein_residual(s.background)));
}

TEST(SplitEinstein, HVTrivialForPureCases) {
    const auto pc = flat_product("x1^2 + x2*x3");
    std::mt19937_64 rng(7);
    const auto& Nt = pc.fiber.chart();
    const auto& N = pc.base.chart();
    for (int which = 1; which <= 5; ++which) {
        FluxAnsatz a;
        if (which == 1) a.alpha_t = random_form(rng, Nt, 4, 1);
        if (which == 2) { a.beta_t = random_form(rng, Nt, 3, 1); a.nu = random_form(rng, N, 1, 1); }
        if (which == 3) { a.gamma_t = random_form(rng, Nt, 2, 1); a.delta = random_form(rng, N, 2, 1); }
        if (which == 4) { a.varpi_t = random_form(rng, Nt, 1, 1); a.epsilon = random_form(rng, N, 3, 1); }
        if (which == 5) a.theta = random_form(rng, N, 4, 1);
        const Section s = split_einstein(assemble_flux(pc, a));
        EXPECT_TRUE(s.find("HV")->zero()) << which;
        EXPECT_TRUE(s.find("HV = direct block")->zero()) << which;
        EXPECT_TRUE(s.find("HH = direct block")->zero()) << which;
        EXPECT_TRUE(s.find("VV = direct block")->zero()) << which;
    }
}

TEST(SpecialCases, SatisfyingAndViolating) {
    const auto pc = flat_product();
    for (const auto& f : case_fixtures(pc)) {
        const Background good = assemble_flux(pc, f.good);
        const Background bad = assemble_flux(pc, f.bad);
        const Section sg = check_special_case(good, f.which);
        const Section sb = check_special_case(bad, f.which);
        const bool good_direct = exterior_derivative(good.flux).is_zero() && maxwell_residual(good).is_zero();
        const bool bad_direct = exterior_derivative(bad.flux).is_zero() && maxwell_residual(bad).is_zero();
        if (f.which == 8) {
            // Both factors nonzero: α̃∧θ never vanishes.
            EXPECT_FALSE(sg.passed());
            EXPECT_FALSE(sg.find("alpha~ ^ theta")->zero());
            EXPECT_FALSE(good_direct);
        } else {
            EXPECT_TRUE(sg.passed()) << f.which;
            EXPECT_TRUE(good_direct) << f.which;
        }
        EXPECT_FALSE(sb.passed()) << f.which;
        EXPECT_FALSE(bad_direct) << f.which;
        EXPECT_TRUE(sg.find("case conditions <=> closedness and Maxwell")->zero()) << f.which;
        EXPECT_TRUE(sb.find("case conditions <=> closedness and Maxwell")->zero()) << f.which;
        EXPECT_TRUE(check_special_case(good, 0).find("case conditions <=> closedness and Maxwell")->zero());
    }
}

TEST(SpecialCases, Case3NeedsClosedDelta) {
    const auto pc = flat_product();
    FluxAnsatz a;
    a.gamma_t = wf(pc, {"u", "x1"});
    a.delta = mf({"y1", "y2"}, "y3");
    const Background bg = assemble_flux(pc, a);
    const Section s = check_special_case(bg, 3);
    EXPECT_TRUE(s.find("d gamma~")->zero());
    EXPECT_TRUE(s.find("d *~gamma~")->zero());
    EXPECT_TRUE(s.find("*~gamma~ ^ d(f^2 * delta) - 1/2 gamma~^gamma~^delta^delta")->zero());
    EXPECT_FALSE(s.find("d delta")->zero());
    EXPECT_FALSE(exterior_derivative(bg.flux).is_zero());
    EXPECT_TRUE(maxwell_residual(bg).is_zero());
}

TEST(SpecialCases, Case9ReductionClaim) {
    const auto pc = flat_product();
    const auto fx = case_fixtures(pc);
    const Background bg = assemble_flux(pc, fx[8].good);
    const Section s = check_special_case(bg, 9);
    EXPECT_TRUE(s.passed());
    EXPECT_FALSE(s.find("reduction nu = 0")->zero());
    EXPECT_FALSE(s.notes.empty());
}

TEST(SpecialCases, ShapeMismatch) {
    EXPECT_THROW(check_special_case(sol1().background, 2), ShapeMismatch);
    EXPECT_THROW(check_special_case(sol1().background, 10), ShapeMismatch);
    EXPECT_TRUE(check_special_case(sol1().background, 1).passed());
}

TEST(Theorems, Families) {
    EXPECT_TRUE(check_theorem_conditions(sol1().background, Theorem::NullFourForm).passed());
    EXPECT_TRUE(check_theorem_conditions(sol2().background, Theorem::NullThreeForm).passed());
    const auto s3 = sol3();
    EXPECT_TRUE(check_theorem_conditions(s3.background, Theorem::NullOneForm).passed());
    EXPECT_TRUE(is_totally_ricci_isotropic(s3.background.h()));
    EXPECT_TRUE(check_ricci_isotropic(s3.background).passed());
    EXPECT_THROW(check_theorem_conditions(sol1().background, Theorem::NullThreeForm), ShapeMismatch);
}

TEST(Theorems, NullOneFormNeedsLaplacianMinusTwo) {
    const auto wrong = sol3("1/2*x1^2 + 1/2*x2^2 + 1/2*x3^2 + 1/2*x4^2");
    const Section s = check_theorem_conditions(wrong.background, Theorem::NullOneForm);
    EXPECT_FALSE(s.passed());
    // Ric~_uu = −½ΔH = 2 against ϖ̃_u ϖ̃_u = 1.
    EXPECT_EQ(entry(*s.find("Ric~ - varpi~ (x) varpi~"), "(u,u)"), Polynomial(1));
    EXPECT_TRUE(s.find("hypotheses => field equations")->zero());

    // Wrong-norm ε: ε = 2ω∧dt gives ‖ε‖² = −8.
    Background scaled = sol3().background;
    scaled.ansatz.epsilon = Polynomial(2) * *scaled.ansatz.epsilon;
    scaled = assemble_flux(scaled.product, scaled.ansatz);
    const Section t = check_theorem_conditions(scaled, Theorem::NullOneForm);
    EXPECT_EQ(entry(*t.find("|epsilon|^2 + 2"), "value"), Polynomial(-6));
    EXPECT_FALSE(all_zero(einstein_residual(scaled)));
}

TEST(Theorems, NonNullAlphaViolates) {
    const auto pc = flat_product();
    FluxAnsatz a;
    a.alpha_t = wf(pc, {"x1", "x2", "x3", "x4"});
    const Section s = check_theorem_conditions(assemble_flux(pc, a), Theorem::NullFourForm);
    EXPECT_FALSE(s.passed());
    EXPECT_EQ(entry(*s.find("|alpha~|^2"), "value"), Polynomial(1));
}

TEST(Contact, NonexistenceExample) {
    const auto B = make_chart("B", {"y1", "y2", "y3", "y4", "t"});
    const auto g = diagonal_metric(B, std::vector<Rational>(5, Rational(-1)));
    const auto fiber = walker_metric(rho(), Polynomial(0));
    const auto eta = DifferentialForm::differential(B, "t");
    const Section s = check_case5_contact(g, eta, fiber);
    EXPECT_FALSE(s.passed());
    for (const char* n : {"d theta", "d * theta", "d eta", "d * eta"}) EXPECT_TRUE(s.find(n)->zero()) << n;
    // Variant identity: Ric(e5,e5) must be −⅓·g_tt·‖η‖² + ½η_t² = −⅓ + ½ = 1/6, while Ric = 0.
    const Polynomial variant = entry(*s.find("Ric^g + 1/3 g |eta|^2 - 1/2 eta (x) eta"), "(t,t)");
    EXPECT_EQ(Polynomial(0) - variant, Polynomial(Rational(1, 6)));
    // Direct 11-dimensional residual at (t,t): 0 + 0 − (1/6)(−1)(1).
    EXPECT_EQ(entry(*s.find("full Einstein residual"), "(t,t)"), Polynomial(Rational(1, 6)));
    EXPECT_EQ(entry(*s.find("Ric^g - |theta|^2/6 g + 1/2 <i theta, i theta>"), "(t,t)"), Polynomial(Rational(1, 6)));
    EXPECT_TRUE(s.find("block identities <=> full 11-dimensional equations")->zero());

    PolyMatrix phi(5, std::vector<Polynomial>(5));
    phi[1][0] = Polynomial(1);
    phi[0][1] = Polynomial(-1);
    phi[3][2] = Polynomial(1);
    phi[2][3] = Polynomial(-1);
    const auto xi = VectorField::coordinate(B, "t");
    EXPECT_TRUE(check_contact_structure(g, xi, eta, phi).passed());

    const PolyMatrix zero(5, std::vector<Polynomial>(5));
    const Section z = check_contact_structure(g, xi, eta, zero);
    EXPECT_FALSE(z.find("phi^2 + Id - eta (x) xi")->zero());

    PolyMatrix bent = phi;
    bent[1][0] = P("1 + y3");
    const Section n = check_contact_structure(g, xi, eta, bent);
    EXPECT_FALSE(n.find("N_phi")->zero());
}

TEST(Contact, HarmonicDifferential) {
    const auto g = euclid5();
    const auto eta = exterior_derivative(DifferentialForm::scalar(m_chart(), P("y1*y2 + y3^2 - y4^2")));
    const Section s = check_case5_contact(g, eta, walker_metric(rho(), Polynomial(0)));
    for (const char* n : {"d theta", "d * theta", "d eta", "d * eta"}) EXPECT_TRUE(s.find(n)->zero()) << n;

    const Section z = check_case5_contact(g, DifferentialForm(m_chart(), 1), walker_metric(rho(), Polynomial(0)));
    EXPECT_TRUE(z.passed());
}

TEST(SugraProperty, BlockIdentities) {
    std::mt19937_64 rng(2024);
    const auto base_chart = make_chart("B", {"y1", "y2", "y3", "y4", "y5"});
    const auto fiber_chart = make_chart("F", {"z0", "z1", "z2", "z3", "z4", "z5"});
    int cases = 0;
    for (int i = 0; i < 100; ++i) {
        const auto g = random_metric(rng, base_chart, 5);
        const auto gt = random_metric(rng, fiber_chart, 5);
        const Polynomial f(i % 2 == 0 ? 1 : 2);
        const auto pc = build_product(g, gt, f);
        FluxAnsatz a;
        a.alpha_t = random_form(rng, fiber_chart, 4, 3);
        a.beta_t = random_form(rng, fiber_chart, 3, 3);
        a.gamma_t = random_form(rng, fiber_chart, 2, 3);
        a.varpi_t = random_form(rng, fiber_chart, 1, 2);
        a.nu = random_form(rng, base_chart, 1, 2);
        a.delta = random_form(rng, base_chart, 2, 3);
        a.epsilon = random_form(rng, base_chart, 3, 3);
        a.theta = random_form(rng, base_chart, 4, 2);
        const Background bg = assemble_flux(pc, a);
        const FluxNorm n = flux_norm_sq(bg);
        ASSERT_EQ(n.direct, n.blocks) << i;
        ASSERT_EQ(hodge_star(bg.h(), bg.flux), star_flux_blocks(bg)) << i;
        ASSERT_EQ(Polynomial(Rational(1, 2)) * wedge(bg.flux, bg.flux), half_flux_square_blocks(bg)) << i;
        ASSERT_TRUE(check_closedness(bg).find("component system <=> dF = 0")->zero()) << i;
        ASSERT_TRUE(check_maxwell(bg).find("typed system = d*F - 1/2 F^F by type")->zero()) << i;
        const Section split = split_einstein(bg);
        ASSERT_TRUE(split.find("HH = direct block")->zero()) << i;
        ASSERT_TRUE(split.find("VV = direct block")->zero()) << i;
        ASSERT_TRUE(split.find("HV = direct block")->zero()) << i;
        ++cases;
    }
    EXPECT_EQ(cases, 100);
}

TEST(SugraProperty, CaseEquivalenceOnPerturbations) {
    std::mt19937_64 rng(99);
    const auto pc = flat_product();
    const auto fixtures = case_fixtures(pc);
    int cases = 0;
    for (int i = 0; i < 100; ++i) {
        const auto& f = fixtures[i % fixtures.size()];
        FluxAnsatz a = f.good;
        // Perturb one present component by a random polynomial multiple.
        auto perturb = [&](std::optional<DifferentialForm>& x) {
            if (x && rng() % 2) *x = fluxcheck::testing::random_poly(rng, {"y1", "y2"}, 1, 1) * P("y1") * *x + *x;
        };
        if (f.which == 6 || f.which == 2 || f.which == 9) perturb(a.nu);
        if (f.which == 3 || f.which == 7 || f.which == 4) perturb(a.epsilon ? a.epsilon : a.delta);
        if (f.which == 5 || f.which == 8) perturb(a.theta);
        if (f.which == 1) {
            if (rng() % 2) *a.alpha_t = fluxcheck::testing::random_poly(rng, {"x1", "x3"}, 1, 1) * P("x3") * *a.alpha_t + *a.alpha_t;
        }
        const Background bg = assemble_flux(pc, a);
        const Section s = check_special_case(bg, f.which);
        ASSERT_TRUE(s.find("case conditions <=> closedness and Maxwell")->zero()) << f.which << " " << i;
        ++cases;
    }
    EXPECT_EQ(cases, 100);
}
