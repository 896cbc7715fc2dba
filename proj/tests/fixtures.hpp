#pragma once

#include "fluxcheck/sugra.hpp"

namespace fluxcheck::testing {

inline Polynomial P(const char* s) { return Polynomial::parse(s); }

inline const ChartPtr& n_chart() {
    static const ChartPtr c = make_chart("N", {"x1", "x2", "x3", "x4"});
    return c;
}
inline const ChartPtr& m_chart() {
    static const ChartPtr c = make_chart("M", {"y1", "y2", "y3", "y4", "y5"});
    return c;
}
inline ChartMetric rho() { return diagonal_metric(n_chart(), std::vector<Rational>(4, Rational(-1))); }
inline ChartMetric euclid5() { return diagonal_metric(m_chart(), std::vector<Rational>(5, Rational(-1))); }
inline ChartMetric p_metric() {
    return diagonal_metric(make_chart("P", {"y1", "y2", "y3", "y4"}), std::vector<Rational>(4, Rational(-1)));
}

inline DifferentialForm nf(std::vector<std::string> c, const char* coeff = "1") {
    return DifferentialForm::basis(n_chart(), c, P(coeff));
}
inline DifferentialForm mf(std::vector<std::string> c, const char* coeff = "1") {
    return DifferentialForm::basis(m_chart(), c, P(coeff));
}

inline const char* kH1 = "1/8*x1^2 + 1/8*x2^2 + 1/8*x3^2 + 1/8*x4^2";
inline const char* kH4 = "1/4*x1^2 + 1/4*x2^2 + 1/4*x3^2 + 1/4*x4^2";

inline SolutionInstance sol1() { return build_sol1(rho(), nf({"x2", "x3", "x4"}), P(kH1), euclid5()); }
inline SolutionInstance sol2() { return build_sol2(rho(), nf({"x1", "x2"}) + nf({"x3", "x4"}), P(kH4), p_metric()); }
inline SolutionInstance sol3(const char* H = kH4) {
    const ChartMetric pm = p_metric();
    const ChartPtr pc = pm.chart();
    return build_sol3(rho(), P(H), pm,
                      DifferentialForm::basis(pc, {"y1", "y2"}) + DifferentialForm::basis(pc, {"y3", "y4"}));
}
inline SolutionInstance sol4_literal() {
    return build_sol4(rho(), nf({"x2", "x3", "x4"}, "x2"), P("1/12*x1^4 + 1/12*x2^4"), euclid5(), mf({"y1"}, "y1"));
}
inline SolutionInstance sol4_corrected() {
    return build_sol4(rho(), nf({"x2", "x3", "x4"}), P("1/2*x1^2 + 1/2*x2^2"), euclid5(), mf({"y1"}),
                      nf({"x3", "x4"}));
}

/// Flat Walker fiber and flat base, f = 1.
inline ProductChart flat_product(const char* H = "0") {
    return build_product(euclid5(), walker_metric(rho(), P(H)), Polynomial(1));
}
inline DifferentialForm wf(const ProductChart& pc, std::vector<std::string> c, const char* coeff = "1") {
    return DifferentialForm::basis(pc.fiber.chart(), c, P(coeff));
}

inline bool all_zero(const PolyMatrix& m) {
    for (const auto& row : m)
        for (const auto& e : row)
            if (!e.is_zero()) return false;
    return true;
}

inline Polynomial entry(const Condition& c, std::string_view label) {
    for (const auto& [l, v] : c.entries)
        if (l == label) return v;
    return {};
}

struct CaseFixture {
    int which;
    FluxAnsatz good;
    FluxAnsatz bad;
};

inline std::vector<CaseFixture> case_fixtures(const ProductChart& pc) {
    std::vector<CaseFixture> out;
    auto W = [&](std::vector<std::string> c, const char* k = "1") { return wf(pc, std::move(c), k); };
    const DifferentialForm omega = W({"x1", "x2"}) + W({"x3", "x4"});
    {
        CaseFixture f{1};
        f.good.alpha_t = W({"u", "x2", "x3", "x4"});
        f.bad.alpha_t = W({"u", "x2", "x3", "x4"}, "x1");
        out.push_back(f);
    }
    {
        CaseFixture f{2};
        f.good.beta_t = wedge(W({"u"}), omega);
        f.good.nu = mf({"y5"});
        f.bad.beta_t = f.good.beta_t;
        f.bad.nu = mf({"y1"}, "y2");
        out.push_back(f);
    }
    {
        CaseFixture f{3};
        f.good.gamma_t = W({"u", "x1"});
        f.good.delta = mf({"y1", "y2"});
        f.bad.gamma_t = f.good.gamma_t;
        f.bad.delta = mf({"y1", "y2"}, "y3");
        out.push_back(f);
    }
    {
        CaseFixture f{4};
        f.good.varpi_t = W({"u"});
        f.good.epsilon = mf({"y1", "y2", "y5"}) + mf({"y3", "y4", "y5"});
        f.bad.varpi_t = W({"u"});
        f.bad.epsilon = mf({"y2", "y3", "y4"}, "y1");
        out.push_back(f);
    }
    {
        CaseFixture f{5};
        f.good.theta = mf({"y1", "y2", "y3", "y4"});
        f.bad.theta = mf({"y1", "y2", "y3", "y4"}, "y5");
        out.push_back(f);
    }
    {
        // Mixed case with d⋆ν = c vol, c ≠ 0, on a flat fiber.
        CaseFixture f{6};
        const DifferentialForm Om = W({"x2", "x3", "x4"}, "x2");
        const DifferentialForm alpha = wedge(W({"u"}), Om);
        const DifferentialForm nu = mf({"y1"}, "y1");
        const Rational c = -1;
        // ⋆̃β̃ = −(1/c) d⋆̃α̃ with β̃ = du∧ω solved on the flat Walker fiber.
        const DifferentialForm rhs = Polynomial(-Rational(1) / c) * exterior_derivative(hodge_star(pc.fiber, alpha));
        // ⋆̃⋆̃ = det_sign·(−1)^{3·3} = +1 on 3-forms of a (1,5) fiber.
        const DifferentialForm beta = hodge_star(pc.fiber, rhs);
        f.good.alpha_t = alpha;
        f.good.beta_t = beta;
        f.good.nu = nu;
        f.bad.alpha_t = alpha;
        f.bad.beta_t = -beta;
        f.bad.nu = nu;
        out.push_back(f);
    }
    {
        // d⋆̃ϖ̃ = c vol_M̃ and ⋆ε = (1/c) d⋆θ.
        CaseFixture f{7};
        const DifferentialForm varpi = W({"x1"}, "x1");
        const DifferentialForm dsv = exterior_derivative(hodge_star(pc.fiber, varpi));
        // sqrt|det g̃| = 1 on the flat Walker fiber.
        const Rational c = *dsv.components().begin()->second.constant_value();
        const DifferentialForm theta = hodge_star(pc.base, mf({"y5"}, "y4"));
        const DifferentialForm dst = exterior_derivative(hodge_star(pc.base, theta));
        // ⋆⋆ = −1 on 2-forms of the base.
        const DifferentialForm eps = Polynomial(-Rational(1) / c) * hodge_star(pc.base, dst);
        f.good.varpi_t = varpi;
        f.good.epsilon = eps;
        f.good.theta = theta;
        f.bad.varpi_t = varpi;
        f.bad.epsilon = Polynomial(2) * eps;
        f.bad.theta = theta;
        out.push_back(f);
    }
    {
        CaseFixture f{8};
        f.good.alpha_t = W({"u", "x2", "x3", "x4"});
        f.good.theta = mf({"y1", "y2", "y3", "y4"});
        f.bad = f.good;
        f.bad.theta = mf({"y1", "y2", "y3", "y4"}, "y5");
        out.push_back(f);
    }
    {
        CaseFixture f{9};
        f.good.beta_t = wedge(W({"u"}), omega);
        f.good.nu = mf({"y5"});
        f.good.varpi_t = W({"u"});
        f.good.epsilon = mf({"y1", "y2", "y3"});
        f.bad = f.good;
        f.bad.varpi_t = W({"x1"});
        out.push_back(f);
    }
    return out;
}

}  // namespace fluxcheck::testing
