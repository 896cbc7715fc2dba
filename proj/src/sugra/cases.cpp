#include "internal.hpp"

#include "fluxcheck/errors.hpp"

#include <algorithm>

namespace fluxcheck {

using namespace detail;

namespace {

struct Shape {
    bool alpha, beta, gamma, varpi, theta;
};

constexpr Shape kShapes[10] = {
    {false, false, false, false, false},  // general, any shape
    {true, false, false, false, false},  {false, true, false, false, false}, {false, false, true, false, false},
    {false, false, false, true, false},  {false, false, false, false, true}, {true, true, false, false, false},
    {false, false, false, true, true},   {true, false, false, false, true}, {false, true, false, true, false},
};

DifferentialForm d_star(const ChartMetric& m, const DifferentialForm& x) {
    return exterior_derivative(hodge_star(m, x));
}

/// The constant used by cases 6 and 7: the ansatz value when set, otherwise
/// inferred from d⋆x = c·vol.
Rational mixed_constant(const Background& bg, const ChartMetric& m, const DifferentialForm& x, const Rational& scale,
                        Section& s) {
    if (bg.ansatz.c) return *bg.ansatz.c;
    if (auto c = infer_mixed_constant(m, x, scale)) {
        s.notes.push_back("c inferred as " + c->str());
        if (c->is_zero()) s.notes.push_back("degenerate constant c = 0 admitted");
        return *c;
    }
    s.notes.push_back("no constant c fits; residuals use c = 1");
    return Rational(1);
}

}  // namespace

Section check_special_case(const Background& bg, int which) {
    if (which < 0 || which > 9) throw ShapeMismatch("special case must be 1..9");
    const Parts p = parts_of(bg);
    const ProductChart& pc = bg.product;
    const ChartMetric& g = pc.base;
    const ChartMetric& gt = pc.fiber;
    const Rational f = p.f;
    if (which != 0) {
        const Shape& sh = kShapes[which];
        if (p.alpha.has_value() != sh.alpha || p.beta.has_value() != sh.beta || p.gamma.has_value() != sh.gamma ||
            p.varpi.has_value() != sh.varpi || p.theta.has_value() != sh.theta)
            throw ShapeMismatch("flux shape does not match case " + std::to_string(which));
    }
    Section s{which == 0 ? std::string("case_general") : "case" + std::to_string(which)};
    auto& c = s.conditions;
    auto d = [](const DifferentialForm& x) { return exterior_derivative(x); };
    auto lift = [&](const DifferentialForm& x) { return pc.lift(x); };

    switch (which) {
        case 0: {
            Section cl = check_closedness(bg);
            for (auto& cond : cl.conditions)
                if (cond.name != "dF" && cond.name.find("<=>") == std::string::npos) c.push_back(std::move(cond));
            for (auto& cond : typed_maxwell_conditions(bg)) c.push_back(std::move(cond));
            break;
        }
        case 1:
            c.push_back(form_condition("d alpha~", d(*p.alpha)));
            c.push_back(form_condition("d *~alpha~", d_star(gt, *p.alpha)));
            break;
        case 2:
            c.push_back(form_condition("d beta~", d(*p.beta)));
            c.push_back(form_condition("d *~beta~", d_star(gt, *p.beta)));
            c.push_back(form_condition("d nu", d(*p.nu)));
            c.push_back(form_condition("d * nu", d_star(g, *p.nu)));
            break;
        case 3: {
            c.push_back(form_condition("d gamma~", d(*p.gamma)));
            c.push_back(form_condition("d *~gamma~", d_star(gt, *p.gamma)));
            c.push_back(form_condition("d delta", d(*p.delta)));
            const DifferentialForm lhs =
                wedge(lift(hodge_star(gt, *p.gamma)), lift(Polynomial(f.pow(2)) * d_star(g, *p.delta)));
            const DifferentialForm gg = wedge(*p.gamma, *p.gamma);
            const DifferentialForm dd = wedge(*p.delta, *p.delta);
            c.push_back(form_condition("*~gamma~ ^ d(f^2 * delta) - 1/2 gamma~^gamma~^delta^delta",
                                       lhs - Polynomial(Rational(1, 2)) * wedge(lift(gg), lift(dd))));
            // Split form with a constant k, *~gamma~ = k gamma~^gamma~.
            const DifferentialForm sg = hodge_star(gt, *p.gamma);
            if (!gg.is_zero() && !sg.is_zero()) {
                const auto& [mask, coeff] = *gg.components().begin();
                auto q = divide_exact(sg.component(mask), coeff);
                if (q && q->constant_value() && !q->constant_value()->is_zero() &&
                    sg == Polynomial(*q->constant_value()) * gg) {
                    const Rational k = *q->constant_value();
                    Condition split = form_condition("d(f^2 * delta) - delta^delta/(2k)",
                                                     Polynomial(f.pow(2)) * d_star(g, *p.delta) -
                                                         Polynomial(Rational(1) / (Rational(2) * k)) * dd);
                    split.informational = true;
                    c.push_back(std::move(split));
                    s.notes.push_back("*~gamma~ = " + k.str() + " gamma~^gamma~");
                }
            }
            break;
        }
        case 4:
            c.push_back(form_condition("d varpi~", d(*p.varpi)));
            c.push_back(form_condition("d *~varpi~", d_star(gt, *p.varpi)));
            c.push_back(form_condition("d epsilon", d(*p.epsilon)));
            c.push_back(form_condition("d(f^4 * epsilon)", Polynomial(f.pow(4)) * d_star(g, *p.epsilon)));
            break;
        case 5:
            c.push_back(form_condition("d theta", d(*p.theta)));
            c.push_back(form_condition("d(f^6 * theta)", Polynomial(f.pow(6)) * d_star(g, *p.theta)));
            break;
        case 6: {
            c.push_back(form_condition("d alpha~", d(*p.alpha)));
            c.push_back(form_condition("d beta~", d(*p.beta)));
            c.push_back(form_condition("d nu", d(*p.nu)));
            c.push_back(form_condition("d *~beta~", d_star(gt, *p.beta)));
            const Rational k = mixed_constant(bg, g, *p.nu, f.pow(2), s);
            c.push_back(form_condition("d*nu - (c/f^2) vol_M",
                                       d_star(g, *p.nu) - Polynomial(k / f.pow(2)) * volume_form(g)));
            if (k.is_zero())
                c.push_back(form_condition("d *~alpha~", d_star(gt, *p.alpha)));
            else
                c.push_back(form_condition("*~beta~ + (1/c) d*~alpha~",
                                           hodge_star(gt, *p.beta) + Polynomial(Rational(1) / k) * d_star(gt, *p.alpha)));
            break;
        }
        case 7: {
            c.push_back(form_condition("d theta", d(*p.theta)));
            c.push_back(form_condition("d epsilon", d(*p.epsilon)));
            c.push_back(form_condition("d varpi~", d(*p.varpi)));
            c.push_back(form_condition("d(f^4 * epsilon)", Polynomial(f.pow(4)) * d_star(g, *p.epsilon)));
            const Rational k = mixed_constant(bg, gt, *p.varpi, Rational(1), s);
            c.push_back(form_condition("d*~varpi~ - c vol_M~", d_star(gt, *p.varpi) - Polynomial(k) * volume_form(gt)));
            const DifferentialForm dst = Polynomial(f.pow(6)) * d_star(g, *p.theta);
            if (k.is_zero())
                c.push_back(form_condition("d(f^6 * theta)", dst));
            else
                c.push_back(form_condition("*epsilon - d(f^6 * theta)/(c f^4)",
                                           hodge_star(g, *p.epsilon) -
                                               Polynomial(Rational(1) / (k * f.pow(4))) * dst));
            break;
        }
        case 8:
            c.push_back(form_condition("alpha~ ^ theta", wedge(lift(*p.alpha), lift(*p.theta))));
            c.push_back(form_condition("d alpha~", d(*p.alpha)));
            c.push_back(form_condition("d *~alpha~", d_star(gt, *p.alpha)));
            c.push_back(form_condition("d theta", d(*p.theta)));
            c.push_back(form_condition("d(f^6 * theta)", Polynomial(f.pow(6)) * d_star(g, *p.theta)));
            break;
        case 9: {
            Section cl = check_closedness(bg);
            for (auto& cond : cl.conditions)
                if (cond.name != "dF" && cond.name.find("<=>") == std::string::npos) c.push_back(std::move(cond));
            for (auto& cond : typed_maxwell_conditions(bg)) c.push_back(std::move(cond));
            Condition claim = form_condition("reduction nu = 0", *p.nu);
            claim.informational = true;
            const bool system_zero = s.passed();
            c.push_back(std::move(claim));
            if (system_zero) s.notes.push_back("system satisfied with nu != 0; the reduction to nu = 0 does not hold");
            break;
        }
    }

    const bool case_zero = s.passed();
    const bool direct_zero = exterior_derivative(bg.flux).is_zero() && maxwell_residual(bg).is_zero();
    Condition eq = assertion("case conditions <=> closedness and Maxwell", case_zero == direct_zero);
    // The equivalence holds at f = 1 for some constant c, not for a prescribed one.
    if (f != Rational(1) || (bg.ansatz.c && (which == 6 || which == 7))) eq.informational = true;
    c.push_back(std::move(eq));
    return s;
}

}  // namespace fluxcheck
