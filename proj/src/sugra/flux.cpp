#include "internal.hpp"

#include "fluxcheck/errors.hpp"

#include <algorithm>

namespace fluxcheck {
namespace detail {

DifferentialForm zero_form(const ChartPtr& chart, unsigned degree) { return DifferentialForm(chart, degree); }

DifferentialForm up(const Parts& p, const std::optional<DifferentialForm>& a, unsigned degree) {
    if (!a) return zero_form(p.pc->chart(), degree);
    return p.pc->lift(*a);
}

DifferentialForm wedge_all(std::initializer_list<DifferentialForm> forms) {
    auto it = forms.begin();
    DifferentialForm out = *it++;
    for (; it != forms.end(); ++it) out = wedge(out, *it);
    return out;
}

Polynomial norm_or_zero(const ChartMetric& m, const std::optional<DifferentialForm>& a) {
    return a ? norm_squared(m, *a) : Polynomial();
}

PolyMatrix contraction_gram(const ChartMetric& m, const std::optional<DifferentialForm>& x) {
    const std::size_t n = m.dimension();
    PolyMatrix out(n, std::vector<Polynomial>(n));
    if (!x || x->degree() == 0) return out;
    std::vector<DifferentialForm> contracted;
    std::vector<std::map<IndexMask, Polynomial>> raised;
    for (std::size_t a = 0; a < n; ++a) {
        contracted.push_back(interior_product(VectorField::coordinate(m.chart(), m.chart()->coordinates()[a]), *x));
        raised.push_back(raise_indices(m, contracted.back()));
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            Polynomial s;
            for (const auto& [mask, c] : contracted[b].components()) {
                auto it = raised[a].find(mask);
                if (it != raised[a].end()) s += c * it->second;
            }
            out[a][b] = s;
            out[b][a] = s;
        }
    }
    return out;
}

std::string component_label(const ChartPtr& chart, IndexMask mask) {
    if (mask == 0) return "1";
    std::string out;
    for (std::size_t i : mask_indices(mask)) {
        if (!out.empty()) out += "^";
        out += "d" + chart->coordinates()[i];
    }
    return out;
}

std::optional<Rational> volume_multiple(const ChartMetric& m, const DifferentialForm& top) {
    if (top.degree() != m.dimension()) return std::nullopt;
    if (top.is_zero()) return Rational(0);
    auto q = divide_exact(top.components().begin()->second, m.sqrt_abs_det());
    if (!q) return std::nullopt;
    return q->constant_value();
}

Parts parts_of(const Background& bg) {
    Parts p;
    p.pc = &bg.product;
    p.f = *bg.product.constant_warping();
    const FluxAnsatz& a = bg.ansatz;
    auto active = [](const std::optional<DifferentialForm>& x) { return x && !x->is_zero(); };
    if (active(a.alpha_t)) p.alpha = a.alpha_t;
    if (active(a.theta)) p.theta = a.theta;
    if (active(a.beta_t) && active(a.nu)) { p.beta = a.beta_t; p.nu = a.nu; }
    if (active(a.gamma_t) && active(a.delta)) { p.gamma = a.gamma_t; p.delta = a.delta; }
    if (active(a.varpi_t) && active(a.epsilon)) { p.varpi = a.varpi_t; p.epsilon = a.epsilon; }
    return p;
}

}  // namespace detail

using namespace detail;

namespace {

void check_piece(const std::optional<DifferentialForm>& x, const ChartMetric& factor, unsigned degree,
                 const char* name) {
    if (!x) return;
    if (!same_chart(x->chart(), factor.chart()))
        throw ChartMismatch(std::string(name) + " must live on chart " + factor.chart()->name());
    if (x->degree() != degree)
        throw DegreeError(std::string(name) + " must have degree " + std::to_string(degree));
}

void check_pair(const std::optional<DifferentialForm>& a, const std::optional<DifferentialForm>& b,
                const char* name) {
    if (a.has_value() != b.has_value()) throw ShapeMismatch(std::string("unpaired component in ") + name);
}

Rational inverse_power(const Rational& f, unsigned e) { return Rational(1) / f.pow(e); }

}  // namespace

Background assemble_flux(const ProductChart& pc, FluxAnsatz a, std::string name) {
    if (pc.base_dimension() != 5 || pc.fiber_dimension() != 6)
        throw ShapeMismatch("the flux ansatz needs a 5-dimensional base and a 6-dimensional fiber");
    if (!pc.constant_warping()) throw NonPolynomialInverse("warping function must be constant");
    check_piece(a.alpha_t, pc.fiber, 4, "alpha~");
    check_piece(a.beta_t, pc.fiber, 3, "beta~");
    check_piece(a.gamma_t, pc.fiber, 2, "gamma~");
    check_piece(a.varpi_t, pc.fiber, 1, "varpi~");
    check_piece(a.nu, pc.base, 1, "nu");
    check_piece(a.delta, pc.base, 2, "delta");
    check_piece(a.epsilon, pc.base, 3, "epsilon");
    check_piece(a.theta, pc.base, 4, "theta");
    check_pair(a.beta_t, a.nu, "beta~ ^ nu");
    check_pair(a.gamma_t, a.delta, "gamma~ ^ delta");
    check_pair(a.varpi_t, a.epsilon, "varpi~ ^ epsilon");
    if (!a.alpha_t && !a.beta_t && !a.gamma_t && !a.varpi_t && !a.theta)
        throw ShapeMismatch("empty flux ansatz");

    DifferentialForm F(pc.chart(), 4);
    if (a.alpha_t) F += pc.lift(*a.alpha_t);
    if (a.beta_t) F += wedge(pc.lift(*a.beta_t), pc.lift(*a.nu));
    if (a.gamma_t) F += wedge(pc.lift(*a.gamma_t), pc.lift(*a.delta));
    if (a.varpi_t) F += wedge(pc.lift(*a.varpi_t), pc.lift(*a.epsilon));
    if (a.theta) F += pc.lift(*a.theta);
    if (name.empty()) name = pc.chart()->name();
    return Background{std::move(name), pc, std::move(a), std::move(F)};
}

FluxNorm flux_norm_sq(const Background& bg) {
    const Parts p = parts_of(bg);
    const ChartMetric& g = bg.product.base;
    const ChartMetric& gt = bg.product.fiber;
    Polynomial blocks = inverse_power(p.f, 8) * norm_or_zero(gt, p.alpha);
    blocks += inverse_power(p.f, 6) * (norm_or_zero(gt, p.beta) * norm_or_zero(g, p.nu));
    blocks += inverse_power(p.f, 4) * (norm_or_zero(gt, p.gamma) * norm_or_zero(g, p.delta));
    blocks += inverse_power(p.f, 2) * (norm_or_zero(gt, p.varpi) * norm_or_zero(g, p.epsilon));
    blocks += norm_or_zero(g, p.theta);
    return {norm_squared(bg.h(), bg.flux), blocks};
}

DifferentialForm star_flux_blocks(const Background& bg) {
    const Parts p = parts_of(bg);
    const ProductChart& pc = bg.product;
    const ChartPtr& X = pc.chart();
    auto st = [&](const std::optional<DifferentialForm>& x, const ChartMetric& m) {
        return pc.lift(hodge_star(m, *x));
    };
    DifferentialForm out(X, 7);
    if (p.alpha) out += inverse_power(p.f, 2) * wedge(st(p.alpha, pc.fiber), pc.lift(volume_form(pc.base)));
    if (p.beta) out -= wedge(st(p.beta, pc.fiber), st(p.nu, pc.base));
    if (p.gamma) out += p.f.pow(2) * wedge(st(p.gamma, pc.fiber), st(p.delta, pc.base));
    if (p.varpi) out -= p.f.pow(4) * wedge(st(p.varpi, pc.fiber), st(p.epsilon, pc.base));
    if (p.theta) out += p.f.pow(6) * wedge(st(p.theta, pc.base), pc.lift(volume_form(pc.fiber)));
    return out;
}

DifferentialForm half_flux_square_blocks(const Background& bg) {
    const Parts p = parts_of(bg);
    const ChartPtr& X = bg.product.chart();
    const DifferentialForm al = up(p, p.alpha, 4), be = up(p, p.beta, 3), ga = up(p, p.gamma, 2),
                           va = up(p, p.varpi, 1), nu = up(p, p.nu, 1), de = up(p, p.delta, 2),
                           ep = up(p, p.epsilon, 3), th = up(p, p.theta, 4);
    DifferentialForm out(X, 8);
    out += wedge_all({al, ga, de});
    out += wedge_all({al, va, ep});
    out += wedge_all({be, ga, de, nu});
    out += wedge(al, th);
    out += wedge_all({be, va, ep, nu});
    out += Polynomial(Rational(1, 2)) * wedge_all({ga, ga, de, de});
    out += wedge_all({be, th, nu});
    out += wedge_all({ga, va, ep, de});
    return out;
}

DifferentialForm maxwell_residual(const Background& bg) {
    DifferentialForm r = exterior_derivative(hodge_star(bg.h(), bg.flux));
    r -= Polynomial(Rational(1, 2)) * wedge(bg.flux, bg.flux);
    return r;
}

Section check_flux_norm(const Background& bg) {
    Section s{"flux_norm"};
    const FluxNorm n = flux_norm_sq(bg);
    Condition value = scalar_condition("|F|^2", n.direct);
    value.informational = true;
    s.conditions.push_back(std::move(value));
    s.conditions.push_back(scalar_condition("direct - blocks", n.direct - n.blocks));
    return s;
}

Section check_closedness(const Background& bg) {
    const Parts p = parts_of(bg);
    const ProductChart& pc = bg.product;
    Section s{"closedness"};
    const DifferentialForm dF = exterior_derivative(bg.flux);
    s.conditions.push_back(form_condition("dF", dF));

    auto d = [&](const std::optional<DifferentialForm>& x, unsigned deg) {
        return x ? pc.lift(exterior_derivative(*x)) : zero_form(pc.chart(), deg + 1);
    };
    std::vector<Condition> system;
    system.push_back(form_condition("d alpha~", d(p.alpha, 4)));
    system.push_back(form_condition("d theta", d(p.theta, 4)));
    system.push_back(form_condition("d beta~", d(p.beta, 3)));
    system.push_back(form_condition("d epsilon", d(p.epsilon, 3)));
    system.push_back(form_condition("d gamma~ ^ delta - beta~ ^ d nu",
                                    wedge(d(p.gamma, 2), up(p, p.delta, 2)) -
                                        wedge(up(p, p.beta, 3), d(p.nu, 1))));
    system.push_back(form_condition("gamma~ ^ d delta + d varpi~ ^ epsilon",
                                    wedge(up(p, p.gamma, 2), d(p.delta, 2)) +
                                        wedge(d(p.varpi, 1), up(p, p.epsilon, 3))));
    const bool system_zero = std::all_of(system.begin(), system.end(), [](const Condition& c) { return c.zero(); });
    for (auto& c : system) s.conditions.push_back(std::move(c));
    s.conditions.push_back(assertion("component system <=> dF = 0", system_zero == dF.is_zero()));
    return s;
}

namespace {

/// The four typed Maxwell equations, left side minus right side, for constant f.
std::vector<std::pair<std::string, DifferentialForm>> typed_maxwell(const Parts& p) {
    const ProductChart& pc = *p.pc;
    const ChartPtr& X = pc.chart();
    auto st = [&](const std::optional<DifferentialForm>& x, const ChartMetric& m, unsigned deg) {
        return x ? pc.lift(hodge_star(m, *x)) : zero_form(X, m.dimension() - deg);
    };
    auto dst = [&](const std::optional<DifferentialForm>& x, const ChartMetric& m, unsigned deg) {
        return x ? pc.lift(exterior_derivative(hodge_star(m, *x))) : zero_form(X, m.dimension() - deg + 1);
    };
    const DifferentialForm al = up(p, p.alpha, 4), be = up(p, p.beta, 3), ga = up(p, p.gamma, 2),
                           va = up(p, p.varpi, 1), nu = up(p, p.nu, 1), de = up(p, p.delta, 2),
                           ep = up(p, p.epsilon, 3), th = up(p, p.theta, 4);
    const DifferentialForm volM = pc.lift(volume_form(pc.base));
    const DifferentialForm volMt = pc.lift(volume_form(pc.fiber));
    const Polynomial f2 = p.f.pow(2), f4 = p.f.pow(4), f6 = p.f.pow(6);
    const Polynomial finv2 = Rational(1) / p.f.pow(2);

    std::vector<std::pair<std::string, DifferentialForm>> eqs;
    eqs.emplace_back("Maxwell (3,5)", finv2 * wedge(dst(p.alpha, pc.fiber, 4), volM) +
                                          wedge(st(p.beta, pc.fiber, 3), dst(p.nu, pc.base, 1)) -
                                          wedge_all({be, th, nu}) - wedge_all({ga, va, ep, de}));
    eqs.emplace_back("Maxwell (4,4)", f2 * wedge(st(p.gamma, pc.fiber, 2), dst(p.delta, pc.base, 2)) -
                                          wedge(dst(p.beta, pc.fiber, 3), st(p.nu, pc.base, 1)) -
                                          wedge(al, th) - wedge_all({be, va, ep, nu}) -
                                          Polynomial(Rational(1, 2)) * wedge_all({ga, ga, de, de}));
    eqs.emplace_back("Maxwell (5,3)", f2 * wedge(dst(p.gamma, pc.fiber, 2), st(p.delta, pc.base, 2)) +
                                          f4 * wedge(st(p.varpi, pc.fiber, 1), dst(p.epsilon, pc.base, 3)) -
                                          wedge_all({al, va, ep}) - wedge_all({be, ga, de, nu}));
    eqs.emplace_back("Maxwell (6,2)", f6 * wedge(volMt, dst(p.theta, pc.base, 4)) -
                                          f4 * wedge(dst(p.varpi, pc.fiber, 1), st(p.epsilon, pc.base, 3)) -
                                          wedge_all({al, ga, de}));
    return eqs;
}

}  // namespace

std::vector<Condition> typed_maxwell_conditions(const Background& bg) {
    std::vector<Condition> out;
    for (auto& [name, form] : typed_maxwell(parts_of(bg))) out.push_back(form_condition(name, form));
    return out;
}

Section check_maxwell(const Background& bg) {
    const Parts p = parts_of(bg);
    const ProductChart& pc = bg.product;
    Section s{"maxwell"};
    const DifferentialForm star = hodge_star(bg.h(), bg.flux);
    const DifferentialForm residual =
        exterior_derivative(star) - Polynomial(Rational(1, 2)) * wedge(bg.flux, bg.flux);
    s.conditions.push_back(form_condition("d*F - 1/2 F^F", residual));
    s.conditions.push_back(form_condition("*F - block formula", star - star_flux_blocks(bg)));
    s.conditions.push_back(form_condition("1/2 F^F - eight-term expansion",
                                          Polynomial(Rational(1, 2)) * wedge(bg.flux, bg.flux) -
                                              half_flux_square_blocks(bg)));
    bool typed_ok = true;
    unsigned fiber_degree = 3;
    for (auto& [name, form] : typed_maxwell(p)) {
        typed_ok = typed_ok && form == restrict_type(residual, pc.fiber_mask(), fiber_degree);
        ++fiber_degree;
        s.conditions.push_back(form_condition(name, form));
    }
    s.conditions.push_back(assertion("typed system = d*F - 1/2 F^F by type", typed_ok));

    // Flux of the form du ∧ (...) for one fiber coordinate u.
    IndexMask common = pc.fiber_mask();
    for (const auto& [mask, c] : bg.flux.components()) common &= mask;
    if (common != 0 && !bg.flux.is_zero()) {
        s.conditions.push_back(form_condition("F^F (aligned flux)", wedge(bg.flux, bg.flux)));
        s.notes.push_back("every flux component contains " + component_label(pc.chart(), common));
    }
    return s;
}

}  // namespace fluxcheck
