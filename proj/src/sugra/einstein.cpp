#include "internal.hpp"

#include "fluxcheck/errors.hpp"

namespace fluxcheck {

using namespace detail;

namespace {

PolyMatrix zeros(std::size_t r, std::size_t c) { return PolyMatrix(r, std::vector<Polynomial>(c)); }

PolyMatrix block(const PolyMatrix& m, std::size_t r0, std::size_t c0, std::size_t r, std::size_t c) {
    PolyMatrix out = zeros(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) out[i][j] = m[r0 + i][c0 + j];
    return out;
}

/// acc += s · m
void accumulate(PolyMatrix& acc, const Polynomial& s, const PolyMatrix& m) {
    if (s.is_zero()) return;
    for (std::size_t i = 0; i < acc.size(); ++i)
        for (std::size_t j = 0; j < acc[i].size(); ++j)
            if (!m[i][j].is_zero()) acc[i][j] += s * m[i][j];
}

Polynomial one_form_component(const std::optional<DifferentialForm>& x, std::size_t i) {
    return x ? x->component(IndexMask{1} << i) : Polynomial();
}

Polynomial pairing(const ChartMetric& m, const DifferentialForm& a, const DifferentialForm& b) {
    if (a.degree() != b.degree()) return {};
    return inner_product_forms(m, a, b);
}

DifferentialForm contract(const ChartMetric& m, std::size_t i, const DifferentialForm& x) {
    return interior_product(VectorField::coordinate(m.chart(), m.chart()->coordinates()[i]), x);
}

/// A named matrix as a labelled condition on a factor chart, plus an optional
/// second chart for rectangular blocks.
Condition rect_condition(std::string name, const PolyMatrix& m, const ChartPtr& rows, const ChartPtr& cols) {
    Condition c{std::move(name)};
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j)
            if (!m[i][j].is_zero())
                c.entries.emplace_back("(" + rows->coordinates()[i] + "," + cols->coordinates()[j] + ")", m[i][j]);
    return c;
}

}  // namespace

PolyMatrix einstein_residual(const Background& bg) {
    const ChartMetric& h = bg.h();
    const std::size_t n = h.dimension();
    const PolyMatrix gram = contraction_gram(h, bg.flux);
    const Polynomial norm = norm_squared(h, bg.flux);
    PolyMatrix out = curvature(h)->ricci;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            out[a][b] += Rational(1, 2) * gram[a][b] - Rational(1, 6) * (h.g(a, b) * norm);
    return out;
}

Section check_einstein(const Background& bg) {
    Section s{"einstein"};
    s.conditions.push_back(matrix_condition("Ric + 1/2 <iF,iF> - 1/6 h |F|^2", einstein_residual(bg), bg.product.chart()));
    return s;
}

Section split_einstein(const Background& bg) {
    Section s{"split_einstein"};
    const Parts p = parts_of(bg);
    const ProductChart& pc = bg.product;
    const ChartMetric& g = pc.base;
    const ChartMetric& gt = pc.fiber;
    const std::size_t k = g.dimension(), kt = gt.dimension();
    const Rational f = p.f;
    auto fi = [&](unsigned e) { return Polynomial(Rational(1) / f.pow(e)); };

    const PolyMatrix oracle = warped_ricci_oracle(pc);
    const Polynomial norm = flux_norm_sq(bg).blocks;

    PolyMatrix hh = block(oracle, 0, 0, k, k);
    {
        PolyMatrix gram = zeros(k, k);
        const Polynomial b2 = norm_or_zero(gt, p.beta);
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b)
                gram[a][b] = fi(6) * (b2 * one_form_component(p.nu, a) * one_form_component(p.nu, b));
        accumulate(gram, fi(4) * norm_or_zero(gt, p.gamma), contraction_gram(g, p.delta));
        accumulate(gram, fi(2) * norm_or_zero(gt, p.varpi), contraction_gram(g, p.epsilon));
        accumulate(gram, Polynomial(1), contraction_gram(g, p.theta));
        accumulate(hh, Polynomial(Rational(1, 2)), gram);
        accumulate(hh, Rational(-1, 6) * norm, g.g());
    }

    PolyMatrix vv = block(oracle, k, k, kt, kt);
    {
        PolyMatrix gram = contraction_gram(gt, p.alpha);
        for (auto& row : gram)
            for (auto& e : row) e *= Rational(1) / f.pow(6);
        accumulate(gram, fi(4) * norm_or_zero(g, p.nu), contraction_gram(gt, p.beta));
        accumulate(gram, fi(2) * norm_or_zero(g, p.delta), contraction_gram(gt, p.gamma));
        const Polynomial e2 = norm_or_zero(g, p.epsilon);
        for (std::size_t a = 0; a < kt; ++a)
            for (std::size_t b = 0; b < kt; ++b)
                gram[a][b] += e2 * one_form_component(p.varpi, a) * one_form_component(p.varpi, b);
        accumulate(vv, Polynomial(Rational(1, 2)), gram);
        accumulate(vv, Rational(-1, 6) * f.pow(2) * norm, gt.g());
    }

    PolyMatrix hv = zeros(k, kt);
    for (std::size_t b = 0; b < kt; ++b) {
        Polynomial s1, s2, s3;
        std::optional<Polynomial> w4;
        if (p.alpha && p.beta) s1 = pairing(gt, *p.beta, contract(gt, b, *p.alpha));
        if (p.beta && p.gamma) s2 = pairing(gt, *p.gamma, contract(gt, b, *p.beta));
        if (p.gamma && p.varpi) s3 = pairing(gt, *p.varpi, contract(gt, b, *p.gamma));
        for (std::size_t a = 0; a < k; ++a) {
            Polynomial v;
            if (!s1.is_zero()) v -= one_form_component(p.nu, a) * fi(6) * s1;
            if (!s2.is_zero()) v += fi(4) * s2 * pairing(g, contract(g, a, *p.delta), *p.nu);
            if (!s3.is_zero()) v -= fi(2) * s3 * pairing(g, contract(g, a, *p.epsilon), *p.delta);
            if (p.varpi && p.theta)
                v += one_form_component(p.varpi, b) * pairing(g, contract(g, a, *p.theta), *p.epsilon);
            hv[a][b] = Rational(1, 2) * v;
        }
    }

    const PolyMatrix direct = einstein_residual(bg);
    s.conditions.push_back(matrix_condition("HH", hh, g.chart()));
    s.conditions.push_back(matrix_condition("VV", vv, gt.chart()));
    s.conditions.push_back(rect_condition("HV", hv, g.chart(), gt.chart()));
    s.conditions.push_back(assertion("HH = direct block", hh == block(direct, 0, 0, k, k)));
    s.conditions.push_back(assertion("VV = direct block", vv == block(direct, k, k, kt, kt)));
    s.conditions.push_back(assertion("HV = direct block", hv == block(direct, 0, k, k, kt)));
    return s;
}

Section check_ricci_isotropic(const Background& bg) {
    Section s{"ricci_isotropic"};
    s.conditions.push_back(matrix_condition("Ric h^-1 Ric", ricci_square(bg.h()), bg.product.chart()));
    return s;
}

Theorem parse_theorem(std::string_view name) {
    if (name == "null_4form") return Theorem::NullFourForm;
    if (name == "null_3form") return Theorem::NullThreeForm;
    if (name == "null_1form") return Theorem::NullOneForm;
    if (name == "mixed_null") return Theorem::MixedNull;
    if (name == "constant_length") return Theorem::ConstantLength;
    throw ShapeMismatch("unknown theorem: " + std::string(name));
}

std::string_view theorem_name(Theorem t) {
    switch (t) {
        case Theorem::NullFourForm: return "null_4form";
        case Theorem::NullThreeForm: return "null_3form";
        case Theorem::NullOneForm: return "null_1form";
        case Theorem::MixedNull: return "mixed_null";
        case Theorem::ConstantLength: return "constant_length";
    }
    return "";
}

namespace {

void require_shape(const Parts& p, bool alpha, bool beta, bool gamma, bool varpi, bool theta, std::string_view what) {
    if (p.alpha.has_value() != alpha || p.beta.has_value() != beta || p.gamma.has_value() != gamma ||
        p.varpi.has_value() != varpi || p.theta.has_value() != theta)
        throw ShapeMismatch("flux shape does not match " + std::string(what));
}

DifferentialForm d_star(const ChartMetric& m, const DifferentialForm& x) {
    return exterior_derivative(hodge_star(m, x));
}

}  // namespace

std::optional<Rational> infer_mixed_constant(const ChartMetric& m, const DifferentialForm& x, Rational scale) {
    auto c = volume_multiple(m, d_star(m, x));
    if (!c) return std::nullopt;
    return scale * *c;
}

Section check_theorem_conditions(const Background& bg, Theorem t) {
    const Parts p = parts_of(bg);
    const ProductChart& pc = bg.product;
    const ChartMetric& g = pc.base;
    const ChartMetric& gt = pc.fiber;
    const ChartPtr& N = g.chart();
    const ChartPtr& Nt = gt.chart();
    Section s{"theorem:" + std::string(theorem_name(t))};
    if (p.f != Rational(1)) throw ShapeMismatch("theorem checks need f = 1");
    const PolyMatrix& ric = curvature(g)->ricci;
    const PolyMatrix& ric_t = curvature(gt)->ricci;
    auto& c = s.conditions;

    switch (t) {
        case Theorem::NullFourForm: {
            require_shape(p, true, false, false, false, false, "a null 4-form on the fiber");
            c.push_back(matrix_condition("Ric^g", ric, N));
            c.push_back(scalar_condition("|alpha~|^2", norm_squared(gt, *p.alpha)));
            c.push_back(form_condition("d alpha~", exterior_derivative(*p.alpha)));
            c.push_back(form_condition("d *~alpha~", d_star(gt, *p.alpha)));
            PolyMatrix r = ric_t;
            accumulate(r, Polynomial(Rational(1, 2)), contraction_gram(gt, p.alpha));
            c.push_back(matrix_condition("Ric~ + 1/2 <i alpha~, i alpha~>", r, Nt));
            break;
        }
        case Theorem::NullThreeForm: {
            require_shape(p, false, true, false, false, false, "a null 3-form times a base 1-form");
            c.push_back(matrix_condition("Ric^g", ric, N));
            c.push_back(scalar_condition("|nu|^2 + 1", norm_squared(g, *p.nu) + Polynomial(1)));
            c.push_back(scalar_condition("|beta~|^2", norm_squared(gt, *p.beta)));
            c.push_back(form_condition("d nu", exterior_derivative(*p.nu)));
            c.push_back(form_condition("d * nu", d_star(g, *p.nu)));
            c.push_back(form_condition("d beta~", exterior_derivative(*p.beta)));
            c.push_back(form_condition("d *~beta~", d_star(gt, *p.beta)));
            PolyMatrix r = ric_t;
            accumulate(r, Polynomial(Rational(-1, 2)), contraction_gram(gt, p.beta));
            c.push_back(matrix_condition("Ric~ - 1/2 <i beta~, i beta~>", r, Nt));
            break;
        }
        case Theorem::NullOneForm: {
            require_shape(p, false, false, false, true, false, "a null 1-form times a base 3-form");
            c.push_back(matrix_condition("Ric^g", ric, N));
            c.push_back(scalar_condition("|epsilon|^2 + 2", norm_squared(g, *p.epsilon) + Polynomial(2)));
            c.push_back(scalar_condition("|varpi~|^2", norm_squared(gt, *p.varpi)));
            c.push_back(form_condition("d varpi~", exterior_derivative(*p.varpi)));
            c.push_back(form_condition("d *~varpi~", d_star(gt, *p.varpi)));
            c.push_back(form_condition("d epsilon", exterior_derivative(*p.epsilon)));
            c.push_back(form_condition("d * epsilon", d_star(g, *p.epsilon)));
            PolyMatrix r = ric_t;
            for (std::size_t a = 0; a < r.size(); ++a)
                for (std::size_t b = 0; b < r.size(); ++b)
                    r[a][b] -= one_form_component(p.varpi, a) * one_form_component(p.varpi, b);
            c.push_back(matrix_condition("Ric~ - varpi~ (x) varpi~", r, Nt));
            Condition iso = matrix_condition("Ric h^-1 Ric", ricci_square(bg.h()), pc.chart());
            iso.informational = true;
            c.push_back(std::move(iso));
            break;
        }
        case Theorem::MixedNull: {
            require_shape(p, true, true, false, false, false, "alpha~ + beta~ ^ nu");
            const auto cc = infer_mixed_constant(g, *p.nu, Rational(1));
            const Rational k = cc ? *cc : (bg.ansatz.c ? *bg.ansatz.c : Rational(1));
            if (cc && *cc != Rational(1))
                s.notes.push_back("d*nu = " + cc->str() + " vol_M; conditions use this constant in place of 1");
            c.push_back(matrix_condition("Ric^g", ric, N));
            c.push_back(form_condition("d nu", exterior_derivative(*p.nu)));
            c.push_back(form_condition("d*nu - c vol_M", d_star(g, *p.nu) - Polynomial(k) * volume_form(g)));
            c.push_back(scalar_condition("|alpha~|^2", norm_squared(gt, *p.alpha)));
            c.push_back(scalar_condition("|beta~|^2", norm_squared(gt, *p.beta)));
            c.push_back(form_condition("d alpha~", exterior_derivative(*p.alpha)));
            c.push_back(form_condition("d beta~", exterior_derivative(*p.beta)));
            c.push_back(form_condition("d *~beta~", d_star(gt, *p.beta)));
            if (k.is_zero()) {
                s.notes.push_back("degenerate constant c = 0: the relation reduces to d*~alpha~ = 0");
                c.push_back(form_condition("d *~alpha~", d_star(gt, *p.alpha)));
            } else {
                c.push_back(form_condition("*~beta~ + (1/c) d*~alpha~",
                                           hodge_star(gt, *p.beta) + Polynomial(Rational(1) / k) * d_star(gt, *p.alpha)));
            }
            Condition extra{"<i alpha~, beta~>"};
            for (std::size_t a = 0; a < gt.dimension(); ++a) {
                Polynomial v = pairing(gt, contract(gt, a, *p.alpha), *p.beta);
                if (!v.is_zero()) extra.entries.emplace_back("(" + Nt->coordinates()[a] + ")", v);
            }
            c.push_back(std::move(extra));
            PolyMatrix r = ric_t;
            accumulate(r, Polynomial(Rational(1, 2)), contraction_gram(gt, p.alpha));
            accumulate(r, Rational(1, 2) * norm_squared(g, *p.nu), contraction_gram(gt, p.beta));
            c.push_back(matrix_condition("Ric~ + 1/2 <i alpha~, i alpha~> + |nu|^2/2 <i beta~, i beta~>", r, Nt));
            break;
        }
        case Theorem::ConstantLength: {
            require_shape(p, false, false, false, false, true, "a base 4-form");
            const Polynomial t2 = norm_squared(g, *p.theta);
            c.push_back(scalar_condition("|theta|^2 - const", t2 - Polynomial(t2.constant_term())));
            c.push_back(form_condition("d theta", exterior_derivative(*p.theta)));
            c.push_back(form_condition("d * theta", d_star(g, *p.theta)));
            PolyMatrix r = ric;
            accumulate(r, Rational(-1, 6) * t2, g.g());
            accumulate(r, Polynomial(Rational(1, 2)), contraction_gram(g, p.theta));
            c.push_back(matrix_condition("Ric^g - |theta|^2/6 g + 1/2 <i theta, i theta>", r, N));
            PolyMatrix rt = ric_t;
            accumulate(rt, Rational(-1, 6) * t2, gt.g());
            c.push_back(matrix_condition("Ric~ - |theta|^2/6 g~", rt, Nt));
            break;
        }
    }

    const bool hypotheses = s.passed();
    const bool equations = exterior_derivative(bg.flux).is_zero() && maxwell_residual(bg).is_zero() &&
                           [&] {
                               for (const auto& row : einstein_residual(bg))
                                   for (const auto& e : row)
                                       if (!e.is_zero()) return false;
                               return true;
                           }();
    Condition eq = assertion("field equations", equations);
    eq.informational = !hypotheses;
    c.push_back(std::move(eq));
    c.push_back(assertion("hypotheses => field equations", !hypotheses || equations));
    return s;
}

}  // namespace fluxcheck
