#include "internal.hpp"

#include "fluxcheck/errors.hpp"

namespace fluxcheck {

using namespace detail;

namespace {

void add_scaled(PolyMatrix& acc, const Polynomial& s, const PolyMatrix& m) {
    for (std::size_t i = 0; i < acc.size(); ++i)
        for (std::size_t j = 0; j < acc[i].size(); ++j)
            if (!m[i][j].is_zero()) acc[i][j] += s * m[i][j];
}

bool all_zero(const PolyMatrix& m) {
    for (const auto& row : m)
        for (const auto& e : row)
            if (!e.is_zero()) return false;
    return true;
}

}  // namespace

Section check_case5_contact(const ChartMetric& g, const DifferentialForm& eta, const ChartMetric& fiber) {
    if (g.dimension() != 5) throw ShapeMismatch("the contact check needs a 5-dimensional base");
    if (!same_chart(eta.chart(), g.chart()) || eta.degree() != 1) throw DegreeError("eta must be a 1-form on M");
    Section s{"case5_contact"};
    auto& c = s.conditions;
    const std::size_t n = g.dimension();
    const DifferentialForm theta = hodge_star(g, eta);

    const DifferentialForm dth = exterior_derivative(theta);
    const DifferentialForm dsth = exterior_derivative(hodge_star(g, theta));
    const DifferentialForm de = exterior_derivative(eta);
    const DifferentialForm dse = exterior_derivative(hodge_star(g, eta));
    c.push_back(form_condition("d theta", dth));
    c.push_back(form_condition("d * theta", dsth));
    c.push_back(form_condition("d eta", de));
    c.push_back(form_condition("d * eta", dse));
    c.push_back(assertion("d theta = d*theta = 0 <=> d eta = d*eta = 0",
                          (dth.is_zero() && dsth.is_zero()) == (de.is_zero() && dse.is_zero())));

    const PolyMatrix& ric = curvature(g)->ricci;
    const Polynomial e2 = norm_squared(g, eta);
    const Polynomial t2 = norm_squared(g, theta);
    Condition tn = scalar_condition("|theta|^2", t2);
    tn.informational = true;
    c.push_back(std::move(tn));

    PolyMatrix engine = ric;
    add_scaled(engine, Rational(-1, 6) * t2, g.g());
    add_scaled(engine, Polynomial(Rational(1, 2)), contraction_gram(g, theta));
    c.push_back(matrix_condition("Ric^g - |theta|^2/6 g + 1/2 <i theta, i theta>", engine, g.chart()));

    PolyMatrix variant = ric;
    add_scaled(variant, Rational(1, 3) * e2, g.g());
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            variant[a][b] -= Rational(1, 2) * (eta.component(IndexMask{1} << a) * eta.component(IndexMask{1} << b));
    Condition pc = matrix_condition("Ric^g + 1/3 g |eta|^2 - 1/2 eta (x) eta", variant, g.chart());
    pc.informational = true;
    c.push_back(std::move(pc));

    PolyMatrix fib = curvature(fiber)->ricci;
    add_scaled(fib, Rational(-1, 6) * t2, fiber.g());
    c.push_back(matrix_condition("Ric~ - |theta|^2/6 g~", fib, fiber.chart()));
    PolyMatrix fib_variant = curvature(fiber)->ricci;
    add_scaled(fib_variant, Rational(-1, 6) * e2, fiber.g());
    Condition fp = matrix_condition("Ric~ - |eta|^2/6 g~", fib_variant, fiber.chart());
    fp.informational = true;
    c.push_back(std::move(fp));

    if (e2 != Polynomial(0) && -e2 != t2) s.notes.push_back("|*eta|^2 differs from -|eta|^2");
    if (!e2.is_zero() && t2 == -e2) s.notes.push_back("|theta|^2 = -|eta|^2 on a negative definite base");

    const ProductChart prod = build_product(g, fiber, Polynomial(1));
    bool full_zero = true;
    if (!theta.is_zero()) {
        FluxAnsatz a;
        a.theta = theta;
        const Background bg = assemble_flux(prod, std::move(a), "contact");
        const PolyMatrix full = einstein_residual(bg);
        Condition fc = matrix_condition("full Einstein residual", full, prod.chart());
        fc.informational = true;
        c.push_back(std::move(fc));
        full_zero = all_zero(full) && maxwell_residual(bg).is_zero() && exterior_derivative(bg.flux).is_zero();
    } else {
        full_zero = all_zero(ric) && all_zero(curvature(fiber)->ricci);
    }
    bool engine_zero = true;
    for (const auto& name : {"Ric^g - |theta|^2/6 g + 1/2 <i theta, i theta>", "Ric~ - |theta|^2/6 g~", "d theta",
                             "d * theta"})
        engine_zero = engine_zero && s.find(name)->zero();
    c.push_back(assertion("block identities <=> full 11-dimensional equations", engine_zero == full_zero));
    return s;
}

Section check_contact_structure(const ChartMetric& g, const VectorField& xi, const DifferentialForm& eta,
                                const PolyMatrix& phi) {
    const std::size_t n = g.dimension();
    if (n % 2 == 0) throw ShapeMismatch("contact structures need odd dimension");
    if (phi.size() != n) throw ShapeMismatch("phi must be a square matrix of the manifold dimension");
    const ChartPtr& X = g.chart();
    Section s{"contact_structure"};
    auto& c = s.conditions;
    auto eta_c = [&](std::size_t i) { return eta.component(IndexMask{1} << i); };

    Polynomial ex;
    for (std::size_t i = 0; i < n; ++i) ex += eta_c(i) * xi.component(i);
    c.push_back(scalar_condition("eta(xi) - 1", ex - Polynomial(1)));

    PolyMatrix sq(n, std::vector<Polynomial>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Polynomial v;
            for (std::size_t k = 0; k < n; ++k) v += phi[i][k] * phi[k][j];
            if (i == j) v += Polynomial(1);
            v -= xi.component(i) * eta_c(j);
            sq[i][j] = v;
        }
    c.push_back(matrix_condition("phi^2 + Id - eta (x) xi", sq, X, false));

    // Φ_ij = g(∂_i, φ∂_j)
    PolyMatrix Phi(n, std::vector<Polynomial>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) Phi[i][j] += g.g(i, k) * phi[k][j];
    PolyMatrix sym(n, std::vector<Polynomial>(n));
    DifferentialForm Phi_form(X, 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            sym[i][j] = Phi[i][j] + Phi[j][i];
            if (i < j) Phi_form.add(mask_of({i, j}), Phi[i][j]);
        }
    c.push_back(matrix_condition("Phi + Phi^T", sym, X));
    c.push_back(form_condition("i_xi Phi", interior_product(xi, Phi_form)));
    c.push_back(form_condition("d Phi", exterior_derivative(Phi_form)));
    const DifferentialForm deta = exterior_derivative(eta);
    c.push_back(form_condition("d eta", deta));

    // N(∂_i, ∂_j) on coordinate fields, where [∂_i, ∂_j] = 0.
    auto column = [&](std::size_t j) {
        std::vector<Polynomial> v(n);
        for (std::size_t k = 0; k < n; ++k) v[k] = phi[k][j];
        return v;
    };
    auto bracket = [&](const std::vector<Polynomial>& a, const std::vector<Polynomial>& b) {
        std::vector<Polynomial> out(n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l) {
                if (!a[l].is_zero()) out[k] += a[l] * b[k].derivative(X->coordinates()[l]);
                if (!b[l].is_zero()) out[k] -= b[l] * a[k].derivative(X->coordinates()[l]);
            }
        return out;
    };
    auto apply_phi = [&](const std::vector<Polynomial>& v) {
        std::vector<Polynomial> out(n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l)
                if (!v[l].is_zero()) out[k] += phi[k][l] * v[l];
        return out;
    };
    auto unit = [&](std::size_t i) {
        std::vector<Polynomial> v(n);
        v[i] = Polynomial(1);
        return v;
    };
    Condition nij{"N_phi"};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto pi = column(i), pj = column(j);
            const auto b1 = bracket(pi, pj);
            const auto b2 = apply_phi(bracket(pi, unit(j)));
            const auto b3 = apply_phi(bracket(unit(i), pj));
            const Polynomial dij = deta.component(mask_of({i, j}));
            for (std::size_t k = 0; k < n; ++k) {
                Polynomial v = b1[k] - b2[k] - b3[k] + dij * xi.component(k);
                if (!v.is_zero())
                    nij.entries.emplace_back("(" + X->coordinates()[i] + "," + X->coordinates()[j] + ")^" +
                                                 X->coordinates()[k],
                                             v);
            }
        }
    c.push_back(std::move(nij));
    return s;
}

}  // namespace fluxcheck
