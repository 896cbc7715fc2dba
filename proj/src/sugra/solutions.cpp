#include "internal.hpp"

#include "fluxcheck/errors.hpp"

namespace fluxcheck {

using namespace detail;

ChartMetric walker_metric(const ChartMetric& rho, const Polynomial& H, const std::string& v, const std::string& u,
                          const std::string& name) {
    const std::size_t k = rho.dimension();
    std::vector<std::string> coords{v};
    for (const auto& x : rho.chart()->coordinates()) coords.push_back(x);
    coords.push_back(u);
    ChartPtr chart = make_chart(name, coords);
    if (chart->dimension() != k + 2 || rho.chart()->index_of(v) || rho.chart()->index_of(u) || v == u)
        throw ChartMismatch("walker coordinates clash with the transversal chart");
    for (const auto& var : H.variables())
        if (var == v || !chart->index_of(var))
            throw ShapeMismatch("H may depend only on the transversal coordinates and " + u);

    const std::size_t n = k + 2, iu = k + 1;
    PolyMatrix g(n, std::vector<Polynomial>(n)), gi(n, std::vector<Polynomial>(n));
    g[0][iu] = g[iu][0] = Polynomial(1);
    g[iu][iu] = H;
    gi[0][iu] = gi[iu][0] = Polynomial(1);
    gi[0][0] = -H;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            g[i + 1][j + 1] = rho.g(i, j);
            gi[i + 1][j + 1] = rho.g_inv(i, j);
        }
    const Signature sig{rho.signature().plus + 1, rho.signature().minus + 1};
    return make_metric(chart, std::move(g), sig, std::move(gi), rho.sqrt_abs_det());
}

namespace {

DifferentialForm du_wedge(const ChartMetric& walker, const DifferentialForm& x) {
    const std::string& u = walker.chart()->coordinates().back();
    return wedge(DifferentialForm::differential(walker.chart(), u), lift_to_product(x, walker.chart()));
}

SolutionInstance finish(const ChartMetric& base, const ChartMetric& fiber, FluxAnsatz a, const std::string& name,
                        const ChartMetric& rho, const Polynomial& H, Polynomial required) {
    const ProductChart pc = build_product(base, fiber, Polynomial(1), name);
    SolutionInstance s{assemble_flux(pc, std::move(a), name), laplace_beltrami(rho, H), std::move(required), {}};
    return s;
}

ChartMetric line_sum(const ChartMetric& p, const std::string& t) {
    const ChartMetric line = diagonal_metric(make_chart("T", {t}), {Rational(-1)});
    return build_product(p, line, Polynomial(1), "M").assembled;
}

}  // namespace

SolutionInstance build_sol1(const ChartMetric& rho, const DifferentialForm& theta, const Polynomial& H,
                            const ChartMetric& base) {
    if (theta.degree() != 3 || !same_chart(theta.chart(), rho.chart())) throw ShapeMismatch("theta must be a 3-form on N");
    const ChartMetric W = walker_metric(rho, H);
    FluxAnsatz a;
    a.alpha_t = du_wedge(W, theta);
    return finish(base, W, std::move(a), "sol1", rho, H, norm_squared(rho, theta));
}

SolutionInstance build_sol2(const ChartMetric& rho, const DifferentialForm& omega, const Polynomial& H,
                            const ChartMetric& p_metric, const std::string& t) {
    if (omega.degree() != 2 || !same_chart(omega.chart(), rho.chart())) throw ShapeMismatch("omega must be a 2-form on N");
    const ChartMetric W = walker_metric(rho, H);
    const ChartMetric M = line_sum(p_metric, t);
    FluxAnsatz a;
    a.beta_t = du_wedge(W, omega);
    a.nu = DifferentialForm::differential(M.chart(), t);
    return finish(M, W, std::move(a), "sol2", rho, H, -norm_squared(rho, omega));
}

SolutionInstance build_sol3(const ChartMetric& rho, const Polynomial& H, const ChartMetric& p_metric,
                            const DifferentialForm& kahler, const std::string& t) {
    if (kahler.degree() != 2 || !same_chart(kahler.chart(), p_metric.chart()))
        throw ShapeMismatch("the Kahler form must be a 2-form on P");
    const ChartMetric W = walker_metric(rho, H);
    const ChartMetric M = line_sum(p_metric, t);
    FluxAnsatz a;
    a.varpi_t = DifferentialForm::differential(W.chart(), W.chart()->coordinates().back());
    a.epsilon = wedge(lift_to_product(kahler, M.chart()), DifferentialForm::differential(M.chart(), t));
    return finish(M, W, std::move(a), "sol3", rho, H, Polynomial(-2));
}

SolutionInstance build_sol4(const ChartMetric& rho, const DifferentialForm& Omega, const Polynomial& H,
                            const ChartMetric& base, const DifferentialForm& nu, std::optional<DifferentialForm> omega) {
    if (Omega.degree() != 3 || !same_chart(Omega.chart(), rho.chart())) throw ShapeMismatch("Omega must be a 3-form on N");
    if (nu.degree() != 1 || !same_chart(nu.chart(), base.chart())) throw ShapeMismatch("nu must be a 1-form on M");
    const ChartMetric W = walker_metric(rho, H);
    std::vector<std::string> notes;
    const auto c = infer_mixed_constant(base, nu, Rational(1));
    const DifferentialForm alpha = du_wedge(W, Omega);

    if (!omega) {
        const DifferentialForm computed = hodge_star(rho, exterior_derivative(hodge_star(rho, Omega)));
        notes.push_back("*d*Omega = " + computed.str());
        omega = computed;
        if (c && !c->is_zero()) {
            const DifferentialForm d_alpha = exterior_derivative(hodge_star(W, alpha));
            auto relation = [&](const DifferentialForm& w) {
                return (hodge_star(W, du_wedge(W, w)) + Polynomial(Rational(1) / *c) * d_alpha).is_zero();
            };
            if (relation(computed)) {
                notes.push_back("omega = +*d*Omega satisfies the mixed-case relation with c = " + c->str());
            } else if (relation(-computed)) {
                omega = -computed;
                notes.push_back("omega = -*d*Omega satisfies the mixed-case relation with c = " + c->str());
            } else {
                notes.push_back("neither sign of *d*Omega satisfies the mixed-case relation");
            }
        }
    } else {
        notes.push_back("omega supplied");
    }
    if (c) {
        notes.push_back("d*nu = " + c->str() + " vol_M");
    } else {
        notes.push_back("d*nu is not a constant multiple of vol_M");
    }

    FluxAnsatz a;
    a.alpha_t = alpha;
    a.beta_t = du_wedge(W, *omega);
    a.nu = nu;
    Polynomial required = norm_squared(rho, Omega) + norm_squared(base, nu) * norm_squared(rho, *omega);
    SolutionInstance s = finish(base, W, std::move(a), "sol4", rho, H, std::move(required));
    s.notes = std::move(notes);
    return s;
}

}  // namespace fluxcheck
