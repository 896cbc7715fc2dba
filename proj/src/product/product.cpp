#include "fluxcheck/product.hpp"

#include "fluxcheck/errors.hpp"

#include <set>

namespace fluxcheck {

IndexMask ProductChart::base_mask() const { return (IndexMask{1} << base_dimension()) - 1; }

IndexMask ProductChart::fiber_mask() const {
    return ((IndexMask{1} << fiber_dimension()) - 1) << base_dimension();
}

ProductChart build_product(const ChartMetric& base, const ChartMetric& fiber, const Polynomial& f,
                           std::string name) {
    const auto& bc = base.chart()->coordinates();
    const auto& fc = fiber.chart()->coordinates();
    std::set<std::string, std::less<>> base_vars(bc.begin(), bc.end());
    for (const auto& c : fc)
        if (base_vars.count(c)) throw ChartMismatch("base and fiber share the coordinate '" + c + "'");
    if (f.is_zero()) throw MetricError("warping function is zero");
    for (const auto& v : f.variables())
        if (!base_vars.count(v)) throw ChartMismatch("warping function depends on non-base variable '" + v + "'");
    if (!f.is_constant())
        throw NonPolynomialInverse("warping function '" + f.str() +
                                   "' is not constant; the product metric has no polynomial inverse");
    if (bc.size() + fc.size() > 32) throw ChartMismatch("product chart exceeds 32 coordinates");

    std::vector<std::string> coords = bc;
    coords.insert(coords.end(), fc.begin(), fc.end());
    if (name.empty()) name = base.chart()->name() + "x" + fiber.chart()->name();
    auto chart = make_chart(std::move(name), std::move(coords));

    const std::size_t p = bc.size(), n = p + fc.size();
    const Rational c = *f.constant_value();
    const Rational c2 = c * c;
    PolyMatrix h(n, std::vector<Polynomial>(n)), h_inv(n, std::vector<Polynomial>(n));
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            h[i][j] = base.g(i, j);
            h_inv[i][j] = base.g_inv(i, j);
        }
    for (std::size_t i = 0; i < fc.size(); ++i)
        for (std::size_t j = 0; j < fc.size(); ++j) {
            h[p + i][p + j] = fiber.g(i, j) * c2;
            h_inv[p + i][p + j] = fiber.g_inv(i, j) * (Rational(1) / c2);
        }
    Rational scale(1);
    for (std::size_t i = 0; i < fc.size(); ++i) scale *= c < Rational(0) ? -c : c;
    Signature sig{base.signature().plus + fiber.signature().plus, base.signature().minus + fiber.signature().minus};
    auto assembled =
        make_metric(chart, std::move(h), sig, std::move(h_inv), base.sqrt_abs_det() * fiber.sqrt_abs_det() * scale);
    return ProductChart{base, fiber, f, std::move(assembled)};
}

namespace {

Polynomial divide_or_throw(const Polynomial& a, const Polynomial& b, const char* what) {
    if (a.is_zero()) return {};
    auto q = divide_exact(a, b);
    if (!q) throw NonPolynomialDivision(std::string(what) + ": '" + a.str() + "' is not divisible by '" + b.str() + "'");
    return *q;
}

}  // namespace

PolyMatrix warped_ricci_oracle(const ProductChart& pc) {
    const std::size_t p = pc.base_dimension(), q = pc.fiber_dimension(), n = p + q;
    const Polynomial& f = pc.warping;
    const auto ric_g = ricci(pc.base);
    const auto ric_ft = ricci(pc.fiber);
    const auto hess = hessian(pc.base, f);
    const Polynomial k(static_cast<long>(q));

    PolyMatrix out(n, std::vector<Polynomial>(n));
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            out[i][j] = ric_g[i][j] - divide_or_throw(k * hess[i][j], f, "base block");

    // f² f̂ = f Δf + (k−1) |grad f|²
    const Polynomial f2_fhat =
        f * laplace_beltrami(pc.base, f) + Polynomial(static_cast<long>(q) - 1) * grad_norm(pc.base, f);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j)
            out[p + i][p + j] = ric_ft[i][j] - pc.fiber.g(i, j) * f2_fhat;
    return out;
}

}  // namespace fluxcheck
