#include "fluxcheck/curvature.hpp"

#include <mutex>
#include <unordered_map>

namespace fluxcheck {

namespace {

PolyMatrix derivative_table(const ChartMetric& m, std::size_t l) {
    const auto& var = m.chart()->coordinates()[l];
    const std::size_t n = m.dimension();
    PolyMatrix d(n, std::vector<Polynomial>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) d[i][j] = d[j][i] = m.g(i, j).derivative(var);
    return d;
}

PolyMatrix ricci_from(const ChartMetric& m, const Christoffel& gamma) {
    const std::size_t n = m.dimension();
    const auto& coords = m.chart()->coordinates();
    // Γ^k_{kl}
    std::vector<Polynomial> trace(n);
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t k = 0; k < n; ++k) trace[l] += gamma[k][k][l];
    PolyMatrix ric(n, std::vector<Polynomial>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Polynomial r;
            for (std::size_t k = 0; k < n; ++k) {
                r += gamma[k][i][j].derivative(coords[k]);
                r -= gamma[k][i][k].derivative(coords[j]);
            }
            for (std::size_t l = 0; l < n; ++l) {
                if (!gamma[l][i][j].is_zero() && !trace[l].is_zero()) r += trace[l] * gamma[l][i][j];
                for (std::size_t k = 0; k < n; ++k)
                    if (!gamma[k][j][l].is_zero() && !gamma[l][i][k].is_zero()) r -= gamma[k][j][l] * gamma[l][i][k];
            }
            ric[i][j] = r;
            ric[j][i] = std::move(r);
        }
    return ric;
}

struct Cache {
    std::mutex mutex;
    std::unordered_map<const void*, std::shared_ptr<const CurvatureData>> entries;
};

Cache& cache() {
    static Cache c;
    return c;
}

}  // namespace

Christoffel christoffel(const ChartMetric& m) {
    const std::size_t n = m.dimension();
    std::vector<PolyMatrix> dg;
    dg.reserve(n);
    for (std::size_t l = 0; l < n; ++l) dg.push_back(derivative_table(m, l));
    // First kind: [ij,l] = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij)
    const Rational half(1, 2);
    Christoffel gamma(n, PolyMatrix(n, std::vector<Polynomial>(n)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            for (std::size_t l = 0; l < n; ++l) {
                Polynomial first = dg[i][j][l] + dg[j][i][l] - dg[l][i][j];
                if (first.is_zero()) continue;
                first *= half;
                for (const auto& [k, gkl] : m.inverse_column(l)) gamma[k][i][j] += gkl * first;
            }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j) gamma[k][i][j] = gamma[k][j][i];
    return gamma;
}

PolyMatrix ricci(const ChartMetric& m) { return curvature(m)->ricci; }

std::shared_ptr<const CurvatureData> curvature(const ChartMetric& m) {
    auto& c = cache();
    {
        std::lock_guard lock(c.mutex);
        const auto it = c.entries.find(m.id());
        if (it != c.entries.end()) return it->second;
    }
    auto gamma = christoffel(m);
    auto ric = ricci_from(m, gamma);
    auto data = std::make_shared<const CurvatureData>(CurvatureData{m, std::move(gamma), std::move(ric)});
    std::lock_guard lock(c.mutex);
    // The stored copy keeps the metric alive, so its identity cannot be reused.
    return c.entries.emplace(m.id(), std::move(data)).first->second;
}

void clear_curvature_cache() {
    auto& c = cache();
    std::lock_guard lock(c.mutex);
    c.entries.clear();
}

Polynomial scalar_curvature(const ChartMetric& m) {
    const auto& ric = curvature(m)->ricci;
    Polynomial s;
    for (std::size_t j = 0; j < m.dimension(); ++j)
        for (const auto& [i, gij] : m.inverse_column(j))
            if (!ric[i][j].is_zero()) s += gij * ric[i][j];
    return s;
}

PolyMatrix hessian(const ChartMetric& m, const Polynomial& f) {
    const std::size_t n = m.dimension();
    const auto& coords = m.chart()->coordinates();
    const auto& gamma = curvature(m)->christoffel;
    std::vector<Polynomial> df(n);
    for (std::size_t k = 0; k < n; ++k) df[k] = f.derivative(coords[k]);
    PolyMatrix h(n, std::vector<Polynomial>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Polynomial v = df[i].derivative(coords[j]);
            for (std::size_t k = 0; k < n; ++k)
                if (!df[k].is_zero() && !gamma[k][i][j].is_zero()) v -= gamma[k][i][j] * df[k];
            h[i][j] = v;
            h[j][i] = std::move(v);
        }
    return h;
}

Polynomial laplace_beltrami(const ChartMetric& m, const Polynomial& f) {
    const auto h = hessian(m, f);
    Polynomial sum;
    for (std::size_t j = 0; j < m.dimension(); ++j)
        for (const auto& [i, gij] : m.inverse_column(j))
            if (!h[i][j].is_zero()) sum += gij * h[i][j];
    return sum;
}

VectorField gradient(const ChartMetric& m, const Polynomial& f) {
    DifferentialForm df = exterior_derivative(DifferentialForm::scalar(m.chart(), f));
    return sharp(m, df);
}

Polynomial grad_norm(const ChartMetric& m, const Polynomial& f) {
    return norm_squared(m, exterior_derivative(DifferentialForm::scalar(m.chart(), f)));
}

PolyMatrix ricci_square(const ChartMetric& m) {
    const auto& ric = curvature(m)->ricci;
    return matmul(matmul(ric, m.g_inv()), ric);
}

std::optional<IsotropyWitness> ricci_isotropy_witness(const ChartMetric& m) {
    const auto sq = ricci_square(m);
    for (std::size_t a = 0; a < sq.size(); ++a)
        for (std::size_t b = 0; b < sq.size(); ++b)
            if (!sq[a][b].is_zero()) return IsotropyWitness{a, b, sq[a][b]};
    return std::nullopt;
}

}  // namespace fluxcheck
