#pragma once

#include "fluxcheck/metric.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace fluxcheck {

/// gamma[k][i][j] = Γ^k_{ij}
using Christoffel = std::vector<std::vector<std::vector<Polynomial>>>;

struct CurvatureData {
    ChartMetric metric;
    Christoffel christoffel;
    PolyMatrix ricci;
};

/// Levi-Civita connection, Γ^k_{ij} = ½ g^{kl}(∂_i g_{jl} + ∂_j g_{il} − ∂_l g_{ij}).
Christoffel christoffel(const ChartMetric& m);

/// Ric_{ij} = ∂_k Γ^k_{ij} − ∂_j Γ^k_{ik} + Γ^k_{kl}Γ^l_{ij} − Γ^k_{jl}Γ^l_{ik}
PolyMatrix ricci(const ChartMetric& m);

/// Christoffel symbols and Ricci tensor, computed once per metric.
std::shared_ptr<const CurvatureData> curvature(const ChartMetric& m);
void clear_curvature_cache();

Polynomial scalar_curvature(const ChartMetric& m);
PolyMatrix hessian(const ChartMetric& m, const Polynomial& f);
Polynomial laplace_beltrami(const ChartMetric& m, const Polynomial& f);
VectorField gradient(const ChartMetric& m, const Polynomial& f);
Polynomial grad_norm(const ChartMetric& m, const Polynomial& f);

struct IsotropyWitness {
    std::size_t row = 0;
    std::size_t column = 0;
    Polynomial value;
};

/// R g^{-1} R, the matrix of h(ric(∂_a), ric(∂_b)).
PolyMatrix ricci_square(const ChartMetric& m);

/// Empty when the Ricci image is totally null; otherwise the first nonzero
/// entry of R g^{-1} R.
std::optional<IsotropyWitness> ricci_isotropy_witness(const ChartMetric& m);
inline bool is_totally_ricci_isotropic(const ChartMetric& m) { return !ricci_isotropy_witness(m); }

}  // namespace fluxcheck
