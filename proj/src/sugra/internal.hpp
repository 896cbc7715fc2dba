#pragma once

#include "fluxcheck/sugra.hpp"

#include <optional>

namespace fluxcheck::detail {

/// Ansatz pieces with inactive pairs dropped (a pair is active when both
/// factors are nonzero).
struct Parts {
    const ProductChart* pc = nullptr;
    Rational f;
    std::optional<DifferentialForm> alpha, beta, gamma, varpi;
    std::optional<DifferentialForm> nu, delta, epsilon, theta;
};

Parts parts_of(const Background& bg);

/// Lift of a factor form, or the zero form of that degree on the product.
DifferentialForm up(const Parts& p, const std::optional<DifferentialForm>& a, unsigned degree);
DifferentialForm zero_form(const ChartPtr& chart, unsigned degree);
/// Lift of a scalar-like sum; arguments may live on either factor.
DifferentialForm wedge_all(std::initializer_list<DifferentialForm> forms);

Polynomial norm_or_zero(const ChartMetric& m, const std::optional<DifferentialForm>& a);
/// ⟨i_{∂a} x, i_{∂b} x⟩ on one factor.
PolyMatrix contraction_gram(const ChartMetric& m, const std::optional<DifferentialForm>& x);

std::string component_label(const ChartPtr& chart, IndexMask mask);

/// The unique constant c with top = c·vol, if any.
std::optional<Rational> volume_multiple(const ChartMetric& m, const DifferentialForm& top);

}  // namespace fluxcheck::detail

namespace fluxcheck {

/// The four typed Maxwell equations as residual conditions.
std::vector<Condition> typed_maxwell_conditions(const Background& bg);

}  // namespace fluxcheck

namespace fluxcheck {

/// scale · c where d⋆x = c vol, when c is constant.
std::optional<Rational> infer_mixed_constant(const ChartMetric& m, const DifferentialForm& x, Rational scale);

}  // namespace fluxcheck
