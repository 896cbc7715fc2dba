#pragma once

#include "fluxcheck/curvature.hpp"

namespace fluxcheck {

/// Warped product M ×_f M̃ with metric h = g + f² g̃ on the union chart,
/// base coordinates first.
struct ProductChart {
    ChartMetric base;
    ChartMetric fiber;
    Polynomial warping;
    ChartMetric assembled;

    const ChartPtr& chart() const { return assembled.chart(); }
    std::size_t base_dimension() const { return base.dimension(); }
    std::size_t fiber_dimension() const { return fiber.dimension(); }
    /// Bitmask of the base (resp. fiber) coordinates in the union chart.
    IndexMask base_mask() const;
    IndexMask fiber_mask() const;
    /// The constant warping factor, if f is constant.
    std::optional<Rational> constant_warping() const { return warping.constant_value(); }

    DifferentialForm lift(const DifferentialForm& a) const { return lift_to_product(a, chart()); }
    VectorField lift(const VectorField& v) const { return lift_to_product(v, chart()); }
};

/// Assembles the product. A non-constant f gives an inverse with 1/f² entries
/// and is rejected with NonPolynomialInverse.
ProductChart build_product(const ChartMetric& base, const ChartMetric& fiber, const Polynomial& f,
                           std::string name = {});

/// Block Ricci of a warped product from factor data:
///   base:  Ric^g − (k/f) H^f
///   fiber: Ric^g̃ − f² g̃ (Δf/f + (k−1) g(grad f, grad f)/f²)
///   mixed: 0
/// with k = dim M̃. Throws NonPolynomialDivision when a quotient is not polynomial.
PolyMatrix warped_ricci_oracle(const ProductChart& pc);

}  // namespace fluxcheck
