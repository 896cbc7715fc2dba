#pragma once

#include "fluxcheck/exterior.hpp"
#include "fluxcheck/polynomial.hpp"

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace fluxcheck {

using PolyMatrix = std::vector<std::vector<Polynomial>>;
using RationalMatrix = std::vector<std::vector<Rational>>;

struct Signature {
    unsigned plus = 0;
    unsigned minus = 0;
    friend bool operator==(const Signature&, const Signature&) = default;
};

/// Exact determinant of a square polynomial matrix.
Polynomial determinant(const PolyMatrix& m);
PolyMatrix matmul(const PolyMatrix& a, const PolyMatrix& b);
bool is_identity(const PolyMatrix& m);
/// Inverse when the determinant of every connected block is a nonzero
/// constant; empty otherwise.
std::optional<PolyMatrix> polynomial_inverse(const PolyMatrix& m);
/// (positive, negative, zero) eigenvalue counts of a symmetric rational matrix.
std::array<unsigned, 3> inertia(RationalMatrix m);

/// Validated pseudo-Riemannian metric on a chart with polynomial inverse and
/// polynomial volume density.
class ChartMetric {
public:
    const ChartPtr& chart() const { return state_->chart; }
    std::size_t dimension() const { return state_->g.size(); }
    const PolyMatrix& g() const { return state_->g; }
    const PolyMatrix& g_inv() const { return state_->g_inv; }
    const Polynomial& g(std::size_t i, std::size_t j) const { return state_->g[i][j]; }
    const Polynomial& g_inv(std::size_t i, std::size_t j) const { return state_->g_inv[i][j]; }
    Signature signature() const { return state_->signature; }
    /// (-1)^(number of negative directions)
    int det_sign() const { return state_->det_sign; }
    const Polynomial& determinant() const { return state_->det; }
    const Polynomial& sqrt_abs_det() const { return state_->sqrt_abs_det; }

    /// Nonzero entries of column j of the inverse metric, as (row, value).
    const std::vector<std::pair<std::size_t, Polynomial>>& inverse_column(std::size_t j) const {
        return state_->inverse_columns[j];
    }

    /// Stable identity of the validated metric, shared by copies.
    const void* id() const { return state_.get(); }

    friend ChartMetric make_metric(ChartPtr chart, PolyMatrix g, Signature signature,
                                   std::optional<PolyMatrix> g_inv,
                                   std::optional<Polynomial> sqrt_abs_det);

private:
    struct State {
        ChartPtr chart;
        PolyMatrix g;
        PolyMatrix g_inv;
        Signature signature;
        int det_sign = 1;
        Polynomial det;
        Polynomial sqrt_abs_det;
        std::vector<std::vector<std::pair<std::size_t, Polynomial>>> inverse_columns;
    };
    explicit ChartMetric(std::shared_ptr<const State> s) : state_(std::move(s)) {}
    std::shared_ptr<const State> state_;
};

/// Builds and validates a metric. Without `g_inv`, the inverse is computed by
/// adjugates and accepted only when the determinant is a nonzero constant.
ChartMetric make_metric(ChartPtr chart, PolyMatrix g, Signature signature,
                        std::optional<PolyMatrix> g_inv = std::nullopt,
                        std::optional<Polynomial> sqrt_abs_det = std::nullopt);

/// Diagonal metric with constant entries.
ChartMetric diagonal_metric(ChartPtr chart, const std::vector<Rational>& diagonal);

DifferentialForm flat(const ChartMetric& m, const VectorField& v);
VectorField sharp(const ChartMetric& m, const DifferentialForm& one_form);
Polynomial metric_pairing(const ChartMetric& m, const VectorField& a, const VectorField& b);

/// Fully contravariant components a^I of a form, keyed by increasing index.
std::map<IndexMask, Polynomial> raise_indices(const ChartMetric& m, const DifferentialForm& a);

/// <a,b> = (1/p!) a_{i1..ip} b_{j1..jp} g^{i1 j1} ... g^{ip jp}
Polynomial inner_product_forms(const ChartMetric& m, const DifferentialForm& a, const DifferentialForm& b);
Polynomial norm_squared(const ChartMetric& m, const DifferentialForm& a);

/// sqrt|det g| dx^1 ∧ ... ∧ dx^n in chart order.
DifferentialForm volume_form(const ChartMetric& m);

/// The unique form with a ∧ ⋆b = <a,b> vol for every a.
DifferentialForm hodge_star(const ChartMetric& m, const DifferentialForm& a);

bool is_null(const ChartMetric& m, const DifferentialForm& a);

}  // namespace fluxcheck
