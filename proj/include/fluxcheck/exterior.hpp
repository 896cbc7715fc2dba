#pragma once

#include "fluxcheck/polynomial.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fluxcheck {

/// Named coordinate chart. The listed coordinate order is the positive
/// orientation.
class Chart {
public:
    static constexpr std::size_t kMaxDimension = 32;

    Chart(std::string name, std::vector<std::string> coordinates);

    const std::string& name() const { return name_; }
    const std::vector<std::string>& coordinates() const { return coordinates_; }
    std::size_t dimension() const { return coordinates_.size(); }
    std::optional<std::size_t> index_of(std::string_view coordinate) const;
    std::size_t require_index(std::string_view coordinate) const;

private:
    std::string name_;
    std::vector<std::string> coordinates_;
};

using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr make_chart(std::string name, std::vector<std::string> coordinates);

/// Charts are interchangeable when they have the same name and coordinates.
bool same_chart(const ChartPtr& a, const ChartPtr& b);

/// A strictly increasing multi-index, stored as a bit set over coordinate
/// positions.
using IndexMask = std::uint32_t;

std::vector<std::size_t> mask_indices(IndexMask mask);
IndexMask mask_of(const std::vector<std::size_t>& indices);
unsigned mask_degree(IndexMask mask);
/// Sign of the shuffle that merges dx^a ∧ dx^b into increasing order
/// (a and b disjoint).
int merge_sign(IndexMask a, IndexMask b);

/// Degree-p differential form on one chart, stored as increasing multi-index
/// to polynomial coefficient with no zero entries.
class DifferentialForm {
public:
    using Components = std::map<IndexMask, Polynomial>;

    DifferentialForm(ChartPtr chart, unsigned degree);

    static DifferentialForm scalar(ChartPtr chart, const Polynomial& value);
    static DifferentialForm differential(ChartPtr chart, std::string_view coordinate);
    /// dx^{i1} ∧ ... ∧ dx^{ip} (any order; the sign of sorting is applied).
    static DifferentialForm basis(ChartPtr chart, const std::vector<std::string>& coordinates,
                                  const Polynomial& coefficient = Polynomial(1));

    const ChartPtr& chart() const { return chart_; }
    unsigned degree() const { return degree_; }
    const Components& components() const { return components_; }
    Polynomial component(IndexMask mask) const;
    /// Coefficient of dx^{names...}, antisymmetrized by the given order.
    Polynomial component(const std::vector<std::string>& coordinates) const;
    bool is_zero() const { return components_.empty(); }

    /// Adds c to the component of the increasing multi-index `mask`.
    void add(IndexMask mask, const Polynomial& c);

    DifferentialForm operator-() const;
    DifferentialForm& operator+=(const DifferentialForm& o);
    DifferentialForm& operator-=(const DifferentialForm& o);
    friend DifferentialForm operator+(DifferentialForm a, const DifferentialForm& b) { return a += b; }
    friend DifferentialForm operator-(DifferentialForm a, const DifferentialForm& b) { return a -= b; }
    friend DifferentialForm operator*(const Polynomial& p, const DifferentialForm& a);
    friend DifferentialForm operator*(const DifferentialForm& a, const Polynomial& p) { return p * a; }
    friend bool operator==(const DifferentialForm& a, const DifferentialForm& b);

    std::string str() const;

private:
    ChartPtr chart_;
    unsigned degree_;
    Components components_;
};

std::ostream& operator<<(std::ostream& os, const DifferentialForm& f);

/// Vector field in coordinate components.
class VectorField {
public:
    explicit VectorField(ChartPtr chart);
    static VectorField coordinate(ChartPtr chart, std::string_view coordinate);

    const ChartPtr& chart() const { return chart_; }
    const std::map<std::size_t, Polynomial>& components() const { return components_; }
    Polynomial component(std::size_t index) const;
    void add(std::size_t index, const Polynomial& c);
    bool is_zero() const { return components_.empty(); }

    friend bool operator==(const VectorField& a, const VectorField& b);

private:
    ChartPtr chart_;
    std::map<std::size_t, Polynomial> components_;
};

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);
DifferentialForm exterior_derivative(const DifferentialForm& a);
DifferentialForm interior_product(const VectorField& v, const DifferentialForm& a);
/// Re-indexes a form on a factor chart into a chart that contains all of the
/// factor's coordinates.
DifferentialForm lift_to_product(const DifferentialForm& a, const ChartPtr& target);
VectorField lift_to_product(const VectorField& v, const ChartPtr& target);

/// Applies `fn` to every coefficient; zero results are dropped.
template <typename Fn>
DifferentialForm map_coefficients(const DifferentialForm& a, Fn&& fn) {
    DifferentialForm out(a.chart(), a.degree());
    for (const auto& [mask, c] : a.components()) out.add(mask, fn(c));
    return out;
}

/// Components whose multi-index has exactly `count` indices inside `subset`.
DifferentialForm restrict_type(const DifferentialForm& a, IndexMask subset, unsigned count);

}  // namespace fluxcheck
