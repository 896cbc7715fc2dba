#include "fluxcheck/exterior.hpp"

#include "fluxcheck/errors.hpp"

#include <algorithm>
#include <bit>
#include <ostream>
#include <set>
#include <sstream>

namespace fluxcheck {

Chart::Chart(std::string name, std::vector<std::string> coordinates)
    : name_(std::move(name)), coordinates_(std::move(coordinates)) {
    if (coordinates_.size() > kMaxDimension)
        throw ChartMismatch("chart '" + name_ + "' exceeds the maximum dimension");
    std::set<std::string> seen;
    for (const auto& c : coordinates_) {
        if (c.empty()) throw ChartMismatch("chart '" + name_ + "' has an empty coordinate name");
        if (!seen.insert(c).second)
            throw ChartMismatch("chart '" + name_ + "' repeats coordinate '" + c + "'");
    }
}

std::optional<std::size_t> Chart::index_of(std::string_view coordinate) const {
    const auto it = std::find(coordinates_.begin(), coordinates_.end(), coordinate);
    if (it == coordinates_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - coordinates_.begin());
}

std::size_t Chart::require_index(std::string_view coordinate) const {
    if (auto i = index_of(coordinate)) return *i;
    throw ChartMismatch("coordinate '" + std::string(coordinate) + "' is not on chart '" + name_ + "'");
}

ChartPtr make_chart(std::string name, std::vector<std::string> coordinates) {
    return std::make_shared<const Chart>(std::move(name), std::move(coordinates));
}

bool same_chart(const ChartPtr& a, const ChartPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->name() == b->name() && a->coordinates() == b->coordinates();
}

namespace {

void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* what) {
    if (!same_chart(a, b))
        throw ChartMismatch(std::string(what) + ": operands live on different charts ('" +
                            (a ? a->name() : "?") + "' vs '" + (b ? b->name() : "?") + "')");
}

IndexMask bit(std::size_t i) { return IndexMask{1} << i; }

IndexMask below(std::size_t i) { return bit(i) - 1; }

}  // namespace

std::vector<std::size_t> mask_indices(IndexMask mask) {
    std::vector<std::size_t> out;
    while (mask) {
        out.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
        mask &= mask - 1;
    }
    return out;
}

IndexMask mask_of(const std::vector<std::size_t>& indices) {
    IndexMask m = 0;
    for (auto i : indices) m |= bit(i);
    return m;
}

unsigned mask_degree(IndexMask mask) { return static_cast<unsigned>(std::popcount(mask)); }

int merge_sign(IndexMask a, IndexMask b) {
    unsigned inversions = 0;
    for (auto j : mask_indices(b)) inversions += static_cast<unsigned>(std::popcount(a & ~(below(j) | bit(j))));
    return inversions % 2 ? -1 : 1;
}

DifferentialForm::DifferentialForm(ChartPtr chart, unsigned degree)
    : chart_(std::move(chart)), degree_(degree) {
    if (!chart_) throw ChartMismatch("form without a chart");
    // degree dim+1 is admitted only as the trivially zero result of d on top forms
    if (degree_ > chart_->dimension() + 1)
        throw DegreeError("degree " + std::to_string(degree_) + " exceeds chart dimension");
}

DifferentialForm DifferentialForm::scalar(ChartPtr chart, const Polynomial& value) {
    DifferentialForm f(std::move(chart), 0);
    f.add(0, value);
    return f;
}

DifferentialForm DifferentialForm::differential(ChartPtr chart, std::string_view coordinate) {
    const auto i = chart->require_index(coordinate);
    DifferentialForm f(std::move(chart), 1);
    f.add(bit(i), Polynomial(1));
    return f;
}

DifferentialForm DifferentialForm::basis(ChartPtr chart, const std::vector<std::string>& coordinates,
                                         const Polynomial& coefficient) {
    DifferentialForm f(chart, static_cast<unsigned>(coordinates.size()));
    IndexMask mask = 0;
    int sign = 1;
    for (const auto& name : coordinates) {
        const auto i = chart->require_index(name);
        if (mask & bit(i)) return f;  // repeated differential
        if (std::popcount(mask & ~(below(i) | bit(i))) % 2) sign = -sign;
        mask |= bit(i);
    }
    f.add(mask, sign > 0 ? coefficient : -coefficient);
    return f;
}

Polynomial DifferentialForm::component(IndexMask mask) const {
    const auto it = components_.find(mask);
    return it == components_.end() ? Polynomial() : it->second;
}

Polynomial DifferentialForm::component(const std::vector<std::string>& coordinates) const {
    IndexMask mask = 0;
    int sign = 1;
    for (const auto& name : coordinates) {
        const auto i = chart_->require_index(name);
        if (mask & bit(i)) return {};
        if (std::popcount(mask & ~(below(i) | bit(i))) % 2) sign = -sign;
        mask |= bit(i);
    }
    const Polynomial c = component(mask);
    return sign > 0 ? c : -c;
}

void DifferentialForm::add(IndexMask mask, const Polynomial& c) {
    if (mask_degree(mask) != degree_)
        throw DegreeError("component of wrong degree for a " + std::to_string(degree_) + "-form");
    if (degree_ > chart_->dimension() || (chart_->dimension() < 32 && mask >> chart_->dimension()))
        throw DegreeError("multi-index outside the chart");
    if (c.is_zero()) return;
    auto [it, inserted] = components_.try_emplace(mask, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) components_.erase(it);
    }
}

DifferentialForm DifferentialForm::operator-() const {
    DifferentialForm out = *this;
    for (auto& [mask, c] : out.components_) c = -c;
    return out;
}

DifferentialForm& DifferentialForm::operator+=(const DifferentialForm& o) {
    require_same_chart(chart_, o.chart_, "form addition");
    if (degree_ != o.degree_ && !o.is_zero() && !is_zero())
        throw DegreeError("adding forms of degrees " + std::to_string(degree_) + " and " +
                          std::to_string(o.degree_));
    if (is_zero() && degree_ != o.degree_) degree_ = o.degree_;
    for (const auto& [mask, c] : o.components_) add(mask, c);
    return *this;
}

DifferentialForm& DifferentialForm::operator-=(const DifferentialForm& o) { return *this += -o; }

DifferentialForm operator*(const Polynomial& p, const DifferentialForm& a) {
    DifferentialForm out(a.chart_, a.degree_);
    for (const auto& [mask, c] : a.components_) out.add(mask, p * c);
    return out;
}

bool operator==(const DifferentialForm& a, const DifferentialForm& b) {
    if (!same_chart(a.chart_, b.chart_)) return false;
    if (a.is_zero() && b.is_zero()) return true;
    return a.degree_ == b.degree_ && a.components_ == b.components_;
}

std::string DifferentialForm::str() const {
    if (components_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [mask, c] : components_) {
        if (!first) os << " + ";
        first = false;
        const bool compound = c.terms().size() > 1;
        if (mask == 0) {
            os << (compound ? "(" + c.str() + ")" : c.str());
            continue;
        }
        if (!(c == Polynomial(1))) os << (compound ? "(" + c.str() + ")" : c.str()) << '*';
        bool first_index = true;
        for (auto i : mask_indices(mask)) {
            if (!first_index) os << '^';
            first_index = false;
            os << 'd' << chart_->coordinates()[i];
        }
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const DifferentialForm& f) { return os << f.str(); }

VectorField::VectorField(ChartPtr chart) : chart_(std::move(chart)) {
    if (!chart_) throw ChartMismatch("vector field without a chart");
}

VectorField VectorField::coordinate(ChartPtr chart, std::string_view coordinate) {
    const auto i = chart->require_index(coordinate);
    VectorField v(std::move(chart));
    v.add(i, Polynomial(1));
    return v;
}

Polynomial VectorField::component(std::size_t index) const {
    const auto it = components_.find(index);
    return it == components_.end() ? Polynomial() : it->second;
}

void VectorField::add(std::size_t index, const Polynomial& c) {
    if (index >= chart_->dimension()) throw ChartMismatch("vector component outside the chart");
    if (c.is_zero()) return;
    auto [it, inserted] = components_.try_emplace(index, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) components_.erase(it);
    }
}

bool operator==(const VectorField& a, const VectorField& b) {
    return same_chart(a.chart_, b.chart_) && a.components_ == b.components_;
}

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
    require_same_chart(a.chart(), b.chart(), "wedge");
    const unsigned degree = a.degree() + b.degree();
    if (degree > a.chart()->dimension())
        throw DegreeError("wedge of degrees " + std::to_string(a.degree()) + " and " +
                          std::to_string(b.degree()) + " exceeds dimension " +
                          std::to_string(a.chart()->dimension()));
    DifferentialForm out(a.chart(), degree);
    for (const auto& [ma, ca] : a.components())
        for (const auto& [mb, cb] : b.components()) {
            if (ma & mb) continue;
            const Polynomial prod = ca * cb;
            out.add(ma | mb, merge_sign(ma, mb) > 0 ? prod : -prod);
        }
    return out;
}

DifferentialForm exterior_derivative(const DifferentialForm& a) {
    const auto& chart = a.chart();
    const std::size_t n = chart->dimension();
    DifferentialForm out(chart, a.degree() + 1);
    if (a.degree() >= n) return out;
    for (const auto& [mask, c] : a.components())
        for (std::size_t k = 0; k < n; ++k) {
            if (mask & bit(k)) continue;
            const Polynomial dc = c.derivative(chart->coordinates()[k]);
            if (dc.is_zero()) continue;
            const bool odd = std::popcount(mask & below(k)) % 2;
            out.add(mask | bit(k), odd ? -dc : dc);
        }
    return out;
}

DifferentialForm interior_product(const VectorField& v, const DifferentialForm& a) {
    require_same_chart(v.chart(), a.chart(), "interior product");
    if (a.degree() == 0) throw DegreeError("interior product of a 0-form");
    DifferentialForm out(a.chart(), a.degree() - 1);
    for (const auto& [mask, c] : a.components()) {
        int position = 0;
        for (auto k : mask_indices(mask)) {
            const Polynomial vk = v.component(k);
            if (!vk.is_zero()) {
                const Polynomial term = vk * c;
                out.add(mask & ~bit(k), position % 2 ? -term : term);
            }
            ++position;
        }
    }
    return out;
}

namespace {

std::vector<std::size_t> embedding(const ChartPtr& from, const ChartPtr& to) {
    std::vector<std::size_t> map;
    map.reserve(from->dimension());
    for (const auto& name : from->coordinates()) {
        const auto j = to->index_of(name);
        if (!j)
            throw ChartMismatch("coordinate '" + name + "' of chart '" + from->name() +
                                "' is missing from chart '" + to->name() + "'");
        map.push_back(*j);
    }
    return map;
}

}  // namespace

DifferentialForm lift_to_product(const DifferentialForm& a, const ChartPtr& target) {
    if (same_chart(a.chart(), target)) return a;
    const auto map = embedding(a.chart(), target);
    DifferentialForm out(target, a.degree());
    for (const auto& [mask, c] : a.components()) {
        std::vector<std::size_t> idx;
        int inversions = 0;
        for (auto i : mask_indices(mask)) {
            for (auto prev : idx)
                if (prev > map[i]) ++inversions;
            idx.push_back(map[i]);
        }
        out.add(mask_of(idx), inversions % 2 ? -c : c);
    }
    return out;
}

VectorField lift_to_product(const VectorField& v, const ChartPtr& target) {
    if (same_chart(v.chart(), target)) return v;
    const auto map = embedding(v.chart(), target);
    VectorField out(target);
    for (const auto& [i, c] : v.components()) out.add(map[i], c);
    return out;
}

DifferentialForm restrict_type(const DifferentialForm& a, IndexMask subset, unsigned count) {
    DifferentialForm out(a.chart(), a.degree());
    for (const auto& [mask, c] : a.components())
        if (mask_degree(mask & subset) == count) out.add(mask, c);
    return out;
}

}  // namespace fluxcheck
