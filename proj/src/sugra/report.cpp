#include "internal.hpp"

#include "fluxcheck/errors.hpp"

#include <algorithm>

namespace fluxcheck {

bool Section::passed() const {
    if (skipped) return true;
    return std::all_of(conditions.begin(), conditions.end(),
                       [](const Condition& c) { return c.informational || c.zero(); });
}

const Condition* Section::find(std::string_view name) const {
    for (const auto& c : conditions)
        if (c.name == name) return &c;
    return nullptr;
}

bool VerificationReport::passed() const {
    if (error) return false;
    return std::all_of(sections.begin(), sections.end(), [](const Section& s) { return s.passed(); });
}

Condition form_condition(std::string name, const DifferentialForm& f) {
    Condition c{std::move(name)};
    for (const auto& [mask, value] : f.components())
        c.entries.emplace_back(detail::component_label(f.chart(), mask), value);
    return c;
}

Condition matrix_condition(std::string name, const PolyMatrix& m, const ChartPtr& chart, bool symmetric) {
    Condition c{std::move(name)};
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = symmetric ? i : 0; j < m[i].size(); ++j) {
            if (m[i][j].is_zero()) continue;
            c.entries.emplace_back("(" + chart->coordinates()[i] + "," + chart->coordinates()[j] + ")", m[i][j]);
        }
    }
    return c;
}

Condition scalar_condition(std::string name, const Polynomial& p) {
    Condition c{std::move(name)};
    if (!p.is_zero()) c.entries.emplace_back("value", p);
    return c;
}

Condition assertion(std::string name, bool holds) {
    Condition c{std::move(name)};
    if (!holds) c.entries.emplace_back("violated", Polynomial(1));
    return c;
}

VerificationReport verify(const Background& bg, const std::vector<std::string>& checks) {
    VerificationReport r;
    r.background = bg.name;
    for (const std::string& check : checks) {
        if (check == "closedness") {
            r.sections.push_back(check_closedness(bg));
        } else if (check == "maxwell") {
            r.sections.push_back(check_maxwell(bg));
        } else if (check == "einstein") {
            r.sections.push_back(check_einstein(bg));
        } else if (check == "split_einstein") {
            r.sections.push_back(split_einstein(bg));
        } else if (check == "flux_norm") {
            r.sections.push_back(check_flux_norm(bg));
        } else if (check == "ricci_isotropic") {
            r.sections.push_back(check_ricci_isotropic(bg));
        } else if (check.rfind("case", 0) == 0) {
            const std::string tail = check.substr(4);
            if (tail == "_general") {
                r.sections.push_back(check_special_case(bg, 0));
            } else {
                int which = 0;
                try {
                    which = std::stoi(tail);
                } catch (const std::exception&) {
                    throw ShapeMismatch("unknown check: " + check);
                }
                r.sections.push_back(check_special_case(bg, which));
            }
        } else if (check.rfind("theorem:", 0) == 0) {
            r.sections.push_back(check_theorem_conditions(bg, parse_theorem(check.substr(8))));
        } else {
            throw ShapeMismatch("unknown check: " + check);
        }
    }
    return r;
}

}  // namespace fluxcheck
