#pragma once

#include "fluxcheck/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fluxcheck {

/// Canonical order on variable names: alphabetic prefix, then the numeric
/// suffix by value, so `x2 < x10 < y1`.
bool variable_less(std::string_view a, std::string_view b);

using Exponents = std::vector<std::uint16_t>;

struct Term {
    Exponents exponents;
    Rational coefficient;
};

using Point = std::map<std::string, Rational, std::less<>>;

/// Multivariate polynomial with rational coefficients.
///
/// The variable list is sorted by `variable_less` and trimmed to the
/// variables that actually occur; terms are sorted in descending graded
/// lexicographic order and carry no zero coefficients. Two polynomials are
/// equal exactly when their representations are identical.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(const Rational& c);  // NOLINT(google-explicit-constructor)
    Polynomial(long c) : Polynomial(Rational(c)) {}  // NOLINT(google-explicit-constructor)
    Polynomial(int c) : Polynomial(Rational(c)) {}   // NOLINT(google-explicit-constructor)

    static Polynomial variable(const std::string& name);
    static Polynomial monomial(const Rational& c, const std::vector<std::pair<std::string, unsigned>>& powers);

    /// Parses `1/8*x1^2 + 1/8*x2^2`-style literals.
    static Polynomial parse(std::string_view text);

    const std::vector<std::string>& variables() const;
    const std::vector<Term>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && variables().empty()); }
    /// The value when the polynomial is constant.
    std::optional<Rational> constant_value() const;
    Rational constant_term() const;
    unsigned total_degree() const;
    unsigned degree_in(std::string_view var) const;
    bool depends_on(std::string_view var) const;
    const Term& leading_term() const { return terms_.front(); }
    /// Leading term as a polynomial (zero for the zero polynomial).
    Polynomial lead() const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Polynomial& o);
    Polynomial& operator*=(const Rational& c);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }

    friend bool operator==(const Polynomial& a, const Polynomial& b);

    Polynomial pow(unsigned e) const;
    Polynomial derivative(std::string_view var) const;

    /// Exact value at a point; only variables that occur must be assigned.
    Rational evaluate(const Point& point) const;

    std::string str() const;

private:
    using VarList = std::shared_ptr<const std::vector<std::string>>;

    Polynomial(VarList vars, std::vector<Term> terms);
    void normalize();
    Polynomial remapped(const VarList& target) const;
    static VarList merge_vars(const VarList& a, const VarList& b);
    static Polynomial add_scaled(const Polynomial& a, const Polynomial& b, const Rational& s);

    static const VarList& no_vars();

    VarList vars_ = no_vars();
    std::vector<Term> terms_;
};

std::ostream& operator<<(std::ostream& os, const Polynomial& p);

/// Square root with positive leading coefficient, if one exists.
std::optional<Polynomial> poly_sqrt(const Polynomial& p);

/// Quotient a / b when b divides a exactly.
std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b);

}  // namespace fluxcheck
