#include "fluxcheck/polynomial.hpp"

#include "fluxcheck/errors.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>

namespace fluxcheck {

namespace {

std::pair<std::string_view, std::string_view> split_suffix(std::string_view s) {
    std::size_t i = s.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
    return {s.substr(0, i), s.substr(i)};
}

unsigned total(const Exponents& e) {
    unsigned t = 0;
    for (auto x : e) t += x;
    return t;
}

// Descending graded lexicographic order: true when a comes before b.
bool grlex_greater(const Exponents& a, const Exponents& b) {
    const unsigned ta = total(a), tb = total(b);
    if (ta != tb) return ta > tb;
    return a > b;
}

}  // namespace

const Polynomial::VarList& Polynomial::no_vars() {
    static const VarList empty = std::make_shared<const std::vector<std::string>>();
    return empty;
}

bool variable_less(std::string_view a, std::string_view b) {
    auto [pa, sa] = split_suffix(a);
    auto [pb, sb] = split_suffix(b);
    if (pa != pb) return pa < pb;
    // Compare numeric suffixes by value without overflow.
    auto strip = [](std::string_view s) {
        while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
        return s;
    };
    auto na = strip(sa), nb = strip(sb);
    if (sa.empty() != sb.empty()) return sa.empty();
    if (na.size() != nb.size()) return na.size() < nb.size();
    if (na != nb) return na < nb;
    return a < b;
}

Polynomial::Polynomial(const Rational& c) {
    if (!c.is_zero()) terms_.push_back(Term{{}, c});
}

Polynomial::Polynomial(VarList vars, std::vector<Term> terms)
    : vars_(std::move(vars)), terms_(std::move(terms)) {
    normalize();
}

const std::vector<std::string>& Polynomial::variables() const {
    return *vars_;
}

Polynomial Polynomial::variable(const std::string& name) {
    if (name.empty()) throw ParseError("empty variable name");
    auto vars = std::make_shared<const std::vector<std::string>>(std::vector<std::string>{name});
    return Polynomial(vars, {Term{{1}, Rational(1)}});
}

Polynomial Polynomial::monomial(const Rational& c,
                                const std::vector<std::pair<std::string, unsigned>>& powers) {
    Polynomial p(c);
    for (const auto& [name, e] : powers) p *= variable(name).pow(e);
    return p;
}

void Polynomial::normalize() {
    if (!vars_) vars_ = no_vars();
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return grlex_greater(a.exponents, b.exponents); });
    // Merge equal monomials and drop zeros.
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!merged.empty() && merged.back().exponents == t.exponents)
            merged.back().coefficient += t.coefficient;
        else
            merged.push_back(std::move(t));
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const Term& t) { return t.coefficient.is_zero(); }),
                 merged.end());
    terms_ = std::move(merged);

    // Trim variables that do not occur.
    const auto& vars = *vars_;
    std::vector<bool> used(vars.size(), false);
    for (const auto& t : terms_)
        for (std::size_t i = 0; i < t.exponents.size(); ++i)
            if (t.exponents[i]) used[i] = true;
    if (std::all_of(used.begin(), used.end(), [](bool u) { return u; })) return;
    std::vector<std::string> kept;
    std::vector<std::size_t> keep_idx;
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (used[i]) {
            kept.push_back(vars[i]);
            keep_idx.push_back(i);
        }
    for (auto& t : terms_) {
        Exponents e(keep_idx.size());
        for (std::size_t k = 0; k < keep_idx.size(); ++k) e[k] = t.exponents[keep_idx[k]];
        t.exponents = std::move(e);
    }
    vars_ = kept.empty() ? no_vars() : std::make_shared<const std::vector<std::string>>(std::move(kept));
}

Polynomial::VarList Polynomial::merge_vars(const VarList& a, const VarList& b) {
    if (a == b || *a == *b) return a;
    if (a->empty()) return b;
    if (b->empty()) return a;
    std::vector<std::string> out;
    out.reserve(a->size() + b->size());
    std::size_t i = 0, j = 0;
    while (i < a->size() || j < b->size()) {
        if (j == b->size() || (i < a->size() && variable_less((*a)[i], (*b)[j])))
            out.push_back((*a)[i++]);
        else if (i == a->size() || variable_less((*b)[j], (*a)[i]))
            out.push_back((*b)[j++]);
        else {
            out.push_back((*a)[i++]);
            ++j;
        }
    }
    if (out.size() == a->size()) return a;
    if (out.size() == b->size()) return b;
    return std::make_shared<const std::vector<std::string>>(std::move(out));
}

Polynomial Polynomial::remapped(const VarList& target) const {
    if (vars_ == target || *vars_ == *target) {
        Polynomial p = *this;
        p.vars_ = target;
        return p;
    }
    std::vector<std::size_t> pos(vars_->size());
    std::size_t j = 0;
    for (std::size_t i = 0; i < vars_->size(); ++i) {
        while ((*target)[j] != (*vars_)[i]) ++j;
        pos[i] = j;
    }
    Polynomial p;
    p.vars_ = target;
    p.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
        Exponents e(target->size(), 0);
        for (std::size_t i = 0; i < pos.size(); ++i) e[pos[i]] = t.exponents[i];
        p.terms_.push_back(Term{std::move(e), t.coefficient});
    }
    // Relative order of monomials is preserved by an order-preserving embedding.
    return p;
}

Polynomial Polynomial::add_scaled(const Polynomial& a, const Polynomial& b, const Rational& s) {
    if (b.is_zero()) return a;
    const auto vars = merge_vars(a.vars_, b.vars_);
    const Polynomial ra = a.remapped(vars);
    const Polynomial rb = b.remapped(vars);
    Polynomial out;
    out.vars_ = vars;
    out.terms_.reserve(ra.terms_.size() + rb.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < ra.terms_.size() || j < rb.terms_.size()) {
        if (j == rb.terms_.size() ||
            (i < ra.terms_.size() && grlex_greater(ra.terms_[i].exponents, rb.terms_[j].exponents))) {
            out.terms_.push_back(ra.terms_[i++]);
        } else if (i == ra.terms_.size() ||
                   grlex_greater(rb.terms_[j].exponents, ra.terms_[i].exponents)) {
            out.terms_.push_back(Term{rb.terms_[j].exponents, rb.terms_[j].coefficient * s});
            ++j;
        } else {
            Rational c = ra.terms_[i].coefficient + rb.terms_[j].coefficient * s;
            if (!c.is_zero()) out.terms_.push_back(Term{ra.terms_[i].exponents, std::move(c)});
            ++i;
            ++j;
        }
    }
    out.normalize();
    return out;
}

Polynomial Polynomial::operator-() const {
    Polynomial p = *this;
    for (auto& t : p.terms_) t.coefficient = -t.coefficient;
    return p;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    *this = add_scaled(*this, o, Rational(1));
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    *this = add_scaled(*this, o, Rational(-1));
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
    if (c.is_zero()) {
        terms_.clear();
        vars_ = no_vars();
        return *this;
    }
    for (auto& t : terms_) t.coefficient *= c;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.variables().empty()) return b * a.terms_.front().coefficient;
    if (b.variables().empty()) return a * b.terms_.front().coefficient;
    const auto vars = Polynomial::merge_vars(a.vars_, b.vars_);
    const Polynomial ra = a.remapped(vars);
    const Polynomial rb = b.remapped(vars);
    std::vector<Term> out;
    out.reserve(ra.terms_.size() * rb.terms_.size());
    const std::size_t n = vars->size();
    for (const auto& ta : ra.terms_)
        for (const auto& tb : rb.terms_) {
            Exponents e(n);
            for (std::size_t k = 0; k < n; ++k) e[k] = ta.exponents[k] + tb.exponents[k];
            out.push_back(Term{std::move(e), ta.coefficient * tb.coefficient});
        }
    return Polynomial(vars, std::move(out));
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
    *this = *this * o;
    return *this;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    if (a.variables() != b.variables()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (a.terms_[i].exponents != b.terms_[i].exponents ||
            a.terms_[i].coefficient != b.terms_[i].coefficient)
            return false;
    return true;
}

Polynomial Polynomial::pow(unsigned e) const {
    Polynomial result(Rational(1));
    Polynomial base = *this;
    while (e) {
        if (e & 1u) result *= base;
        e >>= 1u;
        if (e) base *= base;
    }
    return result;
}

Polynomial Polynomial::derivative(std::string_view var) const {
    const auto& vars = variables();
    const auto it = std::find(vars.begin(), vars.end(), var);
    if (it == vars.end()) return {};
    const auto k = static_cast<std::size_t>(it - vars.begin());
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        if (t.exponents[k] == 0) continue;
        Term d = t;
        d.coefficient *= Rational(static_cast<long>(t.exponents[k]));
        --d.exponents[k];
        out.push_back(std::move(d));
    }
    return Polynomial(vars_, std::move(out));
}

Polynomial Polynomial::lead() const {
    if (terms_.empty()) return {};
    return Polynomial(vars_, {terms_.front()});
}

std::optional<Rational> Polynomial::constant_value() const {
    if (terms_.empty()) return Rational(0);
    if (is_constant()) return terms_.front().coefficient;
    return std::nullopt;
}

Rational Polynomial::constant_term() const {
    if (terms_.empty()) return Rational(0);
    const auto& last = terms_.back();
    return total(last.exponents) == 0 ? last.coefficient : Rational(0);
}

unsigned Polynomial::total_degree() const {
    return terms_.empty() ? 0 : total(terms_.front().exponents);
}

unsigned Polynomial::degree_in(std::string_view var) const {
    const auto& vars = variables();
    const auto it = std::find(vars.begin(), vars.end(), var);
    if (it == vars.end()) return 0;
    const auto k = static_cast<std::size_t>(it - vars.begin());
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max<unsigned>(d, t.exponents[k]);
    return d;
}

bool Polynomial::depends_on(std::string_view var) const {
    const auto& vars = variables();
    return std::find(vars.begin(), vars.end(), var) != vars.end();
}

Rational Polynomial::evaluate(const Point& point) const {
    const auto& vars = variables();
    std::vector<Rational> values;
    values.reserve(vars.size());
    for (const auto& v : vars) {
        const auto it = point.find(v);
        if (it == point.end()) throw MissingVariable("no value for variable '" + v + "'");
        values.push_back(it->second);
    }
    Rational sum;
    for (const auto& t : terms_) {
        Rational term = t.coefficient;
        for (std::size_t k = 0; k < values.size(); ++k)
            if (t.exponents[k]) term *= values[k].pow(t.exponents[k]);
        sum += term;
    }
    return sum;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    const auto& vars = variables();
    bool first = true;
    for (const auto& t : terms_) {
        Rational c = t.coefficient;
        const bool negative = c.sign() < 0;
        if (negative) c = -c;
        if (first)
            os << (negative ? "-" : "");
        else
            os << (negative ? " - " : " + ");
        first = false;
        const bool constant = total(t.exponents) == 0;
        bool need_star = false;
        if (constant || !c.is_one()) {
            os << c.str();
            need_star = true;
        }
        for (std::size_t k = 0; k < vars.size(); ++k) {
            if (!t.exponents[k]) continue;
            if (need_star) os << '*';
            os << vars[k];
            if (t.exponents[k] > 1) os << '^' << t.exponents[k];
            need_star = true;
        }
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.str(); }

namespace {

class PolyParser {
public:
    explicit PolyParser(std::string_view text) : text_(text) {}

    Polynomial parse() {
        skip_ws();
        if (pos_ == text_.size()) fail("empty polynomial");
        Polynomial result;
        bool first = true;
        while (true) {
            skip_ws();
            if (pos_ == text_.size()) break;
            int sign = 1;
            if (peek() == '+' || peek() == '-') {
                sign = peek() == '-' ? -1 : 1;
                ++pos_;
                skip_ws();
            } else if (!first) {
                fail("expected '+' or '-'");
            }
            first = false;
            Polynomial term = parse_term();
            if (sign < 0) term = -term;
            result += term;
        }
        return result;
    }

private:
    char peek() const { return text_[pos_]; }
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError("polynomial '" + std::string(text_) + "': " + why + " at position " +
                         std::to_string(pos_));
    }
    std::string digits() {
        std::string d;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            d.push_back(text_[pos_++]);
        return d;
    }
    Polynomial parse_term() {
        skip_ws();
        if (pos_ == text_.size()) fail("dangling sign");
        Rational coef(1);
        bool have_coef = false;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            std::string num = digits();
            skip_ws();
            std::string den = "1";
            if (pos_ < text_.size() && peek() == '/') {
                ++pos_;
                skip_ws();
                den = digits();
                if (den.empty()) fail("expected denominator");
            }
            coef = Rational::parse(num + "/" + den);
            have_coef = true;
        }
        Polynomial term(coef);
        bool expect_factor = !have_coef;
        while (true) {
            skip_ws();
            if (pos_ < text_.size() && peek() == '*') {
                ++pos_;
                skip_ws();
                expect_factor = true;
            }
            if (pos_ < text_.size() &&
                (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) {
                std::string name;
                while (pos_ < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
                    name.push_back(text_[pos_++]);
                skip_ws();
                unsigned e = 1;
                if (pos_ < text_.size() && peek() == '^') {
                    ++pos_;
                    skip_ws();
                    const std::string d = digits();
                    if (d.empty()) fail("expected exponent");
                    e = static_cast<unsigned>(std::stoul(d));
                }
                term *= Polynomial::variable(name).pow(e);
                expect_factor = false;
                continue;
            }
            if (expect_factor) fail("expected variable");
            break;
        }
        return term;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::parse(std::string_view text) { return PolyParser(text).parse(); }

std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw NonPolynomialDivision("division by the zero polynomial");
    if (a.is_zero()) return Polynomial();
    if (auto c = b.constant_value()) return a * (Rational(1) / *c);
    Polynomial quotient;
    Polynomial rest = a;
    const Term& lead_b = b.leading_term();
    const auto& vars_b = b.variables();
    while (!rest.is_zero()) {
        const Term& lead_r = rest.leading_term();
        const auto& vars_r = rest.variables();
        std::vector<std::pair<std::string, unsigned>> powers;
        // Exponents of lead(r) / lead(b) expressed by name.
        for (std::size_t i = 0; i < vars_r.size(); ++i) {
            unsigned eb = 0;
            const auto it = std::find(vars_b.begin(), vars_b.end(), vars_r[i]);
            if (it != vars_b.end()) eb = lead_b.exponents[static_cast<std::size_t>(it - vars_b.begin())];
            if (lead_r.exponents[i] < eb) return std::nullopt;
            if (lead_r.exponents[i] > eb) powers.emplace_back(vars_r[i], lead_r.exponents[i] - eb);
        }
        for (std::size_t j = 0; j < vars_b.size(); ++j) {
            if (lead_b.exponents[j] == 0) continue;
            if (std::find(vars_r.begin(), vars_r.end(), vars_b[j]) == vars_r.end()) return std::nullopt;
        }
        const Polynomial t = Polynomial::monomial(lead_r.coefficient / lead_b.coefficient, powers);
        quotient += t;
        rest -= t * b;
    }
    return quotient;
}

std::optional<Polynomial> poly_sqrt(const Polynomial& p) {
    if (p.is_zero()) return Polynomial();
    const Term& lead = p.leading_term();
    Rational root_coef;
    if (!lead.coefficient.sqrt_exact(root_coef)) return std::nullopt;
    std::vector<std::pair<std::string, unsigned>> powers;
    const auto& vars = p.variables();
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (lead.exponents[i] % 2) return std::nullopt;
        if (lead.exponents[i]) powers.emplace_back(vars[i], lead.exponents[i] / 2);
    }
    Polynomial root = Polynomial::monomial(root_coef, powers);
    const Polynomial twice_lead = root * Rational(2);
    // Terms of the root cannot have total degree below half the trailing degree of p.
    unsigned min_degree = p.total_degree();
    for (const auto& t : p.terms()) {
        unsigned d = 0;
        for (auto e : t.exponents) d += e;
        min_degree = std::min(min_degree, d);
    }
    Polynomial rest = p - root * root;
    while (!rest.is_zero()) {
        auto step = divide_exact(rest.lead(), twice_lead);
        if (!step) return std::nullopt;
        if (2 * step->total_degree() < min_degree) return std::nullopt;
        root += *step;
        rest = p - root * root;
    }
    return root;
}

}  // namespace fluxcheck
