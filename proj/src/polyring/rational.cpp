#include "fluxcheck/rational.hpp"

#include "fluxcheck/errors.hpp"

#include <cctype>
#include <ostream>

namespace fluxcheck {

Rational::Rational(long num, long den) : q_(num, den) {
    if (den == 0) throw Error("rational with zero denominator");
    q_.canonicalize();
}

Rational::Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw Error("division by zero rational");
    q_ /= o.q_;
    return *this;
}

Rational Rational::parse(std::string_view text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    auto valid_int = [](std::string_view t, bool allow_sign) {
        std::size_t i = 0;
        if (allow_sign && !t.empty() && (t[0] == '-' || t[0] == '+')) i = 1;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    const auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_int(num, true) || !valid_int(den, false))
        throw ParseError("malformed rational '" + std::string(text) + "'");
    if (num[0] == '+') num.erase(0, 1);
    mpz_class n(num, 10);
    mpz_class d(den, 10);
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    mpq_class q(n, d);
    return Rational(std::move(q));
}

Rational Rational::pow(unsigned e) const {
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), q_.get_num_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), q_.get_den_mpz_t(), e);
    return Rational(mpq_class(n, d));
}

bool Rational::sqrt_exact(Rational& out) const {
    if (sign() < 0) return false;
    if (!mpz_perfect_square_p(q_.get_num_mpz_t()) || !mpz_perfect_square_p(q_.get_den_mpz_t()))
        return false;
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), q_.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), q_.get_den_mpz_t());
    out = Rational(mpq_class(n, d));
    return true;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace fluxcheck
