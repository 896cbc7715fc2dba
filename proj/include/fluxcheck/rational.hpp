#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace fluxcheck {

/// Arbitrary precision rational number, always kept in lowest terms with a
/// positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
    Rational(int v) : q_(v) {}   // NOLINT(google-explicit-constructor)
    Rational(long num, long den);
    explicit Rational(mpq_class q);

    /// Accepts `int` or `int/int`, optionally signed.
    static Rational parse(std::string_view text);

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_one() const { return q_ == 1; }
    int sign() const { return sgn(q_); }
    bool is_integer() const { return q_.get_den() == 1; }

    mpz_class numerator() const { return q_.get_num(); }
    mpz_class denominator() const { return q_.get_den(); }

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    Rational abs() const { return Rational(mpq_class(::abs(q_))); }
    Rational pow(unsigned e) const;

    /// Exact square root when this is the square of a rational.
    bool sqrt_exact(Rational& out) const;

    std::string str() const { return q_.get_str(); }
    const mpq_class& raw() const { return q_; }

private:
    mpq_class q_{0};
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace fluxcheck
