#ifndef SRFLOW_RATIONAL_HPP
#define SRFLOW_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

#include "srflow/errors.hpp"

namespace srflow {

using BigInt = mpz_class;

/// Exact rational number. Always stored canonically: gcd(|num|, den) = 1,
/// den >= 1, zero is 0/1.
class Rational {
  public:
    Rational() : m_q(0) {}
    Rational(long n) : m_q(static_cast<signed long>(n)) {}
    Rational(int n) : m_q(n) {}
    Rational(const BigInt& n) : m_q(n) {}
    Rational(long num, long den) {
        if (den == 0) throw input_error("rational with zero denominator");
        m_q = mpq_class(num, den);
        m_q.canonicalize();
    }
    Rational(const BigInt& num, const BigInt& den) {
        if (den == 0) throw input_error("rational with zero denominator");
        m_q = mpq_class(num, den);
        m_q.canonicalize();
    }
    explicit Rational(const mpq_class& q) : m_q(q) { m_q.canonicalize(); }

    /// Parses "a" or "a/b" with optional sign on a.
    static Rational parse(const std::string& text);

    BigInt numerator() const { return m_q.get_num(); }
    BigInt denominator() const { return m_q.get_den(); }
    bool is_zero() const { return m_q == 0; }
    bool is_integer() const { return m_q.get_den() == 1; }
    int sign() const { return sgn(m_q); }
    double to_double() const { return m_q.get_d(); }

    std::string str() const {
        if (is_integer()) return m_q.get_num().get_str();
        return m_q.get_num().get_str() + "/" + m_q.get_den().get_str();
    }

    Rational operator-() const { return Rational(mpq_class(-m_q)); }
    Rational& operator+=(const Rational& o) { m_q += o.m_q; return *this; }
    Rational& operator-=(const Rational& o) { m_q -= o.m_q; return *this; }
    Rational& operator*=(const Rational& o) { m_q *= o.m_q; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw input_error("division of rationals by zero");
        m_q /= o.m_q;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend bool operator==(const Rational& a, const Rational& b) { return a.m_q == b.m_q; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.m_q != b.m_q; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.m_q < b.m_q; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.m_q <= b.m_q; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.m_q > b.m_q; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.m_q >= b.m_q; }

    const mpq_class& raw() const { return m_q; }

  private:
    mpq_class m_q;
};

inline Rational Rational::parse(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(text), BigInt(1));
        return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
        throw input_error("bad rational literal: '" + text + "'");
    }
}

} // namespace srflow

#endif
