#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ldpkit {

using Int = boost::multiprecision::cpp_int;

/*
 * Exact rational scalar. The only numeric type used for intersection numbers,
 * discrepancy coefficients and K^2 values; there is no floating point anywhere.
 *
 * Thin wrapper around boost::multiprecision::cpp_rational (always reduced,
 * denominator > 0) adding the "p/q" string format used by every JSON report.
 */
class Rational {
public:
    using Backend = boost::multiprecision::cpp_rational;

    Rational() = default;
    Rational(std::intmax_t n) : v_(n) {}
    Rational(const Int& n) : v_(n) {}
    Rational(std::intmax_t num, std::intmax_t den) : v_(Backend(num) / den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
    }
    Rational(const Int& num, const Int& den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        v_ = Backend(num) / Backend(den);
    }
    explicit Rational(const Backend& b) : v_(b) {}

    static Rational parse(std::string_view s) {
        auto slash = s.find('/');
        try {
            if (slash == std::string_view::npos) return Rational(Int(std::string(s)));
            Int num{std::string(s.substr(0, slash))};
            Int den{std::string(s.substr(slash + 1))};
            return Rational(num, den);
        } catch (const std::runtime_error&) {
            throw std::invalid_argument("Rational: cannot parse '" + std::string(s) + "'");
        }
    }

    Int num() const { return boost::multiprecision::numerator(v_); }
    Int den() const { return boost::multiprecision::denominator(v_); }
    bool is_integer() const { return den() == 1; }
    bool is_zero() const { return v_.is_zero(); }
    int sign() const { return v_.sign(); }

    std::string str() const {
        if (is_integer()) return num().str();
        return num().str() + "/" + den().str();
    }

    Rational operator-() const { return Rational(Backend(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        if (a.v_ < b.v_) return std::strong_ordering::less;
        if (a.v_ > b.v_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend Rational abs(const Rational& a) { return a.sign() < 0 ? -a : a; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    Backend v_{};
};

inline Rational square(const Rational& a) { return a * a; }

} // namespace ldpkit
