#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <string>

#include "qmetric/error.hpp"

namespace qmetric {

using bigint = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

inline constexpr double default_tolerance = 1e-9;

inline constexpr const char* version_string = "0.1.0";

// x^e without ever leaving exact arithmetic
inline rational pow_int(const rational& x, unsigned e) {
    using boost::multiprecision::pow;
    return rational(pow(numerator(x), e), pow(denominator(x), e));
}

// "p/q", or just "p" when the denominator is 1
inline std::string to_string(const rational& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1) {
        s += '/';
        s += denominator(q).str();
    }
    return s;
}

// shortest decimal that round-trips
inline std::string to_string(double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

inline double to_double(const rational& q) { return q.convert_to<double>(); }
inline double to_double(double x) { return x; }

template <class S>
struct numeric_policy;

// exact mode: comparisons are literal
template <>
struct numeric_policy<rational> {
    static constexpr bool exact = true;
    bool eq(const rational& a, const rational& b) const { return a == b; }
    bool leq(const rational& a, const rational& b) const { return a <= b; }
    bool geq(const rational& a, const rational& b) const { return a >= b; }
};

// float mode: comparisons carry an absolute tolerance
template <>
struct numeric_policy<double> {
    static constexpr bool exact = false;
    double tolerance = default_tolerance;
    bool eq(double a, double b) const { return std::fabs(a - b) <= tolerance; }
    bool leq(double a, double b) const { return a <= b + tolerance; }
    bool geq(double a, double b) const { return a + tolerance >= b; }
};

} // namespace qmetric
