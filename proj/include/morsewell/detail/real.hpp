#pragma once

// Uniform access to the two extended-precision types used internally:
// binary128 (`Quad`, fixed 113-bit significand) for the common case and
// `BigFloat` (MPFR, runtime precision) when more digits are needed.

#include "morsewell/bigfloat.hpp"

#include <boost/multiprecision/float128.hpp>

#include <cmath>
#include <limits>

namespace morsewell::detail {

using Quad = boost::multiprecision::float128;

// Unqualified math calls in templates resolve to these for double and to the
// ADL overloads for Quad and BigFloat.
using std::abs;
using std::cos;
using std::exp;
using std::floor;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;
using std::tgamma;

/// Largest decimal precision served by `Quad`.
inline constexpr unsigned kQuadDigits = 34;

template <class Real>
struct RealTraits;

template <>
struct RealTraits<double> {
    static double make(double x, unsigned /*digits10*/) { return x; }
    static double like(double x, double) { return x; }
    static double epsilon(double) { return std::ldexp(1.0, -52); }
    /// v times the unit roundoff, in the working type.
    static double eps_times(double v, double) { return v * std::ldexp(1.0, -52); }
    static double to_double(double x) { return x; }
    static int sign(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }
    static bool is_finite(double x) { return std::isfinite(x); }
    static bool is_nonpositive_integer(double x) { return x <= 0 && std::floor(x) == x; }
    static double log10_abs(double x) { return std::log10(std::abs(x)); }
    static double rgamma(double x)
    {
        if (is_nonpositive_integer(x)) return 0.0;
        return 1.0 / std::tgamma(x);
    }
};

template <>
struct RealTraits<Quad> {
    static Quad make(double x, unsigned /*digits10*/) { return Quad(x); }
    static Quad like(double x, const Quad&) { return Quad(x); }
    static double epsilon(const Quad&) { return std::ldexp(1.0, -112); }
    static Quad eps_times(const Quad& v, const Quad&) { return v * std::ldexp(1.0, -112); }
    static double to_double(const Quad& x) { return static_cast<double>(x); }
    static int sign(const Quad& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }
    static bool is_finite(const Quad& x) { return boost::multiprecision::isfinite(x); }
    static bool is_nonpositive_integer(const Quad& x) { return x <= 0 && floor(x) == x; }
    /// log10 |x|, finite for nonzero x even outside double range.
    static double log10_abs(const Quad& x)
    {
        return x == 0 ? -std::numeric_limits<double>::infinity()
                      : static_cast<double>(log(abs(x))) / 2.302585092994046;
    }
    /// 1/Gamma(x), zero at the poles of Gamma.
    static Quad rgamma(const Quad& x)
    {
        if (is_nonpositive_integer(x)) return Quad(0);
        return 1 / tgamma(x);
    }
};

template <>
struct RealTraits<BigFloat> {
    static BigFloat make(double x, unsigned digits10) { return BigFloat(x, digits10); }
    static BigFloat like(double x, const BigFloat& ref)
    {
        BigFloat r = BigFloat::with_bits(ref.bits());
        r += x;
        return r;
    }
    static double epsilon(const BigFloat& x) { return x.epsilon(); }
    static BigFloat eps_times(const BigFloat& v, const BigFloat& ref) { return v * ref.epsilon_value(); }
    static double to_double(const BigFloat& x) { return static_cast<double>(x); }
    static int sign(const BigFloat& x) { return x.sign(); }
    static bool is_finite(const BigFloat& x) { return x.is_finite(); }
    static bool is_nonpositive_integer(const BigFloat& x) { return x.sign() <= 0 && x.is_integer(); }
    static double log10_abs(const BigFloat& x)
    {
        if (x.is_zero()) return -std::numeric_limits<double>::infinity();
        return static_cast<double>(log(abs(x))) / 2.302585092994046;
    }
    static BigFloat rgamma(const BigFloat& x)
    {
        if (is_nonpositive_integer(x)) return like(0.0, x);
        return 1.0 / tgamma(x);
    }
};

/// Calls fn.template operator()<Real>(digits) with Quad when it carries enough
/// digits and BigFloat otherwise.
template <class Fn>
decltype(auto) with_precision(unsigned digits, Fn&& fn)
{
    if (digits <= kQuadDigits) return fn.template operator()<Quad>(digits);
    return fn.template operator()<BigFloat>(digits);
}

/// Minimal complex number over an extended real type.
template <class Real>
struct Complex {
    Real re;
    Real im;

    friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
    friend Complex operator*(const Complex& a, const Complex& b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator*(const Complex& a, const Real& s) { return {a.re * s, a.im * s}; }
    friend Complex operator/(const Complex& a, const Real& s) { return {a.re / s, a.im / s}; }
    friend Complex operator/(const Complex& a, const Complex& b)
    {
        Real den = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
    }
    Real norm1() const { return abs(re) + abs(im); }
};

}  // namespace morsewell::detail
