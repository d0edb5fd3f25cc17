#pragma once

// Taylor summation of Kummer's confluent hypergeometric function in an
// extended-precision type, with a rigorous truncation bound and a running
// rounding-error estimate. Shared by the special-function API and the
// regular-solution builder.

#include "morsewell/detail/real.hpp"
#include "morsewell/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace morsewell::detail {

template <class Real>
struct KummerSum {
    Real value;        // M(a, b, z)
    Real derivative;   // dM/dz
    double rel_err = 0.0;
    double rel_err_derivative = 0.0;
    int terms = 0;
};

/// Sums M(a,b,z) and dM/dz = sum n t_n / z in one pass.
///
/// Stops once the first-neglected-term bound on the tail drops below
/// max(0.01 * rel_tol * |sum|, eps * sum|t_n|); the returned rel_err combines
/// that tail with the accumulated rounding estimate.
template <class Real>
KummerSum<Real> kummer_series(const Real& a, const Real& b, const Real& z, int max_terms, double rel_tol)
{
    using T = RealTraits<Real>;
    const double eps = T::epsilon(a);
    const double za = std::abs(T::to_double(z));
    const double ab = std::abs(T::to_double(a) - T::to_double(b));

    Real term = T::like(1.0, a);
    Real sum = term;
    Real abs_sum = term;
    Real dsum = T::like(0.0, a);
    Real dabs = T::like(0.0, a);
    Real tail = T::like(0.0, a);
    Real dtail = T::like(0.0, a);

    int m = 0;  // index of the last term added
    bool done = false;
    while (!done) {
        if (m >= max_terms)
            throw ConvergenceError("kummer_m: series did not converge within " + std::to_string(max_terms) + " terms");
        Real an = a + static_cast<double>(m);
        if (T::sign(an) == 0) {  // polynomial case: every later term vanishes
            tail = T::like(0.0, a);
            dtail = T::like(0.0, a);
            break;
        }
        Real bn = b + static_cast<double>(m);
        if (T::sign(bn) == 0) throw DomainError("kummer_m: b is a non-positive integer reached before termination");
        term *= an * z / (bn * static_cast<double>(m + 1));
        ++m;
        sum += term;
        Real at = abs(term);
        abs_sum += at;
        dsum += term * static_cast<double>(m);
        dabs += at * static_cast<double>(m);

        const double bm = T::to_double(b) + m;
        if (bm <= 0.0) continue;
        const double rho = za * (1.0 + ab / bm) / (m + 1);
        const double rho_d = rho * (m + 1.0) / m;
        if (rho_d >= 1.0) continue;
        tail = at * (rho / (1.0 - rho));
        dtail = at * (m * rho_d / (1.0 - rho_d));
        Real floor_v = T::eps_times(abs_sum, a);
        Real floor_d = T::eps_times(dabs, a);
        Real target_v = abs(sum) * (0.01 * rel_tol);
        Real target_d = abs(dsum) * (0.01 * rel_tol);
        done = (tail <= target_v || tail <= floor_v) && (dtail <= target_d || dtail <= floor_d);
        if (T::sign(term) == 0) done = true;
    }

    KummerSum<Real> out{sum, T::like(0.0, a), 0.0, 0.0, m};
    const double round_factor = 5.0 * m + 4.0;
    auto relative = [&](const Real& err_abs, const Real& val) {
        if (T::sign(val) == 0) return std::numeric_limits<double>::infinity();
        return T::to_double(err_abs / abs(val));
    };
    out.rel_err = relative(T::eps_times(abs_sum * round_factor, a) + tail, sum);
    if (T::sign(z) == 0) {
        out.derivative = a / b;
        out.rel_err_derivative = 2 * eps;
    } else {
        out.derivative = dsum / z;
        out.rel_err_derivative = T::sign(dsum) == 0 && T::sign(dabs) == 0 ? 0.0 : relative(T::eps_times(dabs * round_factor, a) + dtail, dsum);
    }
    return out;
}

template <class Real>
struct ComplexKummerSum {
    Complex<Real> value;
    Complex<Real> derivative;
    Real abs_sum;   // sum |t_n|
    Real dabs_sum;  // sum n |t_n| / |z|
    Real err;       // absolute error bound on value (1-norm)
    Real derr;      // absolute error bound on derivative
    int terms = 0;
};

/// M(a, b, z) for complex a and z and real b, with absolute error bounds.
template <class Real>
ComplexKummerSum<Real> complex_kummer_series(const Complex<Real>& a, const Real& b, const Complex<Real>& z,
                                             int max_terms, double rel_tol)
{
    using T = RealTraits<Real>;
    using C = Complex<Real>;
    const Real& ref = b;
    const double za = T::to_double(sqrt(z.re * z.re + z.im * z.im));
    const double ab = std::hypot(T::to_double(a.re) - T::to_double(b), T::to_double(a.im));

    C term{T::like(1.0, ref), T::like(0.0, ref)};
    C sum = term;
    C dsum{T::like(0.0, ref), T::like(0.0, ref)};
    Real abs_sum = T::like(1.0, ref);
    Real dabs = T::like(0.0, ref);
    Real tail = T::like(0.0, ref);
    Real dtail = T::like(0.0, ref);
    int m = 0;
    for (;;) {
        if (m >= max_terms) throw ConvergenceError("complex kummer: series did not converge");
        C an{a.re + static_cast<double>(m), a.im};
        Real bn = b + static_cast<double>(m);
        if (T::sign(bn) == 0) throw DomainError("complex kummer: b is a non-positive integer");
        term = term * an * z / (bn * static_cast<double>(m + 1));
        ++m;
        sum = sum + term;
        dsum = dsum + term * T::like(static_cast<double>(m), ref);
        Real at = term.norm1();
        abs_sum += at;
        dabs += at * static_cast<double>(m);
        const double bm = T::to_double(b) + m;
        if (bm <= 0.0) continue;
        const double rho = za * (1.0 + ab / bm) / (m + 1);
        const double rho_d = rho * (m + 1.0) / m;
        if (rho_d >= 1.0) continue;
        tail = at * (rho / (1.0 - rho));
        dtail = at * (m * rho_d / (1.0 - rho_d));
        const bool ok_v = tail <= sum.norm1() * (0.01 * rel_tol) || tail <= T::eps_times(abs_sum, ref);
        const bool ok_d = dtail <= dsum.norm1() * (0.01 * rel_tol) || dtail <= T::eps_times(dabs, ref);
        if (ok_v && ok_d) break;
    }
    const double round_factor = 8.0 * m + 4.0;
    Real zabs = sqrt(z.re * z.re + z.im * z.im);
    return ComplexKummerSum<Real>{sum,
                                  dsum / z,
                                  abs_sum,
                                  dabs / zabs,
                                  T::eps_times(abs_sum * round_factor, ref) + tail,
                                  (T::eps_times(dabs * round_factor, ref) + dtail) / zabs,
                                  m};
}

}  // namespace morsewell::detail
