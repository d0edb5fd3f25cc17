#pragma once

#include "morsewell/detail/series.hpp"

namespace morsewell::detail {

/// Value and first derivative with relative error estimates.
template <class Real>
struct Evaluated {
    Real value;
    Real derivative;
    double rel_err = 0.0;
    double rel_err_derivative = 0.0;
    int terms = 0;
};

/// Relative error of p*A + q*B given relative errors of A and B.
template <class Real>
double combined_rel_err(const Real& pa, double ea, const Real& qb, double eb, const Real& result)
{
    using T = RealTraits<Real>;
    if (T::sign(result) == 0) return std::numeric_limits<double>::infinity();
    Real num = abs(pa) * ea + abs(qb) * eb + T::eps_times(Real((abs(pa) + abs(qb)) * 2.0), result);
    return T::to_double(num / abs(result));
}

/// M_{kappa,mu}(z) = e^{-z/2} z^{mu+1/2} M(mu-kappa+1/2, 1+2mu, z) and its z-derivative.
template <class Real>
Evaluated<Real> whittaker_m_series(const Real& kappa, const Real& mu, const Real& z, int max_terms, double rel_tol)
{
    using T = RealTraits<Real>;
    Real a = mu - kappa + 0.5;
    Real b = 2.0 * mu + 1.0;
    if (T::is_nonpositive_integer(b)) throw DomainError("whittaker_m: 1+2mu is a non-positive integer");
    auto s = kummer_series(a, b, z, max_terms, rel_tol);
    Real pref = exp(-z / 2.0) * pow(z, mu + 0.5);
    Real shift = (mu + 0.5) / z - 0.5;
    Real p = s.derivative;
    Real q = s.value * shift;
    Evaluated<Real> out{pref * s.value, pref * (p + q), s.rel_err + 4 * T::epsilon(z), 0.0, s.terms};
    out.rel_err_derivative = combined_rel_err(p, s.rel_err_derivative, q, s.rel_err, Real(p + q));
    return out;
}

/// f(t) = t^{-1/2} M_{kappa,mu}(t) = e^{-t/2} t^mu M(mu-kappa+1/2, 1+2mu, t), and df/dt.
template <class Real>
Evaluated<Real> reduced_whittaker_m(const Real& kappa, const Real& mu, const Real& t, int max_terms, double rel_tol)
{
    using T = RealTraits<Real>;
    Real a = mu - kappa + 0.5;
    Real b = 2.0 * mu + 1.0;
    if (T::is_nonpositive_integer(b)) throw DomainError("whittaker_m: 1+2mu is a non-positive integer");
    auto s = kummer_series(a, b, t, max_terms, rel_tol);
    Real pref = exp(-t / 2.0) * pow(t, mu);
    Real p = s.derivative;
    Real q = s.value * (mu / t - 0.5);
    Evaluated<Real> out{pref * s.value, pref * (p + q), s.rel_err + 4 * T::epsilon(t), 0.0, s.terms};
    out.rel_err_derivative = combined_rel_err(p, s.rel_err_derivative, q, s.rel_err, Real(p + q));
    return out;
}

/// W_{kappa,mu}(z) from the two M solutions; requires 2mu not an integer.
template <class Real>
Evaluated<Real> whittaker_w_connection(const Real& kappa, const Real& mu, const Real& z, int max_terms)
{
    using T = RealTraits<Real>;
    // The two terms cancel, so each is summed down to its rounding floor.
    auto mp = whittaker_m_series(kappa, mu, z, max_terms, 0.0);
    auto mm = whittaker_m_series(kappa, Real(-mu), z, max_terms, 0.0);
    Real c1 = tgamma(Real(-2.0 * mu)) * T::rgamma(Real(0.5 - mu - kappa));
    Real c2 = tgamma(Real(2.0 * mu)) * T::rgamma(Real(0.5 + mu - kappa));
    Real p = c1 * mp.value;
    Real q = c2 * mm.value;
    Real dp = c1 * mp.derivative;
    Real dq = c2 * mm.derivative;
    Evaluated<Real> out{p + q, dp + dq, 0.0, 0.0, mp.terms + mm.terms};
    out.rel_err = combined_rel_err(p, mp.rel_err, q, mm.rel_err, out.value);
    out.rel_err_derivative = combined_rel_err(dp, mp.rel_err_derivative, dq, mm.rel_err_derivative, out.derivative);
    return out;
}

}  // namespace morsewell::detail
