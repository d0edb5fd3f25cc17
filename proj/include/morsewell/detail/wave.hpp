#pragma once

// Whittaker-basis solutions of -psi'' + (V(x) - E) psi = 0 on x > 0 for the
// shifted Morse branch (symmetrized well) and its sign-flipped partner
// (single well), evaluated in an extended working precision.
//
// Symmetrized well: t = tau exp(-alpha (x - d)), tau = 2 gamma2 / alpha and
// psi = t^{-1/2} w(t) turn the equation into Whittaker's with kappa =
// gamma1^2/(alpha gamma2), mu = k/alpha. The basis is
//     f_{+-}(x) = e^{-t/2} t^{+-mu} M(+-mu - kappa + 1/2, 1 +- 2mu, t),
// where f_+ decays like e^{-kx} and f_- grows like e^{kx}.
//
// Single well: the same substitution gives Whittaker's equation in z = i t
// with index i kappa. The real solutions are
//     f_{+-}(x) = t^{+-mu} Re[e^{-it/2} M(1/2 +- mu - i kappa, 1 +- 2mu, i t)]
// (the bracket is real by Kummer's transformation).
//
// In both cases the x-Wronskian f_+ f_-' - f_- f_+' equals 2k.

#include "morsewell/detail/series.hpp"
#include "morsewell/detail/whittaker.hpp"
#include "morsewell/potentials.hpp"

namespace morsewell {

enum class Parity { even, odd };
enum class WellKind { symmetrized, single_well };

namespace detail {

inline constexpr int kWaveMaxTerms = 200000;

template <class Real>
struct BasisValue {
    Real f;
    Real dfdx;
    Real err_f;   // absolute error bounds
    Real err_df;
};

/// Potential parameters carried in the working precision.
template <class Real>
struct MorseChart {
    Real alpha;
    Real shift;
    Real tau;    // 2 gamma2 / alpha
    Real kappa;  // gamma1^2 / (alpha gamma2)
    WellKind kind = WellKind::symmetrized;

    static MorseChart make(const MorseParams& p, WellKind kind, unsigned digits)
    {
        using T = RealTraits<Real>;
        Real a = T::make(p.alpha, digits);
        Real g1 = T::make(p.gamma1, digits);
        Real g2 = T::make(p.gamma2, digits);
        return MorseChart{a, T::make(p.shift, digits), 2.0 * g2 / a, g1 * g1 / (a * g2), kind};
    }

    Real coordinate(const Real& x) const { return tau * exp(alpha * (shift - x)); }
    Real origin_coordinate() const { return tau * exp(alpha * shift); }
};

/// Basis member with index `mu` (pass -mu for the growing member) at coordinate t.
template <class Real>
BasisValue<Real> morse_basis(const MorseChart<Real>& c, const Real& mu, const Real& t)
{
    using T = RealTraits<Real>;
    if (c.kind == WellKind::symmetrized) {
        auto r = reduced_whittaker_m(c.kappa, mu, t, kWaveMaxTerms, 0.0);
        Real dfdx = -c.alpha * t * r.derivative;
        return {r.value, dfdx, abs(r.value) * r.rel_err, abs(dfdx) * r.rel_err_derivative};
    }
    Complex<Real> a{mu + 0.5, -c.kappa};
    Real b = 2.0 * mu + 1.0;
    Complex<Real> z{T::like(0.0, t), t};
    auto s = complex_kummer_series(a, b, z, kWaveMaxTerms, 0.0);
    Complex<Real> phase{cos(t / 2.0), -sin(t / 2.0)};
    Complex<Real> g = phase * s.value;
    Complex<Real> h = s.derivative - s.value * T::like(0.5, t);
    Complex<Real> gp = phase * Complex<Real>{-h.im, h.re};  // d/dt of e^{-it/2} M(i t)
    Real tm = pow(t, mu);
    Real f = tm * g.re;
    Real dfdt = tm * (mu / t * g.re + gp.re);
    Real err_f = tm * s.err;
    Real err_dfdt = tm * (abs(mu / t) * s.err + s.derr + s.err / 2.0);
    Real scale = c.alpha * t;
    return {f, -scale * dfdt, err_f, scale * err_dfdt};
}

template <class Real>
struct TailValue {
    Real value;
    Real err;  // absolute error bound
};

/// Coefficient of the growing member in the regular solution with the
/// parity's origin normalization: even -f_+'(0)/(2k), odd f_+(0)/(2k).
template <class Real>
TailValue<Real> tail_value(const MorseChart<Real>& c, const Real& k, Parity parity)
{
    Real mu = k / c.alpha;
    auto b = morse_basis(c, mu, c.origin_coordinate());
    Real two_k = 2.0 * k;
    if (parity == Parity::even) return {-b.dfdx / two_k, b.err_df / two_k};
    return {b.f / two_k, b.err_f / two_k};
}

/// Regular solution in working precision.
template <class Real>
struct WaveCore {
    MorseChart<Real> chart;
    Real k;
    Real mu;
    Parity parity = Parity::even;
    Real c_decay;
    Real c_grow;
    Real err_decay;
    Real err_grow;
    double wronskian_rel_dev = 0.0;  // |W(0) - 2k| / 2k from the evaluated basis

    struct Sample {
        Real psi;
        Real dpsi;
    };

    Sample at(const Real& x) const
    {
        Real t = chart.coordinate(x);
        auto b1 = morse_basis(chart, mu, t);
        auto b2 = morse_basis(chart, Real(-mu), t);
        return {c_decay * b1.f + c_grow * b2.f, c_decay * b1.dfdx + c_grow * b2.dfdx};
    }

    struct Bounded {
        Real psi;
        Real err;
    };

    /// psi(x) with an absolute error bound covering the basis series, the
    /// coefficients and the final combination.
    Bounded psi_bounded(const Real& x) const
    {
        Real t = chart.coordinate(x);
        auto b1 = morse_basis(chart, mu, t);
        auto b2 = morse_basis(chart, Real(-mu), t);
        Real p1 = c_decay * b1.f;
        Real p2 = c_grow * b2.f;
        Real err = abs(c_decay) * b1.err_f + abs(c_grow) * b2.err_f + err_decay * abs(b1.f) + err_grow * abs(b2.f) +
                   RealTraits<Real>::eps_times(Real((abs(p1) + abs(p2)) * 4.0), t);
        return {p1 + p2, err};
    }
};

/// The same wave carried in double precision, for fast screening.
template <class Real>
WaveCore<double> to_double_core(const WaveCore<Real>& w)
{
    using T = RealTraits<Real>;
    const double eps = std::ldexp(1.0, -52);
    auto d = [](const Real& x) { return T::to_double(x); };
    WaveCore<double> out;
    out.chart = MorseChart<double>{d(w.chart.alpha), d(w.chart.shift), d(w.chart.tau), d(w.chart.kappa), w.chart.kind};
    out.k = d(w.k);
    out.mu = d(w.mu);
    out.parity = w.parity;
    out.c_decay = d(w.c_decay);
    out.c_grow = d(w.c_grow);
    out.err_decay = d(w.err_decay) + eps * std::abs(out.c_decay);
    out.err_grow = d(w.err_grow) + eps * std::abs(out.c_grow);
    out.wronskian_rel_dev = w.wronskian_rel_dev;
    return out;
}

/// Solves the origin conditions for (c_decay, c_grow) using the exact
/// Wronskian 2k; the numerically evaluated Wronskian is kept as a diagnostic.
template <class Real>
WaveCore<Real> build_core(const MorseChart<Real>& chart, const Real& k, Parity parity)
{
    using T = RealTraits<Real>;
    Real mu = k / chart.alpha;
    Real t0 = chart.origin_coordinate();
    auto f1 = morse_basis(chart, mu, t0);
    auto f2 = morse_basis(chart, Real(-mu), t0);
    Real two_k = 2.0 * k;
    WaveCore<Real> w{chart, k, mu, parity, T::like(0.0, k), T::like(0.0, k), T::like(0.0, k), T::like(0.0, k)};
    if (parity == Parity::even) {
        // psi(0) = 1, psi'(0) = 0
        w.c_decay = f2.dfdx / two_k;
        w.c_grow = -f1.dfdx / two_k;
        w.err_decay = f2.err_df / two_k;
        w.err_grow = f1.err_df / two_k;
    } else {
        // psi(0) = 0, psi'(0) = 1
        w.c_decay = -f2.f / two_k;
        w.c_grow = f1.f / two_k;
        w.err_decay = f2.err_f / two_k;
        w.err_grow = f1.err_f / two_k;
    }
    Real wr = f1.f * f2.dfdx - f2.f * f1.dfdx;
    w.wronskian_rel_dev = T::to_double(abs(wr - two_k) / two_k);
    return w;
}

}  // namespace detail
}  // namespace morsewell
