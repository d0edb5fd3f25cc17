#include "morsewell/specfun.hpp"

#include "morsewell/detail/whittaker.hpp"
#include "morsewell/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace morsewell {

using detail::Quad;

namespace {

constexpr unsigned kMaxDigits = 5000;

struct Attempt {
    double value = 0.0;
    double rel_err = 0.0;
    int terms = 0;
};

// Runs `fn` in binary128 when the requested digits allow it, otherwise in MPFR,
// raising the precision until the reported error meets acc.rel_tol.
template <class Fn>
SpecialValue escalate(const Accuracy& acc, const char* what, Fn&& fn)
{
    acc.validate();
    unsigned digits = acc.working_precision;
    double last_err = 0.0;
    while (digits <= kMaxDigits) {
        Attempt r = digits <= detail::kQuadDigits ? fn.template operator()<Quad>(digits)
                                                  : fn.template operator()<BigFloat>(digits);
        if (r.rel_err <= acc.rel_tol && std::isfinite(r.value))
            return SpecialValue{r.value, r.rel_err, digits, r.terms};
        last_err = r.rel_err;
        double lost = std::isfinite(r.rel_err) && r.rel_err > 0 ? std::log10(r.rel_err / acc.rel_tol) + 6.0
                                                                 : static_cast<double>(digits);
        unsigned next = digits + static_cast<unsigned>(std::ceil(std::max(lost, 8.0)));
        digits = std::max(next, digits + digits / 2);
    }
    throw ConvergenceError(std::string(what) + ": accuracy not reached (last relative error estimate " +
                           std::to_string(last_err) + ")");
}

template <class Real>
Real make(double x, unsigned digits)
{
    return detail::RealTraits<Real>::make(x, digits);
}

void require_positive(double z, const char* what)
{
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError(std::string(what) + ": z must be positive and finite");
}

bool degenerate_w_in_range(double kappa, double mu, double z)
{
    return z <= 200.0 && std::abs(kappa) <= 50.0 && std::abs(mu) <= 50.0;
}

// Symmetric-limit evaluation of W (or dW/dz) at a degenerate index. W is even
// in mu, so averaging mu +- delta cancels the odd terms; one Richardson step
// removes the delta^2 term.
double w_degenerate(double kappa, double mu, double z, const Accuracy& acc, bool derivative)
{
    if (!degenerate_w_in_range(kappa, mu, z))
        throw NotImplementedFallback("whittaker_w: integral 2mu outside validated range (z <= 200, |kappa|,|mu| <= 50)");
    auto avg = [&](double delta) {
        auto one = [&](double m) {
            return derivative ? whittaker_w_dz(kappa, m, z, acc) : whittaker_w(kappa, m, z, acc);
        };
        return 0.5 * (one(mu + delta) + one(mu - delta));
    };
    const double delta = 1e-5;
    return (4.0 * avg(delta / 2) - avg(delta)) / 3.0;
}

}  // namespace

void Accuracy::validate() const
{
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw DomainError("Accuracy: rel_tol must lie in (0, 1)");
    if (max_terms < 10) throw DomainError("Accuracy: max_terms must be at least 10");
    if (working_precision < 16) throw DomainError("Accuracy: working_precision must be at least 16 digits");
}

bool is_degenerate_index(double mu, double tol)
{
    double two_mu = 2.0 * mu;
    return std::abs(two_mu - std::round(two_mu)) < tol;
}

double nudge_index(double mu)
{
    // Land 2e-12 above the nearest half-integer so the result is outside the
    // default 1e-12 detection band.
    double n = std::round(2.0 * mu);
    return 0.5 * n + 2e-12 * std::max(1.0, std::abs(mu));
}

SpecialValue kummer_m_eval(double a, double b, double z, const Accuracy& acc)
{
    if (!std::isfinite(z)) throw DomainError("kummer_m: z must be finite");
    return escalate(acc, "kummer_m", [&]<class Real>(unsigned digits) {
        auto s = detail::kummer_series(make<Real>(a, digits), make<Real>(b, digits), make<Real>(z, digits),
                                       acc.max_terms, acc.rel_tol);
        return Attempt{static_cast<double>(s.value), s.rel_err, s.terms};
    });
}

double kummer_m(double a, double b, double z, const Accuracy& acc)
{
    return kummer_m_eval(a, b, z, acc).value;
}

double kummer_m_dz(double a, double b, double z, const Accuracy& acc)
{
    if (!std::isfinite(z)) throw DomainError("kummer_m_dz: z must be finite");
    return escalate(acc, "kummer_m_dz", [&]<class Real>(unsigned digits) {
               auto s = detail::kummer_series(make<Real>(a, digits), make<Real>(b, digits),
                                              make<Real>(z, digits), acc.max_terms, acc.rel_tol);
               return Attempt{static_cast<double>(s.derivative), s.rel_err_derivative, s.terms};
           })
        .value;
}

SpecialValue whittaker_m_eval(double kappa, double mu, double z, const Accuracy& acc)
{
    require_positive(z, "whittaker_m");
    return escalate(acc, "whittaker_m", [&]<class Real>(unsigned digits) {
        auto s = detail::whittaker_m_series(make<Real>(kappa, digits), make<Real>(mu, digits),
                                            make<Real>(z, digits), acc.max_terms, acc.rel_tol);
        return Attempt{static_cast<double>(s.value), s.rel_err, s.terms};
    });
}

double whittaker_m(double kappa, double mu, double z, const Accuracy& acc)
{
    return whittaker_m_eval(kappa, mu, z, acc).value;
}

double whittaker_m_dz(double kappa, double mu, double z, const Accuracy& acc)
{
    require_positive(z, "whittaker_m_dz");
    return escalate(acc, "whittaker_m_dz", [&]<class Real>(unsigned digits) {
               auto s = detail::whittaker_m_series(make<Real>(kappa, digits), make<Real>(mu, digits),
                                                   make<Real>(z, digits), acc.max_terms, acc.rel_tol);
               return Attempt{static_cast<double>(s.derivative), s.rel_err_derivative, s.terms};
           })
        .value;
}

SpecialValue whittaker_w_eval(double kappa, double mu, double z, const Accuracy& acc)
{
    require_positive(z, "whittaker_w");
    if (is_degenerate_index(mu)) {
        acc.validate();
        return SpecialValue{w_degenerate(kappa, mu, z, acc, false), acc.rel_tol, 0, 0};
    }
    return escalate(acc, "whittaker_w", [&]<class Real>(unsigned digits) {
        auto s = detail::whittaker_w_connection(make<Real>(kappa, digits), make<Real>(mu, digits),
                                                make<Real>(z, digits), acc.max_terms);
        return Attempt{static_cast<double>(s.value), s.rel_err, s.terms};
    });
}

double whittaker_w(double kappa, double mu, double z, const Accuracy& acc)
{
    return whittaker_w_eval(kappa, mu, z, acc).value;
}

double whittaker_w_dz(double kappa, double mu, double z, const Accuracy& acc)
{
    require_positive(z, "whittaker_w_dz");
    if (is_degenerate_index(mu)) return w_degenerate(kappa, mu, z, acc, true);
    return escalate(acc, "whittaker_w_dz", [&]<class Real>(unsigned digits) {
               auto s = detail::whittaker_w_connection(make<Real>(kappa, digits), make<Real>(mu, digits),
                                                       make<Real>(z, digits), acc.max_terms);
               return Attempt{static_cast<double>(s.derivative), s.rel_err_derivative, s.terms};
           })
        .value;
}

}  // namespace morsewell
