#pragma once

// Confluent hypergeometric and Whittaker functions for real arguments.
//
// Every value is computed by direct series summation in an extended working
// precision. When the running error estimate misses Accuracy::rel_tol the
// evaluation is repeated with more digits, so callers receive either a value
// meeting the requested tolerance or an exception.

namespace morsewell {

struct Accuracy {
    double rel_tol = 1e-14;
    int max_terms = 10000;
    /// Decimal digits used for the first attempt; 34 selects binary128.
    unsigned working_precision = 34;

    /// Throws DomainError unless 0 < rel_tol < 1, max_terms >= 10 and working_precision >= 16.
    void validate() const;
};

/// Outcome of a special-function evaluation, for diagnostics.
struct SpecialValue {
    double value = 0.0;
    double rel_err = 0.0;      // estimated relative error of `value` before rounding to double
    unsigned digits_used = 0;  // working precision of the accepted attempt
    int terms = 0;             // series terms summed in the accepted attempt
};

/// Kummer's function M(a, b, z) = sum (a)_n z^n / ((b)_n n!).
double kummer_m(double a, double b, double z, const Accuracy& acc = {});
/// dM(a, b, z)/dz = (a/b) M(a+1, b+1, z).
double kummer_m_dz(double a, double b, double z, const Accuracy& acc = {});
SpecialValue kummer_m_eval(double a, double b, double z, const Accuracy& acc = {});

/// M_{kappa,mu}(z) = e^{-z/2} z^{mu+1/2} M(mu-kappa+1/2, 1+2mu, z) for z > 0.
double whittaker_m(double kappa, double mu, double z, const Accuracy& acc = {});
double whittaker_m_dz(double kappa, double mu, double z, const Accuracy& acc = {});
SpecialValue whittaker_m_eval(double kappa, double mu, double z, const Accuracy& acc = {});

/// W_{kappa,mu}(z), the solution recessive as z -> infinity, for z > 0.
///
/// Uses the connection formula with M_{kappa,+-mu}. When 2mu is within 1e-12
/// of an integer the value is taken as a Richardson-extrapolated symmetric
/// limit in mu; that path is validated for z <= 200 and |kappa|, |mu| <= 50
/// and throws NotImplementedFallback outside it.
double whittaker_w(double kappa, double mu, double z, const Accuracy& acc = {});
double whittaker_w_dz(double kappa, double mu, double z, const Accuracy& acc = {});
SpecialValue whittaker_w_eval(double kappa, double mu, double z, const Accuracy& acc = {});

/// True when 2mu is within `tol` of an integer, where M_{kappa,-mu} degenerates.
bool is_degenerate_index(double mu, double tol = 1e-12);
/// mu moved just outside the default detection band: n/2 + 2e-12 max(1, |mu|).
double nudge_index(double mu);

}  // namespace morsewell
