#pragma once

// Morse potential, its even (left-right symmetrized) extension and the
// sign-flipped single well. Units are hbar = 2m = 1, so the kinetic term of
// the Schroedinger equation is -psi''.

#include <vector>

namespace morsewell {

struct MorseParams {
    double alpha = 1.0;   // decay rate, > 0
    double gamma1 = 1.0;  // V contains -2 gamma1^2 exp(-alpha x)
    double gamma2 = 1.0;  // V contains +gamma2^2 exp(-2 alpha x), > 0
    double shift = 0.0;   // d, the symmetrization shift

    /// gamma1 = gamma2 = gamma, the two-parameter form used throughout the figures.
    static MorseParams symmetric(double alpha, double gamma, double shift = 0.0)
    {
        return MorseParams{alpha, gamma, gamma, shift};
    }

    /// Throws PreconditionError unless alpha > 0, gamma2 > 0 and all fields are finite.
    void validate() const;

    /// kappa = gamma1^2 / (alpha gamma2).
    double kappa() const { return gamma1 * gamma1 / (alpha * gamma2); }

    bool operator==(const MorseParams&) const = default;
};

/// V(x) = -2 gamma1^2 e^{-alpha x} + gamma2^2 e^{-2 alpha x}. Returns +infinity
/// and sets *overflow when the repulsive term exceeds double range.
double v_morse(double x, const MorseParams& p, bool* overflow = nullptr);

/// Even extension v_morse(|x| - d).
double v_sym(double x, const MorseParams& p);

/// -v_sym(x): a well at the origin flanked by two barriers.
double v_single_well(double x, const MorseParams& p);

struct Extremum {
    double x;
    double value;
};

/// Minimum of v_morse on the full line: x* = ln(gamma2^2/gamma1^2)/alpha, V* = -gamma1^4/gamma2^2.
/// Requires gamma1 != 0.
Extremum morse_minimum(const MorseParams& p);

/// Minimum of v_sym over x >= 0 (at x* + d when that is non-negative, else at the origin).
Extremum sym_minimum(const MorseParams& p);

/// Minimum of v_single_well, always at the origin; its value is -v_morse(-d).
Extremum single_well_minimum(const MorseParams& p);

/// Outer classical turning point x > 0 of v_sym at energy E in (min v_sym, 0).
double sym_outer_turning_point(const MorseParams& p, double E);

/// Inner turning point of v_sym at energy E: the edge of the central barrier,
/// or 0 when E >= v_sym(0) and no barrier region exists.
double sym_inner_turning_point(const MorseParams& p, double E);

/// Turning point x > 0 of v_single_well at energy E in (v_single_well(0), 0).
double single_well_turning_point(const MorseParams& p, double E);

/// Bound-state energies of v_morse on the full line,
/// E_n = -(gamma1^2/gamma2 - alpha (n + 1/2))^2 for n + 1/2 < gamma1^2/(alpha gamma2).
/// Empty when no level exists.
std::vector<double> exact_full_line_morse_spectrum(const MorseParams& p);

}  // namespace morsewell
