#pragma once

// Regular solution of -psi'' + (V(x) + k^2) psi = 0 for the symmetrized Morse
// well (or its sign-flipped single well) at an arbitrary trial energy E = -k^2.
//
// On x > 0 the solution is c_decay f_+ + c_grow f_-, with f_+ decaying and
// f_- growing like e^{kx}; the coefficients follow from the parity condition
// at the origin (even: psi(0) = 1, psi'(0) = 0; odd: psi(0) = 0, psi'(0) = 1).
// c_grow is the tail functional L(E): it vanishes exactly at the sector's
// eigenvalues and its sign is the sign of psi(x) as x -> infinity.

#include "morsewell/detail/wave.hpp"
#include "morsewell/potentials.hpp"

#include <memory>
#include <vector>

namespace morsewell {

struct EnergyTrial {
    double k = 1.0;      // E = -k^2
    double kappa = 0.0;  // gamma1^2 / (alpha gamma2)
    double mu = 1.0;     // k / alpha

    double energy() const { return -k * k; }

    /// Throws PreconditionError unless k is positive and finite.
    static EnergyTrial from_k(const MorseParams& p, double k);
};

struct SolverOptions {
    WellKind well = WellKind::symmetrized;
    /// Largest admitted Whittaker coordinate at the origin, t0 = (2 gamma2/alpha) e^{alpha d}.
    double t_max = 200.0;
    /// Largest |x| accepted by RegularWave::eval; 0 selects 12/alpha.
    double x_render_max = 0.0;
    int n_grid = 2000;
    /// Minimum decimal digits of the internal arithmetic.
    unsigned working_precision = 34;

    double render_limit(const MorseParams& p) const { return x_render_max > 0.0 ? x_render_max : 12.0 / p.alpha; }
};

namespace detail {
struct WaveImpl;
}

class RegularWave {
public:
    struct Sample {
        double psi;
        double dpsi_dx;
    };

    const MorseParams& params() const { return params_; }
    /// The trial actually used; differs from the request only when 2mu was nudged off an integer.
    const EnergyTrial& trial() const { return trial_; }
    Parity parity() const { return parity_; }
    WellKind well() const { return well_; }
    double c_decay() const;
    double c_grow() const;
    bool nudged() const { return nudged_; }
    /// Decimal digits of the arithmetic the coefficients were computed in.
    unsigned digits() const;
    /// |W(0) - 2k| / 2k for the evaluated basis at the origin.
    double wronskian_deviation() const;

    /// psi and dpsi/dx at x, |x| <= render limit. Negative x uses the parity reflection.
    Sample eval(double x) const;

private:
    friend RegularWave build_regular(const MorseParams&, const EnergyTrial&, Parity, const SolverOptions&);
    friend std::vector<double> node_locations(const RegularWave&, double, int);

    Sample eval_unchecked(double x) const;

    MorseParams params_;
    EnergyTrial trial_;
    Parity parity_ = Parity::even;
    WellKind well_ = WellKind::symmetrized;
    bool nudged_ = false;
    double render_limit_ = 12.0;
    std::shared_ptr<const detail::WaveImpl> impl_;
};

/// t = (2 gamma2/alpha) e^{-alpha (x - d)} for x >= 0. Throws GuardError when
/// the origin value t0 exceeds opts.t_max.
double to_whittaker_coordinate(double x, const MorseParams& p, const SolverOptions& opts = {});

/// Potential the options refer to (v_sym or v_single_well).
double potential(double x, const MorseParams& p, WellKind well);
/// Minimum of that potential.
double potential_minimum(const MorseParams& p, WellKind well);
/// Outer turning point at E; beyond it the region is classically forbidden for good.
double outer_turning_point(const MorseParams& p, double E, WellKind well);

/// Fixes (c_decay, c_grow) from the origin conditions. Throws SingularSystem
/// when the evaluated basis Wronskian cannot be confirmed at any precision.
RegularWave build_regular(const MorseParams& p, const EnergyTrial& trial, Parity parity,
                          const SolverOptions& opts = {});

/// L(E) = c_grow of the regular solution.
double tail_functional(const MorseParams& p, const EnergyTrial& trial, Parity parity, const SolverOptions& opts = {});

struct TailSign {
    int sign = 0;          // 0 only when the value stays below its error bound at the precision cap
    double value = 0.0;    // L
    double abs_err = 0.0;  // error bound on L
    unsigned digits = 0;   // working precision that settled the sign
};

/// Sign of L with the working precision raised until |L| exceeds its error bound.
TailSign tail_sign(const MorseParams& p, double k, Parity parity, const SolverOptions& opts = {});

/// Interior zeros of psi on (0, x_max], each localized by bisection to width 1e-10 x_max.
/// Throws GridTooCoarse when a grid cell is wider than half the shortest local wavelength,
/// since two zeros could then hide in one cell.
std::vector<double> node_locations(const RegularWave& wave, double x_max, int n_grid);

/// Number of interior half-line nodes of psi on (0, x_max]; requires n_grid >= 200.
int node_count(const MorseParams& p, const EnergyTrial& trial, Parity parity, double x_max, int n_grid,
               const SolverOptions& opts = {});

/// Digits needed to absorb the cancellation of the basis series at t0.
unsigned wave_digits(const MorseParams& p, const SolverOptions& opts);

}  // namespace morsewell
