#pragma once

// Finite-difference shooting oracle. Numerov's recursion for psi'' = (V - E) psi
// on a uniform grid, started from the parity condition at the origin (half
// line) or from a wall deep inside the repulsive barrier (full line). It
// shares nothing with the Whittaker construction except the bisection driver,
// so agreement between the two isolates special-function errors.
//
// Trial energies are classified the same way as in the bracketer: nodes on
// the grid plus the sign of the growing tail component psi' + k psi at the
// right end, which is the discrete counterpart of L(E).

#include "morsewell/bracketer.hpp"

#include <functional>
#include <vector>

namespace morsewell {

struct ShootingConfig {
    /// Right end of the grid; 0 selects 15/alpha + d (half line) or x* + 40/alpha (full line).
    double x_max = 0.0;
    double h_step = 1e-4;
    /// Eigenvalue tolerance in E.
    double match_tol = 1e-10;
    WellKind well = WellKind::symmetrized;
    /// Left wall of the full-line problem; 0 places it 40 decay lengths into the barrier.
    double x_left = 0.0;

    /// Throws PreconditionError unless h_step > 0 and match_tol > 0.
    void validate() const;
};

/// Sampled solution on x_i = x_0 + i h. When |psi| passes 1e150 all samples
/// are divided by that factor; `rescales` counts those events and
/// `log_scale` accumulates the logarithm of the removed factor.
struct Profile {
    double x0 = 0.0;
    double h = 0.0;
    std::vector<double> psi;
    std::vector<double> nodes;  // sign changes, linearly interpolated, in increasing x
    double dpsi_end = 0.0;      // psi' at the last sample (same scale as psi)
    int rescales = 0;
    double log_scale = 0.0;

    double x_end() const { return x0 + h * static_cast<double>(psi.size() - 1); }
    /// psi at x by four-point interpolation between grid samples.
    double at(double x) const;
    /// Nodes in (a, b].
    int nodes_in(double a, double b) const;
};

/// Numerov integration of psi'' = (V(x) - E) psi from the origin to x_max with
/// psi(0) = 1, psi'(0) = 0 (even) or psi(0) = 0, psi'(0) = 1 (odd). The first
/// step is taken with fine Runge-Kutta substeps, which keeps fourth order
/// when V has a kink at the origin.
Profile integrate_outward(const std::function<double(double)>& V, double E, Parity parity, double x_max, double h);

/// The same on the configured half-line potential (v_sym or v_single_well).
Profile integrate_outward(const MorseParams& p, double E, Parity parity, const ShootingConfig& cfg = {});

/// Full-line Morse problem from a Dirichlet wall at x_left to x_max.
Profile integrate_full_line(const MorseParams& p, double E, const ShootingConfig& cfg = {});

struct OracleLevel {
    double E = 0.0;
    double k = 0.0;
    EnergyBracket bracket;         // on k, certified by the oracle's own classification
    double E_half_step = 0.0;      // the same level recomputed with h/2
    double richardson_shift = 0.0; // |E_half_step - E|

    /// True when halving the step moved E by less than 10 match_tol.
    bool converged(const ShootingConfig& cfg) const { return richardson_shift < 10.0 * cfg.match_tol; }
};

/// Grid right end used for the half-line problem.
double half_line_x_max(const MorseParams& p, const ShootingConfig& cfg);

/// Level n of the parity sector of the half-line problem. Throws NoSuchLevel.
OracleLevel eigenvalue(const MorseParams& p, int n, Parity parity, const ShootingConfig& cfg = {});

/// Level n of the full-line Morse potential v_morse. Throws NoSuchLevel.
OracleLevel full_line_eigenvalue(const MorseParams& p, int n, const ShootingConfig& cfg = {});

/// Level n of a general potential on [x_left, x_right], with a Dirichlet wall
/// at x_left and the tail classified at x_right. The continuum threshold
/// must be 0 and v_min < 0 the lowest value of V. Put discontinuities of V
/// on grid points x_left + i h_step, with V there equal to the mean of the
/// one-sided limits.
OracleLevel full_line_eigenvalue(const std::function<double(double)>& V, double x_left, double x_right, double v_min,
                                 int n, const ShootingConfig& cfg = {});

/// The oracle's trial classification for the half-line problem, usable with bracket_k.
KProblem oracle_problem(const MorseParams& p, Parity parity, const ShootingConfig& cfg = {});

}  // namespace morsewell
