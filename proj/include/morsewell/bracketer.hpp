#pragma once

// Two-sided energy brackets for the bound states of one parity sector.
//
// At a trial k the regular solution is classified by its node count c on the
// allowed region (up to a point beyond the outer turning point) and the sign
// s of its tail L. Beyond that point psi can cross zero at most once more,
// and does so exactly when s differs from the sign (-1)^c it carries there,
// so the number of sector levels below E = -k^2 is c + [s != (-1)^c]. A
// k-interval whose ends see n and n + 1 levels below contains exactly one
// eigenvalue, and L changes sign once inside it, so the remaining bisection
// only needs sign(L).

#include "morsewell/regular_solution.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace morsewell {

struct EnergyBracket {
    int level = 0;
    Parity parity = Parity::even;
    double k_lo = 0.0;
    double k_hi = 0.0;
    int nodes_lo = 0;  // node count at k_lo
    int nodes_hi = 0;  // node count at k_hi
    int sign_lo = 0;   // sign of the tail at k_lo
    int sign_hi = 0;
    int evaluations = 0;

    double E_lo() const { return -k_hi * k_hi; }
    double E_hi() const { return -k_lo * k_lo; }
    double k_mid() const { return 0.5 * (k_lo + k_hi); }
    double E_mid() const { return 0.5 * (E_lo() + E_hi()); }
    double width() const { return k_hi - k_lo; }
};

struct Classification {
    int nodes = 0;
    int sign = 0;  // 0 only for an unresolved exact hit
    /// Sector levels with energy below the trial energy.
    int levels_below() const { return nodes + ((sign != 0 && sign != ((nodes % 2 == 0) ? 1 : -1)) ? 1 : 0); }
};

/// A family of trial problems indexed by k, as seen by the bisection driver.
struct KProblem {
    /// Full classification at k.
    std::function<Classification(double)> classify;
    /// Tail sign only; may be cheaper than classify.
    std::function<int(double)> sign;
    /// Scan start, just below the top of the admissible k range.
    double k_top = 0.0;
    /// Smallest k examined; levels closer to the continuum are reported missing.
    double k_floor = 0.0;
};

/// Scan from k_top down by the factor 0.98 until level n is straddled, then
/// bisect. Seeds (k_lo, k_hi) replace the scan when they already straddle the level.
EnergyBracket bracket_k(const KProblem& problem, int n, double k_tol,
                        std::optional<std::pair<double, double>> seeds = std::nullopt);

/// Smallest k_tol accepted by the double-precision driver.
inline constexpr double kMinKTol = 1e-12;

/// Admissible k range (0, sqrt(-min V)) for the options' potential.
double k_ceiling(const MorseParams& p, const SolverOptions& opts = {});

/// Node count on (0, X] with X one decay length beyond the outer turning
/// point, and the certified sign of L. Throws PreconditionError unless
/// -k^2 lies in (min V, 0).
Classification classify(const MorseParams& p, double k, Parity parity, const SolverOptions& opts = {});

/// Sector problem for the options' potential, as used by bracket_level.
KProblem sector_problem(const MorseParams& p, Parity parity, const SolverOptions& opts = {});

/// Certified bracket of width <= k_tol for the n-th level of the sector.
/// Throws NoSuchLevel when the sector has fewer than n + 1 levels above
/// k_floor, PrecisionFloor when k_tol < 1e-12.
EnergyBracket bracket_level(const MorseParams& p, int n, Parity parity, double k_tol,
                            std::optional<double> k_seed_lo = std::nullopt,
                            std::optional<double> k_seed_hi = std::nullopt, const SolverOptions& opts = {});

struct SpectrumEntry {
    int global_index = 0;
    Parity parity = Parity::even;
    int sector_level = 0;
    std::optional<EnergyBracket> bracket;  // empty when the level does not exist
    /// False when the bracket still overlaps a neighbour's at the 1e-12 floor
    /// (near-degenerate pairs; see degeneracy_gap).
    bool separated = true;
};

/// Levels 0..n_max of the full spectrum. Even and odd levels alternate, so
/// level g is level g/2 of the sector with parity g % 2; missing levels keep
/// their slot with an empty bracket. Overlapping neighbours are refined until
/// disjoint or down to k_tol = 1e-12, after which they are flagged as not separated.
std::vector<SpectrumEntry> spectrum(const MorseParams& p, int n_max, double k_tol, const SolverOptions& opts = {});

struct DegeneracyGap {
    double gap = 0.0;          // |E_odd - E_even| from bracket midpoints
    double uncertainty = 0.0;  // sum of the two bracket widths in E
    EnergyBracket even;        // double-precision brackets before refinement
    EnergyBracket odd;
    unsigned digits = 0;       // working precision of the final refinement (0 if none was needed)
    int refinement_steps = 0;
};

/// Gap between the even and odd members of pair `pair_index`. When the double
/// brackets cannot resolve it, both are bisected further in extended
/// precision until they are disjoint and their widths sum to below 1e-3 of the gap.
DegeneracyGap degeneracy_gap(const MorseParams& p, int pair_index, double k_tol, const SolverOptions& opts = {});

}  // namespace morsewell
