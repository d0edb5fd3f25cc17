#include "morsewell/potentials.hpp"

#include "morsewell/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace morsewell {

void MorseParams::validate() const
{
    if (!std::isfinite(alpha) || !std::isfinite(gamma1) || !std::isfinite(gamma2) || !std::isfinite(shift))
        throw PreconditionError("MorseParams: parameters must be finite");
    if (!(alpha > 0.0)) throw PreconditionError("MorseParams: alpha must be positive");
    if (!(gamma2 > 0.0)) throw PreconditionError("MorseParams: gamma2 must be positive");
}

double v_morse(double x, const MorseParams& p, bool* overflow)
{
    if (overflow) *overflow = false;
    const double u = std::exp(-p.alpha * x);
    const double rep = p.gamma2 * p.gamma2 * u * u;
    if (!std::isfinite(rep)) {
        if (overflow) *overflow = true;
        return std::numeric_limits<double>::infinity();
    }
    return -2.0 * p.gamma1 * p.gamma1 * u + rep;
}

double v_sym(double x, const MorseParams& p)
{
    return v_morse(std::abs(x) - p.shift, p);
}

double v_single_well(double x, const MorseParams& p)
{
    return -v_sym(x, p);
}

Extremum morse_minimum(const MorseParams& p)
{
    if (p.gamma1 == 0.0) throw PreconditionError("morse_minimum: gamma1 = 0 leaves a purely repulsive potential");
    const double g1sq = p.gamma1 * p.gamma1;
    const double g2sq = p.gamma2 * p.gamma2;
    return {std::log(g2sq / g1sq) / p.alpha, -g1sq * g1sq / g2sq};
}

Extremum sym_minimum(const MorseParams& p)
{
    Extremum m = morse_minimum(p);
    const double x = m.x + p.shift;
    if (x >= 0.0) return {x, m.value};
    return {0.0, v_sym(0.0, p)};
}

Extremum single_well_minimum(const MorseParams& p)
{
    return {0.0, v_single_well(0.0, p)};
}

double sym_outer_turning_point(const MorseParams& p, double E)
{
    const Extremum m = sym_minimum(p);
    if (!(E > m.value && E < 0.0)) throw PreconditionError("sym_outer_turning_point: E outside (min V, 0)");
    const double g1sq = p.gamma1 * p.gamma1;
    const double g2sq = p.gamma2 * p.gamma2;
    // Smaller root u of g2^2 u^2 - 2 g1^2 u - E = 0, written without cancellation.
    const double disc = std::sqrt(g1sq * g1sq + g2sq * E);
    const double u = -E / (g1sq + disc);
    return p.shift - std::log(u) / p.alpha;
}

double sym_inner_turning_point(const MorseParams& p, double E)
{
    const Extremum m = sym_minimum(p);
    if (!(E > m.value && E < 0.0)) throw PreconditionError("sym_inner_turning_point: E outside (min V, 0)");
    if (E >= v_sym(0.0, p)) return 0.0;
    const double g1sq = p.gamma1 * p.gamma1;
    const double g2sq = p.gamma2 * p.gamma2;
    const double u = (g1sq + std::sqrt(g1sq * g1sq + g2sq * E)) / g2sq;
    return std::max(0.0, p.shift - std::log(u) / p.alpha);
}

double single_well_turning_point(const MorseParams& p, double E)
{
    const double vmin = v_single_well(0.0, p);
    if (!(E > vmin && E < 0.0)) throw PreconditionError("single_well_turning_point: E outside (V(0), 0)");
    const double g1sq = p.gamma1 * p.gamma1;
    const double g2sq = p.gamma2 * p.gamma2;
    // v_morse(y) = -E = k^2 on the repulsive side: larger root of g2^2 u^2 - 2 g1^2 u + E = 0.
    const double u = (g1sq + std::sqrt(g1sq * g1sq - g2sq * E)) / g2sq;
    return p.shift - std::log(u) / p.alpha;
}

std::vector<double> exact_full_line_morse_spectrum(const MorseParams& p)
{
    p.validate();
    std::vector<double> levels;
    const double kappa = p.kappa();
    if (!(kappa > 0.5)) return levels;
    const int n_max = static_cast<int>(std::ceil(kappa - 0.5)) - 1;
    const double depth = p.gamma1 * p.gamma1 / p.gamma2;
    for (int n = 0; n <= n_max; ++n) {
        const double k = depth - p.alpha * (n + 0.5);
        levels.push_back(-k * k);
    }
    return levels;
}

}  // namespace morsewell
