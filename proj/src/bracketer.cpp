#include "morsewell/bracketer.hpp"

#include "morsewell/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace morsewell {

namespace {

constexpr double kScanRatio = 0.98;
constexpr double kTopMargin = 1e-9;
constexpr double kFloorFraction = 1e-3;

std::string level_name(int n)
{
    return "level " + std::to_string(n);
}

}  // namespace

EnergyBracket bracket_k(const KProblem& problem, int n, double k_tol, std::optional<std::pair<double, double>> seeds)
{
    if (n < 0) throw PreconditionError("bracket: level index must be non-negative");
    if (std::isnan(k_tol) || !(k_tol > 0.0)) throw PreconditionError("bracket: k_tol must be positive");
    if (k_tol < kMinKTol)
        throw PrecisionFloor("bracket: k_tol = " + std::to_string(k_tol) + " is below the double-precision floor 1e-12");
    if (!(problem.k_top > problem.k_floor && problem.k_floor > 0.0))
        throw NoSuchLevel("bracket: empty admissible k range, no " + level_name(n));

    int evals = 0;
    auto probe = [&](double k) {
        ++evals;
        return problem.classify(k);
    };

    double lo = 0.0, hi = 0.0;
    Classification c_lo, c_hi;
    bool have = false;
    if (seeds && seeds->first > 0.0 && seeds->second > seeds->first) {
        auto a = probe(seeds->first);
        auto b = probe(seeds->second);
        if (b.levels_below() <= n && a.levels_below() >= n + 1) {
            lo = seeds->first;
            hi = seeds->second;
            c_lo = a;
            c_hi = b;
            have = true;
        }
    }
    if (!have) {
        const Classification c_floor = probe(problem.k_floor);
        if (c_floor.levels_below() < n + 1)
            throw NoSuchLevel("bracket: only " + std::to_string(c_floor.levels_below()) +
                              " sector levels above k = " + std::to_string(problem.k_floor) + ", no " + level_name(n));
        double k = problem.k_top;
        Classification c = probe(k);
        if (c.levels_below() > n) throw PreconditionError("bracket: scan start already lies above " + level_name(n));
        for (;;) {
            const double next = k * kScanRatio;
            if (next <= problem.k_floor) {
                lo = problem.k_floor;
                c_lo = c_floor;
                hi = k;
                c_hi = c;
                break;
            }
            const Classification cn = probe(next);
            if (cn.levels_below() >= n + 1) {
                lo = next;
                c_lo = cn;
                hi = k;
                c_hi = c;
                break;
            }
            k = next;
            c = cn;
        }
    }

    // Isolate the level when a scan step jumped over several.
    for (int guard = 0; c_hi.levels_below() != n || c_lo.levels_below() != n + 1; ++guard) {
        if (guard > 200) throw ConvergenceError("bracket: could not isolate " + level_name(n));
        const double mid = 0.5 * (lo + hi);
        const Classification cm = probe(mid);
        if (cm.levels_below() >= n + 1) {
            lo = mid;
            c_lo = cm;
        } else {
            hi = mid;
            c_hi = cm;
        }
    }

    EnergyBracket out;
    out.level = n;
    int s_hi = c_hi.sign;
    bool lo_fresh = true, hi_fresh = true;
    while (hi - lo > k_tol) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        ++evals;
        const int s = problem.sign(mid);
        if (s == 0) {
            out.k_lo = mid * (1.0 - 1e-13);
            out.k_hi = mid * (1.0 + 1e-13);
            out.nodes_lo = out.nodes_hi = n;
            out.evaluations = evals;
            return out;
        }
        if (s == s_hi) {
            hi = mid;
            hi_fresh = false;
        } else {
            lo = mid;
            lo_fresh = false;
        }
    }
    if (!lo_fresh) c_lo = probe(lo);
    if (!hi_fresh) c_hi = probe(hi);
    if (c_hi.levels_below() != n || c_lo.levels_below() != n + 1)
        throw ConvergenceError("bracket: endpoint classification of " + level_name(n) + " is inconsistent");

    out.k_lo = lo;
    out.k_hi = hi;
    out.nodes_lo = c_lo.nodes;
    out.nodes_hi = c_hi.nodes;
    out.sign_lo = c_lo.sign;
    out.sign_hi = c_hi.sign;
    out.evaluations = evals;
    return out;
}

double k_ceiling(const MorseParams& p, const SolverOptions& opts)
{
    p.validate();
    const double vmin = potential_minimum(p, opts.well);
    return vmin < 0.0 ? std::sqrt(-vmin) : 0.0;
}

Classification classify(const MorseParams& p, double k, Parity parity, const SolverOptions& opts)
{
    p.validate();
    const double E = -k * k;
    if (!(k > 0.0) || !(E > potential_minimum(p, opts.well)))
        throw PreconditionError("classify: E = -k^2 must lie in (min V, 0), got k = " + std::to_string(k));
    const double x_turn = outer_turning_point(p, E, opts.well);
    const double x_end = x_turn + 1.0 / p.alpha;
    auto wave = build_regular(p, EnergyTrial::from_k(p, k), parity, opts);
    Classification c;
    c.nodes = static_cast<int>(node_locations(wave, x_end, opts.n_grid).size());
    c.sign = tail_sign(p, k, parity, opts).sign;
    return c;
}

KProblem sector_problem(const MorseParams& p, Parity parity, const SolverOptions& opts)
{
    const double ceiling = k_ceiling(p, opts);
    KProblem pr;
    pr.k_top = ceiling * (1.0 - kTopMargin);
    pr.k_floor = ceiling * kFloorFraction;
    pr.classify = [p, parity, opts](double k) { return classify(p, k, parity, opts); };
    pr.sign = [p, parity, opts](double k) { return tail_sign(p, k, parity, opts).sign; };
    return pr;
}

EnergyBracket bracket_level(const MorseParams& p, int n, Parity parity, double k_tol, std::optional<double> k_seed_lo,
                            std::optional<double> k_seed_hi, const SolverOptions& opts)
{
    std::optional<std::pair<double, double>> seeds;
    if (k_seed_lo && k_seed_hi) seeds = std::make_pair(*k_seed_lo, *k_seed_hi);
    EnergyBracket b = bracket_k(sector_problem(p, parity, opts), n, k_tol, seeds);
    b.parity = parity;
    return b;
}

std::vector<SpectrumEntry> spectrum(const MorseParams& p, int n_max, double k_tol, const SolverOptions& opts)
{
    if (n_max < 0) throw PreconditionError("spectrum: n_max must be non-negative");
    std::vector<SpectrumEntry> found;
    std::vector<SpectrumEntry> missing;
    bool sector_done[2] = {false, false};
    for (int g = 0; g <= n_max; ++g) {
        SpectrumEntry e;
        e.global_index = g;
        e.parity = g % 2 == 0 ? Parity::even : Parity::odd;
        e.sector_level = g / 2;
        if (!sector_done[g % 2]) {
            try {
                e.bracket = bracket_level(p, e.sector_level, e.parity, k_tol, std::nullopt, std::nullopt, opts);
            } catch (const NoSuchLevel&) {
                sector_done[g % 2] = true;
            }
        }
        (e.bracket ? found : missing).push_back(e);
    }

    // Levels alternate in parity, so the global order is fixed and only
    // overlapping neighbours need work: refine them down to the double floor
    // and flag whatever is still not separated.
    for (bool again = true; again;) {
        again = false;
        for (size_t i = 0; i + 1 < found.size(); ++i) {
            EnergyBracket& a = *found[i].bracket;
            EnergyBracket& b = *found[i + 1].bracket;
            if (a.E_hi() < b.E_lo()) continue;
            const double tol = std::min(a.width(), b.width()) / 4.0;
            if (tol < kMinKTol) continue;
            const int spent_a = a.evaluations;
            const int spent_b = b.evaluations;
            a = bracket_level(p, a.level, a.parity, tol, a.k_lo, a.k_hi, opts);
            b = bracket_level(p, b.level, b.parity, tol, b.k_lo, b.k_hi, opts);
            a.evaluations += spent_a;
            b.evaluations += spent_b;
            again = true;
        }
    }
    for (size_t i = 0; i + 1 < found.size(); ++i)
        if (found[i].bracket->E_hi() >= found[i + 1].bracket->E_lo()) found[i].separated = found[i + 1].separated = false;
    for (auto& m : missing) found.push_back(m);
    return found;
}

namespace {

/// Certified sign and value of L at a multiple-precision k; raises the
/// working precision until |L| exceeds its error bound.
struct WideTail {
    BigFloat value;
    int sign = 0;
    unsigned digits = 0;
};

WideTail wide_tail(const MorseParams& p, WellKind well, Parity parity, const BigFloat& k, unsigned digits)
{
    for (unsigned d = digits; d <= 8 * digits; d += d / 2) {
        auto chart = detail::MorseChart<BigFloat>::make(p, well, d);
        BigFloat kk = detail::RealTraits<BigFloat>::like(0.0, chart.alpha);
        kk += k;
        auto tv = detail::tail_value(chart, kk, parity);
        if (abs(tv.value) > tv.err) return {tv.value, tv.value.sign(), d};
    }
    return {BigFloat(0.0, digits), 0, 8 * digits};
}

BigFloat promote(const BigFloat& x, unsigned digits)
{
    BigFloat r = BigFloat::with_bits(std::max(x.bits(), BigFloat::bits_for_digits(digits)));
    r += x;
    return r;
}

/// Bracket [lo, hi] around a simple root of L, refined by the Illinois
/// variant of regula falsi with every step's sign certified.
struct WideBracket {
    BigFloat lo, hi;
    BigFloat f_lo, f_hi;
    int s_lo = 0, s_hi = 0;
};

int refine_to(WideBracket& b, double target, const MorseParams& p, WellKind well, Parity parity, unsigned base,
              unsigned& digits_used)
{
    int steps = 0;
    int retained = 0;  // +1 when lo was kept last time, -1 for hi
    while (static_cast<double>(b.hi - b.lo) > target) {
        if (++steps > 4000) throw ConvergenceError("degeneracy_gap: extended refinement did not converge");
        const double width = static_cast<double>(b.hi - b.lo);
        const double k = static_cast<double>(b.hi);
        const unsigned digits = base + static_cast<unsigned>(std::ceil(-std::log10(width / k))) + 20;
        digits_used = std::max(digits_used, digits);
        BigFloat lo = promote(b.lo, digits);
        BigFloat hi = promote(b.hi, digits);
        BigFloat x = hi - b.f_hi * (hi - lo) / (b.f_hi - b.f_lo);
        if (!(x > lo && x < hi)) x = (lo + hi) * 0.5;
        WideTail t = wide_tail(p, well, parity, x, digits);
        digits_used = std::max(digits_used, t.digits);
        if (t.sign == 0) {
            b.lo = x;
            b.hi = x;
            return steps;
        }
        if (t.sign == b.s_hi) {
            b.hi = x;
            b.f_hi = t.value;
            if (retained == 1) b.f_lo = b.f_lo * 0.5;
            retained = 1;
        } else {
            b.lo = x;
            b.f_lo = t.value;
            if (retained == -1) b.f_hi = b.f_hi * 0.5;
            retained = -1;
        }
    }
    return steps;
}

WideBracket start_wide(const EnergyBracket& eb, const MorseParams& p, WellKind well, unsigned digits)
{
    WideBracket w;
    w.lo = BigFloat(eb.k_lo, digits);
    w.hi = BigFloat(eb.k_hi, digits);
    WideTail a = wide_tail(p, well, eb.parity, w.lo, digits);
    WideTail b = wide_tail(p, well, eb.parity, w.hi, digits);
    if (a.sign == 0 || b.sign == 0 || a.sign == b.sign)
        throw ConvergenceError("degeneracy_gap: bracket end signs not confirmed in extended precision");
    w.f_lo = a.value;
    w.f_hi = b.value;
    w.s_lo = a.sign;
    w.s_hi = b.sign;
    return w;
}

}  // namespace

DegeneracyGap degeneracy_gap(const MorseParams& p, int pair_index, double k_tol, const SolverOptions& opts)
{
    const double tol = std::max(k_tol, kMinKTol);
    DegeneracyGap r;
    r.even = bracket_level(p, pair_index, Parity::even, tol, std::nullopt, std::nullopt, opts);
    r.odd = bracket_level(p, pair_index, Parity::odd, tol, std::nullopt, std::nullopt, opts);

    const EnergyBracket& e = r.even;
    const EnergyBracket& o = r.odd;
    const bool disjoint = e.E_hi() < o.E_lo() || o.E_hi() < e.E_lo();
    r.gap = std::abs(o.E_mid() - e.E_mid());
    r.uncertainty = (e.E_hi() - e.E_lo()) + (o.E_hi() - o.E_lo());
    if (disjoint && r.uncertainty <= 1e-3 * r.gap) return r;

    const unsigned base = wave_digits(p, opts);
    WideBracket we = start_wide(e, p, opts.well, base + 20);
    WideBracket wo = start_wide(o, p, opts.well, base + 20);
    double target = 1e-6 * std::max(e.width(), o.width());
    for (int round = 0; round < 64; ++round) {
        r.refinement_steps += refine_to(we, target, p, opts.well, Parity::even, base, r.digits);
        r.refinement_steps += refine_to(wo, target, p, opts.well, Parity::odd, base, r.digits);
        BigFloat e_mid = (we.lo + we.hi) * 0.5;
        BigFloat o_mid = (wo.lo + wo.hi) * 0.5;
        BigFloat gap = abs(e_mid * e_mid - o_mid * o_mid);
        BigFloat unc = (we.hi * we.hi - we.lo * we.lo) + (wo.hi * wo.hi - wo.lo * wo.lo);
        const bool apart = we.hi < wo.lo || wo.hi < we.lo;
        r.gap = static_cast<double>(gap);
        r.uncertainty = static_cast<double>(unc);
        if (apart && unc <= gap * 1e-3) return r;
        const double k = static_cast<double>(we.hi);
        target = apart ? 1e-4 * r.gap / (2.0 * k) : target * 1e-20;
    }
    throw ConvergenceError("degeneracy_gap: pair " + std::to_string(pair_index) + " not resolved");
}

}  // namespace morsewell
