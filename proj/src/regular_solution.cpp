#include "morsewell/regular_solution.hpp"

#include "morsewell/errors.hpp"
#include "morsewell/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace morsewell {

namespace detail {

struct WaveImpl {
    virtual ~WaveImpl() = default;
    virtual RegularWave::Sample at(double x) const = 0;
    /// Sign of psi(x), settled in double precision when its error bound allows
    /// and in the working precision otherwise; 0 only for an unresolved zero.
    virtual int psi_sign(double x) const = 0;
    virtual double c_decay() const = 0;
    virtual double c_grow() const = 0;
    virtual unsigned digits() const = 0;
    virtual double wronskian_deviation() const = 0;
};

template <class Real>
struct WaveImplT final : WaveImpl {
    using T = RealTraits<Real>;

    WaveImplT(WaveCore<Real> c, unsigned d) : core(std::move(c)), fast(to_double_core(core)), dg(d) {}

    RegularWave::Sample at(double x) const override
    {
        auto s = core.at(T::make(x, dg));
        return {T::to_double(s.psi), T::to_double(s.dpsi)};
    }
    int psi_sign(double x) const override
    {
        auto q = fast.psi_bounded(x);
        if (std::abs(q.psi) > q.err) return q.psi > 0 ? 1 : -1;
        auto w = core.psi_bounded(T::make(x, dg));
        if (abs(w.psi) > w.err) return T::sign(w.psi);
        return 0;
    }
    double c_decay() const override { return T::to_double(core.c_decay); }
    double c_grow() const override { return T::to_double(core.c_grow); }
    unsigned digits() const override { return dg; }
    double wronskian_deviation() const override { return core.wronskian_rel_dev; }

    WaveCore<Real> core;
    WaveCore<double> fast;
    unsigned dg;
};

}  // namespace detail

namespace {

void check_k(double k)
{
    if (!(k > 0.0) || !std::isfinite(k)) throw PreconditionError("trial k must be positive and finite");
}

double origin_coordinate(const MorseParams& p)
{
    return 2.0 * p.gamma2 / p.alpha * std::exp(p.alpha * p.shift);
}

void guard_origin(const MorseParams& p, const SolverOptions& opts)
{
    const double t0 = origin_coordinate(p);
    if (!(t0 <= opts.t_max))
        throw GuardError("Whittaker coordinate at the origin t0 = " + std::to_string(t0) + " exceeds t_max = " +
                         std::to_string(opts.t_max));
}

unsigned next_digits(unsigned digits)
{
    return digits + std::max(16u, digits / 2);
}

}  // namespace

EnergyTrial EnergyTrial::from_k(const MorseParams& p, double k)
{
    p.validate();
    check_k(k);
    return EnergyTrial{k, p.kappa(), k / p.alpha};
}

double to_whittaker_coordinate(double x, const MorseParams& p, const SolverOptions& opts)
{
    p.validate();
    if (!(x >= 0.0)) throw PreconditionError("to_whittaker_coordinate: x must be non-negative");
    guard_origin(p, opts);
    return 2.0 * p.gamma2 / p.alpha * std::exp(-p.alpha * (x - p.shift));
}

double potential(double x, const MorseParams& p, WellKind well)
{
    return well == WellKind::symmetrized ? v_sym(x, p) : v_single_well(x, p);
}

double potential_minimum(const MorseParams& p, WellKind well)
{
    return well == WellKind::symmetrized ? sym_minimum(p).value : single_well_minimum(p).value;
}

double outer_turning_point(const MorseParams& p, double E, WellKind well)
{
    return well == WellKind::symmetrized ? sym_outer_turning_point(p, E) : single_well_turning_point(p, E);
}

unsigned wave_digits(const MorseParams& p, const SolverOptions& opts)
{
    // Series terms at t0 reach about e^{t0} times the result in the worst case.
    const double loss = 0.4343 * origin_coordinate(p);
    return std::max(opts.working_precision, static_cast<unsigned>(std::ceil(loss)) + 20u);
}

double RegularWave::c_decay() const { return impl_->c_decay(); }
double RegularWave::c_grow() const { return impl_->c_grow(); }
unsigned RegularWave::digits() const { return impl_->digits(); }
double RegularWave::wronskian_deviation() const { return impl_->wronskian_deviation(); }

RegularWave::Sample RegularWave::eval_unchecked(double x) const
{
    if (x >= 0.0) return impl_->at(x);
    Sample s = impl_->at(-x);
    // even: psi(-x) = psi(x), psi'(-x) = -psi'(x); odd: the opposite
    if (parity_ == Parity::even) return {s.psi, -s.dpsi_dx};
    return {-s.psi, s.dpsi_dx};
}

RegularWave::Sample RegularWave::eval(double x) const
{
    if (!(std::abs(x) <= render_limit_))
        throw PreconditionError("RegularWave::eval: |x| = " + std::to_string(std::abs(x)) + " beyond render limit " +
                                std::to_string(render_limit_));
    return eval_unchecked(x);
}

RegularWave build_regular(const MorseParams& p, const EnergyTrial& trial, Parity parity, const SolverOptions& opts)
{
    p.validate();
    check_k(trial.k);
    guard_origin(p, opts);

    RegularWave w;
    w.params_ = p;
    w.parity_ = parity;
    w.well_ = opts.well;
    w.render_limit_ = opts.render_limit(p);
    w.trial_ = EnergyTrial::from_k(p, trial.k);
    if (is_degenerate_index(w.trial_.mu)) {
        // M_{kappa,-mu} degenerates; eigenvalues are located by bisection, so a
        // shifted trial point loses nothing.
        w.trial_.mu = nudge_index(w.trial_.mu);
        w.trial_.k = w.trial_.mu * p.alpha;
        w.nudged_ = true;
    }

    const double k = w.trial_.k;
    unsigned digits = wave_digits(p, opts);
    const unsigned cap = 2 * digits + 64;
    for (;;) {
        bool accurate = false;
        bool consistent = false;
        auto impl = detail::with_precision(digits, [&]<class Real>(unsigned dg) -> std::shared_ptr<const detail::WaveImpl> {
            using T = detail::RealTraits<Real>;
            auto chart = detail::MorseChart<Real>::make(p, opts.well, dg);
            auto core = detail::build_core(chart, T::make(k, dg), parity);
            consistent = core.wronskian_rel_dev <= 1e-12;
            accurate = consistent && core.err_decay <= abs(core.c_decay) * 1e-17 &&
                       core.err_grow <= abs(core.c_grow) * 1e-17;
            return std::make_shared<detail::WaveImplT<Real>>(std::move(core), dg);
        });
        if (accurate || (digits >= cap && consistent)) {
            w.impl_ = std::move(impl);
            return w;
        }
        if (digits >= cap)
            throw SingularSystem("build_regular: basis Wronskian at the origin not reproduced at " +
                                 std::to_string(digits) + " digits");
        digits = std::min(cap, next_digits(digits));
    }
}

double tail_functional(const MorseParams& p, const EnergyTrial& trial, Parity parity, const SolverOptions& opts)
{
    return build_regular(p, trial, parity, opts).c_grow();
}

TailSign tail_sign(const MorseParams& p, double k, Parity parity, const SolverOptions& opts)
{
    p.validate();
    check_k(k);
    guard_origin(p, opts);
    unsigned digits = wave_digits(p, opts);
    const unsigned cap = 4 * digits + 200;
    for (;;) {
        TailSign out = detail::with_precision(digits, [&]<class Real>(unsigned dg) {
            using T = detail::RealTraits<Real>;
            auto chart = detail::MorseChart<Real>::make(p, opts.well, dg);
            auto tv = detail::tail_value(chart, T::make(k, dg), parity);
            TailSign s;
            s.value = T::to_double(tv.value);
            s.abs_err = T::to_double(tv.err);
            s.digits = dg;
            if (abs(tv.value) > tv.err) s.sign = T::sign(tv.value);
            return s;
        });
        if (out.sign != 0 || digits >= cap) return out;
        digits = std::min(cap, next_digits(digits));
    }
}

std::vector<double> node_locations(const RegularWave& wave, double x_max, int n_grid)
{
    if (n_grid < 200) throw PreconditionError("node counting needs n_grid >= 200");
    if (!(x_max > 0.0) || !std::isfinite(x_max)) throw PreconditionError("node counting needs a finite x_max > 0");

    const double h = x_max / n_grid;
    const double E = wave.trial().energy();
    const double depth = E - potential_minimum(wave.params(), wave.well());
    // Zeros of a solution are at least pi / sqrt(max(E - V)) apart.
    if (depth > 0.0 && h >= std::numbers::pi / std::sqrt(depth))
        throw GridTooCoarse("node counting: cell width " + std::to_string(h) +
                            " admits two zeros per cell; increase n_grid");

    // The central barrier is classically forbidden: psi starts positive with
    // psi' >= 0 there and psi'' = (V - E) psi keeps it growing, so no node can
    // occur before the inner turning point and those cells are skipped.
    double x_skip = 0.0;
    if (wave.well() == WellKind::symmetrized && E > potential_minimum(wave.params(), wave.well()) && E < 0.0)
        x_skip = sym_inner_turning_point(wave.params(), E);

    const double width = 1e-10 * x_max;
    std::vector<double> nodes;
    double x_prev = 0.0;
    // Both normalizations start positive: psi(0) = 1 (even), psi'(0) = 1 (odd).
    int sign_prev = 1;
    for (int i = 1; i <= n_grid; ++i) {
        const double x = i == n_grid ? x_max : i * h;
        if (x < x_skip) {
            x_prev = x;
            continue;
        }
        const int s = wave.impl_->psi_sign(x);
        if (s == 0) continue;  // decided by the next nonzero sample
        if (s != sign_prev) {
            double lo = x_prev;
            double hi = x;
            while (hi - lo > width) {
                const double mid = 0.5 * (lo + hi);
                const int sm = wave.impl_->psi_sign(mid);
                if (sm == 0) {
                    lo = hi = mid;
                    break;
                }
                (sm == sign_prev ? lo : hi) = mid;
            }
            nodes.push_back(0.5 * (lo + hi));
            sign_prev = s;
        }
        x_prev = x;
    }
    return nodes;
}

int node_count(const MorseParams& p, const EnergyTrial& trial, Parity parity, double x_max, int n_grid,
               const SolverOptions& opts)
{
    if (n_grid < 200) throw PreconditionError("node counting needs n_grid >= 200");
    auto wave = build_regular(p, trial, parity, opts);
    return static_cast<int>(node_locations(wave, x_max, n_grid).size());
}

}  // namespace morsewell
