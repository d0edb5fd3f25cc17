#include "morsewell/oracle_numerov.hpp"

#include "morsewell/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace morsewell {

namespace {

constexpr double kRescaleAt = 1e150;
constexpr int kStartSubsteps = 64;

// psi and psi' after one step of size h from (y0, dy0), by classical RK4 substeps.
template <class Pot>
std::array<double, 2> start_step(const Pot& V, double E, double x0, double y0, double dy0, double h)
{
    const double s = h / kStartSubsteps;
    double x = x0, y = y0, dy = dy0;
    auto f = [&](double xx) { return V(xx) - E; };
    for (int i = 0; i < kStartSubsteps; ++i) {
        const double fa = f(x), fm = f(x + s / 2), fb = f(x + s);
        const double k1y = dy, k1d = fa * y;
        const double k2y = dy + s / 2 * k1d, k2d = fm * (y + s / 2 * k1y);
        const double k3y = dy + s / 2 * k2d, k3d = fm * (y + s / 2 * k2y);
        const double k4y = dy + s * k3d, k4d = fb * (y + s * k3y);
        y += s / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
        dy += s / 6 * (k1d + 2 * k2d + 2 * k3d + k4d);
        x = x0 + (i + 1) * s;
    }
    return {y, dy};
}

template <class Pot>
Profile numerov(const Pot& V, double E, double x0, double x_end, double h, double y0, double dy0)
{
    if (!(h > 0.0) || !std::isfinite(h)) throw PreconditionError("numerov: step must be positive");
    if (!(x_end > x0 + 4 * h)) throw PreconditionError("numerov: interval shorter than four steps");
    const long n = std::lround(std::ceil((x_end - x0) / h - 1e-9));

    Profile out;
    out.x0 = x0;
    out.h = h;
    out.psi.resize(static_cast<size_t>(n) + 1);
    out.psi[0] = y0;
    out.psi[1] = start_step(V, E, x0, y0, dy0, h)[0];

    const double c = h * h / 12.0;
    auto g = [&](long i) { return V(x0 + static_cast<double>(i) * h) - E; };
    double f_prev = g(0), f_cur = g(1);
    int sign_prev = y0 > 0 ? 1 : (y0 < 0 ? -1 : (dy0 >= 0 ? 1 : -1));
    long i_prev_nonzero = y0 != 0.0 ? 0 : -1;
    auto note_sign = [&](long i) {
        const double y = out.psi[static_cast<size_t>(i)];
        if (y == 0.0) return;
        const int s = y > 0 ? 1 : -1;
        if (s != sign_prev && i_prev_nonzero >= 0) {
            const double ya = out.psi[static_cast<size_t>(i_prev_nonzero)];
            const double xa = x0 + static_cast<double>(i_prev_nonzero) * h;
            const double xb = x0 + static_cast<double>(i) * h;
            out.nodes.push_back(xa + (xb - xa) * ya / (ya - y));
        }
        sign_prev = s;
        i_prev_nonzero = i;
    };
    note_sign(1);

    // Summed form: with w = (1 - c f) psi, the differences w_{i+1} - w_i are
    // accumulated directly, so rounding grows like eps/h rather than eps/h^2.
    double w_cur = (1.0 - c * f_cur) * out.psi[1];
    double diff = w_cur - (1.0 - c * f_prev) * out.psi[0];
    for (long i = 1; i < n; ++i) {
        const double f_next = g(i + 1);
        diff += 12.0 * c * f_cur * out.psi[i];
        w_cur += diff;
        double y_next = w_cur / (1.0 - c * f_next);
        out.psi[i + 1] = y_next;
        if (std::abs(y_next) > kRescaleAt) {
            for (long j = 0; j <= i + 1; ++j) out.psi[j] /= kRescaleAt;
            w_cur /= kRescaleAt;
            diff /= kRescaleAt;
            out.log_scale += std::log(kRescaleAt);
            ++out.rescales;
        }
        note_sign(i + 1);
        f_prev = f_cur;
        f_cur = f_next;
    }

    const auto& y = out.psi;
    const size_t m = y.size() - 1;
    out.dpsi_end = (25 * y[m] - 48 * y[m - 1] + 36 * y[m - 2] - 16 * y[m - 3] + 3 * y[m - 4]) / (12 * h);
    return out;
}

double default_half_line_x_max(const MorseParams& p) { return 15.0 / p.alpha + p.shift; }

double full_line_x_star(const MorseParams& p) { return morse_minimum(p).x + p.shift; }

double full_line_right(const MorseParams& p, const ShootingConfig& cfg)
{
    return cfg.x_max > 0.0 ? cfg.x_max : full_line_x_star(p) + 40.0 / p.alpha;
}

double full_line_left(const MorseParams& p, const ShootingConfig& cfg)
{
    if (cfg.x_left != 0.0) return cfg.x_left;
    const double a = p.alpha;
    // 40 decay lengths of the repulsive wall, but no closer than 2/alpha to the minimum
    double x = std::min(p.shift - std::log(40.0 * a / p.gamma2) / a, full_line_x_star(p) - 2.0 / a);
    // keep h^2 (V - E) below 1 so the recursion stays well conditioned
    const double stable = p.shift - std::log(1.0 / (cfg.h_step * p.gamma2)) / a;
    return std::max(x, stable);
}

Classification classify_tail(const Profile& prof, double k, double x_from)
{
    const double y = prof.psi.back();
    const double tail = prof.dpsi_end + k * y;
    const int sign = tail > 0 ? 1 : (tail < 0 ? -1 : 0);
    return Classification{prof.nodes_in(x_from, prof.x_end()), sign};
}

// Smallest k whose outer turning point lies at least 1/alpha inside the grid.
double floor_for_grid(double v_inner, double ceiling)
{
    double k = 1e-3 * ceiling;
    if (v_inner < 0.0) k = std::max(k, std::sqrt(-v_inner) * 1.0001);
    return k;
}

OracleLevel solve_level(const std::function<KProblem(double)>& make_problem, int n, const ShootingConfig& cfg)
{
    cfg.validate();
    KProblem base = make_problem(cfg.h_step);
    const double k_tol = std::max(kMinKTol, cfg.match_tol / (2.0 * base.k_top));
    OracleLevel out;
    out.bracket = bracket_k(base, n, k_tol);
    out.k = out.bracket.k_mid();
    out.E = -out.k * out.k;

    KProblem fine = make_problem(cfg.h_step / 2);
    const double pad = 10.0 * out.bracket.width() + 1e-9;
    EnergyBracket b2 = bracket_k(fine, n, k_tol, std::make_pair(out.bracket.k_lo - pad, out.bracket.k_hi + pad));
    out.E_half_step = -b2.k_mid() * b2.k_mid();
    out.richardson_shift = std::abs(out.E_half_step - out.E);
    return out;
}

}  // namespace

void ShootingConfig::validate() const
{
    if (!(h_step > 0.0) || !std::isfinite(h_step)) throw PreconditionError("ShootingConfig: h_step must be positive");
    if (!(match_tol > 0.0)) throw PreconditionError("ShootingConfig: match_tol must be positive");
    if (x_max < 0.0) throw PreconditionError("ShootingConfig: x_max must be positive (or 0 for the default)");
}

double Profile::at(double x) const
{
    const double u = (x - x0) / h;
    if (!(u >= -1e-9) || u > static_cast<double>(psi.size() - 1) + 1e-9)
        throw PreconditionError("Profile::at: x outside the sampled range");
    const long last = static_cast<long>(psi.size()) - 1;
    const long r = std::lround(u);
    if (std::abs(u - static_cast<double>(r)) < 1e-9) return psi[static_cast<size_t>(r)];
    long i = std::clamp(static_cast<long>(std::floor(u)) - 1, 0L, last - 3);
    double sum = 0.0;
    for (long a = i; a < i + 4; ++a) {
        double w = 1.0;
        for (long b = i; b < i + 4; ++b)
            if (b != a) w *= (u - static_cast<double>(b)) / static_cast<double>(a - b);
        sum += w * psi[static_cast<size_t>(a)];
    }
    return sum;
}

int Profile::nodes_in(double a, double b) const
{
    return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [&](double x) { return x > a && x <= b; }));
}

Profile integrate_outward(const std::function<double(double)>& V, double E, Parity parity, double x_max, double h)
{
    if (!(E < 0.0)) throw PreconditionError("integrate_outward: E must be negative");
    return parity == Parity::even ? numerov(V, E, 0.0, x_max, h, 1.0, 0.0) : numerov(V, E, 0.0, x_max, h, 0.0, 1.0);
}

double half_line_x_max(const MorseParams& p, const ShootingConfig& cfg)
{
    const double x = cfg.x_max > 0.0 ? cfg.x_max : default_half_line_x_max(p);
    if (!(x > p.shift + 5.0 / p.alpha)) throw PreconditionError("ShootingConfig: x_max must exceed d + 5/alpha");
    return x;
}

Profile integrate_outward(const MorseParams& p, double E, Parity parity, const ShootingConfig& cfg)
{
    p.validate();
    cfg.validate();
    if (!(E < 0.0)) throw PreconditionError("integrate_outward: E must be negative");
    const double x_max = half_line_x_max(p, cfg);
    const WellKind well = cfg.well;
    auto V = [&p, well](double x) { return potential(x, p, well); };
    return parity == Parity::even ? numerov(V, E, 0.0, x_max, cfg.h_step, 1.0, 0.0)
                                  : numerov(V, E, 0.0, x_max, cfg.h_step, 0.0, 1.0);
}

Profile integrate_full_line(const MorseParams& p, double E, const ShootingConfig& cfg)
{
    p.validate();
    cfg.validate();
    if (!(E < 0.0)) throw PreconditionError("integrate_full_line: E must be negative");
    const double s = p.shift;
    auto V = [&p, s](double x) { return v_morse(x - s, p); };
    return numerov(V, E, full_line_left(p, cfg), full_line_right(p, cfg), cfg.h_step, 0.0, 1.0);
}

KProblem oracle_problem(const MorseParams& p, Parity parity, const ShootingConfig& cfg)
{
    p.validate();
    cfg.validate();
    const double x_max = half_line_x_max(p, cfg);
    const double ceiling = std::sqrt(-potential_minimum(p, cfg.well));
    KProblem problem;
    problem.classify = [p, parity, cfg](double k) {
        return classify_tail(integrate_outward(p, -k * k, parity, cfg), k, 0.0);
    };
    problem.sign = [classify = problem.classify](double k) { return classify(k).sign; };
    problem.k_top = ceiling * (1.0 - 1e-9);
    problem.k_floor = floor_for_grid(potential(x_max - 1.0 / p.alpha, p, cfg.well), ceiling);
    return problem;
}

OracleLevel eigenvalue(const MorseParams& p, int n, Parity parity, const ShootingConfig& cfg)
{
    return solve_level(
        [&](double h) {
            ShootingConfig c = cfg;
            c.h_step = h;
            return oracle_problem(p, parity, c);
        },
        n, cfg);
}

OracleLevel full_line_eigenvalue(const MorseParams& p, int n, const ShootingConfig& cfg)
{
    p.validate();
    if (p.gamma1 == 0.0) throw NoSuchLevel("full_line_eigenvalue: purely repulsive potential has no level");
    const double ceiling = p.gamma1 * p.gamma1 / p.gamma2;
    return solve_level(
        [&](double h) {
            ShootingConfig c = cfg;
            c.h_step = h;
            // both grids share the walls of the requested step
            c.x_left = full_line_left(p, cfg);
            c.x_max = full_line_right(p, cfg);
            const double x_left = c.x_left;
            KProblem problem;
            problem.classify = [p, c, x_left](double k) {
                return classify_tail(integrate_full_line(p, -k * k, c), k, x_left);
            };
            problem.sign = [classify = problem.classify](double k) { return classify(k).sign; };
            problem.k_top = ceiling * (1.0 - 1e-9);
            problem.k_floor = floor_for_grid(v_morse(c.x_max - 1.0 / p.alpha - p.shift, p), ceiling);
            return problem;
        },
        n, cfg);
}

OracleLevel full_line_eigenvalue(const std::function<double(double)>& V, double x_left, double x_right, double v_min,
                                 int n, const ShootingConfig& cfg)
{
    if (!(x_left < x_right) || !std::isfinite(x_left) || !std::isfinite(x_right))
        throw PreconditionError("full_line_eigenvalue: need a finite interval x_left < x_right");
    if (!(v_min < 0.0)) throw NoSuchLevel("full_line_eigenvalue: a potential with min V >= 0 has no level");
    const double ceiling = std::sqrt(-v_min);
    return solve_level(
        [&](double h) {
            KProblem problem;
            problem.classify = [V, x_left, x_right, h](double k) {
                return classify_tail(numerov(V, -k * k, x_left, x_right, h, 0.0, 1.0), k, x_left);
            };
            problem.sign = [classify = problem.classify](double k) { return classify(k).sign; };
            problem.k_top = ceiling * (1.0 - 1e-9);
            problem.k_floor = 1e-3 * ceiling;
            return problem;
        },
        n, cfg);
}

}  // namespace morsewell
