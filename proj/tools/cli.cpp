#include "morsewell/cli.hpp"

#include "morsewell/bracketer.hpp"
#include "morsewell/errors.hpp"
#include "morsewell/oracle_numerov.hpp"
#include "morsewell/piecewise_matcher.hpp"
#include "morsewell/regular_solution.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#ifndef MORSEWELL_VERSION
#define MORSEWELL_VERSION "0.0.0"
#endif

namespace morsewell::cli {

namespace {

const std::map<std::string, Command> kCommands{
    {"spectrum", Command::spectrum}, {"wavefunction", Command::wavefunction}, {"compare", Command::compare}};
const std::map<std::string, PotentialKind> kPotentials{{"morse", PotentialKind::morse},
                                                       {"sym-morse", PotentialKind::sym_morse},
                                                       {"single-well", PotentialKind::single_well},
                                                       {"chain-file", PotentialKind::chain_file}};
const std::map<std::string, ParityChoice> kParities{
    {"even", ParityChoice::even}, {"odd", ParityChoice::odd}, {"both", ParityChoice::both}};
const std::map<std::string, Format> kFormats{{"csv", Format::csv}, {"json", Format::json}};

template <class E>
std::string name_of(const std::map<std::string, E>& names, E value)
{
    for (const auto& [k, v] : names)
        if (v == value) return k;
    return "?";
}

template <class E>
E value_of(const std::map<std::string, E>& names, const std::string& key, const char* what)
{
    auto it = names.find(key);
    if (it == names.end()) throw PreconditionError(std::string("unknown ") + what + " '" + key + "'");
    return it->second;
}

bool has_reflection(PotentialKind p) { return p == PotentialKind::sym_morse || p == PotentialKind::single_well; }

std::string parity_name(Parity p) { return p == Parity::even ? "even" : "odd"; }

/// f(0), ..., f(n-1) on up to `threads` workers, results in index order.
/// The first exception in index order is rethrown after all workers finish.
template <class T, class F>
std::vector<T> parallel_map(size_t n, int threads, F f)
{
    std::vector<std::optional<T>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i; (i = next++) < n;) {
            try {
                slots[i] = f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    size_t workers = threads > 0 ? static_cast<size_t>(threads) : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, n);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    std::vector<T> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

SolverOptions solver_options(const RunConfig& cfg)
{
    SolverOptions opts;
    opts.well = cfg.potential == PotentialKind::single_well ? WellKind::single_well : WellKind::symmetrized;
    opts.t_max = cfg.t_max;
    opts.x_render_max = std::max(cfg.x_max, 12.0 / cfg.params.alpha);
    return opts;
}

SegmentChain base_chain(const RunConfig& cfg)
{
    if (cfg.potential == PotentialKind::chain_file) return read_chain_file(cfg.chain_path);
    return full_line_morse_chain(cfg.params);
}

ChainBuilder chain_builder(const SegmentChain& base)
{
    return [base](double E) { return base.at_energy(E); };
}

std::vector<Parity> sectors(ParityChoice c)
{
    if (c == ParityChoice::even) return {Parity::even};
    if (c == ParityChoice::odd) return {Parity::odd};
    return {Parity::even, Parity::odd};
}

/// A located level: global index, parity (when the potential has one) and its bracket.
struct Level {
    int index = 0;
    std::optional<Parity> parity;
    int sector_level = 0;
    EnergyBracket bracket;
};

struct LevelSet {
    std::vector<Level> levels;
    int missing = 0;
    std::vector<std::string> warnings;
};

int available_levels(const KProblem& problem) { return problem.classify(problem.k_floor).levels_below(); }

void note_missing(LevelSet& set, int requested)
{
    set.missing = requested - static_cast<int>(set.levels.size());
    if (set.missing > 0)
        set.warnings.push_back("requested " + std::to_string(requested) + " levels, found " +
                               std::to_string(set.levels.size()) + "; the potential binds no further levels above the scan floor");
}

LevelSet symmetric_levels(const RunConfig& cfg)
{
    const SolverOptions opts = solver_options(cfg);
    LevelSet set;
    if (cfg.parity == ParityChoice::both) {
        const int n_even = available_levels(sector_problem(cfg.params, Parity::even, opts));
        const int n_odd = available_levels(sector_problem(cfg.params, Parity::odd, opts));
        const int n = std::min(cfg.levels, n_even + n_odd);
        if (n > 0)
            for (const SpectrumEntry& e : spectrum(cfg.params, n - 1, cfg.k_tol, opts)) {
                if (!e.bracket) continue;
                if (!e.separated)
                    set.warnings.push_back("levels " + std::to_string(e.global_index) +
                                           " and its neighbour overlap at the double-precision floor");
                set.levels.push_back({e.global_index, e.parity, e.sector_level, *e.bracket});
            }
    } else {
        const Parity parity = cfg.parity == ParityChoice::even ? Parity::even : Parity::odd;
        const int n = std::min(cfg.levels, available_levels(sector_problem(cfg.params, parity, opts)));
        auto found = parallel_map<std::optional<EnergyBracket>>(n, cfg.threads, [&](size_t i) -> std::optional<EnergyBracket> {
            try {
                return bracket_level(cfg.params, static_cast<int>(i), parity, cfg.k_tol, std::nullopt, std::nullopt, opts);
            } catch (const NoSuchLevel&) {
                return std::nullopt;
            }
        });
        for (int i = 0; i < n; ++i)
            if (found[i]) set.levels.push_back({2 * i + (parity == Parity::odd ? 1 : 0), parity, i, *found[i]});
    }
    note_missing(set, cfg.levels);
    return set;
}

LevelSet chain_levels(const RunConfig& cfg, const SegmentChain& base)
{
    const ChainBuilder builder = chain_builder(base);
    const int n = std::min(cfg.levels, available_levels(chain_problem(builder)));
    auto found = parallel_map<std::optional<EnergyBracket>>(n, cfg.threads, [&](size_t i) -> std::optional<EnergyBracket> {
        try {
            return bracket_secular(builder, static_cast<int>(i), cfg.k_tol);
        } catch (const NoSuchLevel&) {
            return std::nullopt;
        }
    });
    LevelSet set;
    for (int i = 0; i < n; ++i)
        if (found[i]) set.levels.push_back({i, std::nullopt, i, *found[i]});
    note_missing(set, cfg.levels);
    return set;
}

LevelSet find_levels(const RunConfig& cfg)
{
    if (has_reflection(cfg.potential)) return symmetric_levels(cfg);
    return chain_levels(cfg, base_chain(cfg));
}

std::optional<double> exact_energy(const RunConfig& cfg, int index)
{
    if (cfg.potential != PotentialKind::morse) return std::nullopt;
    const auto exact = exact_full_line_morse_spectrum(cfg.params);
    if (index < 0 || index >= static_cast<int>(exact.size())) return std::nullopt;
    return exact[index];
}

LevelRow level_row(const RunConfig& cfg, const Level& l)
{
    LevelRow r;
    r.index = l.index;
    r.parity = l.parity ? parity_name(*l.parity) : "none";
    r.k_lo = l.bracket.k_lo;
    r.k_hi = l.bracket.k_hi;
    r.E_lo = l.bracket.E_lo();
    r.E_hi = l.bracket.E_hi();
    // half-line counts exclude the origin, where odd states vanish
    r.nodes = l.parity ? 2 * l.bracket.nodes_lo + (*l.parity == Parity::odd ? 1 : 0) : l.bracket.nodes_lo;
    r.evaluations = l.bracket.evaluations;
    r.E_exact = exact_energy(cfg, l.index);
    return r;
}

std::vector<double> sample_points(const RunConfig& cfg)
{
    std::vector<double> xs(cfg.grid);
    const double m = cfg.grid - 1;
    // (2i - m) is exact, so the grid is symmetric bit for bit
    for (int i = 0; i < cfg.grid; ++i) xs[i] = cfg.x_max * (2.0 * i - m) / m;
    return xs;
}

double regularized_energy(const SegmentChain& chain, double E)
{
    for (const Segment& s : chain.segments) E = s.basis->regularize_energy(E);
    return E;
}

/// Distance of v from the interval [lo, hi].
double outside_by(double v, double lo, double hi) { return v < lo ? lo - v : (v > hi ? v - hi : 0.0); }

/// Oracle for a chain: Numerov on a finite window around the classically
/// allowed hull, extended into the forbidden flanks until the WKB decay
/// exponent reaches 40. The window is aligned so the chain's boundaries
/// fall on grid points, where the potential takes the mean of its
/// one-sided limits.
OracleLevel chain_oracle(const SegmentChain& base, int n, double k_guess, const ShootingConfig& sc)
{
    const double E = -k_guess * k_guess;
    std::optional<std::pair<double, double>> hull;
    for (const Segment& s : base.segments) {
        auto h = s.basis->allowed(s.a_left, s.a_right, E);
        if (!h) continue;
        hull = hull ? std::make_pair(std::min(hull->first, h->first), std::max(hull->second, h->second)) : *h;
    }
    if (!hull) throw PreconditionError("compare: the chain has no classically allowed region at the level energy");

    auto flank = [&](double start, double dir) {
        const double step = 1e-2;
        double action = 0.0, x = start;
        while (action < 40.0) {
            x += dir * step;
            const double q = base.potential(x) - E;
            if (!std::isfinite(q)) break;
            action += std::sqrt(std::max(q, 0.0)) * step;
        }
        return x;
    };
    const double h = sc.h_step;
    const std::vector<double> bounds = base.boundaries();
    const double anchor = bounds.empty() ? hull->first : bounds.front();
    const double x_left = anchor - std::ceil((anchor - flank(hull->first, -1.0)) / h) * h;
    const double x_right = x_left + std::ceil((flank(hull->second, 1.0) - x_left) / h) * h;

    auto V = [&base, bounds, h](double x) {
        for (double a : bounds)
            if (std::abs(x - a) < 0.25 * h) {
                const double eps = 1e-9 * std::max(1.0, std::abs(a));
                return 0.5 * (base.potential(a - eps) + base.potential(a + eps));
            }
        return base.potential(x);
    };
    return full_line_eigenvalue(V, x_left, x_right, base.minimum(), n, sc);
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

std::optional<double> optional_from(const nlohmann::json& j)
{
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

}  // namespace

std::string to_string(Command c) { return name_of(kCommands, c); }
std::string to_string(PotentialKind p) { return name_of(kPotentials, p); }
std::string to_string(ParityChoice p) { return name_of(kParities, p); }
std::string to_string(Format f) { return name_of(kFormats, f); }

void RunConfig::validate() const
{
    auto fail = [](const std::string& msg) { throw PreconditionError(msg); };
    if (potential == PotentialKind::chain_file) {
        if (chain_path.empty()) fail("--potential chain-file needs --chain PATH");
    } else {
        if (!chain_path.empty()) fail("--chain is only valid with --potential chain-file");
        params.validate();
    }
    if (!has_reflection(potential) && parity != ParityChoice::both)
        fail("--parity applies only to the reflection-symmetric potentials sym-morse and single-well");
    if (levels < 1) fail("--levels must be at least 1");
    if (!(k_tol >= kMinKTol) || !std::isfinite(k_tol)) fail("--ktol must be a finite number >= 1e-12");
    for (double v : k)
        if (!(v > 0.0) || !std::isfinite(v)) fail("--k values must be positive");
    if (!(perturb >= 0.0) || !std::isfinite(perturb)) fail("--perturb must be non-negative");
    for (double v : k)
        if (!(v - perturb > 0.0)) fail("--perturb must be smaller than every --k");
    if (perturb > 0.0 && k.empty() && command == Command::wavefunction) fail("--perturb needs explicit --k values");
    if (!(x_max > 0.0) || !std::isfinite(x_max)) fail("--xmax must be positive");
    if (grid < 2) fail("--grid must be at least 2");
    if (!(oracle_step > 0.0) || !std::isfinite(oracle_step)) fail("--oracle-step must be positive");
    if (!(tolerance > 0.0) || !std::isfinite(tolerance)) fail("--tol must be positive");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) fail("--t-max must be positive");
    if (threads < 0) fail("--threads must be non-negative");
}

int RunResult::exit_code() const
{
    for (const CompareRow& r : comparisons)
        if (!r.pass) return kExitFail;
    return missing_levels > 0 ? kExitMissingLevel : kExitOk;
}

RunResult cmd_spectrum(const RunConfig& cfg)
{
    cfg.validate();
    RunResult res;
    res.command = Command::spectrum;
    LevelSet set = find_levels(cfg);
    for (const Level& l : set.levels) res.levels.push_back(level_row(cfg, l));
    res.missing_levels = set.missing;
    res.warnings = set.warnings;
    return res;
}

RunResult cmd_wavefunction(const RunConfig& cfg)
{
    cfg.validate();
    RunResult res;
    res.command = Command::wavefunction;

    struct Trial {
        double k;
        std::optional<Parity> parity;
    };
    std::vector<Trial> trials;
    const bool reflect = has_reflection(cfg.potential);
    if (!cfg.k.empty()) {
        for (double k : cfg.k) {
            std::vector<double> ks = cfg.perturb > 0.0 ? std::vector<double>{k - cfg.perturb, k + cfg.perturb} : std::vector<double>{k};
            if (reflect) {
                for (Parity p : sectors(cfg.parity))
                    for (double kk : ks) trials.push_back({kk, p});
            } else {
                for (double kk : ks) trials.push_back({kk, std::nullopt});
            }
        }
    } else {
        LevelSet set = find_levels(cfg);
        for (const Level& l : set.levels) trials.push_back({l.bracket.k_mid(), l.parity});
        res.missing_levels = set.missing;
        res.warnings = set.warnings;
    }

    const std::vector<double> xs = sample_points(cfg);
    const SolverOptions opts = solver_options(cfg);
    std::optional<SegmentChain> base;
    if (!reflect) base = base_chain(cfg);

    auto blocks = parallel_map<std::vector<ProfileRow>>(trials.size(), cfg.threads, [&](size_t i) {
        const Trial& t = trials[i];
        std::vector<ProfileRow> rows;
        rows.reserve(xs.size());
        if (t.parity) {
            const RegularWave wave = build_regular(cfg.params, EnergyTrial::from_k(cfg.params, t.k), *t.parity, opts);
            for (double x : xs) {
                const auto s = wave.eval(x);
                rows.push_back({t.k, parity_name(*t.parity), x, s.psi, s.dpsi_dx});
            }
        } else {
            const SolvedChain sol = solve_chain(base->at_energy(regularized_energy(*base, -t.k * t.k)));
            for (double x : xs) rows.push_back({t.k, "none", x, sol.psi(x), sol.dpsi(x)});
        }
        return rows;
    });
    for (auto& b : blocks) res.profiles.insert(res.profiles.end(), b.begin(), b.end());
    return res;
}

RunResult cmd_compare(const RunConfig& cfg)
{
    cfg.validate();
    RunResult res;
    res.command = Command::compare;
    LevelSet set = find_levels(cfg);
    res.missing_levels = set.missing;
    res.warnings = set.warnings;

    ShootingConfig sc;
    sc.h_step = cfg.oracle_step;
    sc.well = cfg.potential == PotentialKind::single_well ? WellKind::single_well : WellKind::symmetrized;
    std::optional<SegmentChain> base;
    if (cfg.potential == PotentialKind::chain_file) base = base_chain(cfg);

    struct Outcome {
        std::optional<OracleLevel> level;
        std::string failure;
    };
    auto outcomes = parallel_map<Outcome>(set.levels.size(), cfg.threads, [&](size_t i) -> Outcome {
        const Level& l = set.levels[i];
        try {
            if (l.parity) return {eigenvalue(cfg.params, l.sector_level, *l.parity, sc), ""};
            if (base) return {chain_oracle(*base, l.sector_level, l.bracket.k_mid(), sc), ""};
            return {full_line_eigenvalue(cfg.params, l.sector_level, sc), ""};
        } catch (const Error& e) {
            return {std::nullopt, e.what()};
        }
    });

    for (size_t i = 0; i < set.levels.size(); ++i) {
        const Level& l = set.levels[i];
        const LevelRow lr = level_row(cfg, l);
        CompareRow r;
        r.index = lr.index;
        r.parity = lr.parity;
        r.k_lo = lr.k_lo;
        r.k_hi = lr.k_hi;
        r.E_exact = lr.E_exact;
        if (const auto& o = outcomes[i].level) {
            r.k_oracle = o->k;
            r.E_oracle = o->E;
            r.oracle_shift = o->richardson_shift;
            // the step-halving shift is the oracle's own error estimate
            r.oracle_converged = r.oracle_shift <= cfg.tolerance;
            r.pass = r.oracle_converged && outside_by(r.E_oracle, lr.E_lo, lr.E_hi) <= cfg.tolerance;
            if (r.E_exact)
                r.pass = r.pass && outside_by(*r.E_exact, lr.E_lo, lr.E_hi) <= cfg.tolerance &&
                         std::abs(r.E_oracle - *r.E_exact) <= cfg.tolerance;
        } else {
            res.warnings.push_back("level " + std::to_string(r.index) + ": oracle failed: " + outcomes[i].failure);
        }
        res.comparisons.push_back(r);
    }
    return res;
}

RunResult execute(const RunConfig& cfg)
{
    switch (cfg.command) {
    case Command::spectrum:
        return cmd_spectrum(cfg);
    case Command::wavefunction:
        return cmd_wavefunction(cfg);
    case Command::compare:
        return cmd_compare(cfg);
    }
    throw PreconditionError("unknown command");
}

void write_csv(const RunResult& result, std::ostream& os)
{
    switch (result.command) {
    case Command::spectrum:
        os << "index,parity,k_lo,k_hi,E_lo,E_hi,nodes,evaluations,E_exact,exact_inside\n";
        for (const LevelRow& r : result.levels) {
            os << r.index << ',' << r.parity << ',' << format_double(r.k_lo) << ',' << format_double(r.k_hi) << ','
               << format_double(r.E_lo) << ',' << format_double(r.E_hi) << ',' << r.nodes << ',' << r.evaluations << ','
               << format_optional(r.E_exact) << ',';
            if (r.E_exact) os << (*r.E_exact >= r.E_lo && *r.E_exact <= r.E_hi ? "true" : "false");
            os << '\n';
        }
        break;
    case Command::wavefunction:
        os << "k,parity,x,psi,dpsi\n";
        for (const ProfileRow& r : result.profiles)
            os << format_double(r.k) << ',' << r.parity << ',' << format_double(r.x) << ',' << format_double(r.psi) << ','
               << format_double(r.dpsi) << '\n';
        break;
    case Command::compare:
        os << "index,parity,k_lo,k_hi,k_oracle,delta_k,E_oracle,oracle_shift,E_exact,status\n";
        for (const CompareRow& r : result.comparisons)
            os << r.index << ',' << r.parity << ',' << format_double(r.k_lo) << ',' << format_double(r.k_hi) << ','
               << format_double(r.k_oracle) << ',' << format_double(r.k_oracle - 0.5 * (r.k_lo + r.k_hi)) << ','
               << format_double(r.E_oracle) << ',' << format_double(r.oracle_shift) << ',' << format_optional(r.E_exact)
               << ',' << (r.pass ? "PASS" : "FAIL") << '\n';
        break;
    }
}

nlohmann::json to_json(const RunConfig& cfg)
{
    nlohmann::json j;
    j["command"] = to_string(cfg.command);
    j["potential"] = to_string(cfg.potential);
    if (cfg.potential == PotentialKind::chain_file)
        j["chain"] = cfg.chain_path;
    else
        j["params"] = {{"alpha", cfg.params.alpha}, {"gamma1", cfg.params.gamma1}, {"gamma2", cfg.params.gamma2}, {"d", cfg.params.shift}};
    j["levels"] = cfg.levels;
    j["parity"] = to_string(cfg.parity);
    j["ktol"] = cfg.k_tol;
    j["k"] = cfg.k;
    j["perturb"] = cfg.perturb;
    j["xmax"] = cfg.x_max;
    j["grid"] = cfg.grid;
    j["oracle_step"] = cfg.oracle_step;
    j["tol"] = cfg.tolerance;
    j["t_max"] = cfg.t_max;
    j["threads"] = cfg.threads;
    j["format"] = to_string(cfg.format);
    j["out"] = cfg.out;
    return j;
}

RunConfig config_from_json(const nlohmann::json& j)
{
    RunConfig cfg;
    cfg.command = value_of(kCommands, j.at("command").get<std::string>(), "command");
    cfg.potential = value_of(kPotentials, j.at("potential").get<std::string>(), "potential");
    if (cfg.potential == PotentialKind::chain_file) {
        cfg.chain_path = j.at("chain").get<std::string>();
    } else {
        const auto& p = j.at("params");
        cfg.params = MorseParams{p.at("alpha").get<double>(), p.at("gamma1").get<double>(), p.at("gamma2").get<double>(),
                                 p.at("d").get<double>()};
    }
    cfg.levels = j.at("levels").get<int>();
    cfg.parity = value_of(kParities, j.at("parity").get<std::string>(), "parity");
    cfg.k_tol = j.at("ktol").get<double>();
    cfg.k = j.at("k").get<std::vector<double>>();
    cfg.perturb = j.at("perturb").get<double>();
    cfg.x_max = j.at("xmax").get<double>();
    cfg.grid = j.at("grid").get<int>();
    cfg.oracle_step = j.at("oracle_step").get<double>();
    cfg.tolerance = j.at("tol").get<double>();
    cfg.t_max = j.at("t_max").get<double>();
    cfg.threads = j.at("threads").get<int>();
    cfg.format = value_of(kFormats, j.at("format").get<std::string>(), "format");
    cfg.out = j.at("out").get<std::string>();
    return cfg;
}

nlohmann::json to_json(const RunResult& result)
{
    nlohmann::json j;
    j["command"] = to_string(result.command);
    j["levels"] = nlohmann::json::array();
    for (const LevelRow& r : result.levels)
        j["levels"].push_back({{"index", r.index},
                               {"parity", r.parity},
                               {"k_lo", r.k_lo},
                               {"k_hi", r.k_hi},
                               {"E_lo", r.E_lo},
                               {"E_hi", r.E_hi},
                               {"nodes", r.nodes},
                               {"evaluations", r.evaluations},
                               {"E_exact", optional_json(r.E_exact)}});
    j["profiles"] = nlohmann::json::array();
    for (const ProfileRow& r : result.profiles)
        j["profiles"].push_back({{"k", r.k}, {"parity", r.parity}, {"x", r.x}, {"psi", r.psi}, {"dpsi", r.dpsi}});
    j["comparisons"] = nlohmann::json::array();
    for (const CompareRow& r : result.comparisons)
        j["comparisons"].push_back({{"index", r.index},
                                    {"parity", r.parity},
                                    {"k_lo", r.k_lo},
                                    {"k_hi", r.k_hi},
                                    {"k_oracle", r.k_oracle},
                                    {"E_oracle", r.E_oracle},
                                    {"oracle_shift", r.oracle_shift},
                                    {"oracle_converged", r.oracle_converged},
                                    {"E_exact", optional_json(r.E_exact)},
                                    {"status", r.pass ? "PASS" : "FAIL"}});
    j["warnings"] = result.warnings;
    j["missing_levels"] = result.missing_levels;
    return j;
}

RunResult result_from_json(const nlohmann::json& j)
{
    RunResult res;
    res.command = value_of(kCommands, j.at("command").get<std::string>(), "command");
    for (const auto& r : j.at("levels"))
        res.levels.push_back({r.at("index").get<int>(), r.at("parity").get<std::string>(), r.at("k_lo").get<double>(),
                              r.at("k_hi").get<double>(), r.at("E_lo").get<double>(), r.at("E_hi").get<double>(),
                              r.at("nodes").get<int>(), r.at("evaluations").get<int>(), optional_from(r.at("E_exact"))});
    for (const auto& r : j.at("profiles"))
        res.profiles.push_back({r.at("k").get<double>(), r.at("parity").get<std::string>(), r.at("x").get<double>(),
                                r.at("psi").get<double>(), r.at("dpsi").get<double>()});
    for (const auto& r : j.at("comparisons"))
        res.comparisons.push_back({r.at("index").get<int>(), r.at("parity").get<std::string>(), r.at("k_lo").get<double>(),
                                   r.at("k_hi").get<double>(), r.at("k_oracle").get<double>(), r.at("E_oracle").get<double>(),
                                   r.at("oracle_shift").get<double>(), r.at("oracle_converged").get<bool>(),
                                   optional_from(r.at("E_exact")), r.at("status").get<std::string>() == "PASS"});
    res.warnings = j.at("warnings").get<std::vector<std::string>>();
    res.missing_levels = j.at("missing_levels").get<int>();
    return res;
}

nlohmann::json document(const RunConfig& cfg, const RunResult& result, const Provenance& prov)
{
    return {{"config", to_json(cfg)},
            {"results", to_json(result)},
            {"provenance", {{"version", prov.version}, {"timestamp", prov.timestamp}}}};
}

Provenance current_provenance()
{
    std::time_t now = std::time(nullptr);
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) now = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return {MORSEWELL_VERSION, buf};
}

ParseOutcome parse_command_line(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    const std::string units =
        "Units: hbar = 2m = 1, so the equation is -psi'' + V(x) psi = E psi and all inputs are dimensionless.\n"
        "Bound states have E = -k^2; brackets are reported in k and in E.\n"
        "Potentials:\n"
        "  morse        V(x) = -2 gamma1^2 exp(-alpha (x-d)) + gamma2^2 exp(-2 alpha (x-d)) on the whole line\n"
        "  sym-morse    the same with x - d replaced by |x| - d: a double well, even and odd sectors\n"
        "  single-well  the sign-flipped sym-morse potential\n"
        "  chain-file   a piecewise chain described in JSON (--chain PATH)\n"
        "Exit codes: 0 success, 1 usage or input error, 2 a requested level does not exist, 3 a compare check failed.";

    CLI::App app{"Bound states of one-dimensional Morse-type and piecewise potentials.", "morsewell"};
    app.set_version_flag("--version", std::string(MORSEWELL_VERSION));
    app.footer(units);
    app.require_subcommand(1);

    RunConfig cfg;
    std::string potential = "sym-morse", parity = "both", format = "csv";
    double gamma = 0.0;

    CLI::App* subs[3] = {
        app.add_subcommand("spectrum", "Certified energy brackets for the lowest levels"),
        app.add_subcommand("wavefunction", "Regular-solution profiles (x, psi, psi') at given k or at the level brackets"),
        app.add_subcommand("compare", "Brackets against the finite-difference oracle and the closed form, PASS/FAIL per level"),
    };
    for (CLI::App* s : subs) {
        s->footer(units);
        s->add_option("--potential", potential, "morse | sym-morse | single-well | chain-file")
            ->check(CLI::IsMember({"morse", "sym-morse", "single-well", "chain-file"}))
            ->capture_default_str();
        s->add_option("--chain", cfg.chain_path, "Chain description (JSON), with --potential chain-file");
        s->add_option("--d", cfg.params.shift, "Shift d (symmetrization shift; a translation for morse)")->capture_default_str();
        s->add_option("--alpha", cfg.params.alpha, "Decay rate alpha")->capture_default_str();
        auto* g = s->add_option("--gamma", gamma, "Sets gamma1 = gamma2");
        auto* g1 = s->add_option("--gamma1", cfg.params.gamma1, "Attractive amplitude gamma1")->capture_default_str();
        auto* g2 = s->add_option("--gamma2", cfg.params.gamma2, "Repulsive amplitude gamma2")->capture_default_str();
        g->excludes(g1)->excludes(g2);
        s->add_option("--levels", cfg.levels, "Number of levels")->capture_default_str();
        s->add_option("--parity", parity, "even | odd | both (symmetric potentials)")
            ->check(CLI::IsMember({"even", "odd", "both"}))
            ->capture_default_str();
        s->add_option("--ktol", cfg.k_tol, "Bracket width in k")->capture_default_str();
        s->add_option("--t-max", cfg.t_max, "Largest Whittaker coordinate at the origin")->capture_default_str();
        s->add_option("--threads", cfg.threads, "Worker threads, 0 = hardware count")->capture_default_str();
        s->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
        s->add_option("--out", cfg.out, "Output file (default: standard output)");
    }
    subs[1]->add_option("--k", cfg.k, "Trial k values (E = -k^2); without them the level brackets are used");
    subs[1]->add_option("--perturb", cfg.perturb, "Draw each profile at k - h and k + h")->capture_default_str();
    subs[1]->add_option("--xmax", cfg.x_max, "Samples cover [-xmax, xmax]")->capture_default_str();
    subs[1]->add_option("--grid", cfg.grid, "Number of samples")->capture_default_str();
    subs[2]->add_option("--oracle-step", cfg.oracle_step, "Numerov step of the oracle")->capture_default_str();
    subs[2]->add_option("--tol", cfg.tolerance, "Energy tolerance of the checks")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return {std::nullopt, code == 0 ? kExitOk : kExitUsage};
    }

    CLI::App* chosen = nullptr;
    for (int i = 0; i < 3; ++i)
        if (subs[i]->parsed()) {
            chosen = subs[i];
            cfg.command = static_cast<Command>(i);
        }
    cfg.potential = kPotentials.at(potential);
    cfg.parity = kParities.at(parity);
    cfg.format = kFormats.at(format);
    if (chosen->count("--gamma")) cfg.params.gamma1 = cfg.params.gamma2 = gamma;
    try {
        if (cfg.potential == PotentialKind::chain_file)
            for (const char* flag : {"--d", "--alpha", "--gamma", "--gamma1", "--gamma2"})
                if (chosen->count(flag)) throw PreconditionError(std::string(flag) + " cannot be combined with --potential chain-file");
        cfg.validate();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return {std::nullopt, kExitUsage};
    }
    return {cfg, kExitOk};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    ParseOutcome parsed = parse_command_line(args, out, err);
    if (!parsed.config) return parsed.exit_code;
    const RunConfig& cfg = *parsed.config;

    RunResult result;
    try {
        result = execute(cfg);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    for (const std::string& w : result.warnings) err << "warning: " << w << "\n";

    std::ofstream file;
    if (!cfg.out.empty()) {
        file.open(cfg.out, std::ios::binary);
        if (!file) {
            err << "error: cannot write " << cfg.out << "\n";
            return kExitUsage;
        }
    }
    std::ostream& os = cfg.out.empty() ? out : file;
    if (cfg.format == Format::csv)
        write_csv(result, os);
    else
        os << document(cfg, result, current_provenance()).dump(2) << "\n";
    os.flush();
    if (!os) {
        err << "error: writing the output failed\n";
        return kExitUsage;
    }
    return result.exit_code();
}

}  // namespace morsewell::cli
