#include "morsewell/bracketer.hpp"
#include "morsewell/cli.hpp"
#include "morsewell/errors.hpp"
#include "morsewell/oracle_numerov.hpp"
#include "morsewell/piecewise_matcher.hpp"
#include "morsewell/potentials.hpp"
#include "morsewell/regular_solution.hpp"
#include "morsewell/specfun.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/operators.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace morsewell;

namespace {

using release = py::call_guard<py::gil_scoped_release>;

template <class E>
void error_class(py::module_& m, const char* name, py::handle base)
{
    py::register_exception<E>(m, name, base);
}

ChainBuilder family(const SegmentChain& chain)
{
    return [chain](double E) { return chain.at_energy(E); };
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Bound states of Morse-type and piecewise one-dimensional potentials (hbar = 2m = 1).";

    auto base = py::register_exception<Error>(m, "MorsewellError", PyExc_RuntimeError);
    error_class<DomainError>(m, "DomainError", base);
    error_class<ConvergenceError>(m, "ConvergenceError", base);
    error_class<NotImplementedFallback>(m, "NotImplementedFallback", base);
    error_class<GuardError>(m, "GuardError", base);
    error_class<SingularSystem>(m, "SingularSystem", base);
    error_class<GridTooCoarse>(m, "GridTooCoarse", base);
    error_class<NoSuchLevel>(m, "NoSuchLevel", base);
    error_class<PrecisionFloor>(m, "PrecisionFloor", base);
    error_class<SingularTransfer>(m, "SingularTransfer", base);
    error_class<PreconditionError>(m, "PreconditionError", base);

    py::enum_<Parity>(m, "Parity").value("even", Parity::even).value("odd", Parity::odd);
    py::enum_<WellKind>(m, "WellKind").value("symmetrized", WellKind::symmetrized).value("single_well", WellKind::single_well);

    py::class_<MorseParams>(m, "MorseParams")
        .def(py::init([](double alpha, double gamma1, double gamma2, double shift) {
                 return MorseParams{alpha, gamma1, gamma2, shift};
             }),
             py::arg("alpha") = 1.0, py::arg("gamma1") = 1.0, py::arg("gamma2") = 1.0, py::arg("shift") = 0.0)
        .def_static("symmetric", &MorseParams::symmetric, py::arg("alpha"), py::arg("gamma"), py::arg("shift") = 0.0)
        .def_readwrite("alpha", &MorseParams::alpha)
        .def_readwrite("gamma1", &MorseParams::gamma1)
        .def_readwrite("gamma2", &MorseParams::gamma2)
        .def_readwrite("shift", &MorseParams::shift)
        .def("validate", &MorseParams::validate)
        .def("kappa", &MorseParams::kappa)
        .def(py::self == py::self)
        .def("__repr__", [](const MorseParams& p) {
            std::ostringstream os;
            os << "MorseParams(alpha=" << p.alpha << ", gamma1=" << p.gamma1 << ", gamma2=" << p.gamma2 << ", shift=" << p.shift
               << ")";
            return os.str();
        });

    m.def("v_morse", [](double x, const MorseParams& p) { return v_morse(x, p); }, py::arg("x"), py::arg("params"));
    m.def("v_sym", &v_sym, py::arg("x"), py::arg("params"));
    m.def("v_single_well", &v_single_well, py::arg("x"), py::arg("params"));
    m.def("exact_full_line_morse_spectrum", &exact_full_line_morse_spectrum, py::arg("params"));

    m.def("kummer_m", [](double a, double b, double z) { return kummer_m(a, b, z); }, py::arg("a"), py::arg("b"), py::arg("z"));
    m.def("whittaker_m", [](double k, double mu, double z) { return whittaker_m(k, mu, z); }, py::arg("kappa"), py::arg("mu"),
          py::arg("z"));
    m.def("whittaker_w", [](double k, double mu, double z) { return whittaker_w(k, mu, z); }, py::arg("kappa"), py::arg("mu"),
          py::arg("z"));

    py::class_<SolverOptions>(m, "SolverOptions")
        .def(py::init<>())
        .def_readwrite("well", &SolverOptions::well)
        .def_readwrite("t_max", &SolverOptions::t_max)
        .def_readwrite("x_render_max", &SolverOptions::x_render_max)
        .def_readwrite("n_grid", &SolverOptions::n_grid)
        .def_readwrite("working_precision", &SolverOptions::working_precision);

    py::class_<EnergyBracket>(m, "EnergyBracket")
        .def_readonly("level", &EnergyBracket::level)
        .def_readonly("parity", &EnergyBracket::parity)
        .def_readonly("k_lo", &EnergyBracket::k_lo)
        .def_readonly("k_hi", &EnergyBracket::k_hi)
        .def_readonly("nodes_lo", &EnergyBracket::nodes_lo)
        .def_readonly("nodes_hi", &EnergyBracket::nodes_hi)
        .def_readonly("sign_lo", &EnergyBracket::sign_lo)
        .def_readonly("sign_hi", &EnergyBracket::sign_hi)
        .def_readonly("evaluations", &EnergyBracket::evaluations)
        .def_property_readonly("E_lo", &EnergyBracket::E_lo)
        .def_property_readonly("E_hi", &EnergyBracket::E_hi)
        .def_property_readonly("k_mid", &EnergyBracket::k_mid)
        .def_property_readonly("width", &EnergyBracket::width)
        .def("__repr__", [](const EnergyBracket& b) {
            std::ostringstream os;
            os.precision(12);
            os << "EnergyBracket(level=" << b.level << ", k_lo=" << b.k_lo << ", k_hi=" << b.k_hi << ")";
            return os.str();
        });

    py::class_<Classification>(m, "Classification")
        .def_readonly("nodes", &Classification::nodes)
        .def_readonly("sign", &Classification::sign)
        .def("levels_below", &Classification::levels_below);

    py::class_<SpectrumEntry>(m, "SpectrumEntry")
        .def_readonly("global_index", &SpectrumEntry::global_index)
        .def_readonly("parity", &SpectrumEntry::parity)
        .def_readonly("sector_level", &SpectrumEntry::sector_level)
        .def_readonly("bracket", &SpectrumEntry::bracket)
        .def_readonly("separated", &SpectrumEntry::separated);

    py::class_<DegeneracyGap>(m, "DegeneracyGap")
        .def_readonly("gap", &DegeneracyGap::gap)
        .def_readonly("uncertainty", &DegeneracyGap::uncertainty)
        .def_readonly("even", &DegeneracyGap::even)
        .def_readonly("odd", &DegeneracyGap::odd)
        .def_readonly("digits", &DegeneracyGap::digits);

    m.def("classify", &classify, py::arg("params"), py::arg("k"), py::arg("parity"), py::arg("options") = SolverOptions{},
          release());
    m.def("bracket_level",
          [](const MorseParams& p, int n, Parity parity, double k_tol, const SolverOptions& opts) {
              return bracket_level(p, n, parity, k_tol, std::nullopt, std::nullopt, opts);
          },
          py::arg("params"), py::arg("n"), py::arg("parity"), py::arg("k_tol") = 1e-6, py::arg("options") = SolverOptions{},
          release());
    m.def("spectrum", &spectrum, py::arg("params"), py::arg("n_max"), py::arg("k_tol") = 1e-6,
          py::arg("options") = SolverOptions{}, release());
    m.def("degeneracy_gap", &degeneracy_gap, py::arg("params"), py::arg("pair_index"), py::arg("k_tol") = 1e-10,
          py::arg("options") = SolverOptions{}, release());

    py::class_<RegularWave>(m, "RegularWave")
        .def_property_readonly("k", [](const RegularWave& w) { return w.trial().k; })
        .def_property_readonly("parity", &RegularWave::parity)
        .def_property_readonly("c_decay", &RegularWave::c_decay)
        .def_property_readonly("c_grow", &RegularWave::c_grow)
        .def("eval",
             [](const RegularWave& w, double x) {
                 const auto s = w.eval(x);
                 return py::make_tuple(s.psi, s.dpsi_dx);
             },
             py::arg("x"), "(psi, dpsi/dx) at x");
    m.def("build_regular",
          [](const MorseParams& p, double k, Parity parity, const SolverOptions& opts) {
              return build_regular(p, EnergyTrial::from_k(p, k), parity, opts);
          },
          py::arg("params"), py::arg("k"), py::arg("parity"), py::arg("options") = SolverOptions{}, release());

    py::class_<ShootingConfig>(m, "ShootingConfig")
        .def(py::init<>())
        .def_readwrite("x_max", &ShootingConfig::x_max)
        .def_readwrite("h_step", &ShootingConfig::h_step)
        .def_readwrite("match_tol", &ShootingConfig::match_tol)
        .def_readwrite("well", &ShootingConfig::well)
        .def_readwrite("x_left", &ShootingConfig::x_left);

    py::class_<OracleLevel>(m, "OracleLevel")
        .def_readonly("E", &OracleLevel::E)
        .def_readonly("k", &OracleLevel::k)
        .def_readonly("bracket", &OracleLevel::bracket)
        .def_readonly("E_half_step", &OracleLevel::E_half_step)
        .def_readonly("richardson_shift", &OracleLevel::richardson_shift)
        .def("converged", &OracleLevel::converged, py::arg("config"));

    m.def("oracle_eigenvalue", &eigenvalue, py::arg("params"), py::arg("n"), py::arg("parity"),
          py::arg("config") = ShootingConfig{}, release());
    m.def("oracle_full_line_eigenvalue",
          [](const MorseParams& p, int n, const ShootingConfig& cfg) { return full_line_eigenvalue(p, n, cfg); },
          py::arg("params"), py::arg("n"), py::arg("config") = ShootingConfig{}, release());

    py::class_<SegmentChain>(m, "SegmentChain")
        .def("at_energy", &SegmentChain::at_energy, py::arg("E"))
        .def("boundaries", &SegmentChain::boundaries)
        .def("potential", &SegmentChain::potential, py::arg("x"))
        .def("threshold", &SegmentChain::threshold)
        .def("minimum", &SegmentChain::minimum)
        .def_property_readonly("E", [](const SegmentChain& c) { return c.E; })
        .def("__len__", [](const SegmentChain& c) { return c.segments.size(); });

    py::class_<SolvedChain>(m, "SolvedChain")
        .def_property_readonly("secular", &SolvedChain::secular)
        .def_property_readonly("sign", &SolvedChain::sign)
        .def_property_readonly("digits", &SolvedChain::digits)
        .def("psi", &SolvedChain::psi, py::arg("x"))
        .def("dpsi", &SolvedChain::dpsi, py::arg("x"))
        .def("classify", &SolvedChain::classify);

    m.def("read_chain_file", &read_chain_file, py::arg("path"));
    m.def("chain_from_json", &chain_from_json, py::arg("text"));
    m.def("square_well_chain", &square_well_chain, py::arg("v0"), py::arg("a"));
    m.def("symmetrized_morse_chain", &symmetrized_morse_chain, py::arg("params"));
    m.def("full_line_morse_chain", &full_line_morse_chain, py::arg("params"));
    m.def("solve_chain", &solve_chain, py::arg("chain"), release());
    m.def("bracket_secular",
          [](const SegmentChain& chain, int n, double k_tol) { return bracket_secular(family(chain), n, k_tol); },
          py::arg("chain"), py::arg("n"), py::arg("k_tol") = 1e-6, release(),
          "Level n of the chain family E -> chain.at_energy(E).");

    m.def("run_cli",
          [](const std::vector<std::string>& args) {
              std::ostringstream out, err;
              int code;
              {
                  py::gil_scoped_release unlocked;
                  code = cli::run(args, out, err);
              }
              return py::make_tuple(code, out.str(), err.str());
          },
          py::arg("args"), "Run the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
