#include "doctest.h"

#include "morsewell/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

using namespace morsewell;
using namespace morsewell::cli;

namespace {

const std::string data_dir = MORSEWELL_DATA_DIR;

// tests/oracles/wave_oracle.py and tests/oracles/matcher_oracle.py
constexpr double k_even0 = 1.35576293405212193;
constexpr double k_odd0 = 1.2681111413660039036;
constexpr double k_square_even0 = 1.7144605366650248443;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

RunConfig parsed(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    ParseOutcome p = parse_command_line(args, out, err);
    REQUIRE(p.config);
    return *p.config;
}

int parse_code(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    ParseOutcome p = parse_command_line(args, out, err);
    CHECK_FALSE(p.config);
    return p.exit_code;
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("parse: defaults and parameter flags")
{
    RunConfig cfg = parsed({"spectrum"});
    CHECK(cfg.command == Command::spectrum);
    CHECK(cfg.potential == PotentialKind::sym_morse);
    CHECK(cfg.params.alpha == 1.0);
    CHECK(cfg.params.gamma1 == 1.8);
    CHECK(cfg.params.shift == 1.0);
    CHECK(cfg.parity == ParityChoice::both);
    CHECK(cfg.format == Format::csv);

    cfg = parsed({"compare", "--potential", "morse", "--gamma", "1.3", "--alpha", "0.5", "--d", "2"});
    CHECK(cfg.command == Command::compare);
    CHECK(cfg.params.gamma1 == 1.3);
    CHECK(cfg.params.gamma2 == 1.3);
    CHECK(cfg.params.alpha == 0.5);
    CHECK(cfg.params.shift == 2.0);

    cfg = parsed({"wavefunction", "--k", "1.354", "1.356", "--k", "1.358", "--perturb", "1e-4", "--parity", "odd"});
    CHECK(cfg.k == std::vector<double>{1.354, 1.356, 1.358});
    CHECK(cfg.parity == ParityChoice::odd);
    CHECK(cfg.perturb == 1e-4);

    cfg = parsed({"spectrum", "--potential", "chain-file", "--chain", "x.json", "--format", "json"});
    CHECK(cfg.chain_path == "x.json");
    CHECK(cfg.format == Format::json);
}

TEST_CASE("parse: usage errors exit with 1")
{
    CHECK(parse_code({}) == kExitUsage);
    CHECK(parse_code({"spectrum", "--bogus"}) == kExitUsage);
    CHECK(parse_code({"fit"}) == kExitUsage);
    CHECK(parse_code({"spectrum", "--gamma", "1", "--gamma1", "2"}) == kExitUsage);
    CHECK(parse_code({"spectrum", "--potential", "chain-file"}) == kExitUsage);
    CHECK(parse_code({"spectrum", "--potential", "chain-file", "--chain", "x.json", "--alpha", "2"}) == kExitUsage);
    CHECK(parse_code({"spectrum", "--chain", "x.json"}) == kExitUsage);
    CHECK(parse_code({"spectrum", "--potential", "morse", "--parity", "even"}) == kExitUsage);
    CHECK(parse_code({"spectrum", "--potential", "square"}) == kExitUsage);
    CHECK(parse_code({"spectrum", "--ktol", "1e-13"}) == kExitUsage);
    CHECK(parse_code({"spectrum", "--levels", "0"}) == kExitUsage);
    CHECK(parse_code({"spectrum", "--alpha", "-1"}) == kExitUsage);
    CHECK(parse_code({"spectrum", "--k", "1.3"}) == kExitUsage);  // wavefunction only
    CHECK(parse_code({"wavefunction", "--k", "1e-6", "--perturb", "1e-5"}) == kExitUsage);
    CHECK(parse_code({"wavefunction", "--grid", "1"}) == kExitUsage);

    Run r = invoke({"spectrum", "--potential", "chain-file", "--chain", "x.json", "--gamma", "1"});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("error:") != std::string::npos);
    CHECK(r.out.empty());
}

TEST_CASE("help documents the units and exits with 0")
{
    Run r = invoke({"--help"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("hbar = 2m = 1") != std::string::npos);
    r = invoke({"wavefunction", "--help"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("--perturb") != std::string::npos);
    CHECK(r.out.find("hbar = 2m = 1") != std::string::npos);
}

TEST_CASE("spectrum: published brackets of the symmetrized well")
{
    RunConfig cfg = parsed({"spectrum", "--potential", "sym-morse", "--d", "1", "--alpha", "1", "--gamma", "1.8", "--levels",
                            "2", "--ktol", "1e-6"});
    RunResult res = execute(cfg);
    REQUIRE(res.levels.size() == 2);
    CHECK(res.exit_code() == kExitOk);
    const LevelRow& e = res.levels[0];
    CHECK(e.parity == "even");
    CHECK(e.k_lo > 1.35576);
    CHECK(e.k_hi < 1.35577);
    CHECK(e.k_lo < k_even0);
    CHECK(k_even0 < e.k_hi);
    CHECK(e.nodes == 0);
    CHECK(e.E_lo == -e.k_hi * e.k_hi);
    CHECK_FALSE(e.E_exact);
    const LevelRow& o = res.levels[1];
    CHECK(o.parity == "odd");
    CHECK(o.k_lo > 1.268110);
    CHECK(o.k_hi < 1.268116);
    CHECK(o.nodes == 1);
    CHECK(o.evaluations > 0);
}

TEST_CASE("spectrum: one parity sector")
{
    RunResult res = execute(parsed({"spectrum", "--parity", "odd", "--levels", "2"}));
    REQUIRE(res.levels.size() == 2);
    CHECK(res.levels[0].index == 1);
    CHECK(res.levels[1].index == 3);
    CHECK(res.levels[1].nodes == 3);
    for (const auto& r : res.levels) CHECK(r.parity == "odd");
}

TEST_CASE("spectrum: full-line Morse carries the closed form")
{
    RunResult res = execute(parsed({"spectrum", "--potential", "morse", "--alpha", "1", "--gamma", "1", "--levels", "1"}));
    REQUIRE(res.levels.size() == 1);
    const LevelRow& r = res.levels[0];
    CHECK(r.parity == "none");
    REQUIRE(r.E_exact);
    CHECK(*r.E_exact == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(r.E_lo <= -0.25);
    CHECK(-0.25 <= r.E_hi);

    Run run = invoke({"spectrum", "--potential", "morse", "--alpha", "1", "--gamma", "1"});
    CHECK(lines(run.out).at(1).ends_with(",-2.5000000000000000e-01,true"));
}

TEST_CASE("spectrum: asking for more levels than exist")
{
    // gamma1^2 / (alpha gamma2) = 3.24 binds three levels
    Run r = invoke({"spectrum", "--potential", "morse", "--gamma1", "1.8", "--gamma2", "1", "--levels", "99"});
    CHECK(r.code == kExitMissingLevel);
    CHECK(lines(r.out).size() == 4);
    CHECK(r.err.find("warning:") != std::string::npos);

    RunResult res = execute(parsed({"spectrum", "--potential", "morse", "--gamma1", "1.8", "--gamma2", "1", "--levels", "99"}));
    CHECK(res.missing_levels == 96);
    for (int n = 0; n < 3; ++n) {
        REQUIRE(res.levels[n].E_exact);
        CHECK(res.levels[n].E_lo <= *res.levels[n].E_exact);
        CHECK(*res.levels[n].E_exact <= res.levels[n].E_hi);
        CHECK(res.levels[n].nodes == n);
    }

    Run sym = invoke({"spectrum", "--levels", "6"});
    CHECK(sym.code == kExitMissingLevel);
    CHECK(lines(sym.out).size() == 5);
}

TEST_CASE("CSV: stable formatting")
{
    const std::vector<std::string> args{"spectrum", "--levels", "3"};
    Run a = invoke(args);
    Run b = invoke(args);
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
    CHECK(a.out.find('\r') == std::string::npos);
    const auto ls = lines(a.out);
    REQUIRE(ls.size() == 4);
    CHECK(ls[0] == "index,parity,k_lo,k_hi,E_lo,E_hi,nodes,evaluations,E_exact,exact_inside");
    const std::regex row(R"(\d+,(even|odd),(-?\d\.\d{16}e[+-]\d{2},){4}\d+,\d+,,)");
    for (size_t i = 1; i < ls.size(); ++i) CHECK(std::regex_match(ls[i], row));
    // one thread or several give the same bytes
    CHECK(invoke({"spectrum", "--levels", "3", "--parity", "even", "--threads", "1"}).out ==
          invoke({"spectrum", "--levels", "3", "--parity", "even", "--threads", "4"}).out);
}

TEST_CASE("JSON: document layout and exact round trip")
{
    const RunConfig cfg = parsed({"compare", "--potential", "morse", "--gamma", "1", "--format", "json"});
    const RunResult res = execute(cfg);
    const nlohmann::json doc = document(cfg, res, {"9.9.9", "2001-02-03T04:05:06Z"});
    CHECK(doc.at("provenance").at("version") == "9.9.9");
    CHECK(doc.at("provenance").at("timestamp") == "2001-02-03T04:05:06Z");

    const nlohmann::json back = nlohmann::json::parse(doc.dump(2));
    CHECK(result_from_json(back.at("results")) == res);
    CHECK(config_from_json(back.at("config")) == cfg);

    const RunConfig wcfg = parsed({"wavefunction", "--k", "1.3", "--grid", "33", "--xmax", "9"});
    const RunResult wres = execute(wcfg);
    CHECK(result_from_json(nlohmann::json::parse(to_json(wres).dump())) == wres);

    const RunConfig ccfg = parsed({"spectrum", "--potential", "chain-file", "--chain", data_dir + "/chains/square_well.json",
                                   "--levels", "3"});
    const RunResult cres = execute(ccfg);
    CHECK(result_from_json(nlohmann::json::parse(to_json(cres).dump())) == cres);
    CHECK(config_from_json(nlohmann::json::parse(to_json(ccfg).dump())) == ccfg);

    Run r = invoke({"spectrum", "--format", "json"});
    const nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j.contains("config"));
    CHECK(j.contains("results"));
    CHECK(std::regex_match(j.at("provenance").at("timestamp").get<std::string>(),
                           std::regex(R"(\d{4}-\d\d-\d\dT\d\d:\d\d:\d\dZ)")));
}

TEST_CASE("wavefunction: parity symmetry of the samples")
{
    RunResult res = execute(parsed({"wavefunction", "--k", "1.3", "--grid", "101", "--xmax", "8"}));
    REQUIRE(res.profiles.size() == 202);
    for (int b = 0; b < 2; ++b) {
        const ProfileRow* rows = res.profiles.data() + 101 * b;
        const double s = rows[0].parity == "even" ? 1.0 : -1.0;
        for (int i = 0; i < 101; ++i) {
            CHECK(rows[i].x == -rows[100 - i].x);
            CHECK(rows[i].psi == s * rows[100 - i].psi);
            CHECK(rows[i].dpsi == -s * rows[100 - i].dpsi);
        }
        CHECK(rows[50].x == 0.0);
    }
    CHECK(res.profiles[50].psi == 1.0);   // even: psi(0) = 1
    CHECK(res.profiles[151].psi == 0.0);  // odd: psi(0) = 0, psi'(0) = 1
    CHECK(res.profiles[151].dpsi == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("wavefunction: perturbed ground states split only far out")
{
    struct Case {
        const char* k;
        const char* h;
        const char* parity;
    };
    for (const Case& c : {Case{"1.355765", "0.000005", "even"}, Case{"1.268113", "0.000003", "odd"}}) {
        RunResult res = execute(parsed({"wavefunction", "--k", c.k, "--perturb", c.h, "--parity", c.parity, "--grid", "181",
                                        "--xmax", "9"}));
        REQUIRE(res.profiles.size() == 362);
        const ProfileRow* lo = res.profiles.data();
        const ProfileRow* hi = lo + 181;
        CHECK(lo[0].k < hi[0].k);
        double peak = 0.0;
        for (int i = 0; i < 181; ++i) peak = std::max(peak, std::abs(lo[i].psi));
        for (int i = 0; i < 181; ++i)
            if (std::abs(lo[i].x) <= 6.0) CHECK(std::abs(lo[i].psi - hi[i].psi) <= 0.01 * peak);
        CHECK(lo[180].x == 9.0);
        CHECK(lo[180].psi * hi[180].psi < 0.0);
        // the level lies between the two trials, so the lower-energy trial k + h turns positive
        CHECK(hi[180].psi > 0.0);
    }
}

TEST_CASE("wavefunction: level brackets when no k is given")
{
    RunResult res = execute(parsed({"wavefunction", "--levels", "2", "--grid", "5"}));
    REQUIRE(res.profiles.size() == 10);
    CHECK(std::abs(res.profiles[0].k - k_even0) < 1e-6);
    CHECK(std::abs(res.profiles[5].k - k_odd0) < 1e-6);
    CHECK(res.profiles[5].parity == "odd");

    Run r = invoke({"wavefunction", "--levels", "9", "--grid", "5"});
    CHECK(r.code == kExitMissingLevel);
    CHECK(lines(r.out).size() == 1 + 4 * 5);
}

TEST_CASE("wavefunction: full-line Morse through the chain solution")
{
    // ground state of alpha = gamma = 1, d = 0: psi = e^{-t/2} t^{1/2}, t = 2 e^{-x}
    RunResult res = execute(parsed({"wavefunction", "--potential", "morse", "--gamma", "1", "--d", "0", "--k", "0.5000001",
                                    "--grid", "11", "--xmax", "10"}));
    REQUIRE(res.profiles.size() == 11);
    auto exact = [](double x) {
        const double t = 2.0 * std::exp(-x);
        return std::exp(-0.5 * t) * std::sqrt(t);
    };
    const double scale = res.profiles[5].psi / exact(0.0);
    for (int i = 3; i <= 7; ++i)
        CHECK(res.profiles[i].psi / (scale * exact(res.profiles[i].x)) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(res.profiles[0].psi == 0.0);
    CHECK(res.profiles[0].parity == "none");
}

TEST_CASE("compare: published levels against the oracle")
{
    RunResult res = execute(parsed({"compare", "--levels", "2"}));
    REQUIRE(res.comparisons.size() == 2);
    CHECK(res.exit_code() == kExitOk);
    for (const CompareRow& r : res.comparisons) {
        CHECK(r.pass);
        CHECK(r.oracle_converged);
        CHECK(r.k_lo < r.k_oracle);
        CHECK(r.k_oracle < r.k_hi);
    }
    CHECK(std::abs(res.comparisons[0].k_oracle - k_even0) < 1e-9);
    CHECK(std::abs(res.comparisons[1].k_oracle - k_odd0) < 1e-9);
}

TEST_CASE("compare: full-line Morse against the closed form")
{
    Run r = invoke({"compare", "--potential", "morse", "--alpha", "1", "--gamma", "1"});
    CHECK(r.code == kExitOk);
    CHECK(lines(r.out).at(1).ends_with(",PASS"));
    RunResult res = execute(parsed({"compare", "--potential", "morse", "--alpha", "1", "--gamma", "1"}));
    REQUIRE(res.comparisons.size() == 1);
    CHECK(std::abs(res.comparisons[0].E_oracle + 0.25) < 1e-8);
}

TEST_CASE("compare: a loosened oracle grid fails")
{
    Run r = invoke({"compare", "--levels", "2", "--oracle-step", "0.1"});
    CHECK(r.code == kExitFail);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 3);
    CHECK(ls[1].ends_with(",FAIL"));
    CHECK(ls[2].ends_with(",FAIL"));
}

TEST_CASE("chain files: spectrum and compare")
{
    const std::string square = data_dir + "/chains/square_well.json";
    RunResult res = execute(parsed({"spectrum", "--potential", "chain-file", "--chain", square, "--levels", "2", "--ktol", "1e-9"}));
    REQUIRE(res.levels.size() == 2);
    CHECK(res.levels[0].k_lo < k_square_even0);
    CHECK(k_square_even0 < res.levels[0].k_hi);
    CHECK(res.levels[0].nodes == 0);
    CHECK(res.levels[1].nodes == 1);

    RunResult cmp = execute(parsed({"compare", "--potential", "chain-file", "--chain",
                                    data_dir + "/chains/symmetrized_morse.json", "--levels", "1"}));
    REQUIRE(cmp.comparisons.size() == 1);
    CHECK(cmp.comparisons[0].pass);
    CHECK(std::abs(cmp.comparisons[0].k_oracle - k_even0) < 1e-8);

    Run missing = invoke({"spectrum", "--potential", "chain-file", "--chain", data_dir + "/chains/none.json"});
    CHECK(missing.code == kExitUsage);
    CHECK(missing.err.find("error:") != std::string::npos);
}

TEST_CASE("output file")
{
    const std::string path = "test_cli_output.csv";
    Run r = invoke({"spectrum", "--out", path});
    CHECK(r.code == kExitOk);
    CHECK(r.out.empty());
    std::ifstream in(path, std::ios::binary);
    std::stringstream text;
    text << in.rdbuf();
    CHECK(text.str() == invoke({"spectrum"}).out);
    std::remove(path.c_str());

    CHECK(invoke({"spectrum", "--out", "/nonexistent-dir/x.csv"}).code == kExitUsage);
}
