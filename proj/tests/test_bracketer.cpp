#include "doctest.h"

#include "morsewell/bracketer.hpp"
#include "morsewell/errors.hpp"

#include <chrono>
#include <cmath>
#include <cstring>

using namespace morsewell;

namespace {

const MorseParams figure = MorseParams::symmetric(1.0, 1.8, 1.0);

// Roots of L from mpmath hyp1f1 at 40 digits, tests/oracles/wave_oracle.py
constexpr double k_even0 = 1.35576293405212193;
constexpr double k_odd0 = 1.2681111413660039036;
constexpr double k_even1 = 0.40106172312912625782;
constexpr double k_odd1 = 0.2475647544336349892;

bool same_bits(const EnergyBracket& a, const EnergyBracket& b)
{
    return std::memcmp(&a.k_lo, &b.k_lo, sizeof(double)) == 0 && std::memcmp(&a.k_hi, &b.k_hi, sizeof(double)) == 0 &&
           a.evaluations == b.evaluations;
}

void check_evidence(const EnergyBracket& b)
{
    CHECK(b.k_lo < b.k_hi);
    CHECK(b.nodes_lo == b.level);
    CHECK(b.nodes_hi == b.level);
    CHECK(b.sign_lo * b.sign_hi == -1);
}

}  // namespace

TEST_CASE("classify: the coarse bracket 1.354 < k < 1.358")
{
    Classification lo = classify(figure, 1.354, Parity::even);
    Classification hi = classify(figure, 1.358, Parity::even);
    CHECK(lo.nodes == 0);
    CHECK(hi.nodes == 0);
    CHECK(lo.sign == -hi.sign);
    CHECK(lo.levels_below() == 1);
    CHECK(hi.levels_below() == 0);

    Classification a = classify(figure, 1.27, Parity::odd);
    Classification b = classify(figure, 1.26, Parity::odd);
    CHECK(a.levels_below() == 0);
    CHECK(b.levels_below() == 1);

    CHECK_THROWS_AS(classify(figure, 1.8001, Parity::even), PreconditionError);
    CHECK_THROWS_AS(classify(figure, 0.0, Parity::even), PreconditionError);
}

TEST_CASE("classify: levels below is monotone in E")
{
    const double top = k_ceiling(figure);
    for (Parity parity : {Parity::even, Parity::odd}) {
        int prev = -1;
        for (int i = 0; i < 200; ++i) {
            const double E = -top * top * (1.0 - (i + 0.5) / 200.0);
            const int n = classify(figure, std::sqrt(-E), parity).levels_below();
            CHECK(n >= prev);
            prev = n;
        }
        CHECK(prev == 2);
    }
}

TEST_CASE("bracket_level: published brackets")
{
    auto t0 = std::chrono::steady_clock::now();
    EnergyBracket e = bracket_level(figure, 0, Parity::even, 1e-5);
    auto t1 = std::chrono::steady_clock::now();
    CHECK(std::chrono::duration<double>(t1 - t0).count() < 5.0);
    CHECK(e.k_lo > 1.35576);
    CHECK(e.k_hi < 1.35577);
    CHECK(e.width() <= 1e-5);
    CHECK(e.k_lo < k_even0);
    CHECK(k_even0 < e.k_hi);
    check_evidence(e);
    CHECK(e.E_lo() == -e.k_hi * e.k_hi);

    EnergyBracket o = bracket_level(figure, 0, Parity::odd, 3e-6);
    CHECK(o.k_lo > 1.268110);
    CHECK(o.k_hi < 1.268116);
    CHECK(o.width() <= 3e-6);
    CHECK(o.k_lo < k_odd0);
    CHECK(k_odd0 < o.k_hi);
    check_evidence(o);
}

TEST_CASE("bracket_level: excited levels and missing levels")
{
    EnergyBracket e1 = bracket_level(figure, 1, Parity::even, 1e-9);
    EnergyBracket o1 = bracket_level(figure, 1, Parity::odd, 1e-9);
    CHECK(e1.k_lo < k_even1);
    CHECK(k_even1 < e1.k_hi);
    CHECK(o1.k_lo < k_odd1);
    CHECK(k_odd1 < o1.k_hi);
    check_evidence(e1);
    check_evidence(o1);

    CHECK_THROWS_AS(bracket_level(figure, 2, Parity::even, 1e-6), NoSuchLevel);
    CHECK_THROWS_AS(bracket_level(figure, 0, Parity::even, 1e-13), PrecisionFloor);
}

TEST_CASE("bracket_level: deterministic")
{
    EnergyBracket a = bracket_level(figure, 0, Parity::odd, 1e-9);
    EnergyBracket b = bracket_level(figure, 0, Parity::odd, 1e-9);
    CHECK(same_bits(a, b));
}

TEST_CASE("bracket_level: evaluation budget from a unit-width seed")
{
    EnergyBracket b = bracket_level(figure, 0, Parity::even, 1e-6, 0.79, 1.79);
    CHECK(b.evaluations <= 40);
    CHECK(b.k_lo < k_even0);
    CHECK(k_even0 < b.k_hi);
    // a seed that does not straddle the level falls back to the scan
    EnergyBracket c = bracket_level(figure, 0, Parity::even, 1e-6, 1.5, 1.7);
    CHECK(c.k_lo < k_even0);
    CHECK(k_even0 < c.k_hi);
}

TEST_CASE("bracket_k: an exact hit returns the tie bracket")
{
    KProblem problem;
    problem.classify = [](double k) {
        return Classification{0, k > 1.25 ? 1 : (k < 1.25 ? -1 : 0)};
    };
    problem.sign = [&](double k) { return problem.classify(k).sign; };
    problem.k_top = 1.5;
    problem.k_floor = 1e-3;
    EnergyBracket b = bracket_k(problem, 0, 1e-9, std::make_pair(1.0, 1.5));
    CHECK(b.k_lo == 1.25 * (1 - 1e-13));
    CHECK(b.k_hi == 1.25 * (1 + 1e-13));
}

TEST_CASE("spectrum: interleaved levels")
{
    auto two = spectrum(figure, 1, 1e-6);
    REQUIRE(two.size() == 2);
    CHECK(two[0].global_index == 0);
    CHECK(two[0].parity == Parity::even);
    CHECK(two[0].bracket->k_mid() == doctest::Approx(1.3558).epsilon(1e-4));
    CHECK(two[1].parity == Parity::odd);
    CHECK(two[1].bracket->k_mid() == doctest::Approx(1.2681).epsilon(1e-4));

    auto all = spectrum(figure, 5, 1e-8);
    REQUIRE(all.size() == 6);
    for (int g = 0; g < 4; ++g) {
        REQUIRE(all[g].bracket);
        CHECK(all[g].global_index == g);
        CHECK(all[g].sector_level == g / 2);
        CHECK(all[g].separated);
        if (g > 0) CHECK(all[g].bracket->E_lo() > all[g - 1].bracket->E_hi());
    }
    CHECK_FALSE(all[4].bracket);
    CHECK_FALSE(all[5].bracket);
    CHECK(all[2].bracket->k_lo < k_even1);
    CHECK(k_odd1 < all[3].bracket->k_hi);
}

// Oracle: pairs at k = 4.5, 3.5, ..., 0.5 split by 1e-19 to 7e-18 in k.
TEST_CASE("spectrum: deep wells give nearly coinciding pairs")
{
    auto s = spectrum(MorseParams::symmetric(1.0, 5.0, 2.0), 5, 1e-8);
    REQUIRE(s.size() == 6);
    for (int pair = 0; pair < 3; ++pair) {
        const EnergyBracket& e = *s[2 * pair].bracket;
        const EnergyBracket& o = *s[2 * pair + 1].bracket;
        const double k_exact = 4.5 - pair;
        CHECK(e.k_lo <= k_exact);
        CHECK(k_exact <= e.k_hi);
        CHECK(std::abs(e.k_mid() - o.k_mid()) <= e.width() + o.width());
        CHECK_FALSE(s[2 * pair].separated);
    }
}

TEST_CASE("single well: ground state")
{
    SolverOptions opts;
    opts.well = WellKind::single_well;
    const MorseParams p = MorseParams::symmetric(1.0, 1.0, 1.5);
    EnergyBracket b = bracket_level(p, 0, Parity::even, 1e-9, std::nullopt, std::nullopt, opts);
    // half-line shooting with node counting, tests/oracles/wave_oracle.py
    CHECK(b.k_mid() == doctest::Approx(1.8995631535).epsilon(1e-9));
    check_evidence(b);
}

// Gaps from the same oracle's L roots at 60 to 380 digits.
TEST_CASE("degeneracy_gap")
{
    DegeneracyGap g1 = degeneracy_gap(figure, 0, 1e-10);
    CHECK(g1.gap == doctest::Approx(0.22998726649302914).epsilon(1e-8));
    // arithmetic on the published k values 1.355765 and 1.268113
    CHECK(g1.gap == doctest::Approx(1.355765 * 1.355765 - 1.268113 * 1.268113).epsilon(1e-4));
    CHECK(g1.digits == 0);

    SolverOptions opts;
    opts.t_max = 1000.0;
    const double oracle[] = {4.77977193268e-7, 2.63111471743e-25, 1.08276814525e-77, 8.42602857163e-223};
    double prev = g1.gap;
    for (int d = 2; d <= 5; ++d) {
        DegeneracyGap g = degeneracy_gap(MorseParams::symmetric(1.0, 1.8, d), 0, 1e-10, opts);
        CHECK(g.gap > 0.0);
        CHECK(g.gap == doctest::Approx(oracle[d - 2]).epsilon(1e-9));
        CHECK(g.uncertainty <= 1e-3 * g.gap);
        CHECK(g.gap < prev);
        prev = g.gap;
    }
}
