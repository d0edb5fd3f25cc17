#pragma once

// Bound states of potentials assembled from exactly solvable pieces.
//
// The line is cut at a_1 < ... < a_K into segments on which the Schroedinger
// equation has a known pair of solutions psi1, psi2. A solution is
// c1 psi1 + c2 psi2 on each segment, and continuity of psi and psi' at each
// a_j fixes the next pair of coefficients from the previous one. Starting
// from the solution that decays toward -infinity in the first segment and
// propagating to the last segment, the solution is a bound state exactly
// when it is proportional to the last segment's decaying solution.
//
// The secular function is W[d, psi] / |W[psi1, psi2]| in the last segment,
// with d its decaying solution (normalized positive at +infinity). For an
// open end it is the coefficient of the growing basis member, and its sign
// is always the eventual sign of psi at +infinity, so node counting and
// bisection work exactly as for the tail functional of the Morse well.

#include "morsewell/bracketer.hpp"
#include "morsewell/detail/real.hpp"

#include <array>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace morsewell {

enum class Side { left, right };

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// psi1, psi2 and their x-derivatives at one point. `err` bounds the absolute
/// error of psi1 and psi2.
template <class Real>
struct BasisAt {
    Real psi1;
    Real dpsi1;
    Real psi2;
    Real dpsi2;
    Real err;
};

/// A pair of solutions of -psi'' + (V(x) - E) psi = 0 on some piece of the line.
///
/// The pair must be independent for every admissible E. When the segment
/// reaches an infinity, `decaying` gives the coefficients of the solution
/// that decays there, normalized to be positive near that infinity.
/// Implementations usually derive from BasisModel, which supplies the
/// evaluation overloads from one template.
class SegmentBasis {
public:
    virtual ~SegmentBasis() = default;

    virtual std::string kind() const = 0;
    virtual double potential(double x) const = 0;
    /// lim V(x) toward the given infinity (+infinity for a confining wall).
    virtual double limit(Side side) const = 0;
    /// Lowest value of V on [a, b]; the ends may be infinite.
    virtual double minimum(double a, double b) const = 0;
    /// Smallest interval containing {x in [a, b] : V(x) <= E}, if that set is non-empty.
    virtual std::optional<std::pair<double, double>> allowed(double a, double b, double E) const = 0;
    /// psi1 psi2' - psi2 psi1', independent of x.
    virtual double wronskian(double E) const = 0;
    /// An energy within a few ulps-scale of E at which the basis is regular.
    virtual double regularize_energy(double E) const { return E; }
    /// Decimal digits needed to evaluate the basis on [a, b] at energy E.
    virtual unsigned digits_hint(double /*a*/, double /*b*/, double /*E*/) const { return 0; }

    virtual void eval(double x, double E, unsigned digits, BasisAt<double>& out) const = 0;
    virtual void eval(double x, double E, unsigned digits, BasisAt<detail::Quad>& out) const = 0;
    virtual void eval(double x, double E, unsigned digits, BasisAt<BigFloat>& out) const = 0;

    virtual void decaying(Side side, double E, unsigned digits, std::array<double, 2>& out) const = 0;
    virtual void decaying(Side side, double E, unsigned digits, std::array<detail::Quad, 2>& out) const = 0;
    virtual void decaying(Side side, double E, unsigned digits, std::array<BigFloat, 2>& out) const = 0;

    BasisAt<double> eval(double x, double E) const
    {
        BasisAt<double> out;
        eval(x, E, 16, out);
        return out;
    }
};

/// Implements the evaluation overloads of SegmentBasis from
/// `Derived::eval_t<Real>(x, E, digits)` and `Derived::decaying_t<Real>(side, E, digits)`.
template <class Derived>
class BasisModel : public SegmentBasis {
public:
    using SegmentBasis::eval;
    void eval(double x, double E, unsigned digits, BasisAt<double>& out) const override
    {
        out = self().template eval_t<double>(x, E, digits);
    }
    void eval(double x, double E, unsigned digits, BasisAt<detail::Quad>& out) const override
    {
        out = self().template eval_t<detail::Quad>(x, E, digits);
    }
    void eval(double x, double E, unsigned digits, BasisAt<BigFloat>& out) const override
    {
        out = self().template eval_t<BigFloat>(x, E, digits);
    }
    void decaying(Side side, double E, unsigned digits, std::array<double, 2>& out) const override
    {
        out = self().template decaying_t<double>(side, E, digits);
    }
    void decaying(Side side, double E, unsigned digits, std::array<detail::Quad, 2>& out) const override
    {
        out = self().template decaying_t<detail::Quad>(side, E, digits);
    }
    void decaying(Side side, double E, unsigned digits, std::array<BigFloat, 2>& out) const override
    {
        out = self().template decaying_t<BigFloat>(side, E, digits);
    }

private:
    const Derived& self() const { return static_cast<const Derived&>(*this); }
};

/// Constant potential V0. Below V0 the pair is e^{q(x - x_ref)}, e^{-q(x - x_ref)}
/// with q = sqrt(V0 - E); above it cos(p(x - x_ref)), sin(p(x - x_ref)) with
/// p = sqrt(E - V0); at E = V0 it is 1, x - x_ref.
class ConstantBasis : public BasisModel<ConstantBasis> {
public:
    ConstantBasis(double v0, double x_ref);

    double value() const { return v0_; }
    double x_ref() const { return x_ref_; }

    std::string kind() const override { return "constant"; }
    double potential(double) const override { return v0_; }
    double limit(Side) const override { return v0_; }
    double minimum(double, double) const override { return v0_; }
    std::optional<std::pair<double, double>> allowed(double a, double b, double E) const override;
    double wronskian(double E) const override;

    template <class Real>
    BasisAt<Real> eval_t(double x, double E, unsigned digits) const;
    template <class Real>
    std::array<Real, 2> decaying_t(Side side, double E, unsigned digits) const;

private:
    double v0_;
    double x_ref_;
};

/// Morse piece V(x) = v_morse(y - d) with y = x, or y = -x when mirrored.
/// The pair is f_-(y), f_+(y) of the Whittaker construction (f_+ decays on
/// the open side). Toward the repulsive wall the decaying solution is
/// t^{-1/2} W_{kappa,mu}(t). Requires E < 0.
class MorseBasis : public BasisModel<MorseBasis> {
public:
    MorseBasis(const MorseParams& p, bool mirrored);

    const MorseParams& params() const { return p_; }
    bool mirrored() const { return mirrored_; }

    std::string kind() const override { return "morse"; }
    double potential(double x) const override;
    double limit(Side side) const override;
    double minimum(double a, double b) const override;
    std::optional<std::pair<double, double>> allowed(double a, double b, double E) const override;
    double wronskian(double E) const override;
    double regularize_energy(double E) const override;
    unsigned digits_hint(double a, double b, double E) const override;

    template <class Real>
    BasisAt<Real> eval_t(double x, double E, unsigned digits) const;
    template <class Real>
    std::array<Real, 2> decaying_t(Side side, double E, unsigned digits) const;

private:
    Side open_side() const { return mirrored_ ? Side::left : Side::right; }

    MorseParams p_;
    bool mirrored_;
};

/// Another basis with psi1, psi2 multiplied by s1, s2.
class ScaledBasis : public BasisModel<ScaledBasis> {
public:
    ScaledBasis(std::shared_ptr<const SegmentBasis> inner, double s1, double s2);

    std::string kind() const override { return inner_->kind(); }
    double potential(double x) const override { return inner_->potential(x); }
    double limit(Side side) const override { return inner_->limit(side); }
    double minimum(double a, double b) const override { return inner_->minimum(a, b); }
    std::optional<std::pair<double, double>> allowed(double a, double b, double E) const override
    {
        return inner_->allowed(a, b, E);
    }
    double wronskian(double E) const override { return s1_ * s2_ * inner_->wronskian(E); }
    double regularize_energy(double E) const override { return inner_->regularize_energy(E); }
    unsigned digits_hint(double a, double b, double E) const override { return inner_->digits_hint(a, b, E); }

    template <class Real>
    BasisAt<Real> eval_t(double x, double E, unsigned digits) const;
    template <class Real>
    std::array<Real, 2> decaying_t(Side side, double E, unsigned digits) const;

private:
    std::shared_ptr<const SegmentBasis> inner_;
    double s1_;
    double s2_;
};

struct Segment {
    double a_left = -kInfinity;
    double a_right = kInfinity;
    std::shared_ptr<const SegmentBasis> basis;

    bool contains(double x) const { return x >= a_left && x <= a_right; }
};

/// Constant segment with its exponentials referred to the nearest finite boundary.
Segment constant_segment(double v0, double a_left, double a_right);
Segment morse_segment(const MorseParams& p, bool mirrored, double a_left, double a_right);

struct SegmentChain {
    std::vector<Segment> segments;
    double E = std::numeric_limits<double>::quiet_NaN();

    /// Throws PreconditionError unless the segments tile the line in order,
    /// every segment has a basis, and E lies below both asymptotic limits.
    void validate() const;
    SegmentChain at_energy(double energy) const;
    /// Interior boundaries a_1, ..., a_K.
    std::vector<double> boundaries() const;
    double potential(double x) const;
    /// min(V(-infinity), V(+infinity)): the bottom of the continuum.
    double threshold() const;
    double minimum() const;
    /// Segment holding x; boundary points belong to the segment on their left.
    const Segment& segment_at(double x) const;
};

/// 2x2 map from the (c1, c2) of one segment to those of the next.
struct TransferMatrix {
    std::array<std::array<double, 2>, 2> m{};

    std::array<double, 2> apply(const std::array<double, 2>& c) const
    {
        return {m[0][0] * c[0] + m[0][1] * c[1], m[1][0] * c[0] + m[1][1] * c[1]};
    }
    friend TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b)
    {
        TransferMatrix r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j];
        return r;
    }
};

/// Continuity of psi and psi' at a, evaluated in binary128. Throws
/// SingularTransfer when the right basis is numerically dependent at a.
TransferMatrix match_boundary(const Segment& left, const Segment& right, double a, double E);

namespace detail {
struct ChainImpl;
struct WideChains;
}

/// A chain with its propagated coefficients at the chain's energy.
class SolvedChain {
public:
    const SegmentChain& chain() const { return chain_; }
    /// (c1, c2) on each segment, rounded to double.
    const std::vector<std::array<double, 2>>& coefficients() const { return coefficients_; }
    double secular() const { return secular_; }
    /// Certified sign of the secular function; 0 only if unresolved.
    int sign() const { return sign_; }
    /// Working precision in decimal digits.
    unsigned digits() const { return digits_; }
    /// Relative change of the secular value between the last two precisions.
    double rel_uncertainty() const { return rel_uncertainty_; }

    /// psi and psi' at x. Points deep in a barrier, where the decaying
    /// combination cancels beyond the working precision, are evaluated
    /// from a re-solve at the digits they need (cached per precision).
    double psi(double x) const;
    double dpsi(double x) const;
    /// Sign changes of psi over the classically allowed hull, and the tail sign.
    Classification classify() const;

private:
    friend SolvedChain solve_chain(const SegmentChain& chain);

    SegmentChain chain_;
    std::vector<std::array<double, 2>> coefficients_;
    double secular_ = 0.0;
    int sign_ = 0;
    unsigned digits_ = 0;
    double rel_uncertainty_ = 0.0;
    std::shared_ptr<const detail::ChainImpl> impl_;
    std::shared_ptr<detail::WideChains> wide_;

    /// Solution accurate at x, or null when psi there is below double range.
    const detail::ChainImpl* impl_at(double x) const;
};

/// Propagates the left decaying solution to the last segment. The working
/// precision starts at the bases' hints (at least 34 digits) and grows until
/// two consecutive precisions agree on the secular value to 1e-8.
SolvedChain solve_chain(const SegmentChain& chain);

/// The secular function at the chain's energy; zero exactly at bound states.
double secular(const SegmentChain& chain);

Classification classify_chain(const SegmentChain& chain);

using ChainBuilder = std::function<SegmentChain(double E)>;

/// k-problem for the chain family E -> builder(E) with E = -k^2. The continuum
/// threshold must be 0; the parity field of the brackets is not used.
KProblem chain_problem(const ChainBuilder& builder);

/// Certified bracket of width <= k_tol around level n of the chain family.
/// Errors as bracket_level.
EnergyBracket bracket_secular(const ChainBuilder& builder, int n, double k_tol,
                              std::optional<std::pair<double, double>> seeds = std::nullopt);

/// V = -v0 on |x| < a, 0 outside.
SegmentChain square_well_chain(double v0, double a);
/// v_sym as a mirrored Morse segment on x < 0 and a plain one on x > 0.
SegmentChain symmetrized_morse_chain(const MorseParams& p);
/// v_morse(x - d) on the whole line, as a single segment.
SegmentChain full_line_morse_chain(const MorseParams& p);

/// Chain from its JSON description (see docs/chain_format.md).
SegmentChain chain_from_json(const std::string& text);
SegmentChain read_chain_file(const std::string& path);

}  // namespace morsewell
