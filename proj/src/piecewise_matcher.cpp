#include "morsewell/piecewise_matcher.hpp"

#include "morsewell/detail/wave.hpp"
#include "morsewell/errors.hpp"
#include "morsewell/specfun.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace morsewell {

namespace {

using detail::Quad;
using detail::RealTraits;
using std::abs;
using std::cos;
using std::exp;
using std::sin;
using std::sqrt;
using std::tgamma;

constexpr unsigned kMinDigits = 34;
constexpr unsigned kMaxDigits = 6000;
constexpr double kAgreement = 1e-8;
constexpr unsigned kUnderflowDigits = 1000;

template <class Real>
Real mk(double v, unsigned digits)
{
    return RealTraits<Real>::make(v, digits);
}

template <class Real>
const Real& larger(const Real& a, const Real& b)
{
    return a > b ? a : b;
}

std::string fmt(double v)
{
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

}  // namespace

// ---------------------------------------------------------------- bases

ConstantBasis::ConstantBasis(double v0, double x_ref) : v0_(v0), x_ref_(x_ref)
{
    if (!std::isfinite(v0) || !std::isfinite(x_ref))
        throw PreconditionError("ConstantBasis: value and reference point must be finite");
}

std::optional<std::pair<double, double>> ConstantBasis::allowed(double a, double b, double E) const
{
    if (v0_ <= E) return std::make_pair(a, b);
    return std::nullopt;
}

double ConstantBasis::wronskian(double E) const
{
    if (E < v0_) return -2.0 * std::sqrt(v0_ - E);
    if (E > v0_) return std::sqrt(E - v0_);
    return 1.0;
}

template <class Real>
BasisAt<Real> ConstantBasis::eval_t(double x, double E, unsigned digits) const
{
    using T = RealTraits<Real>;
    const Real u = mk<Real>(x, digits) - mk<Real>(x_ref_, digits);
    const Real q2 = mk<Real>(v0_, digits) - mk<Real>(E, digits);
    const int s = T::sign(q2);
    if (s > 0) {
        Real q = sqrt(q2);
        Real e = exp(q * u);
        Real ei = 1.0 / e;
        Real err = T::eps_times(Real((e + ei) * (8.0 + abs(q * u))), e);
        return {e, q * e, ei, -(q * ei), err};
    }
    if (s < 0) {
        Real p = sqrt(-q2);
        Real c = cos(p * u);
        Real sn = sin(p * u);
        Real err = T::eps_times(Real(8.0 + abs(p * u)), p);
        return {c, -(p * sn), sn, p * c, err};
    }
    Real one = T::like(1.0, u);
    return {one, T::like(0.0, u), u, one, T::eps_times(Real(abs(u) + 1.0), u)};
}

template <class Real>
std::array<Real, 2> ConstantBasis::decaying_t(Side side, double E, unsigned digits) const
{
    if (!(E < v0_)) throw PreconditionError("ConstantBasis: no decaying solution at E >= V");
    Real one = mk<Real>(1.0, digits), zero = mk<Real>(0.0, digits);
    if (side == Side::left) return {one, zero};
    return {zero, one};
}

MorseBasis::MorseBasis(const MorseParams& p, bool mirrored) : p_(p), mirrored_(mirrored) { p_.validate(); }

double MorseBasis::potential(double x) const { return v_morse((mirrored_ ? -x : x) - p_.shift, p_); }

double MorseBasis::limit(Side side) const { return side == open_side() ? 0.0 : kInfinity; }

double MorseBasis::minimum(double a, double b) const
{
    const double ya = mirrored_ ? -b : a;
    const double yb = mirrored_ ? -a : b;
    auto g = [&](double y) {
        if (y == kInfinity) return 0.0;
        if (y == -kInfinity) return kInfinity;
        return v_morse(y - p_.shift, p_);
    };
    if (p_.gamma1 == 0.0) return g(yb);
    const Extremum m = morse_minimum(p_);
    const double y_star = m.x + p_.shift;
    if (ya <= y_star && y_star <= yb) return m.value;
    return std::min(g(ya), g(yb));
}

std::optional<std::pair<double, double>> MorseBasis::allowed(double a, double b, double E) const
{
    const double g1s = p_.gamma1 * p_.gamma1, g2s = p_.gamma2 * p_.gamma2;
    const double disc = g1s * g1s + g2s * E;
    if (disc < 0.0) return std::nullopt;
    // V = E at u = exp(-alpha (y - d)) solving gamma2^2 u^2 - 2 gamma1^2 u - E = 0
    const double u_wall = (g1s + std::sqrt(disc)) / g2s;
    const double u_open = (g1s - std::sqrt(disc)) / g2s;
    if (!(u_wall > 0.0)) return std::nullopt;
    const double y_wall = p_.shift - std::log(u_wall) / p_.alpha;
    const double y_open = u_open > 0.0 ? p_.shift - std::log(u_open) / p_.alpha : kInfinity;
    const double ya = mirrored_ ? -b : a;
    const double yb = mirrored_ ? -a : b;
    const double lo = std::max(ya, y_wall), hi = std::min(yb, y_open);
    if (lo > hi) return std::nullopt;
    if (mirrored_) return std::make_pair(-hi, -lo);
    return std::make_pair(lo, hi);
}

double MorseBasis::wronskian(double E) const
{
    const double k = std::sqrt(-E);
    return mirrored_ ? 2.0 * k : -2.0 * k;
}

double MorseBasis::regularize_energy(double E) const
{
    if (!(E < 0.0)) return E;
    const double mu = std::sqrt(-E) / p_.alpha;
    if (!is_degenerate_index(mu)) return E;
    const double k = nudge_index(mu) * p_.alpha;
    return -k * k;
}

unsigned MorseBasis::digits_hint(double a, double b, double E) const
{
    if (!(E < 0.0)) return 0;
    const double ya = mirrored_ ? -b : a;
    const double yb = mirrored_ ? -a : b;
    double y_lo = ya;
    if (!std::isfinite(y_lo)) {
        // grid points on the wall side stop at the turning point
        auto hull = allowed(a, b, E);
        y_lo = hull ? (mirrored_ ? -hull->second : hull->first) : yb;
        if (!std::isfinite(y_lo)) return 0;
    }
    const double t = 2.0 * p_.gamma2 / p_.alpha * std::exp(p_.alpha * (p_.shift - y_lo));
    const double two_mu = 2.0 * std::sqrt(-E) / p_.alpha;
    const double offset = std::abs(two_mu - std::round(two_mu));
    double digits = 0.4343 * t + 20.0;
    if (offset < 0.1) digits += -std::log10(std::max(offset, 1e-300));
    if (!(digits < kMaxDigits))
        throw GuardError("MorseBasis: evaluation would need more than " + std::to_string(kMaxDigits) + " digits");
    return static_cast<unsigned>(std::ceil(digits));
}

template <class Real>
BasisAt<Real> MorseBasis::eval_t(double x, double E, unsigned digits) const
{
    if (!(E < 0.0)) throw DomainError("MorseBasis: requires E < 0");
    auto chart = detail::MorseChart<Real>::make(p_, WellKind::symmetrized, digits);
    const Real k = sqrt(mk<Real>(-E, digits));
    const Real mu = k / chart.alpha;
    const Real t = chart.coordinate(mk<Real>(mirrored_ ? -x : x, digits));
    auto fm = detail::morse_basis(chart, Real(-mu), t);
    auto fp = detail::morse_basis(chart, mu, t);
    if (mirrored_) {
        fm.dfdx = -fm.dfdx;
        fp.dfdx = -fp.dfdx;
    }
    return {fm.f, fm.dfdx, fp.f, fp.dfdx, larger(fm.err_f, fp.err_f)};
}

template <class Real>
std::array<Real, 2> MorseBasis::decaying_t(Side side, double E, unsigned digits) const
{
    using T = RealTraits<Real>;
    if (!(E < 0.0)) throw DomainError("MorseBasis: requires E < 0");
    if (side == open_side()) return {mk<Real>(0.0, digits), mk<Real>(1.0, digits)};
    // t^{-1/2} W_{kappa,mu}(t) = A f_+ + B f_-
    const Real alpha = mk<Real>(p_.alpha, digits);
    const Real g1 = mk<Real>(p_.gamma1, digits);
    const Real kappa = g1 * g1 / (alpha * mk<Real>(p_.gamma2, digits));
    const Real mu = sqrt(mk<Real>(-E, digits)) / alpha;
    const Real half = mk<Real>(0.5, digits);
    Real a = tgamma(Real(-2.0 * mu)) * T::rgamma(Real(half - mu - kappa));
    Real b = tgamma(Real(2.0 * mu)) * T::rgamma(Real(half + mu - kappa));
    return {b, a};
}

ScaledBasis::ScaledBasis(std::shared_ptr<const SegmentBasis> inner, double s1, double s2)
    : inner_(std::move(inner)), s1_(s1), s2_(s2)
{
    if (!inner_) throw PreconditionError("ScaledBasis: null basis");
    if (!(s1 != 0.0 && s2 != 0.0 && std::isfinite(s1) && std::isfinite(s2)))
        throw PreconditionError("ScaledBasis: scale factors must be finite and nonzero");
}

template <class Real>
BasisAt<Real> ScaledBasis::eval_t(double x, double E, unsigned digits) const
{
    BasisAt<Real> b;
    inner_->eval(x, E, digits, b);
    b.psi1 = b.psi1 * s1_;
    b.dpsi1 = b.dpsi1 * s1_;
    b.psi2 = b.psi2 * s2_;
    b.dpsi2 = b.dpsi2 * s2_;
    b.err = b.err * std::max(std::abs(s1_), std::abs(s2_));
    return b;
}

template <class Real>
std::array<Real, 2> ScaledBasis::decaying_t(Side side, double E, unsigned digits) const
{
    std::array<Real, 2> d;
    inner_->decaying(side, E, digits, d);
    return {d[0] / mk<Real>(s1_, digits), d[1] / mk<Real>(s2_, digits)};
}

#define MORSEWELL_INSTANTIATE_BASIS(Cls, Real)                                      \
    template BasisAt<Real> Cls::eval_t<Real>(double, double, unsigned) const;      \
    template std::array<Real, 2> Cls::decaying_t<Real>(Side, double, unsigned) const;
#define MORSEWELL_INSTANTIATE_ALL(Cls)           \
    MORSEWELL_INSTANTIATE_BASIS(Cls, double)     \
    MORSEWELL_INSTANTIATE_BASIS(Cls, Quad)       \
    MORSEWELL_INSTANTIATE_BASIS(Cls, BigFloat)
MORSEWELL_INSTANTIATE_ALL(ConstantBasis)
MORSEWELL_INSTANTIATE_ALL(MorseBasis)
MORSEWELL_INSTANTIATE_ALL(ScaledBasis)
#undef MORSEWELL_INSTANTIATE_ALL
#undef MORSEWELL_INSTANTIATE_BASIS

// ---------------------------------------------------------------- chains

Segment constant_segment(double v0, double a_left, double a_right)
{
    const double ref = std::isfinite(a_left) ? a_left : (std::isfinite(a_right) ? a_right : 0.0);
    return Segment{a_left, a_right, std::make_shared<ConstantBasis>(v0, ref)};
}

Segment morse_segment(const MorseParams& p, bool mirrored, double a_left, double a_right)
{
    return Segment{a_left, a_right, std::make_shared<MorseBasis>(p, mirrored)};
}

void SegmentChain::validate() const
{
    if (segments.empty()) throw PreconditionError("SegmentChain: no segments");
    if (segments.front().a_left != -kInfinity || segments.back().a_right != kInfinity)
        throw PreconditionError("SegmentChain: the segments must extend to both infinities");
    for (size_t j = 0; j < segments.size(); ++j) {
        const Segment& s = segments[j];
        if (!s.basis) throw PreconditionError("SegmentChain: segment " + std::to_string(j) + " has no basis");
        if (!(s.a_left < s.a_right)) throw PreconditionError("SegmentChain: boundaries must be strictly increasing");
        if (j > 0) {
            if (s.a_left != segments[j - 1].a_right)
                throw PreconditionError("SegmentChain: segment " + std::to_string(j) + " does not start where the previous ends");
            if (!std::isfinite(s.a_left)) throw PreconditionError("SegmentChain: interior boundaries must be finite");
        }
    }
    if (!std::isfinite(E)) throw PreconditionError("SegmentChain: trial energy not set");
    if (!(E < segments.front().basis->limit(Side::left) && E < segments.back().basis->limit(Side::right)))
        throw PreconditionError("SegmentChain: E = " + fmt(E) + " is not below both asymptotic limits of V");
}

SegmentChain SegmentChain::at_energy(double energy) const
{
    SegmentChain c = *this;
    c.E = energy;
    return c;
}

std::vector<double> SegmentChain::boundaries() const
{
    std::vector<double> out;
    for (size_t j = 1; j < segments.size(); ++j) out.push_back(segments[j].a_left);
    return out;
}

const Segment& SegmentChain::segment_at(double x) const
{
    for (const Segment& s : segments)
        if (x <= s.a_right) return s;
    return segments.back();
}

double SegmentChain::potential(double x) const { return segment_at(x).basis->potential(x); }

double SegmentChain::threshold() const
{
    return std::min(segments.front().basis->limit(Side::left), segments.back().basis->limit(Side::right));
}

double SegmentChain::minimum() const
{
    double m = kInfinity;
    for (const Segment& s : segments) m = std::min(m, s.basis->minimum(s.a_left, s.a_right));
    return m;
}

TransferMatrix match_boundary(const Segment& left, const Segment& right, double a, double E)
{
    if (!left.basis || !right.basis) throw PreconditionError("match_boundary: segment without basis");
    if (!std::isfinite(a) || !std::isfinite(E)) throw PreconditionError("match_boundary: a and E must be finite");
    BasisAt<Quad> L, R;
    left.basis->eval(a, E, kMinDigits, L);
    right.basis->eval(a, E, kMinDigits, R);
    const Quad w = R.psi1 * R.dpsi2 - R.psi2 * R.dpsi1;
    const Quad scale = abs(R.psi1 * R.dpsi2) + abs(R.psi2 * R.dpsi1);
    if (!(abs(w) > scale * 1e-30))
        throw SingularTransfer("match_boundary: right basis is dependent at a = " + fmt(a));
    // c_R = B_R^{-1} B_L c_L with B = [[psi1, psi2], [psi1', psi2']]
    auto d = [](const Quad& v) { return static_cast<double>(v); };
    TransferMatrix t;
    t.m[0][0] = d((R.dpsi2 * L.psi1 - R.psi2 * L.dpsi1) / w);
    t.m[0][1] = d((R.dpsi2 * L.psi2 - R.psi2 * L.dpsi2) / w);
    t.m[1][0] = d((R.psi1 * L.dpsi1 - R.dpsi1 * L.psi1) / w);
    t.m[1][1] = d((R.psi1 * L.dpsi2 - R.dpsi1 * L.psi2) / w);
    return t;
}

namespace detail {

struct ChainImpl {
    virtual ~ChainImpl() = default;
    virtual int secular_sign() const = 0;
    virtual double secular_log10() const = 0;
    virtual double secular_value() const = 0;
    virtual bool singular() const = 0;
    virtual std::vector<std::array<double, 2>> coefficients() const = 0;
    /// psi(x) and an absolute error bound, given a relative error of the coefficients.
    virtual std::pair<double, double> psi_bounded(double x, double coeff_rel_err) const = 0;
    virtual double dpsi(double x) const = 0;
};

template <class Real>
struct ChainImplT final : ChainImpl {
    using T = RealTraits<Real>;

    SegmentChain chain;
    unsigned digits = 0;
    std::vector<std::array<Real, 2>> c;
    Real secular;
    bool is_singular = false;

    ChainImplT(const SegmentChain& ch, unsigned dg) : chain(ch), digits(dg), secular(mk<Real>(0.0, dg))
    {
        const auto& segs = ch.segments;
        std::array<Real, 2> cur;
        segs.front().basis->decaying(Side::left, ch.E, dg, cur);
        c.push_back(cur);
        for (size_t j = 1; j < segs.size(); ++j) {
            const double a = segs[j].a_left;
            BasisAt<Real> L, R;
            segs[j - 1].basis->eval(a, ch.E, dg, L);
            segs[j].basis->eval(a, ch.E, dg, R);
            Real psi = cur[0] * L.psi1 + cur[1] * L.psi2;
            Real dpsi = cur[0] * L.dpsi1 + cur[1] * L.dpsi2;
            Real w = R.psi1 * R.dpsi2 - R.psi2 * R.dpsi1;
            Real scale = abs(R.psi1 * R.dpsi2) + abs(R.psi2 * R.dpsi1);
            if (!(abs(w) > T::eps_times(Real(scale * 1e3), w))) is_singular = true;
            cur = {(psi * R.dpsi2 - dpsi * R.psi2) / w, (R.psi1 * dpsi - R.dpsi1 * psi) / w};
            c.push_back(cur);
        }
        std::array<Real, 2> d;
        segs.back().basis->decaying(Side::right, ch.E, dg, d);
        const double w_last = segs.back().basis->wronskian(ch.E);
        // W[d, psi] / |W[psi1, psi2]|
        secular = w_last > 0 ? Real(cur[1] * d[0] - cur[0] * d[1]) : Real(cur[0] * d[1] - cur[1] * d[0]);
        if (!T::is_finite(secular)) is_singular = true;
    }

    int secular_sign() const override { return T::sign(secular); }
    double secular_log10() const override { return T::log10_abs(secular); }
    double secular_value() const override { return T::to_double(secular); }
    bool singular() const override { return is_singular; }

    std::vector<std::array<double, 2>> coefficients() const override
    {
        std::vector<std::array<double, 2>> out;
        for (const auto& v : c) out.push_back({T::to_double(v[0]), T::to_double(v[1])});
        return out;
    }

    std::pair<double, double> psi_bounded(double x, double coeff_rel_err) const override
    {
        const auto& segs = chain.segments;
        size_t j = 0;
        while (j + 1 < segs.size() && x > segs[j].a_right) ++j;
        BasisAt<Real> b;
        segs[j].basis->eval(x, chain.E, digits, b);
        Real p1 = c[j][0] * b.psi1;
        Real p2 = c[j][1] * b.psi2;
        Real mag = abs(p1) + abs(p2);
        Real err = (abs(c[j][0]) + abs(c[j][1])) * b.err + mag * coeff_rel_err + T::eps_times(Real(mag * 4.0), mag);
        return {T::to_double(Real(p1 + p2)), T::to_double(err)};
    }

    double dpsi(double x) const override
    {
        const auto& segs = chain.segments;
        size_t j = 0;
        while (j + 1 < segs.size() && x > segs[j].a_right) ++j;
        BasisAt<Real> b;
        segs[j].basis->eval(x, chain.E, digits, b);
        return T::to_double(Real(c[j][0] * b.dpsi1 + c[j][1] * b.dpsi2));
    }
};

struct WideChains {
    std::mutex lock;
    std::map<unsigned, std::shared_ptr<const ChainImpl>> by_digits;
};

}  // namespace detail

namespace {

unsigned base_digits(const SegmentChain& chain)
{
    unsigned d = kMinDigits;
    for (const Segment& s : chain.segments) d = std::max(d, s.basis->digits_hint(s.a_left, s.a_right, chain.E));
    return d;
}

// Hull of the classically allowed points, or nothing when the whole line is forbidden.
std::optional<std::pair<double, double>> allowed_hull(const SegmentChain& chain)
{
    std::optional<std::pair<double, double>> hull;
    for (const Segment& s : chain.segments) {
        auto h = s.basis->allowed(s.a_left, s.a_right, chain.E);
        if (!h) continue;
        if (!hull)
            hull = h;
        else
            hull = std::make_pair(std::min(hull->first, h->first), std::max(hull->second, h->second));
    }
    return hull;
}

}  // namespace

SolvedChain solve_chain(const SegmentChain& chain)
{
    chain.validate();
    SolvedChain out;
    out.chain_ = chain;

    auto run = [&out](unsigned dg) {
        return detail::with_precision(dg, [&]<class Real>(unsigned d) -> std::shared_ptr<const detail::ChainImpl> {
            return std::make_shared<detail::ChainImplT<Real>>(out.chain_, d);
        });
    };

    const unsigned base = base_digits(chain);
    const unsigned cap = std::min(kMaxDigits, std::max(4 * base, base + 400));
    unsigned d1 = base;
    auto a = run(d1);
    for (;;) {
        const unsigned d2 = std::min(cap, d1 + std::max(16u, d1 / 2));
        auto b = run(d2);
        const int sa = a->secular_sign(), sb = b->secular_sign();
        double rel = 0.0;
        if (sb != 0) rel = std::abs(a->secular_log10() - b->secular_log10()) * 2.302585092994046;
        const bool agree = !a->singular() && !b->singular() && sa == sb && rel <= kAgreement;
        if (agree || d2 >= cap) {
            if (b->singular())
                throw SingularTransfer("solve_chain: matching stays singular at " + std::to_string(d2) + " digits");
            out.impl_ = b;
            out.digits_ = d2;
            out.secular_ = b->secular_value();
            out.sign_ = agree ? sb : 0;
            out.rel_uncertainty_ = rel;
            out.coefficients_ = b->coefficients();
            out.wide_ = std::make_shared<detail::WideChains>();
            return out;
        }
        a = b;
        d1 = d2;
    }
}

double secular(const SegmentChain& chain) { return solve_chain(chain).secular(); }

const detail::ChainImpl* SolvedChain::impl_at(double x) const
{
    unsigned need = 0;
    try {
        need = chain_.segment_at(x).basis->digits_hint(x, x, chain_.E);
    } catch (const GuardError&) {
        return nullptr;
    }
    if (need <= digits_) return impl_.get();
    // Beyond t ~ 2250 the decaying solution carries e^{-t/2} < 1e-488.
    if (need > kUnderflowDigits) return nullptr;
    unsigned rung = digits_;
    while (rung < need) rung += rung / 2;
    need = rung;
    std::lock_guard<std::mutex> guard(wide_->lock);
    auto& slot = wide_->by_digits[need];
    if (!slot)
        slot = detail::with_precision(need, [&]<class Real>(unsigned d) -> std::shared_ptr<const detail::ChainImpl> {
            return std::make_shared<detail::ChainImplT<Real>>(chain_, d);
        });
    return slot.get();
}

double SolvedChain::psi(double x) const
{
    const detail::ChainImpl* impl = impl_at(x);
    return impl ? impl->psi_bounded(x, 0.0).first : 0.0;
}

double SolvedChain::dpsi(double x) const
{
    const detail::ChainImpl* impl = impl_at(x);
    return impl ? impl->dpsi(x) : 0.0;
}

Classification SolvedChain::classify() const
{
    Classification out{0, sign_};
    const auto hull = allowed_hull(chain_);
    if (!hull) return out;
    const double x_lo = hull->first, x_hi = hull->second;
    if (!std::isfinite(x_lo) || !std::isfinite(x_hi))
        throw PreconditionError("classify_chain: classically allowed region is unbounded at E = " + fmt(chain_.E));

    double v_min = kInfinity;
    for (const Segment& s : chain_.segments) {
        const double a = std::max(s.a_left, x_lo), b = std::min(s.a_right, x_hi);
        if (a <= b) v_min = std::min(v_min, s.basis->minimum(a, b));
    }
    // at least 24 samples per local wavelength at the deepest point
    const double span = x_hi - x_lo;
    const double p_max = std::sqrt(std::max(chain_.E - v_min, 0.0));
    const long cells = std::clamp<long>(std::lround(std::ceil(span * p_max * 12.0 / std::numbers::pi)), 64, 400000);

    std::vector<double> xs;
    xs.reserve(static_cast<size_t>(cells) + chain_.segments.size() + 1);
    for (long i = 0; i <= cells; ++i) xs.push_back(x_lo + span * static_cast<double>(i) / static_cast<double>(cells));
    for (double a : chain_.boundaries())
        if (a > x_lo && a < x_hi) xs.push_back(a);
    std::sort(xs.begin(), xs.end());

    const double coeff_err = std::max(10.0 * rel_uncertainty_, 1e-14);
    const double eps = std::ldexp(1.0, -52);
    int prev = 0;
    size_t j = 0;
    for (double x : xs) {
        while (j + 1 < chain_.segments.size() && x > chain_.segments[j].a_right) ++j;
        int s = 0;
        try {
            BasisAt<double> b;
            chain_.segments[j].basis->eval(x, chain_.E, 16, b);
            const auto& c = coefficients_[j];
            const double p1 = c[0] * b.psi1, p2 = c[1] * b.psi2;
            const double mag = std::abs(p1) + std::abs(p2);
            const double err = (std::abs(c[0]) + std::abs(c[1])) * b.err + mag * (coeff_err + 4 * eps);
            const double v = p1 + p2;
            if (std::isfinite(v) && std::isfinite(err) && std::abs(v) > err) s = v > 0 ? 1 : -1;
        } catch (const Error&) {
        }
        if (s == 0) {
            auto [v, err] = impl_->psi_bounded(x, coeff_err);
            if (std::abs(v) > err) s = v > 0 ? 1 : -1;
        }
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++out.nodes;
        prev = s;
    }
    return out;
}

Classification classify_chain(const SegmentChain& chain) { return solve_chain(chain).classify(); }

KProblem chain_problem(const ChainBuilder& builder)
{
    const SegmentChain probe = builder(-1.0);
    if (probe.segments.empty()) throw PreconditionError("chain_problem: empty chain");
    if (probe.threshold() != 0.0)
        throw PreconditionError("chain_problem: the continuum threshold is " + fmt(probe.threshold()) +
                                "; shift the potential so that it is 0");
    auto energy = [probe](double k) {
        double E = -k * k;
        for (const Segment& s : probe.segments) E = s.basis->regularize_energy(E);
        return E;
    };
    KProblem problem;
    problem.classify = [builder, energy](double k) { return classify_chain(builder(energy(k))); };
    problem.sign = [builder, energy](double k) { return solve_chain(builder(energy(k))).sign(); };
    const double v_min = probe.minimum();
    if (v_min < 0.0) {
        problem.k_top = std::sqrt(-v_min) * (1.0 - 1e-9);
        problem.k_floor = 1e-3 * problem.k_top;
    }
    return problem;
}

EnergyBracket bracket_secular(const ChainBuilder& builder, int n, double k_tol,
                              std::optional<std::pair<double, double>> seeds)
{
    return bracket_k(chain_problem(builder), n, k_tol, seeds);
}

SegmentChain square_well_chain(double v0, double a)
{
    if (!(v0 > 0.0 && a > 0.0)) throw PreconditionError("square_well_chain: depth and half-width must be positive");
    SegmentChain c;
    c.segments = {constant_segment(0.0, -kInfinity, -a), constant_segment(-v0, -a, a), constant_segment(0.0, a, kInfinity)};
    return c;
}

SegmentChain symmetrized_morse_chain(const MorseParams& p)
{
    SegmentChain c;
    c.segments = {morse_segment(p, true, -kInfinity, 0.0), morse_segment(p, false, 0.0, kInfinity)};
    return c;
}

SegmentChain full_line_morse_chain(const MorseParams& p)
{
    SegmentChain c;
    c.segments = {morse_segment(p, false, -kInfinity, kInfinity)};
    return c;
}

// ---------------------------------------------------------------- JSON

namespace {

using nlohmann::json;

double read_boundary(const json& v, double infinite, const std::string& where)
{
    if (v.is_null()) return infinite;
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if ((s == "-inf" && infinite < 0) || ((s == "inf" || s == "+inf") && infinite > 0)) return infinite;
    }
    throw PreconditionError("chain file: " + where + " must be a number, null or " + (infinite < 0 ? "\"-inf\"" : "\"inf\""));
}

void check_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where)
{
    for (const auto& [key, value] : obj.items()) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; }))
            throw PreconditionError("chain file: unknown key \"" + key + "\" in " + where);
    }
}

double number(const json& obj, const char* key, const std::string& where, std::optional<double> fallback = std::nullopt)
{
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        throw PreconditionError("chain file: " + where + " needs \"" + key + "\"");
    }
    if (!obj[key].is_number()) throw PreconditionError("chain file: \"" + std::string(key) + "\" in " + where + " must be a number");
    return obj[key].get<double>();
}

Segment read_segment(const json& s, size_t index)
{
    const std::string where = "segment " + std::to_string(index);
    if (!s.is_object()) throw PreconditionError("chain file: " + where + " must be an object");
    check_keys(s, {"type", "params", "a_left", "a_right"}, where);
    if (!s.contains("type") || !s["type"].is_string()) throw PreconditionError("chain file: " + where + " needs a string \"type\"");
    const std::string type = s["type"].get<std::string>();
    const json params = s.value("params", json::object());
    if (!params.is_object()) throw PreconditionError("chain file: \"params\" of " + where + " must be an object");
    const double a = read_boundary(s.value("a_left", json()), -kInfinity, where + " a_left");
    const double b = read_boundary(s.value("a_right", json()), kInfinity, where + " a_right");

    if (type == "constant") {
        check_keys(params, {"V"}, where + " params");
        return constant_segment(number(params, "V", where), a, b);
    }
    if (type == "morse") {
        check_keys(params, {"alpha", "gamma", "gamma1", "gamma2", "d", "mirrored"}, where + " params");
        MorseParams p;
        p.alpha = number(params, "alpha", where, 1.0);
        if (params.contains("gamma")) {
            if (params.contains("gamma1") || params.contains("gamma2"))
                throw PreconditionError("chain file: " + where + " gives both gamma and gamma1/gamma2");
            p.gamma1 = p.gamma2 = number(params, "gamma", where);
        } else {
            p.gamma1 = number(params, "gamma1", where);
            p.gamma2 = number(params, "gamma2", where);
        }
        p.shift = number(params, "d", where, 0.0);
        bool mirrored = false;
        if (params.contains("mirrored")) {
            if (!params["mirrored"].is_boolean()) throw PreconditionError("chain file: \"mirrored\" must be true or false");
            mirrored = params["mirrored"].get<bool>();
        }
        return morse_segment(p, mirrored, a, b);
    }
    throw PreconditionError("chain file: unknown segment type \"" + type + "\" in " + where);
}

}  // namespace

SegmentChain chain_from_json(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw PreconditionError(std::string("chain file: ") + e.what());
    }
    const json* list = &doc;
    if (doc.is_object()) {
        check_keys(doc, {"segments"}, "the top level");
        if (!doc.contains("segments")) throw PreconditionError("chain file: missing \"segments\"");
        list = &doc["segments"];
    }
    if (!list->is_array() || list->empty()) throw PreconditionError("chain file: \"segments\" must be a non-empty array");
    SegmentChain chain;
    for (size_t i = 0; i < list->size(); ++i) chain.segments.push_back(read_segment((*list)[i], i));
    // structural checks; the energy is supplied later
    chain.at_energy(std::numeric_limits<double>::lowest()).validate();
    return chain;
}

SegmentChain read_chain_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw PreconditionError("chain file: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return chain_from_json(buf.str());
}

}  // namespace morsewell
