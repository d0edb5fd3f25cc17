#pragma once

// Value-semantic wrapper around an MPFR number with per-object precision.
// Binary operations produce a result at the larger of the operand precisions;
// there is no global default precision, so objects can be used from several
// threads without coordination.

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace morsewell {

class BigFloat {
public:
    /// Bits needed to carry `digits10` significant decimal digits.
    static mpfr_prec_t bits_for_digits(unsigned digits10)
    {
        return static_cast<mpfr_prec_t>(std::ceil(digits10 * 3.3219280948873622)) + 8;
    }

    explicit BigFloat(unsigned digits10 = 34) { init(bits_for_digits(digits10)); mpfr_set_zero(v_, 1); }
    BigFloat(double x, unsigned digits10) { init(bits_for_digits(digits10)); mpfr_set_d(v_, x, MPFR_RNDN); }

    static BigFloat with_bits(mpfr_prec_t bits)
    {
        BigFloat r(Uninit{});
        r.init(bits);
        mpfr_set_zero(r.v_, 1);
        return r;
    }
    static BigFloat from_string(const std::string& s, unsigned digits10)
    {
        BigFloat r(digits10);
        mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN);
        return r;
    }

    BigFloat(const BigFloat& o)
    {
        init(mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& o) noexcept
    {
        v_[0] = o.v_[0];
        o.v_[0]._mpfr_d = nullptr;
    }
    BigFloat& operator=(const BigFloat& o)
    {
        if (this != &o) {
            if (!live()) init(mpfr_get_prec(o.v_));
            else if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept
    {
        if (this != &o) {
            if (live()) mpfr_clear(v_);
            v_[0] = o.v_[0];
            o.v_[0]._mpfr_d = nullptr;
        }
        return *this;
    }
    ~BigFloat()
    {
        if (live()) mpfr_clear(v_);
    }

    mpfr_prec_t bits() const { return mpfr_get_prec(v_); }
    unsigned digits10() const { return static_cast<unsigned>((bits() - 8) / 3.3219280948873622); }
    /// Unit roundoff at this precision.
    double epsilon() const { return std::ldexp(1.0, static_cast<int>(1 - bits())); }
    /// The same unit roundoff without the double underflow past ~1000 bits.
    BigFloat epsilon_value() const
    {
        BigFloat r = with_bits(bits());
        mpfr_set_ui_2exp(r.v_, 1, 1 - bits(), MPFR_RNDN);
        return r;
    }

    explicit operator double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    int sign() const { return mpfr_sgn(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    bool is_integer() const { return mpfr_integer_p(v_) != 0; }
    /// Binary exponent e with |x| in [2^(e-1), 2^e); meaningful for nonzero finite values.
    long exponent2() const { return mpfr_get_exp(v_); }
    std::string str(int digits) const;

    mpfr_srcptr get() const { return v_; }
    mpfr_ptr get() { return v_; }

    BigFloat operator-() const
    {
        BigFloat r = with_bits(bits());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }

    BigFloat& operator+=(const BigFloat& o) { widen(o); mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator-=(const BigFloat& o) { widen(o); mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator*=(const BigFloat& o) { widen(o); mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator/=(const BigFloat& o) { widen(o); mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator+=(double o) { mpfr_add_d(v_, v_, o, MPFR_RNDN); return *this; }
    BigFloat& operator-=(double o) { mpfr_sub_d(v_, v_, o, MPFR_RNDN); return *this; }
    BigFloat& operator*=(double o) { mpfr_mul_d(v_, v_, o, MPFR_RNDN); return *this; }
    BigFloat& operator/=(double o) { mpfr_div_d(v_, v_, o, MPFR_RNDN); return *this; }

    friend BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
    friend BigFloat operator-(BigFloat a, const BigFloat& b) { return a -= b; }
    friend BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
    friend BigFloat operator/(BigFloat a, const BigFloat& b) { return a /= b; }
    friend BigFloat operator+(BigFloat a, double b) { return a += b; }
    friend BigFloat operator-(BigFloat a, double b) { return a -= b; }
    friend BigFloat operator*(BigFloat a, double b) { return a *= b; }
    friend BigFloat operator/(BigFloat a, double b) { return a /= b; }
    friend BigFloat operator+(double a, BigFloat b) { return b += a; }
    friend BigFloat operator*(double a, BigFloat b) { return b *= a; }
    friend BigFloat operator-(double a, const BigFloat& b)
    {
        BigFloat r = with_bits(b.bits());
        mpfr_d_sub(r.v_, a, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator/(double a, const BigFloat& b)
    {
        BigFloat r = with_bits(b.bits());
        mpfr_d_div(r.v_, a, b.v_, MPFR_RNDN);
        return r;
    }

    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator<(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
    friend bool operator>(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }
    friend bool operator<=(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) <= 0; }
    friend bool operator>=(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) >= 0; }
    friend bool operator==(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) == 0; }

    friend BigFloat abs(const BigFloat& x) { return x.apply(mpfr_abs); }
    friend BigFloat exp(const BigFloat& x) { return x.apply(mpfr_exp); }
    friend BigFloat log(const BigFloat& x) { return x.apply(mpfr_log); }
    friend BigFloat sqrt(const BigFloat& x) { return x.apply(mpfr_sqrt); }
    friend BigFloat sin(const BigFloat& x) { return x.apply(mpfr_sin); }
    friend BigFloat cos(const BigFloat& x) { return x.apply(mpfr_cos); }
    friend BigFloat tgamma(const BigFloat& x) { return x.apply(mpfr_gamma); }
    friend BigFloat floor(const BigFloat& x)
    {
        BigFloat r = with_bits(x.bits());
        mpfr_floor(r.v_, x.v_);
        return r;
    }
    friend BigFloat pow(const BigFloat& x, const BigFloat& y)
    {
        BigFloat r = with_bits(std::max(x.bits(), y.bits()));
        mpfr_pow(r.v_, x.v_, y.v_, MPFR_RNDN);
        return r;
    }

private:
    struct Uninit {};
    explicit BigFloat(Uninit) { v_[0]._mpfr_d = nullptr; }

    void init(mpfr_prec_t bits) { mpfr_init2(v_, bits); }
    bool live() const { return v_[0]._mpfr_d != nullptr; }
    void widen(const BigFloat& o)
    {
        if (o.bits() > bits()) mpfr_prec_round(v_, o.bits(), MPFR_RNDN);
    }
    BigFloat apply(int (*fn)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)) const
    {
        BigFloat r = with_bits(bits());
        fn(r.v_, v_, MPFR_RNDN);
        return r;
    }

    mpfr_t v_;
};

}  // namespace morsewell
