#ifndef HEEGNER_JEVAL_HPP
#define HEEGNER_JEVAL_HPP

#include "heegner/arith.hpp"

#include <mpfr.h>
#include <string>
#include <utility>

namespace heegner {

// RAII mpfr wrapper, fixed precision per value.
class MReal {
    mpfr_t v_;

public:
    explicit MReal(mpfr_prec_t prec = 64) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    MReal(const MReal& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    MReal(MReal&& o) noexcept { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_swap(v_, o.v_); }
    MReal& operator=(const MReal& o) {
        if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
        return *this;
    }
    MReal& operator=(MReal&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~MReal() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

    static MReal from_ll(long long x, mpfr_prec_t prec);
    static MReal from_int(const Int& x, mpfr_prec_t prec);
    static MReal from_rat(const Rat& x, mpfr_prec_t prec);
    static MReal pi(mpfr_prec_t prec);

    MReal operator+(const MReal& o) const;
    MReal operator-(const MReal& o) const;
    MReal operator*(const MReal& o) const;
    MReal operator/(const MReal& o) const;
    MReal operator-() const;
    MReal sqrt() const;
    MReal abs() const;
    bool operator<(const MReal& o) const { return mpfr_cmp(v_, o.v_) < 0; }
    double get_d() const { return mpfr_get_d(v_, MPFR_RNDN); }
    std::string str(int digits = 20) const;

    // nearest integer; gap = |value - nearest|
    Int round_to_int(MReal* gap = nullptr) const;
};

struct MComplex {
    MReal re, im;

    explicit MComplex(mpfr_prec_t prec = 64) : re(prec), im(prec) {}
    MComplex(MReal r, MReal i) : re(std::move(r)), im(std::move(i)) {}

    MComplex operator+(const MComplex& o) const { return {re + o.re, im + o.im}; }
    MComplex operator-(const MComplex& o) const { return {re - o.re, im - o.im}; }
    MComplex operator*(const MComplex& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    MComplex operator/(const MComplex& o) const;
    MComplex scaled(long long c) const;
};

// e^(2 pi i tau)
MComplex exp_2pi_i(const MComplex& tau);

// Klein j at tau = x + iy (y > 0), via E4^3 / Delta q-expansion.
MComplex j_eval(const MComplex& tau);

} // namespace heegner

#endif
