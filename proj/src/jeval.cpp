#include "heegner/jeval.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace heegner {

MReal MReal::from_ll(long long x, mpfr_prec_t prec) {
    MReal r(prec);
    mpfr_set_sj(r.v_, x, MPFR_RNDN);
    return r;
}

MReal MReal::from_int(const Int& x, mpfr_prec_t prec) {
    MReal r(prec);
    mpfr_set_z(r.v_, x.get_mpz_t(), MPFR_RNDN);
    return r;
}

MReal MReal::from_rat(const Rat& x, mpfr_prec_t prec) {
    MReal r(prec);
    mpfr_set_q(r.v_, x.get_mpq_t(), MPFR_RNDN);
    return r;
}

MReal MReal::pi(mpfr_prec_t prec) {
    MReal r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
}

static mpfr_prec_t join_prec(const MReal& a, const MReal& b) {
    return std::max(a.prec(), b.prec());
}

MReal MReal::operator+(const MReal& o) const {
    MReal r(join_prec(*this, o));
    mpfr_add(r.v_, v_, o.v_, MPFR_RNDN);
    return r;
}

MReal MReal::operator-(const MReal& o) const {
    MReal r(join_prec(*this, o));
    mpfr_sub(r.v_, v_, o.v_, MPFR_RNDN);
    return r;
}

MReal MReal::operator*(const MReal& o) const {
    MReal r(join_prec(*this, o));
    mpfr_mul(r.v_, v_, o.v_, MPFR_RNDN);
    return r;
}

MReal MReal::operator/(const MReal& o) const {
    MReal r(join_prec(*this, o));
    mpfr_div(r.v_, v_, o.v_, MPFR_RNDN);
    return r;
}

MReal MReal::operator-() const {
    MReal r(prec());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
}

MReal MReal::sqrt() const {
    MReal r(prec());
    mpfr_sqrt(r.v_, v_, MPFR_RNDN);
    return r;
}

MReal MReal::abs() const {
    MReal r(prec());
    mpfr_abs(r.v_, v_, MPFR_RNDN);
    return r;
}

std::string MReal::str(int digits) const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", digits, v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

Int MReal::round_to_int(MReal* gap) const {
    MReal rounded(prec());
    mpfr_round(rounded.v_, v_);
    Int z;
    mpfr_get_z(z.get_mpz_t(), rounded.v_, MPFR_RNDN);
    if (gap) {
        *gap = MReal(prec());
        mpfr_sub(gap->v_, v_, rounded.v_, MPFR_RNDN);
        mpfr_abs(gap->v_, gap->v_, MPFR_RNDN);
    }
    return z;
}

MComplex MComplex::operator/(const MComplex& o) const {
    MReal n = o.re * o.re + o.im * o.im;
    return {(re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n};
}

MComplex MComplex::scaled(long long c) const {
    MReal f = MReal::from_ll(c, re.prec());
    return {re * f, im * f};
}

MComplex exp_2pi_i(const MComplex& tau) {
    mpfr_prec_t prec = tau.re.prec();
    MReal two_pi = MReal::pi(prec) + MReal::pi(prec);
    MReal mag(prec);
    MReal expo = -(two_pi * tau.im);
    mpfr_exp(mag.get(), expo.get(), MPFR_RNDN);
    MReal angle = two_pi * tau.re;
    MReal c(prec), s(prec);
    mpfr_sin_cos(s.get(), c.get(), angle.get(), MPFR_RNDN);
    return {mag * c, mag * s};
}

MComplex j_eval(const MComplex& tau) {
    mpfr_prec_t prec = tau.re.prec();
    double y = tau.im.get_d();
    if (!(y > 0)) throw std::invalid_argument("j_eval: tau must be in the upper half plane");
    // q-expansion truncation: |q|^M below 2^-prec with margin
    long M = (long)((double)prec * std::log(2.0) / (2.0 * M_PI * y)) + 16;
    std::vector<long long> sigma3(M + 1, 0);
    for (long d = 1; d <= M; d++)
        for (long k = d; k <= M; k += d) sigma3[k] += (long long)d * d * d;

    MComplex q = exp_2pi_i(tau);
    MComplex qn = q;
    MComplex e4(prec);
    e4.re = MReal::from_ll(1, prec);
    MComplex delta_prod(prec);
    delta_prod.re = MReal::from_ll(1, prec);
    MComplex one(prec);
    one.re = MReal::from_ll(1, prec);
    for (long n = 1; n <= M; n++) {
        e4 = e4 + qn.scaled(240 * sigma3[n]);
        delta_prod = delta_prod * (one - qn);
        qn = qn * q;
    }
    // Delta = q * prod^24
    MComplex p2 = delta_prod * delta_prod;
    MComplex p4 = p2 * p2;
    MComplex p8 = p4 * p4;
    MComplex p24 = p8 * p8 * p8;
    MComplex delta = q * p24;
    return e4 * e4 * e4 / delta;
}

} // namespace heegner
