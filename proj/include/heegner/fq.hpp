#ifndef HEEGNER_FQ_HPP
#define HEEGNER_FQ_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace heegner {

// The field F_{l^2} = F_l(t), t^2 = u, with u the least quadratic non-residue
// mod l.  Elements a + b*t with 0 <= a, b < l.  Only odd primes l supported.
struct Fq2 {
    long long ell = 0;
    long long u = 0;

    explicit Fq2(long long l);
};

struct Fq2Element {
    long long a = 0;
    long long b = 0;

    bool operator==(const Fq2Element&) const = default;
    bool operator<(const Fq2Element& o) const {
        return a != o.a ? a < o.a : b < o.b;
    }
    bool in_base_field() const { return b == 0; }
};

Fq2Element fq2_add(const Fq2& F, Fq2Element x, Fq2Element y);
Fq2Element fq2_sub(const Fq2& F, Fq2Element x, Fq2Element y);
Fq2Element fq2_mul(const Fq2& F, Fq2Element x, Fq2Element y);
Fq2Element fq2_neg(const Fq2& F, Fq2Element x);
Fq2Element fq2_inv(const Fq2& F, Fq2Element x);
Fq2Element fq2_pow(const Fq2& F, Fq2Element x, long long e);
Fq2Element fq2_frobenius(const Fq2& F, Fq2Element x);   // x^l
std::string fq2_str(const Fq2Element& x);

// Dense polynomial over F_{l^2}; coefficient of X^i at index i.
struct FpPoly {
    std::vector<Fq2Element> c;

    int degree() const { return (int)c.size() - 1; }
    bool is_zero() const { return c.empty(); }
};

FpPoly poly_from_base(const std::vector<long long>& coeffs, const Fq2& F);
FpPoly poly_trim(FpPoly f);
FpPoly poly_add(const Fq2& F, const FpPoly& f, const FpPoly& g);
FpPoly poly_sub(const Fq2& F, const FpPoly& f, const FpPoly& g);
FpPoly poly_mul(const Fq2& F, const FpPoly& f, const FpPoly& g);
// division with remainder by monic-normalized g
void poly_divmod(const Fq2& F, const FpPoly& f, const FpPoly& g, FpPoly& q, FpPoly& r);
FpPoly poly_mod(const Fq2& F, const FpPoly& f, const FpPoly& g);
FpPoly poly_gcd(const Fq2& F, FpPoly f, FpPoly g);
FpPoly poly_monic(const Fq2& F, FpPoly f);
Fq2Element poly_eval(const Fq2& F, const FpPoly& f, Fq2Element x);
// X^(l^k) mod f, k = 1 or 2
FpPoly poly_xq_mod(const Fq2& F, const FpPoly& f, int k);

struct PolyRoot {
    Fq2Element root;
    int multiplicity = 1;
};

// All roots of f in F_l (base_field_only) or in F_{l^2}, with multiplicity.
// Deterministic: equal-degree splitting uses a fixed element sequence.
std::vector<PolyRoot> poly_roots(const Fq2& F, const FpPoly& f, bool base_field_only);

} // namespace heegner

#endif
