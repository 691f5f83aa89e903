#ifndef HEEGNER_HECKECOSETS_HPP
#define HEEGNER_HECKECOSETS_HPP

#include "heegner/arith.hpp"
#include "heegner/quadratic.hpp"

#include <string>
#include <vector>

namespace heegner {

// Exact 2x2 rational matrix.
struct Mat2Q {
    Rat m[2][2];

    static Mat2Q identity();
    static Mat2Q of(long long a, long long b, long long c, long long d);
    Rat det() const;
    Mat2Q inverse() const;
    Mat2Q operator*(const Mat2Q& o) const;
    bool operator==(const Mat2Q& o) const;
};

enum class CosetKind { Galois, Hecke };

struct CosetSet {
    long long q = 0;
    int e = 0;
    SplitType type = SplitType::Split;
    CosetKind kind = CosetKind::Galois;
    std::vector<Mat2Q> reps;
};

// a(n) = diag(n, 1).
Mat2Q a_of_n(long long n);
// h[q^e]: (q^e, 1; 0, 1) split, diag(q^e, 1) inert.
Mat2Q h_of_prime_power(long long q, int e, SplitType type);
// least q-adic non-square unit: least non-residue mod q (odd q), 5 for q = 2.
long long nonresidue_unit(long long q);

// The explicit Galois representative matrices of the prime-power case.
CosetSet s_n_reps(long long q, int e, SplitType type);
// Right-coset representatives of U a(q^e) U / U, cardinality q^(e-1)(q+1);
// extends s_n_reps * h[q^e] (equality in the inert case).
CosetSet hecke_reps(long long q, int e, SplitType type);

bool in_gl2_zq(const Mat2Q& M, long long q);
bool in_cartan_cell(const Mat2Q& M, long long q, int e);
// right cosets M U and M' U equal?
bool same_right_coset(const Mat2Q& M, const Mat2Q& Mp, long long q);

long long deg_a(long long n);

struct FactorReport {
    long long q = 0;
    int e = 0;
    SplitType type = SplitType::Split;
    long long s_n = 0;      // #S_n
    long long deg = 0;      // #S'_n = deg a(q^e)
    bool distinct = false;
    bool contained = false;
};

struct ContainmentReport {
    long long n = 1;
    std::vector<FactorReport> factors;
    bool distinct = true;
    bool contained = true;
    Rat d;          // #S_n / #S'_n
    std::string to_json() const;
};

// Exact verification of the coset lemma for every prime power of n.
ContainmentReport verify_orbit_containment(long long n, const ImagQuadField& field,
                                           long long ell, long long N = 1);

} // namespace heegner

#endif
