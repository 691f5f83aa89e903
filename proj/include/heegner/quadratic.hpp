#ifndef HEEGNER_QUADRATIC_HPP
#define HEEGNER_QUADRATIC_HPP

#include "heegner/arith.hpp"

#include <map>
#include <vector>

namespace heegner {

enum class SplitType { Split, Inert, Ramified };

// Imaginary quadratic field of fundamental discriminant D < 0.
struct ImagQuadField {
    long long D;

    explicit ImagQuadField(long long disc);
};

bool is_fundamental_discriminant(long long D);

struct QuadOrder {
    ImagQuadField field;
    long long conductor;

    QuadOrder(const ImagQuadField& f, long long n);
    long long disc() const { return conductor * conductor * field.D; }
};

// Positive definite integral binary quadratic form a x^2 + b xy + c y^2.
struct BQForm {
    long long a = 1, b = 0, c = 0;

    long long disc() const { return b * b - 4 * a * c; }
    bool operator==(const BQForm&) const = default;
    bool operator<(const BQForm& o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        return c < o.c;
    }
};

bool is_reduced(const BQForm& f);
BQForm reduce_form(BQForm f);
BQForm principal_form(long long disc);
BQForm compose(const BQForm& f, const BQForm& g);
BQForm form_inverse(const BQForm& f);
BQForm form_pow(const BQForm& f, long long e);

// Pic(O) as the set of primitive reduced forms of disc(O) with Gauss
// composition.
struct ClassGroup {
    QuadOrder order;
    std::vector<BQForm> elements;           // sorted reduced forms
    std::vector<std::vector<int>> table;    // table[i][j] = index of e_i * e_j
    int identity = 0;

    int index_of(const BQForm& f) const;
    int mul(int i, int j) const { return table[i][j]; }
    int inv(int i) const;
    long long h() const { return (long long)elements.size(); }
};

ClassGroup class_group(const QuadOrder& order);
// Independent count of primitive reduced forms (enumeration by b first).
long long class_number(long long disc);

SplitType splitting_type(const ImagQuadField& field, long long p);

// Strong Heegner hypothesis: every prime factor of N splits in L.
bool heegner_check(const ImagQuadField& field, long long N);
// Weak hypothesis (wH): eps_L(N) = 1.
bool weak_heegner_check(const ImagQuadField& field, long long N);

// d(n) = prod over p^e || n of 1 (inert) or (p-1)/(p+1) (split).
Rat d_of_n(long long n, const ImagQuadField& field);

// A reduced form representing a prime ideal of norm p (b >= 0 orientation).
BQForm prime_form_above(const QuadOrder& order, long long p);

} // namespace heegner

#endif
