#ifndef HEEGNER_QUATERNION_HPP
#define HEEGNER_QUATERNION_HPP

#include "heegner/arith.hpp"
#include "heegner/lattice.hpp"
#include "heegner/quadratic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace heegner {

// Definite quaternion algebra (a, b / Q): i^2 = a, j^2 = b, ij = -ji = k.
struct QuaternionAlgebra {
    long long a = -1;
    long long b = -1;
    long long ell = 0;                 // the finite ramified prime
    std::vector<long long> ram_finite; // verified ramification set

    bool operator==(const QuaternionAlgebra& o) const { return a == o.a && b == o.b; }
};

// Hilbert symbol (a, b)_p; p = 0 means the infinite place.
int hilbert_symbol(long long a, long long b, long long p);
std::vector<long long> ramified_primes(long long a, long long b);

// Structure constants by residue class of ell, ramification certified.
QuaternionAlgebra definite_algebra(long long ell);

// Element w + x i + y j + z k over the basis (1, i, j, ij).
struct Quat {
    Rat w, x, y, z;

    bool operator==(const Quat&) const = default;
};

Quat quat_from_vec(const Vec4Q& v);
Vec4Q quat_to_vec(const Quat& q);
Quat quat_add(const Quat& u, const Quat& v);
Quat quat_sub(const Quat& u, const Quat& v);
Quat quat_mul(const QuaternionAlgebra& B, const Quat& u, const Quat& v);
Quat quat_conj(const Quat& u);
Quat quat_scale(const Quat& u, const Rat& c);
Quat quat_inverse(const QuaternionAlgebra& B, const Quat& u);
Rat quat_trd(const Quat& u);
Rat quat_nrd(const QuaternionAlgebra& B, const Quat& u);
std::string quat_str(const Quat& u);

struct QuatOrder {
    QuaternionAlgebra B;
    QLattice L;
    long long level = 1;  // reduced discriminant = ell * level
};

// reduced discriminant: sqrt |det trd(b_i conj b_j)|
Int reduced_discriminant(const QuaternionAlgebra& B, const QLattice& L);
bool is_order(const QuaternionAlgebra& B, const QLattice& L);

// Order with reduced discriminant ell, built by p-saturation from
// Z<1, i, j, ij>; deterministic.
QuatOrder maximal_order(const QuaternionAlgebra& B);

// R = kappa(O_L) + kappa(N) O_B per the fixed-orientation embedding.
QuatOrder eichler_order(const QuatOrder& Omax, long long N, const ImagQuadField& field);

// elements of the lattice with reduced trace t0 and reduced norm m0,
// deterministically ordered; the embedding-search primitive
std::vector<Quat> order_elements_with_charpoly(const QuaternionAlgebra& B, const QLattice& L,
                                               long long t0, const Rat& m0, size_t limit);

// lattice of pairwise products
QLattice lattice_mul(const QuaternionAlgebra& B, const QLattice& X, const QLattice& Y);
QLattice lattice_conj(const QLattice& X);
QLattice left_mul_lattice(const QuaternionAlgebra& B, const Quat& q, const QLattice& X);

// Gram matrix A with q(c) = nrd(sum c_i b_i) = c A c^T, scaled by `scale`.
Mat4Q nrd_gram(const QuaternionAlgebra& B, const QLattice& L, const Rat& scale);

struct RightIdealClass {
    QLattice lattice;
    Rat nrd;
    long long w = 0;                 // unit count of the left order
    QLattice left_order;
    std::vector<long long> theta;    // normalized theta prefix
    int index = 0;
};

struct IdealClassSet {
    QuatOrder order;
    std::vector<RightIdealClass> classes;
};

// All right ideal classes of O, p-neighbor BFS certified by the mass formula.
IdealClassSet ideal_classes(const QuatOrder& O);

Rat mass(const std::vector<RightIdealClass>& classes);
Rat expected_mass(long long ell, long long N);

// nrd(I) relative to O (covolume ratio square root)
Rat ideal_nrd(const QuatOrder& O, const QLattice& I);

// alpha with I = alpha * J, if the classes coincide.
std::optional<Quat> ideal_isometry(const QuatOrder& O, const QLattice& I, const QLattice& J);
bool isometric(const QuatOrder& O, const RightIdealClass& c1, const RightIdealClass& c2);

struct BrandtMatrix {
    long long m = 1;
    std::vector<std::vector<long long>> entries;
};

// B(m)[i][j] = (1/w_j) #{alpha in I_i conj(I_j)/nrd(I_j) : nrd-normalized = m}
BrandtMatrix brandt_matrix(const IdealClassSet& S, long long m);
// primential operator of degree psi(q^e): P(q^{e+1}) = B(q) P(q^e) - p P(q^{e-1}),
// with P(q^2) = B(q)^2 - (q+1) B(1)
BrandtMatrix brandt_primitive(const IdealClassSet& S, long long q, int e);

std::string brandt_set_to_json(const IdealClassSet& S, const std::vector<BrandtMatrix>& mats);

} // namespace heegner

#endif
