#ifndef HEEGNER_LATTICE_HPP
#define HEEGNER_LATTICE_HPP

#include "heegner/arith.hpp"

#include <array>
#include <functional>
#include <vector>

namespace heegner {

using Vec4Q = std::array<Rat, 4>;
using Mat4Q = std::array<Vec4Q, 4>;

// Full-rank rank-4 lattice in Q^4, rows = basis vectors.  Kept in a canonical
// HNF-normalized basis so equal lattices have equal representations.
struct QLattice {
    Mat4Q rows;

    bool operator==(const QLattice& o) const { return rows == o.rows; }
};

// Canonical basis from a (possibly redundant) list of generators.
QLattice lattice_from_generators(const std::vector<Vec4Q>& gens);
QLattice lattice_scale(const QLattice& L, const Rat& c);
// span of both
QLattice lattice_sum(const QLattice& A, const QLattice& B);
// dual with respect to the coordinate dot product
QLattice lattice_dual(const QLattice& L);
QLattice lattice_intersect(const QLattice& A, const QLattice& B);
bool lattice_contains(const QLattice& L, const Vec4Q& v);
bool lattice_subset(const QLattice& A, const QLattice& B); // A ⊆ B
Rat lattice_det(const QLattice& L); // determinant of the basis matrix

// coordinates of v in the basis of L
Vec4Q lattice_coords(const QLattice& L, const Vec4Q& v);

Rat mat4_det(const Mat4Q& M);
Mat4Q mat4_inverse(const Mat4Q& M);
Mat4Q mat4_mul(const Mat4Q& A, const Mat4Q& B);
Vec4Q vec_mat_mul(const Vec4Q& v, const Mat4Q& M);

// exact sqrt of a rational that must be a perfect square
Rat rat_sqrt_exact(const Rat& r);
bool rat_is_square(const Rat& r);

// Enumerate all x in Z^4 with q(x + shift) <= bound for the positive definite
// quadratic form q(v) = v A v^T (A symmetric rational).  Exact: candidate
// ranges come from floating Cholesky with padding, every hit is verified in
// rational arithmetic.  visitor(value, x); return false from it to stop.
void enumerate_quadratic(const Mat4Q& A, const Rat& bound, const Vec4Q& shift,
                         const std::function<bool(const Rat&, const std::array<long long, 4>&)>& visitor);

long long count_value(const Mat4Q& A, const Rat& target);
bool has_value(const Mat4Q& A, const Rat& target);
// theta[k] = #{x : q(x) = k} for k = 0..kmax
std::vector<long long> theta_prefix(const Mat4Q& A, int kmax);

} // namespace heegner

#endif
