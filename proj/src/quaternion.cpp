#include "heegner/quaternion.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

namespace heegner {

// ---- Hilbert symbols ----------------------------------------------------

static long long odd_part(long long n, int& v) {
    v = 0;
    while (n % 2 == 0) { n /= 2; v++; }
    return n;
}

int hilbert_symbol(long long a, long long b, long long p) {
    if (a == 0 || b == 0) throw std::invalid_argument("hilbert_symbol: zero argument");
    if (p == 0) return (a < 0 && b < 0) ? -1 : 1;
    if (!is_prime(p)) throw std::invalid_argument("hilbert_symbol: p must be prime or 0");
    if (p == 2) {
        int alpha, beta;
        long long u = odd_part(a < 0 ? -a : a, alpha); if (a < 0) u = -u;
        long long v = odd_part(b < 0 ? -b : b, beta);  if (b < 0) v = -v;
        long long um = ((u % 8) + 8) % 8, vm = ((v % 8) + 8) % 8; // odd residues mod 8
        auto eps = [](long long x) { return ((x - 1) / 2) & 1; };
        auto omg = [](long long x) { return ((x * x - 1) / 8) & 1; };
        long long e = eps(um) * eps(vm) + (long long)alpha * omg(vm) + (long long)beta * omg(um);
        return (e & 1) ? -1 : 1;
    }
    int alpha = 0, beta = 0;
    long long u = a, v = b;
    while (u % p == 0) { u /= p; alpha++; }
    while (v % p == 0) { v /= p; beta++; }
    int s = 1;
    if ((alpha & 1) && (beta & 1) && ((p - 1) / 2) % 2 == 1) s = -s;
    if (beta & 1) s *= kronecker(u, p);
    if (alpha & 1) s *= kronecker(v, p);
    return s;
}

std::vector<long long> ramified_primes(long long a, long long b) {
    std::vector<long long> out;
    std::vector<long long> cand = {2};
    for (long long m : {a < 0 ? -a : a, b < 0 ? -b : b})
        for (auto& pp : factorize(m).factors) cand.push_back(pp.p);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    for (long long p : cand)
        if (hilbert_symbol(a, b, p) == -1) out.push_back(p);
    return out;
}

QuaternionAlgebra definite_algebra(long long ell) {
    if (!is_prime(ell)) throw std::invalid_argument("definite_algebra: ell must be prime");
    QuaternionAlgebra B;
    B.ell = ell;
    if (ell == 2) { B.a = -1; B.b = -1; }
    else if (ell % 4 == 3) { B.a = -1; B.b = -ell; }
    else if (ell % 8 == 5) { B.a = -2; B.b = -ell; }
    else {
        long long q = 3;
        while (!(is_prime(q) && q % 4 == 3 && kronecker(-q, ell) == -1)) q += 2;
        B.a = -q; B.b = -ell;
    }
    B.ram_finite = ramified_primes(B.a, B.b);
    if (B.ram_finite != std::vector<long long>{ell} || hilbert_symbol(B.a, B.b, 0) != -1)
        throw std::logic_error("definite_algebra: ramification certificate failed");
    return B;
}

// ---- elements -----------------------------------------------------------

Quat quat_from_vec(const Vec4Q& v) { return {v[0], v[1], v[2], v[3]}; }
Vec4Q quat_to_vec(const Quat& q) { return {q.w, q.x, q.y, q.z}; }

Quat quat_add(const Quat& u, const Quat& v) { return {u.w + v.w, u.x + v.x, u.y + v.y, u.z + v.z}; }
Quat quat_sub(const Quat& u, const Quat& v) { return {u.w - v.w, u.x - v.x, u.y - v.y, u.z - v.z}; }
Quat quat_scale(const Quat& u, const Rat& c) { return {u.w * c, u.x * c, u.y * c, u.z * c}; }

Quat quat_mul(const QuaternionAlgebra& B, const Quat& u, const Quat& v) {
    Rat a(B.a), b(B.b);
    Quat r;
    r.w = u.w * v.w + a * u.x * v.x + b * u.y * v.y - a * b * u.z * v.z;
    r.x = u.w * v.x + u.x * v.w - b * (u.y * v.z - u.z * v.y);
    r.y = u.w * v.y + u.y * v.w + a * (u.x * v.z - u.z * v.x);
    r.z = u.w * v.z + u.z * v.w + (u.x * v.y - u.y * v.x);
    return r;
}

Quat quat_conj(const Quat& u) { return {u.w, -u.x, -u.y, -u.z}; }
Rat quat_trd(const Quat& u) { return u.w * 2; }

Rat quat_nrd(const QuaternionAlgebra& B, const Quat& u) {
    Rat n = u.w * u.w - Rat(B.a) * u.x * u.x - Rat(B.b) * u.y * u.y + Rat(B.a) * Rat(B.b) * u.z * u.z;
    n.canonicalize();
    return n;
}

Quat quat_inverse(const QuaternionAlgebra& B, const Quat& u) {
    Rat n = quat_nrd(B, u);
    if (n == 0) throw std::invalid_argument("quat_inverse: zero element");
    return quat_scale(quat_conj(u), 1 / n);
}

std::string quat_str(const Quat& u) {
    std::ostringstream os;
    os << u.w.get_str() << " + " << u.x.get_str() << "i + " << u.y.get_str()
       << "j + " << u.z.get_str() << "k";
    return os.str();
}

// ---- lattice helpers ----------------------------------------------------

QLattice lattice_mul(const QuaternionAlgebra& B, const QLattice& X, const QLattice& Y) {
    std::vector<Vec4Q> gens;
    for (auto& r : X.rows)
        for (auto& s : Y.rows)
            gens.push_back(quat_to_vec(quat_mul(B, quat_from_vec(r), quat_from_vec(s))));
    return lattice_from_generators(gens);
}

QLattice lattice_conj(const QLattice& X) {
    std::vector<Vec4Q> gens;
    for (auto& r : X.rows) gens.push_back(quat_to_vec(quat_conj(quat_from_vec(r))));
    return lattice_from_generators(gens);
}

QLattice left_mul_lattice(const QuaternionAlgebra& B, const Quat& q, const QLattice& X) {
    std::vector<Vec4Q> gens;
    for (auto& r : X.rows) gens.push_back(quat_to_vec(quat_mul(B, q, quat_from_vec(r))));
    return lattice_from_generators(gens);
}

Mat4Q nrd_gram(const QuaternionAlgebra& B, const QLattice& L, const Rat& scale) {
    Mat4Q A{};
    Quat q[4];
    for (int i = 0; i < 4; i++) q[i] = quat_from_vec(L.rows[i]);
    for (int i = 0; i < 4; i++) {
        for (int j = 0; j <= i; j++) {
            // polar form: trd(b_i conj(b_j)) / 2, diagonal = nrd(b_i)
            Rat v = quat_trd(quat_mul(B, q[i], quat_conj(q[j]))) / 2 * scale;
            v.canonicalize();
            A[i][j] = A[j][i] = v;
        }
    }
    return A;
}

Int reduced_discriminant(const QuaternionAlgebra& B, const QLattice& L) {
    Mat4Q G{};
    Quat q[4];
    for (int i = 0; i < 4; i++) q[i] = quat_from_vec(L.rows[i]);
    for (int i = 0; i < 4; i++)
        for (int j = 0; j < 4; j++)
            G[i][j] = quat_trd(quat_mul(B, q[i], quat_conj(q[j])));
    Rat d = mat4_det(G);
    if (d < 0) d = -d;
    Rat s = rat_sqrt_exact(d);
    if (s.get_den() != 1) throw std::logic_error("reduced_discriminant: non-integral");
    return s.get_num();
}

bool is_order(const QuaternionAlgebra& B, const QLattice& L) {
    Vec4Q one{Rat(1), Rat(0), Rat(0), Rat(0)};
    if (!lattice_contains(L, one)) return false;
    Quat q[4];
    for (int i = 0; i < 4; i++) q[i] = quat_from_vec(L.rows[i]);
    for (int i = 0; i < 4; i++) {
        if (quat_nrd(B, q[i]).get_den() != 1) return false;
        if (quat_trd(q[i]).get_den() != 1) return false;
        for (int j = 0; j < 4; j++) {
            if (quat_trd(quat_mul(B, q[i], quat_conj(q[j]))).get_den() != 1) return false;
            if (!lattice_contains(L, quat_to_vec(quat_mul(B, q[i], q[j])))) return false;
        }
    }
    return true;
}

// close a lattice under multiplication (together with 1)
static QLattice multiplicative_closure(const QuaternionAlgebra& B, std::vector<Vec4Q> gens) {
    gens.push_back({Rat(1), Rat(0), Rat(0), Rat(0)});
    QLattice L = lattice_from_generators(gens);
    for (int round = 0; round < 16; round++) {
        QLattice P = lattice_mul(B, L, L);
        QLattice S = lattice_sum(L, P);
        if (S == L) return L;
        L = S;
    }
    throw std::logic_error("multiplicative_closure: did not stabilize");
}

QuatOrder maximal_order(const QuaternionAlgebra& B) {
    std::vector<Vec4Q> basis = {
        {Rat(1), Rat(0), Rat(0), Rat(0)},
        {Rat(0), Rat(1), Rat(0), Rat(0)},
        {Rat(0), Rat(0), Rat(1), Rat(0)},
        {Rat(0), Rat(0), Rat(0), Rat(1)},
    };
    QLattice O = lattice_from_generators(basis);
    Int d = reduced_discriminant(B, O);
    while (d != B.ell) {
        if (d % B.ell != 0) throw std::logic_error("maximal_order: discriminant lost ell");
        Int quot = d / B.ell;
        bool enlarged = false;
        for (auto& pp : factorize(quot.get_si()).factors) {
            long long p = pp.p;
            // projective candidates (c1..c4)/p, first nonzero coordinate 1
            std::vector<std::array<long long, 4>> cands;
            for (long long c0 = 0; c0 < 2 && !enlarged; c0++)
            for (long long c1 = 0; c1 < (c0 ? p : 2) && !enlarged; c1++)
            for (long long c2 = 0; c2 < ((c0 || c1) ? p : 2) && !enlarged; c2++)
            for (long long c3 = 0; c3 < ((c0 || c1 || c2) ? p : 2) && !enlarged; c3++) {
                long long lead = c0 ? c0 : c1 ? c1 : c2 ? c2 : c3;
                if (lead != 1) continue;
                Quat y{Rat(0), Rat(0), Rat(0), Rat(0)};
                long long cc[4] = {c0, c1, c2, c3};
                for (int k = 0; k < 4; k++)
                    y = quat_add(y, quat_scale(quat_from_vec(O.rows[k]), Rat(cc[k], p)));
                if (quat_trd(y).get_den() != 1) continue;
                if (quat_nrd(B, y).get_den() != 1) continue;
                std::vector<Vec4Q> gens(O.rows.begin(), O.rows.end());
                gens.push_back(quat_to_vec(y));
                QLattice L;
                try {
                    L = multiplicative_closure(B, gens);
                } catch (const std::logic_error&) {
                    continue;
                }
                if (!is_order(B, L)) continue;
                Int d2 = reduced_discriminant(B, L);
                if (d2 < d && d2 % B.ell == 0) {
                    O = L;
                    d = d2;
                    enlarged = true;
                }
            }
            if (enlarged) break;
        }
        if (!enlarged) throw std::logic_error("maximal_order: saturation stuck above target");
    }
    return QuatOrder{B, O, 1};
}

// trace-t0, norm-m0 elements of an order; the embedding search primitive.
std::vector<Quat> order_elements_with_charpoly(const QuaternionAlgebra& B, const QLattice& L,
                                               long long t0, const Rat& m0, size_t limit) {
    // affine sublattice of trace t0: solve sum c_i trd(b_i) = t0 over Z
    Quat q[4];
    long long tr[4];
    for (int i = 0; i < 4; i++) {
        q[i] = quat_from_vec(L.rows[i]);
        Rat t = quat_trd(q[i]);
        if (t.get_den() != 1) throw std::invalid_argument("elements_with_charpoly: non-integral traces");
        tr[i] = t.get_num().get_si();
    }
    // find particular solution c with c . tr = t0 (gcd condition), plus a
    // basis of the rank-3 kernel, via integer column reduction
    long long g = 0;
    for (int i = 0; i < 4; i++) g = gcd_ll(g, tr[i]);
    if (g == 0) {
        if (t0 != 0) return {};
        g = 1;
    }
    if (t0 % g) return {};
    // build unimodular U with tr . U = (g, 0, 0, 0)
    long long T[4] = {tr[0], tr[1], tr[2], tr[3]};
    long long U[4][4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    for (;;) {
        int piv = -1;
        for (int i = 0; i < 4; i++)
            if (T[i] != 0 && (piv < 0 || std::abs(T[i]) < std::abs(T[piv]))) piv = i;
        if (piv < 0) break;
        bool done = true;
        for (int i = 0; i < 4; i++) {
            if (i == piv || T[i] == 0) continue;
            long long f = T[i] / T[piv];
            T[i] -= f * T[piv];
            for (int r = 0; r < 4; r++) U[r][i] -= f * U[r][piv];
            if (T[i] != 0) done = false;
        }
        if (done) {
            if (piv != 0) {
                std::swap(T[piv], T[0]);
                for (int r = 0; r < 4; r++) std::swap(U[r][piv], U[r][0]);
            }
            break;
        }
    }
    if (T[0] < 0) {
        T[0] = -T[0];
        for (int r = 0; r < 4; r++) U[r][0] = -U[r][0];
    }
    // particular solution: c_part = (t0 / T[0]) * U[:,0]; kernel basis U[:,1..3]
    Quat x0{Rat(0), Rat(0), Rat(0), Rat(0)};
    for (int r = 0; r < 4; r++)
        x0 = quat_add(x0, quat_scale(q[r], Rat(U[r][0] * (t0 / T[0]))));
    Quat kb[3];
    for (int c = 1; c < 4; c++) {
        Quat v{Rat(0), Rat(0), Rat(0), Rat(0)};
        for (int r = 0; r < 4; r++) v = quat_add(v, quat_scale(q[r], Rat(U[r][c])));
        kb[c - 1] = v;
    }
    // quadratic form on x0 + sum z_i kb_i: use 4-var enumeration with the
    // 4th variable pinned by a huge diagonal weight
    Mat4Q A{};
    for (int i = 0; i < 3; i++)
        for (int j = 0; j <= i; j++) {
            Rat v = quat_trd(quat_mul(B, kb[i], quat_conj(kb[j]))) / 2;
            A[i][j] = A[j][i] = v;
        }
    // cross terms with the fixed part: q(x0 + z) = nrd(x0) + sum z_i trd(x0 conj kb_i) + q3(z)
    Rat base = quat_nrd(B, x0);
    Rat lin[3];
    for (int i = 0; i < 3; i++) lin[i] = quat_trd(quat_mul(B, x0, quat_conj(kb[i])));
    // complete the square into a shifted 3-var form: q(z) = (z + s) A3 (z + s)^T + const
    // solve A3 s = lin/2
    Mat4Q A3 = A;
    A3[3][3] = 1; // pad to keep it invertible
    Mat4Q Ainv = mat4_inverse(A3);
    Vec4Q s{};
    for (int i = 0; i < 3; i++) {
        Rat v(0);
        for (int j = 0; j < 3; j++) v += Ainv[i][j] * lin[j] / 2;
        s[i] = v;
    }
    Rat cshift = base;
    for (int i = 0; i < 3; i++)
        for (int j = 0; j < 3; j++) cshift -= s[i] * A[i][j] * s[j];
    Rat target = m0 - cshift;
    std::vector<Quat> out;
    if (target < 0) return out;
    Mat4Q Apad = A;
    Apad[3][3] = target + 1; // 4th variable forced to 0
    Vec4Q shift{s[0], s[1], s[2], Rat(0)};
    enumerate_quadratic(Apad, target, shift,
                        [&](const Rat& val, const std::array<long long, 4>& cvec) {
                            if (cvec[3] != 0) return true;
                            if (val != target) return true;
                            Quat x = x0;
                            for (int i = 0; i < 3; i++)
                                x = quat_add(x, quat_scale(kb[i], Rat(cvec[i])));
                            out.push_back(x);
                            return out.size() < limit;
                        });
    // deterministic order
    std::sort(out.begin(), out.end(), [](const Quat& l, const Quat& r) {
        if (l.w != r.w) return l.w < r.w;
        if (l.x != r.x) return l.x < r.x;
        if (l.y != r.y) return l.y < r.y;
        return l.z < r.z;
    });
    return out;
}

QuatOrder eichler_order(const QuatOrder& Omax, long long N, const ImagQuadField& field) {
    if (N < 1) throw std::invalid_argument("eichler_order: N must be positive");
    if (gcd_ll(N, Omax.B.ell * field.D) != 1)
        throw std::invalid_argument("eichler_order: N must be coprime to ell * D_L");
    if (!heegner_check(field, N))
        throw std::invalid_argument("eichler_order: a prime of N does not split in L");
    if (N == 1) return Omax;
    long long D = field.D;
    long long t0 = ((D % 2) + 2) % 2;
    Rat m0 = Rat(t0 * t0 - D, 4);
    auto embeds = order_elements_with_charpoly(Omax.B, Omax.L, t0, m0, 1);
    if (embeds.empty())
        throw std::invalid_argument("eichler_order: O_L does not embed (ell splits in L?)");
    Quat omega = embeds[0];                       // image of (t0 + sqrt(D))/2
    Quat sqrtD = quat_sub(quat_scale(omega, 2), Quat{Rat(t0), Rat(0), Rat(0), Rat(0)});
    // kappa(N-ideal) * O_B, prime by prime
    QLattice K = Omax.L;
    QuadOrder maximal(field, 1);
    for (auto& pp : factorize(N).factors) {
        BQForm f = prime_form_above(maximal, pp.p);
        // pi = (-b + sqrt(D)) / 2
        Quat pi = quat_scale(quat_add(Quat{Rat(-f.b), Rat(0), Rat(0), Rat(0)}, sqrtD), Rat(1, 2));
        for (int k = 0; k < pp.e; k++) {
            std::vector<Vec4Q> gens;
            for (auto& r : K.rows) {
                gens.push_back(quat_to_vec(quat_scale(quat_from_vec(r), Rat(pp.p))));
                gens.push_back(quat_to_vec(quat_mul(Omax.B, pi, quat_from_vec(r))));
            }
            K = lattice_from_generators(gens);
        }
    }
    std::vector<Vec4Q> gens(K.rows.begin(), K.rows.end());
    gens.push_back(quat_to_vec(Quat{Rat(1), Rat(0), Rat(0), Rat(0)}));
    gens.push_back(quat_to_vec(omega));
    QLattice R = lattice_from_generators(gens);
    QuatOrder E{Omax.B, R, N};
    if (!is_order(E.B, E.L)) throw std::logic_error("eichler_order: result is not an order");
    if (reduced_discriminant(E.B, E.L) != Int(Omax.B.ell) * Int(N))
        throw std::logic_error("eichler_order: discriminant certificate failed");
    return E;
}

// ---- ideal classes ------------------------------------------------------

Rat ideal_nrd(const QuatOrder& O, const QLattice& I) {
    Rat r = lattice_det(I) / lattice_det(O.L);
    if (r < 0) r = -r;
    return rat_sqrt_exact(r);
}

// hom lattice M = I conj(J) / nrd(J) with form nrd * nrd(J)/nrd(I)
static QLattice hom_lattice(const QuatOrder& O, const QLattice& I, const QLattice& J,
                            Rat& form_scale) {
    Rat nI = ideal_nrd(O, I), nJ = ideal_nrd(O, J);
    QLattice M = lattice_mul(O.B, I, lattice_conj(J));
    M = lattice_scale(M, 1 / nJ);
    form_scale = nJ / nI;
    return M;
}

std::optional<Quat> ideal_isometry(const QuatOrder& O, const QLattice& I, const QLattice& J) {
    Rat scale;
    QLattice M = hom_lattice(O, I, J, scale);
    Mat4Q A = nrd_gram(O.B, M, scale);
    std::optional<Quat> found;
    enumerate_quadratic(A, Rat(1), Vec4Q{}, [&](const Rat& v, const std::array<long long, 4>& c) {
        if (v != 1) return true;
        Quat alpha{Rat(0), Rat(0), Rat(0), Rat(0)};
        for (int i = 0; i < 4; i++)
            alpha = quat_add(alpha, quat_scale(quat_from_vec(M.rows[i]), Rat(c[i])));
        found = alpha;
        return false;
    });
    return found;
}

bool isometric(const QuatOrder& O, const RightIdealClass& c1, const RightIdealClass& c2) {
    return ideal_isometry(O, c1.lattice, c2.lattice).has_value();
}

static std::vector<long long> ideal_theta(const QuatOrder& O, const QLattice& I, int kmax) {
    Rat n = ideal_nrd(O, I);
    Mat4Q A = nrd_gram(O.B, I, 1 / n);
    return theta_prefix(A, kmax);
}

// reduce an integral right ideal to a small equivalent one
static QLattice reduce_ideal(const QuatOrder& O, const QLattice& I) {
    Rat n = ideal_nrd(O, I);
    Mat4Q A = nrd_gram(O.B, I, 1 / n);
    for (Rat bound(4);; bound *= 4) {
        Rat best_val;
        std::optional<Quat> best;
        enumerate_quadratic(A, bound, Vec4Q{}, [&](const Rat& v, const std::array<long long, 4>& c) {
            if (v == 0) return true;
            if (best && v >= best_val) return true;
            Quat a{Rat(0), Rat(0), Rat(0), Rat(0)};
            for (int i = 0; i < 4; i++)
                a = quat_add(a, quat_scale(quat_from_vec(I.rows[i]), Rat(c[i])));
            best = a;
            best_val = v;
            return true;
        });
        if (best) {
            if (best_val == 1) return O.L; // principal
            Quat beta = quat_scale(quat_conj(*best), 1 / n);
            return left_mul_lattice(O.B, beta, I);
        }
    }
}

// the p+1 right O-submodules J of I with I/J = (Z/p)^2, nrd scaled by p
static std::vector<QLattice> p_neighbors(const QuatOrder& O, const QLattice& I, long long p) {
    // right multiplication matrices of O's basis in I-coordinates, mod p
    Mat4Q Iinv = mat4_inverse(I.rows);
    long long T[4][4][4];
    for (int k = 0; k < 4; k++) {
        Quat ok = quat_from_vec(O.L.rows[k]);
        for (int i = 0; i < 4; i++) {
            Quat prod = quat_mul(O.B, quat_from_vec(I.rows[i]), ok);
            Vec4Q c = vec_mat_mul(quat_to_vec(prod), Iinv);
            for (int j = 0; j < 4; j++) {
                if (c[j].get_den() != 1)
                    throw std::logic_error("p_neighbors: not a right O-module");
                T[k][i][j] = (long long)mpz_fdiv_ui(c[j].get_num().get_mpz_t(), p);
            }
        }
    }
    // all 2-dim subspaces of F_p^4 in reduced echelon form
    std::vector<QLattice> out;
    auto stable = [&](const std::array<std::array<long long, 4>, 2>& basis) {
        // row space of the 2x4 basis must be preserved by every T[k]
        for (int k = 0; k < 4; k++) {
            for (int r = 0; r < 2; r++) {
                long long img[4] = {0, 0, 0, 0};
                for (int i = 0; i < 4; i++)
                    for (int j = 0; j < 4; j++)
                        img[j] = (img[j] + basis[r][i] * T[k][i][j]) % p;
                // reduce img against basis rows (echelon)
                for (int br = 0; br < 2; br++) {
                    int piv = -1;
                    for (int j = 0; j < 4; j++)
                        if (basis[br][j]) { piv = j; break; }
                    if (piv < 0) continue;
                    long long f = img[piv] % p;
                    if (f) {
                        long long inv = mod_inverse(basis[br][piv], p);
                        long long mul = f * inv % p;
                        for (int j = 0; j < 4; j++)
                            img[j] = ((img[j] - mul * basis[br][j]) % p + p) % p;
                    }
                }
                for (int j = 0; j < 4; j++)
                    if (img[j] % p) return false;
            }
        }
        return true;
    };
    // enumerate echelon bases by pivot pair
    for (int p1 = 0; p1 < 4; p1++)
        for (int p2 = p1 + 1; p2 < 4; p2++) {
            // free entries: row1 has entries in columns > p1, not p2; row2 in columns > p2
            std::vector<int> free1, free2;
            for (int j = p1 + 1; j < 4; j++)
                if (j != p2) free1.push_back(j);
            for (int j = p2 + 1; j < 4; j++) free2.push_back(j);
            long long total = 1;
            for (size_t t = 0; t < free1.size() + free2.size(); t++) total *= p;
            for (long long code = 0; code < total; code++) {
                std::array<std::array<long long, 4>, 2> basis{};
                basis[0][p1] = 1;
                basis[1][p2] = 1;
                long long c = code;
                for (int j : free1) { basis[0][j] = c % p; c /= p; }
                for (int j : free2) { basis[1][j] = c % p; c /= p; }
                if (!stable(basis)) continue;
                std::vector<Vec4Q> gens;
                for (int r = 0; r < 2; r++) {
                    Quat v{Rat(0), Rat(0), Rat(0), Rat(0)};
                    for (int i = 0; i < 4; i++)
                        v = quat_add(v, quat_scale(quat_from_vec(I.rows[i]), Rat(basis[r][i])));
                    gens.push_back(quat_to_vec(v));
                }
                for (auto& row : I.rows)
                    gens.push_back(quat_to_vec(quat_scale(quat_from_vec(row), Rat(p))));
                out.push_back(lattice_from_generators(gens));
            }
        }
    return out;
}

Rat expected_mass(long long ell, long long N) {
    return Rat(ell - 1, 24) * Rat(psi_index(N));
}

Rat mass(const std::vector<RightIdealClass>& classes) {
    Rat m(0);
    for (auto& c : classes) m += Rat(1, c.w);
    m.canonicalize();
    return m;
}

static const int kThetaPrefix = 12;

IdealClassSet ideal_classes(const QuatOrder& O) {
    long long ell = O.B.ell, N = O.level;
    if (ell * N > 10000)
        throw std::invalid_argument("ideal_classes: ell*N above desk-scale bound 1e4");
    long long p = (ell * N) % 2 ? 2 : 3;
    while (gcd_ll(p, ell * N) != 1) p = p == 2 ? 3 : p + 2;
    Rat target = expected_mass(ell, N);

    IdealClassSet S{O, {}};
    auto add_class = [&](const QLattice& L) {
        RightIdealClass c;
        c.lattice = L;
        c.nrd = ideal_nrd(O, L);
        Rat fs;
        QLattice Ml = hom_lattice(O, L, L, fs);
        c.left_order = Ml;
        c.w = count_value(nrd_gram(O.B, Ml, fs), Rat(1));
        c.theta = ideal_theta(O, L, kThetaPrefix);
        S.classes.push_back(c);
    };
    add_class(O.L);
    std::deque<size_t> queue = {0};
    Rat acc = mass(S.classes);
    while (acc != target) {
        if (acc > target) throw std::logic_error("ideal_classes: mass certificate exceeded");
        if (queue.empty()) throw std::logic_error("ideal_classes: mass certificate failure");
        size_t idx = queue.front();
        queue.pop_front();
        QLattice base = S.classes[idx].lattice;
        for (auto& J : p_neighbors(O, base, p)) {
            QLattice R = reduce_ideal(O, J);
            auto th = ideal_theta(O, R, kThetaPrefix);
            bool fresh = true;
            for (auto& c : S.classes) {
                if (c.theta != th) continue;
                if (ideal_isometry(O, R, c.lattice)) { fresh = false; break; }
            }
            if (fresh) {
                add_class(R);
                queue.push_back(S.classes.size() - 1);
                acc = mass(S.classes);
                if (acc == target) break;
            }
        }
    }
    for (auto& c : S.classes) {
        if (c.w != 2 && c.w != 4 && c.w != 6 && c.w != 8 && c.w != 12 && c.w != 24)
            throw std::logic_error("ideal_classes: unit count outside {2,4,6,8,12,24}");
    }
    std::stable_sort(S.classes.begin(), S.classes.end(),
                     [](const RightIdealClass& a, const RightIdealClass& b) {
                         return a.theta < b.theta;
                     });
    for (size_t i = 0; i < S.classes.size(); i++) S.classes[i].index = (int)i;
    return S;
}

// ---- Brandt matrices ----------------------------------------------------

BrandtMatrix brandt_matrix(const IdealClassSet& S, long long m) {
    long long ell = S.order.B.ell, N = S.order.level;
    if (m < 1 || gcd_ll(m, ell * N) != 1)
        throw std::invalid_argument("brandt_matrix: m must be positive and coprime to ell*N");
    size_t h = S.classes.size();
    BrandtMatrix Bm;
    Bm.m = m;
    Bm.entries.assign(h, std::vector<long long>(h, 0));
    for (size_t i = 0; i < h; i++) {
        for (size_t j = 0; j < h; j++) {
            Rat scale;
            QLattice M = hom_lattice(S.order, S.classes[i].lattice, S.classes[j].lattice, scale);
            long long cnt = count_value(nrd_gram(S.order.B, M, scale), Rat(m));
            if (cnt % S.classes[j].w)
                throw std::logic_error("brandt_matrix: non-integer entry");
            Bm.entries[i][j] = cnt / S.classes[j].w;
        }
    }
    return Bm;
}

static BrandtMatrix brandt_mul(const BrandtMatrix& A, const BrandtMatrix& B, long long m) {
    size_t h = A.entries.size();
    BrandtMatrix C;
    C.m = m;
    C.entries.assign(h, std::vector<long long>(h, 0));
    for (size_t i = 0; i < h; i++)
        for (size_t j = 0; j < h; j++)
            for (size_t k = 0; k < h; k++)
                C.entries[i][j] += A.entries[i][k] * B.entries[k][j];
    return C;
}

static BrandtMatrix brandt_axpy(BrandtMatrix A, long long c, const BrandtMatrix& B) {
    for (size_t i = 0; i < A.entries.size(); i++)
        for (size_t j = 0; j < A.entries.size(); j++)
            A.entries[i][j] += c * B.entries[i][j];
    return A;
}

BrandtMatrix brandt_primitive(const IdealClassSet& S, long long q, int e) {
    if (e == 0) return brandt_matrix(S, 1);
    BrandtMatrix P1 = brandt_matrix(S, q);
    if (e == 1) return P1;
    BrandtMatrix prev = brandt_matrix(S, 1);
    BrandtMatrix cur = P1;
    for (int k = 2; k <= e; k++) {
        BrandtMatrix next = brandt_mul(P1, cur, 1);
        long long c = (k == 2) ? (q + 1) : q;
        next = brandt_axpy(next, -c, prev);
        long long m = 1;
        for (int t = 0; t < k; t++) m *= q;
        next.m = m;
        prev = cur;
        cur = next;
    }
    return cur;
}

std::string brandt_set_to_json(const IdealClassSet& S, const std::vector<BrandtMatrix>& mats) {
    std::ostringstream os;
    os << "{\"ell\": " << S.order.B.ell << ", \"level\": " << S.order.level << ", \"weights\": [";
    for (size_t i = 0; i < S.classes.size(); i++)
        os << (i ? ", " : "") << S.classes[i].w;
    os << "], \"matrices\": {";
    std::map<long long, const BrandtMatrix*> sorted;
    for (auto& M : mats) sorted[M.m] = &M;
    bool first = true;
    for (auto& [m, M] : sorted) {
        os << (first ? "" : ", ") << "\"" << m << "\": [";
        for (size_t i = 0; i < M->entries.size(); i++) {
            os << (i ? ", [" : "[");
            for (size_t j = 0; j < M->entries[i].size(); j++)
                os << (j ? ", " : "") << M->entries[i][j];
            os << "]";
        }
        os << "]";
        first = false;
    }
    os << "}}";
    return os.str();
}

} // namespace heegner
