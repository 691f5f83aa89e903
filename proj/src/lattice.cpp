#include "heegner/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heegner {

// row-style HNF over Z: pivots left to right, positive, entries above reduced
static std::vector<std::array<Int, 4>> hnf_int(std::vector<std::array<Int, 4>> A) {
    size_t r = 0;
    for (int col = 0; col < 4 && r < A.size(); col++) {
        for (;;) {
            size_t best = SIZE_MAX;
            for (size_t k = r; k < A.size(); k++) {
                if (A[k][col] == 0) continue;
                if (best == SIZE_MAX || abs(A[k][col]) < abs(A[best][col])) best = k;
            }
            if (best == SIZE_MAX) break;
            std::swap(A[r], A[best]);
            bool clean = true;
            for (size_t k = r + 1; k < A.size(); k++) {
                if (A[k][col] == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), A[k][col].get_mpz_t(), A[r][col].get_mpz_t());
                for (int j = 0; j < 4; j++) A[k][j] -= q * A[r][j];
                if (A[k][col] != 0) clean = false;
            }
            if (clean) break;
        }
        if (r < A.size() && A[r][col] != 0) {
            if (A[r][col] < 0)
                for (int j = 0; j < 4; j++) A[r][j] = -A[r][j];
            for (size_t k = 0; k < r; k++) {
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), A[k][col].get_mpz_t(), A[r][col].get_mpz_t());
                for (int j = 0; j < 4; j++) A[k][j] -= q * A[r][j];
            }
            r++;
        }
    }
    A.resize(r);
    return A;
}

QLattice lattice_from_generators(const std::vector<Vec4Q>& gens) {
    Int den = 1;
    for (auto& g : gens)
        for (auto& x : g) den = den / gcd(den, Int(x.get_den())) * Int(x.get_den());
    std::vector<std::array<Int, 4>> A;
    for (auto& g : gens) {
        std::array<Int, 4> row;
        for (int j = 0; j < 4; j++) {
            Rat scaled = g[j] * Rat(den);
            scaled.canonicalize();
            if (scaled.get_den() != 1) throw std::logic_error("lattice_from_generators: denominator");
            row[j] = scaled.get_num();
        }
        A.push_back(row);
    }
    A = hnf_int(std::move(A));
    if (A.size() != 4) throw std::invalid_argument("lattice_from_generators: rank < 4");
    QLattice L;
    for (int i = 0; i < 4; i++)
        for (int j = 0; j < 4; j++) {
            L.rows[i][j] = Rat(A[i][j], den);
            L.rows[i][j].canonicalize();
        }
    return L;
}

QLattice lattice_scale(const QLattice& L, const Rat& c) {
    if (c == 0) throw std::invalid_argument("lattice_scale: zero scalar");
    QLattice R = L;
    for (auto& row : R.rows)
        for (auto& x : row) { x *= c; x.canonicalize(); }
    std::vector<Vec4Q> gens(R.rows.begin(), R.rows.end());
    return lattice_from_generators(gens);
}

QLattice lattice_sum(const QLattice& A, const QLattice& B) {
    std::vector<Vec4Q> gens(A.rows.begin(), A.rows.end());
    gens.insert(gens.end(), B.rows.begin(), B.rows.end());
    return lattice_from_generators(gens);
}

Rat mat4_det(const Mat4Q& M) {
    Mat4Q A = M;
    Rat det(1);
    for (int col = 0; col < 4; col++) {
        int piv = -1;
        for (int r = col; r < 4; r++)
            if (A[r][col] != 0) { piv = r; break; }
        if (piv < 0) return Rat(0);
        if (piv != col) { std::swap(A[piv], A[col]); det = -det; }
        det *= A[col][col];
        for (int r = col + 1; r < 4; r++) {
            if (A[r][col] == 0) continue;
            Rat f = A[r][col] / A[col][col];
            for (int j = col; j < 4; j++) A[r][j] -= f * A[col][j];
        }
    }
    det.canonicalize();
    return det;
}

Mat4Q mat4_inverse(const Mat4Q& M) {
    Mat4Q A = M;
    Mat4Q I{};
    for (int i = 0; i < 4; i++) I[i][i] = 1;
    for (int col = 0; col < 4; col++) {
        int piv = -1;
        for (int r = col; r < 4; r++)
            if (A[r][col] != 0) { piv = r; break; }
        if (piv < 0) throw std::invalid_argument("mat4_inverse: singular");
        std::swap(A[piv], A[col]);
        std::swap(I[piv], I[col]);
        Rat d = A[col][col];
        for (int j = 0; j < 4; j++) { A[col][j] /= d; I[col][j] /= d; }
        for (int r = 0; r < 4; r++) {
            if (r == col || A[r][col] == 0) continue;
            Rat f = A[r][col];
            for (int j = 0; j < 4; j++) { A[r][j] -= f * A[col][j]; I[r][j] -= f * I[col][j]; }
        }
    }
    for (auto& row : I) for (auto& x : row) x.canonicalize();
    return I;
}

Mat4Q mat4_mul(const Mat4Q& A, const Mat4Q& B) {
    Mat4Q C{};
    for (int i = 0; i < 4; i++)
        for (int j = 0; j < 4; j++) {
            Rat s(0);
            for (int k = 0; k < 4; k++) s += A[i][k] * B[k][j];
            s.canonicalize();
            C[i][j] = s;
        }
    return C;
}

Vec4Q vec_mat_mul(const Vec4Q& v, const Mat4Q& M) {
    Vec4Q r{};
    for (int j = 0; j < 4; j++) {
        Rat s(0);
        for (int k = 0; k < 4; k++) s += v[k] * M[k][j];
        s.canonicalize();
        r[j] = s;
    }
    return r;
}

QLattice lattice_dual(const QLattice& L) {
    Mat4Q inv = mat4_inverse(L.rows);
    // dual basis = columns of inv = rows of inv^T
    QLattice D;
    for (int i = 0; i < 4; i++)
        for (int j = 0; j < 4; j++) D.rows[i][j] = inv[j][i];
    std::vector<Vec4Q> gens(D.rows.begin(), D.rows.end());
    return lattice_from_generators(gens);
}

QLattice lattice_intersect(const QLattice& A, const QLattice& B) {
    return lattice_dual(lattice_sum(lattice_dual(A), lattice_dual(B)));
}

Vec4Q lattice_coords(const QLattice& L, const Vec4Q& v) {
    return vec_mat_mul(v, mat4_inverse(L.rows));
}

bool lattice_contains(const QLattice& L, const Vec4Q& v) {
    Vec4Q c = lattice_coords(L, v);
    for (auto& x : c)
        if (x.get_den() != 1) return false;
    return true;
}

bool lattice_subset(const QLattice& A, const QLattice& B) {
    for (auto& row : A.rows)
        if (!lattice_contains(B, row)) return false;
    return true;
}

Rat lattice_det(const QLattice& L) { return mat4_det(L.rows); }

bool rat_is_square(const Rat& r) {
    if (r < 0) return false;
    return mpz_perfect_square_p(r.get_num().get_mpz_t()) &&
           mpz_perfect_square_p(r.get_den().get_mpz_t());
}

Rat rat_sqrt_exact(const Rat& r) {
    if (!rat_is_square(r)) throw std::invalid_argument("rat_sqrt_exact: not a perfect square");
    Int n, d;
    mpz_sqrt(n.get_mpz_t(), r.get_num().get_mpz_t());
    mpz_sqrt(d.get_mpz_t(), r.get_den().get_mpz_t());
    Rat s(n, d);
    s.canonicalize();
    return s;
}

void enumerate_quadratic(const Mat4Q& A, const Rat& bound, const Vec4Q& shift,
                         const std::function<bool(const Rat&, const std::array<long long, 4>&)>& visitor) {
    if (bound < 0) return;
    // exact LDL^T
    Mat4Q M = A;
    Rat D[4];
    Rat Lm[4][4] = {};
    for (int k = 0; k < 4; k++) {
        D[k] = M[k][k];
        if (D[k] <= 0) throw std::invalid_argument("enumerate_quadratic: form not positive definite");
        for (int i = k + 1; i < 4; i++) Lm[i][k] = M[i][k] / D[k];
        for (int i = k + 1; i < 4; i++)
            for (int j = k + 1; j < 4; j++) M[i][j] -= Lm[i][k] * M[j][k];
    }
    double Dd[4];
    for (int k = 0; k < 4; k++) Dd[k] = D[k].get_d();

    std::array<long long, 4> c{};
    Rat u[4]; // u_k = c_k + shift_k
    // recurse from coordinate 3 down to 0
    std::function<bool(int, const Rat&)> rec = [&](int k, const Rat& remaining) -> bool {
        // offset = shift_k + sum_{i>k} L[i][k] * u_i
        Rat off = shift[k];
        for (int i = k + 1; i < 4; i++) off += Lm[i][k] * u[i];
        double offd = off.get_d();
        double radius = std::sqrt(std::max(0.0, remaining.get_d() / Dd[k])) + 1e-9;
        long long lo = (long long)std::floor(-offd - radius) - 1;
        long long hi = (long long)std::ceil(-offd + radius) + 1;
        for (long long v = lo; v <= hi; v++) {
            Rat term = off + v;
            Rat used = D[k] * term * term;
            if (used > remaining) continue;
            c[k] = v;
            u[k] = Rat(v) + shift[k];
            if (k == 0) {
                Rat val = bound - (remaining - used);
                val.canonicalize();
                if (!visitor(val, c)) return false;
            } else {
                if (!rec(k - 1, remaining - used)) return false;
            }
        }
        return true;
    };
    rec(3, bound);
}

long long count_value(const Mat4Q& A, const Rat& target) {
    if (target < 0) return 0;
    long long n = 0;
    enumerate_quadratic(A, target, Vec4Q{}, [&](const Rat& v, const std::array<long long, 4>&) {
        if (v == target) n++;
        return true;
    });
    return n;
}

bool has_value(const Mat4Q& A, const Rat& target) {
    if (target < 0) return false;
    bool found = false;
    enumerate_quadratic(A, target, Vec4Q{}, [&](const Rat& v, const std::array<long long, 4>&) {
        if (v == target) { found = true; return false; }
        return true;
    });
    return found;
}

std::vector<long long> theta_prefix(const Mat4Q& A, int kmax) {
    std::vector<long long> t(kmax + 1, 0);
    enumerate_quadratic(A, Rat(kmax), Vec4Q{}, [&](const Rat& v, const std::array<long long, 4>&) {
        if (v.get_den() == 1) {
            long long k = v.get_num().get_si();
            if (k >= 0 && k <= kmax) t[k]++;
        }
        return true;
    });
    return t;
}

} // namespace heegner
