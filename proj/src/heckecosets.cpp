#include "heegner/heckecosets.hpp"

#include <sstream>
#include <stdexcept>

namespace heegner {

Mat2Q Mat2Q::identity() { return of(1, 0, 0, 1); }

Mat2Q Mat2Q::of(long long a, long long b, long long c, long long d) {
    Mat2Q M;
    M.m[0][0] = a; M.m[0][1] = b; M.m[1][0] = c; M.m[1][1] = d;
    return M;
}

Rat Mat2Q::det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

Mat2Q Mat2Q::inverse() const {
    Rat d = det();
    if (d == 0) throw std::invalid_argument("Mat2Q::inverse: singular matrix");
    Mat2Q R;
    R.m[0][0] = m[1][1] / d;
    R.m[0][1] = -m[0][1] / d;
    R.m[1][0] = -m[1][0] / d;
    R.m[1][1] = m[0][0] / d;
    return R;
}

Mat2Q Mat2Q::operator*(const Mat2Q& o) const {
    Mat2Q R;
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++)
            R.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j];
    return R;
}

bool Mat2Q::operator==(const Mat2Q& o) const {
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++)
            if (m[i][j] != o.m[i][j]) return false;
    return true;
}

Mat2Q a_of_n(long long n) { return Mat2Q::of(n, 0, 0, 1); }

static long long ipow(long long q, int e) {
    long long r = 1;
    while (e-- > 0) r *= q;
    return r;
}

Mat2Q h_of_prime_power(long long q, int e, SplitType type) {
    long long n = ipow(q, e);
    if (type == SplitType::Split) return Mat2Q::of(n, 1, 0, 1);
    return Mat2Q::of(n, 0, 0, 1);
}

long long nonresidue_unit(long long q) {
    if (q == 2) return 5; // least unit generating the unramified quadratic extension of Q_2
    for (long long c = 2; c < q; c++)
        if (mod_pow(c, (q - 1) / 2, q) == q - 1) return c;
    throw std::invalid_argument("nonresidue_unit: q not an odd prime > 2");
}

CosetSet s_n_reps(long long q, int e, SplitType type) {
    if (!is_prime(q)) throw std::invalid_argument("s_n_reps: q must be prime");
    if (e < 0) throw std::invalid_argument("s_n_reps: e must be >= 0");
    if (type == SplitType::Ramified)
        throw std::invalid_argument("s_n_reps: ramified q not in the coset model");
    CosetSet S{q, e, type, CosetKind::Galois};
    if (e == 0) {
        S.reps = {Mat2Q::identity()};
        return S;
    }
    long long n = ipow(q, e);
    if (type == SplitType::Split) {
        for (long long a = 1; a <= n; a++)
            if (a % q) S.reps.push_back(Mat2Q::of(a, 0, 0, 1));
    } else {
        long long u = nonresidue_unit(q);
        for (long long b = 1; b <= n; b++)
            S.reps.push_back(Mat2Q::of(1, b * u, b, 1));
        for (long long a = 1; a <= n / q; a++)
            S.reps.push_back(Mat2Q::of(q * a * u, u, 1, q * a * u));
    }
    return S;
}

bool in_gl2_zq(const Mat2Q& M, long long q) {
    Rat d = M.det();
    if (d == 0) throw std::invalid_argument("in_gl2_zq: singular matrix");
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++)
            if (M.m[i][j] != 0 && rational_valuation(M.m[i][j], q) < 0) return false;
    return rational_valuation(d, q) == 0;
}

bool in_cartan_cell(const Mat2Q& M, long long q, int e) {
    Rat d = M.det();
    if (d == 0) throw std::invalid_argument("in_cartan_cell: singular matrix");
    long long minval = 1000000;
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++) {
            if (M.m[i][j] == 0) continue;
            long long v = rational_valuation(M.m[i][j], q);
            if (v < 0) return false;
            minval = std::min(minval, v);
        }
    return rational_valuation(d, q) == e && minval == 0;
}

bool same_right_coset(const Mat2Q& M, const Mat2Q& Mp, long long q) {
    return in_gl2_zq(M.inverse() * Mp, q);
}

CosetSet hecke_reps(long long q, int e, SplitType type) {
    if (!is_prime(q)) throw std::invalid_argument("hecke_reps: q must be prime");
    CosetSet H{q, e, type, CosetKind::Hecke};
    if (e == 0) {
        H.reps = {Mat2Q::identity()};
        return H;
    }
    long long n = ipow(q, e);
    long long target = deg_a(n);
    if (type != SplitType::Ramified) {
        Mat2Q h = h_of_prime_power(q, e, type);
        for (auto& g : s_n_reps(q, e, type).reps) H.reps.push_back(g * h);
    }
    auto known = [&](const Mat2Q& M) {
        for (auto& R : H.reps)
            if (same_right_coset(R, M, q)) return true;
        return false;
    };
    // complete with canonical upper-triangular representatives (q^e, b; 0, 1),
    // then the remaining column-HNF shapes (a, 0; b, d), ad = q^e, 0 <= b < d
    for (long long b = 0; b < n && (long long)H.reps.size() < target; b++) {
        Mat2Q M = Mat2Q::of(n, b, 0, 1);
        if (!known(M)) H.reps.push_back(M);
    }
    for (long long a = 1; a <= n && (long long)H.reps.size() < target; a *= q) {
        long long d = n / a;
        for (long long b = 0; b < d && (long long)H.reps.size() < target; b++) {
            if (gcd_ll(gcd_ll(a, b), d) != 1) continue;
            Mat2Q M = Mat2Q::of(a, 0, b, d);
            if (!known(M)) H.reps.push_back(M);
        }
    }
    if ((long long)H.reps.size() != target)
        throw std::logic_error("hecke_reps: coset completion failed");
    return H;
}

long long deg_a(long long n) {
    if (n < 1) throw std::invalid_argument("deg_a: n must be positive");
    return psi_index(n);
}

static bool pairwise_distinct(const std::vector<Mat2Q>& v, long long q) {
    for (size_t i = 0; i < v.size(); i++)
        for (size_t j = i + 1; j < v.size(); j++)
            if (same_right_coset(v[i], v[j], q)) return false;
    return true;
}

ContainmentReport verify_orbit_containment(long long n, const ImagQuadField& field,
                                           long long ell, long long N) {
    if (n < 1) throw std::invalid_argument("verify_orbit_containment: n must be positive");
    if (gcd_ll(n, ell * field.D) != 1 || gcd_ll(n, N) != 1)
        throw std::invalid_argument("verify_orbit_containment: n must be coprime to ell*N*D_L");
    ContainmentReport rep;
    rep.n = n;
    rep.d = 1;
    for (auto& pp : factorize(n).factors) {
        FactorReport fr;
        fr.q = pp.p;
        fr.e = pp.e;
        fr.type = splitting_type(field, pp.p);
        long long qe = 1;
        for (int i = 0; i < pp.e; i++) qe *= pp.p;
        CosetSet S = s_n_reps(pp.p, pp.e, fr.type);
        Mat2Q h = h_of_prime_power(pp.p, pp.e, fr.type);
        std::vector<Mat2Q> translated;
        for (auto& g : S.reps) translated.push_back(g * h);
        fr.s_n = (long long)S.reps.size();
        fr.deg = deg_a(qe);
        fr.distinct = pairwise_distinct(translated, pp.p);
        fr.contained = true;
        for (auto& M : translated)
            if (!in_cartan_cell(M, pp.p, pp.e)) { fr.contained = false; break; }
        rep.distinct = rep.distinct && fr.distinct;
        rep.contained = rep.contained && fr.contained;
        rep.d *= Rat(fr.s_n, fr.deg);
        rep.factors.push_back(fr);
    }
    rep.d.canonicalize();
    return rep;
}

std::string ContainmentReport::to_json() const {
    std::ostringstream os;
    os << "{\"contained\": " << (contained ? "true" : "false")
       << ", \"d_den\": " << d.get_den()
       << ", \"d_num\": " << d.get_num()
       << ", \"distinct\": " << (distinct ? "true" : "false")
       << ", \"factors\": [";
    for (size_t i = 0; i < factors.size(); i++) {
        auto& f = factors[i];
        os << (i ? ", " : "") << "{\"deg\": " << f.deg
           << ", \"distinct\": " << (f.distinct ? "true" : "false")
           << ", \"e\": " << f.e
           << ", \"contained\": " << (f.contained ? "true" : "false")
           << ", \"q\": " << f.q
           << ", \"s_n\": " << f.s_n
           << ", \"type\": \"" << (f.type == SplitType::Split ? "split" : "inert") << "\"}";
    }
    os << "], \"n\": " << n << "}";
    return os.str();
}

} // namespace heegner
