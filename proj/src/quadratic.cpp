#include "heegner/quadratic.hpp"

#include <algorithm>
#include <stdexcept>

namespace heegner {

bool is_fundamental_discriminant(long long D) {
    if (D >= 0) return false;
    long long r = ((D % 4) + 4) % 4;
    if (r == 1) {
        // squarefree
        long long m = -D;
        for (long long p = 2; p * p <= m; p++)
            if (m % (p * p) == 0) return false;
        return true;
    }
    if (r == 0) {
        long long m = D / 4;
        long long mr = ((m % 4) + 4) % 4;
        if (mr == 1) return false; // m ≡ 1 mod 4 would make m itself a discriminant
        long long am = -m;
        for (long long p = 3; p * p <= am; p += 2)
            if (am % (p * p) == 0) return false;
        if (am % 4 == 0) return false;
        return true;
    }
    return false;
}

ImagQuadField::ImagQuadField(long long disc) : D(disc) {
    if (!is_fundamental_discriminant(disc))
        throw std::invalid_argument("ImagQuadField: not a fundamental discriminant < 0");
}

QuadOrder::QuadOrder(const ImagQuadField& f, long long n) : field(f), conductor(n) {
    if (n < 1) throw std::invalid_argument("QuadOrder: conductor must be positive");
}

bool is_reduced(const BQForm& f) {
    if (f.a <= 0) return false;
    long long ab = f.b < 0 ? -f.b : f.b;
    if (!(ab <= f.a && f.a <= f.c)) return false;
    if ((ab == f.a || f.a == f.c) && f.b < 0) return false;
    return true;
}

BQForm reduce_form(BQForm f) {
    if (f.disc() >= 0 || f.a <= 0)
        throw std::invalid_argument("reduce_form: form must be positive definite");
    for (;;) {
        if (f.c < f.a) std::swap(f.a, f.c), f.b = -f.b;
        if (f.b > f.a || f.b <= -f.a) {
            // translate b into (-a, a]
            long long t = f.b % (2 * f.a);
            if (t > f.a) t -= 2 * f.a;
            if (t <= -f.a) t += 2 * f.a;
            long long k = (f.b - t) / (2 * f.a);
            f.c = f.c - k * f.b + k * k * f.a;
            f.b = t;
            continue;
        }
        if (f.a == f.c && f.b < 0) f.b = -f.b;
        if (is_reduced(f)) return f;
    }
}

BQForm principal_form(long long disc) {
    if (((disc % 4) + 4) % 4 == 1) return {1, 1, (1 - disc) / 4};
    return {1, 0, -disc / 4};
}

// gcd of three values with Bezout for the first two
static long long xgcd(long long a, long long b, long long& x, long long& y) {
    long long old_r = a, r = b, old_x = 1, xx = 0, old_y = 0, yy = 1;
    while (r != 0) {
        long long q = old_r / r, t;
        t = old_r - q * r; old_r = r; r = t;
        t = old_x - q * xx; old_x = xx; xx = t;
        t = old_y - q * yy; old_y = yy; yy = t;
    }
    if (old_r < 0) { old_r = -old_r; old_x = -old_x; old_y = -old_y; }
    x = old_x; y = old_y;
    return old_r;
}

// Replace f by an equivalent form whose leading coefficient is coprime to m.
static BQForm coprime_leading(const BQForm& f, long long m) {
    if (gcd_ll(f.a, m) == 1) return f;
    // search small primitive (x, y) with gcd(f(x,y), m) = 1
    for (long long bound = 1; bound <= 64; bound++) {
        for (long long x = -bound; x <= bound; x++) {
            for (long long y = -bound; y <= bound; y++) {
                if (std::max(std::abs(x), std::abs(y)) != bound) continue;
                if (gcd_ll(x, y) != 1) continue;
                long long v = f.a * x * x + f.b * x * y + f.c * y * y;
                if (gcd_ll(v, m) != 1) continue;
                // complete (x, y) to an SL2(Z) matrix [[x, u],[y, w]]
                long long u, w;
                long long g = xgcd(x, y, w, u);
                (void)g;
                u = -u;
                // new form coefficients under [x u; y w], det = xw - uy = 1
                long long A = v;
                long long B = 2 * f.a * x * u + f.b * (x * w + u * y) + 2 * f.c * y * w;
                long long C = f.a * u * u + f.b * u * w + f.c * w * w;
                return {A, B, C};
            }
        }
    }
    throw std::logic_error("coprime_leading: search bound exceeded");
}

BQForm compose(const BQForm& f0, const BQForm& g0) {
    if (f0.disc() != g0.disc())
        throw std::invalid_argument("compose: forms of different discriminant");
    long long D = f0.disc();
    BQForm f = f0;
    BQForm g = coprime_leading(g0, f0.a);
    // concordant middle coefficient: B ≡ f.b (mod 2 f.a), B ≡ g.b (mod 2 g.a)
    long long a1m = ((f.a % g.a) + g.a) % g.a;
    long long rhs = (((g.b - f.b) / 2) % g.a + g.a) % g.a;
    Int s = Int(rhs) * Int(mod_inverse(a1m, g.a)) % g.a;
    Int B = Int(f.b) + 2 * Int(f.a) * s;
    Int A = Int(f.a) * Int(g.a);
    Int C = (B * B - D) / (4 * A);
    // exact reduction, then back to machine integers (reduced coeffs are small)
    Int aa = A, bb = B, cc = C;
    for (;;) {
        if (cc < aa) { mpz_swap(aa.get_mpz_t(), cc.get_mpz_t()); bb = -bb; }
        if (bb > aa || bb <= -aa) {
            Int t = bb % (2 * aa);
            if (t > aa) t -= 2 * aa;
            if (t <= -aa) t += 2 * aa;
            Int k = (bb - t) / (2 * aa);
            cc = cc - k * bb + k * k * aa;
            bb = t;
            continue;
        }
        if (aa == cc && bb < 0) bb = -bb;
        break;
    }
    return {aa.get_si(), bb.get_si(), cc.get_si()};
}

BQForm form_inverse(const BQForm& f) {
    return reduce_form({f.a, -f.b, f.c});
}

BQForm form_pow(const BQForm& f, long long e) {
    BQForm r = principal_form(f.disc());
    BQForm base = e < 0 ? form_inverse(f) : f;
    long long k = e < 0 ? -e : e;
    while (k > 0) {
        if (k & 1) r = compose(r, base);
        base = compose(base, base);
        k >>= 1;
    }
    return r;
}

static std::vector<BQForm> reduced_primitive_forms(long long D) {
    std::vector<BQForm> out;
    for (long long a = 1; a * a * 3 <= -D; a++) {
        for (long long b = -a + 1; b <= a; b++) {
            long long num = b * b - D;
            if (num % (4 * a)) continue;
            long long c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            if (gcd_ll(gcd_ll(a, b), c) != 1) continue;
            out.push_back({a, b, c});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

ClassGroup class_group(const QuadOrder& order) {
    long long D = order.disc();
    if (-D > 10000000)
        throw std::invalid_argument("class_group: |disc| above desk-scale bound 1e7");
    ClassGroup G{order};
    G.elements = reduced_primitive_forms(D);
    int h = (int)G.elements.size();
    G.table.assign(h, std::vector<int>(h, -1));
    BQForm one = principal_form(D);
    for (int i = 0; i < h; i++)
        if (G.elements[i] == one) G.identity = i;
    for (int i = 0; i < h; i++) {
        for (int j = 0; j <= i; j++) {
            BQForm p = compose(G.elements[i], G.elements[j]);
            int k = G.index_of(p);
            if (k < 0) throw std::logic_error("class_group: composition left the reduced set");
            G.table[i][j] = G.table[j][i] = k;
        }
    }
    return G;
}

int ClassGroup::index_of(const BQForm& f) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), f);
    if (it == elements.end() || !(*it == f)) return -1;
    return (int)(it - elements.begin());
}

int ClassGroup::inv(int i) const {
    int k = index_of(form_inverse(elements[i]));
    if (k < 0) throw std::logic_error("ClassGroup::inv: inverse not found");
    return k;
}

long long class_number(long long disc) {
    if (disc >= 0) throw std::invalid_argument("class_number: disc must be negative");
    long long count = 0;
    long long par = ((disc % 2) + 2) % 2;
    for (long long b = par; 3 * b * b <= -disc; b += 2) {
        long long num = (b * b - disc) / 4;
        for (long long a = std::max(b, 1LL); a * a <= num; a++) {
            if (num % a) continue;
            long long c = num / a;
            if (gcd_ll(gcd_ll(a, b), c) != 1) continue;
            count++;
            if (b > 0 && b < a && a < c) count++; // -b twin
        }
    }
    return count;
}

SplitType splitting_type(const ImagQuadField& field, long long p) {
    if (!is_prime(p)) throw std::invalid_argument("splitting_type: p must be prime");
    int k = kronecker(field.D, p);
    if (k == 1) return SplitType::Split;
    if (k == -1) return SplitType::Inert;
    return SplitType::Ramified;
}

bool heegner_check(const ImagQuadField& field, long long N) {
    if (N < 1) throw std::invalid_argument("heegner_check: N must be positive");
    if (gcd_ll(N, field.D) != 1)
        throw std::invalid_argument("heegner_check: N shares a factor with D_L");
    for (auto& pp : factorize(N).factors)
        if (splitting_type(field, pp.p) != SplitType::Split) return false;
    return true;
}

bool weak_heegner_check(const ImagQuadField& field, long long N) {
    if (N < 1) throw std::invalid_argument("weak_heegner_check: N must be positive");
    if (gcd_ll(N, field.D) != 1)
        throw std::invalid_argument("weak_heegner_check: N shares a factor with D_L");
    return kronecker(field.D, N) == 1;
}

Rat d_of_n(long long n, const ImagQuadField& field) {
    if (n < 1) throw std::invalid_argument("d_of_n: n must be positive");
    if (gcd_ll(n, field.D) != 1)
        throw std::invalid_argument("d_of_n: n shares a factor with D_L");
    Rat d(1);
    for (auto& pp : factorize(n).factors) {
        if (splitting_type(field, pp.p) == SplitType::Split)
            d *= Rat(pp.p - 1, pp.p + 1);
    }
    d.canonicalize();
    return d;
}

BQForm prime_form_above(const QuadOrder& order, long long p) {
    if (!is_prime(p)) throw std::invalid_argument("prime_form_above: p must be prime");
    if (order.conductor % p == 0)
        throw std::invalid_argument("prime_form_above: p divides the conductor");
    long long D = order.disc();
    int k = kronecker(D, p);
    if (k == -1) throw std::invalid_argument("prime_form_above: p is inert, no ideal of norm p");
    // least b >= 0 with b^2 ≡ D (mod 4p), b ≡ D (mod 2)
    long long b = -1;
    if (p == 2) {
        for (long long t = 0; t < 8; t++) {
            if (((t * t - D) % 8 + 8) % 8 == 0) { b = t; break; }
        }
    } else {
        long long r = sqrt_mod(((D % p) + p) % p, p);
        if (r >= 0) {
            for (long long t : {r, p - r, r + p, 2 * p - r}) {
                if (((t % 2) + 2) % 2 == (((D % 2) + 2) % 2) &&
                    ((t * t - D) % (4 * p) + 4 * p) % (4 * p) == 0) {
                    if (b < 0 || t < b) b = t;
                }
            }
        }
    }
    if (b < 0) throw std::logic_error("prime_form_above: no square root found");
    long long c = (b * b - D) / (4 * p);
    return reduce_form({p, b, c});
}

} // namespace heegner
