#include "heegner/arith.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace heegner {

static long long mulmod(long long a, long long b, long long m) {
    return (long long)((unsigned __int128)(unsigned long long)a * (unsigned long long)b % (unsigned long long)m);
}

long long mod_pow(long long a, long long e, long long m) {
    if (m <= 0) throw std::invalid_argument("mod_pow: modulus must be positive");
    long long r = 1 % m;
    a %= m;
    if (a < 0) a += m;
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long p : {2LL, 3LL, 5LL, 7LL, 11LL, 13LL, 17LL, 19LL, 23LL, 29LL, 31LL, 37LL}) {
        if (n % p == 0) return n == p;
    }
    long long d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; s++; }
    // deterministic witness set for n < 3.3e24
    for (long long a : {2LL, 3LL, 5LL, 7LL, 11LL, 13LL, 17LL, 19LL, 23LL, 29LL, 31LL, 37LL}) {
        long long x = mod_pow(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; i++) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

PrimeFactorization factorize(long long n) {
    if (n < 1) throw std::invalid_argument("factorize: n must be >= 1");
    PrimeFactorization f;
    f.n = n;
    long long m = n;
    for (long long p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
        if (m % p) continue;
        int e = 0;
        while (m % p == 0) { m /= p; e++; }
        f.factors.push_back({p, e});
    }
    if (m > 1) {
        if (!is_prime(m)) throw std::logic_error("factorize: cofactor failed primality certificate");
        f.factors.push_back({m, 1});
    }
    return f;
}

long long recompose(const PrimeFactorization& f) {
    long long n = 1;
    for (auto& pp : f.factors)
        for (int i = 0; i < pp.e; i++) n *= pp.p;
    return n;
}

int kronecker(long long D, long long m) {
    return mpz_kronecker_si(Int(D).get_mpz_t(), m);
}

int kronecker(const Int& D, const Int& m) {
    return mpz_kronecker(D.get_mpz_t(), m.get_mpz_t());
}

long long int_valuation(const Int& n, long long q) {
    if (n == 0) throw std::invalid_argument("int_valuation: zero input");
    Int m = abs(n);
    long long v = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), q)) {
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), q);
        v++;
    }
    return v;
}

long long rational_valuation(const Rat& r, long long q) {
    if (r == 0) throw std::invalid_argument("rational_valuation: zero input");
    if (!is_prime(q)) throw std::invalid_argument("rational_valuation: q must be prime");
    return int_valuation(r.get_num(), q) - int_valuation(r.get_den(), q);
}

long long mod_inverse(long long a, long long m) {
    a %= m;
    if (a < 0) a += m;
    long long g, x;
    // extended gcd
    long long old_r = a, r = m, old_s = 1, s = 0;
    while (r != 0) {
        long long qt = old_r / r;
        long long t = old_r - qt * r; old_r = r; r = t;
        t = old_s - qt * s; old_s = s; s = t;
    }
    g = old_r; x = old_s;
    if (g != 1) throw std::invalid_argument("mod_inverse: not invertible");
    x %= m;
    if (x < 0) x += m;
    return x;
}

long long sqrt_mod(long long a, long long p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    if (p == 2) return a;
    if (mod_pow(a, (p - 1) / 2, p) != 1) return -1;
    if (p % 4 == 3) return mod_pow(a, (p + 1) / 4, p);
    // Tonelli-Shanks
    long long q = p - 1;
    int s = 0;
    while ((q & 1) == 0) { q >>= 1; s++; }
    long long z = 2;
    while (mod_pow(z, (p - 1) / 2, p) != p - 1) z++;
    long long m = s;
    long long c = mod_pow(z, q, p);
    long long t = mod_pow(a, q, p);
    long long r = mod_pow(a, (q + 1) / 2, p);
    while (t != 1) {
        long long i = 0, tt = t;
        while (tt != 1) { tt = mulmod(tt, tt, p); i++; }
        long long b = c;
        for (long long k = 0; k < m - i - 1; k++) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

long long gcd_ll(long long a, long long b) {
    return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

long long sigma1(long long n) {
    long long s = 1;
    for (auto& pp : factorize(n).factors) {
        long long term = 1, pk = 1;
        for (int i = 0; i < pp.e; i++) { pk *= pp.p; term += pk; }
        s *= term;
    }
    return s;
}

long long euler_phi(long long n) {
    long long r = n;
    for (auto& pp : factorize(n).factors) r = r / pp.p * (pp.p - 1);
    return r;
}

long long psi_index(long long n) {
    long long r = n;
    for (auto& pp : factorize(n).factors) r = r / pp.p * (pp.p + 1);
    return r;
}

} // namespace heegner
