#ifndef HEEGNER_ARITH_HPP
#define HEEGNER_ARITH_HPP

#include <cstdint>
#include <vector>
#include <gmpxx.h>

namespace heegner {

using Int = mpz_class;
using Rat = mpq_class;

// One prime-power factor p^e.
struct PrimePower {
    long long p = 0;
    int e = 0;
};

// Sorted factorization n = prod p_i^{e_i}; empty for n = 1.
struct PrimeFactorization {
    long long n = 1;
    std::vector<PrimePower> factors;
};

bool is_prime(long long n);

/// Trial division up to sqrt(n), Miller-Rabin certificate on the cofactor.
PrimeFactorization factorize(long long n);

long long recompose(const PrimeFactorization& f);

// Kronecker symbol (D/m), full extension (m may be negative, even or zero).
int kronecker(long long D, long long m);
int kronecker(const Int& D, const Int& m);

// v_q(r) for r != 0.
long long rational_valuation(const Rat& r, long long q);
long long int_valuation(const Int& n, long long q);

long long mod_pow(long long a, long long e, long long m);
long long mod_inverse(long long a, long long m);

// Square root of a mod odd prime p (Tonelli-Shanks); -1 if a is a non-residue.
long long sqrt_mod(long long a, long long p);

long long gcd_ll(long long a, long long b);

// sigma_1(n) = sum of divisors.
long long sigma1(long long n);

// Euler phi.
long long euler_phi(long long n);

// psi(n) = n * prod_{p|n} (1 + 1/p); the Hecke degree at level n.
long long psi_index(long long n);

} // namespace heegner

#endif
