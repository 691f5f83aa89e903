#include "heegner/fq.hpp"
#include "heegner/arith.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace heegner {

Fq2::Fq2(long long l) : ell(l) {
    if (!is_prime(l) || l == 2) throw std::invalid_argument("Fq2: l must be an odd prime");
    for (long long c = 2; c < l; c++) {
        if (mod_pow(c, (l - 1) / 2, l) == l - 1) { u = c; break; }
    }
    if (u == 0 && l > 2) throw std::logic_error("Fq2: no non-residue found");
}

Fq2Element fq2_add(const Fq2& F, Fq2Element x, Fq2Element y) {
    return {(x.a + y.a) % F.ell, (x.b + y.b) % F.ell};
}

Fq2Element fq2_sub(const Fq2& F, Fq2Element x, Fq2Element y) {
    return {((x.a - y.a) % F.ell + F.ell) % F.ell, ((x.b - y.b) % F.ell + F.ell) % F.ell};
}

Fq2Element fq2_neg(const Fq2& F, Fq2Element x) {
    return {x.a ? F.ell - x.a : 0, x.b ? F.ell - x.b : 0};
}

Fq2Element fq2_mul(const Fq2& F, Fq2Element x, Fq2Element y) {
    // (a + bt)(c + dt) = ac + bd*u + (ad + bc) t
    long long l = F.ell;
    long long a = (x.a * y.a + x.b * y.b % l * F.u) % l;
    long long b = (x.a * y.b + x.b * y.a) % l;
    return {a, b};
}

Fq2Element fq2_inv(const Fq2& F, Fq2Element x) {
    if (x.a == 0 && x.b == 0) throw std::invalid_argument("fq2_inv: zero");
    long long l = F.ell;
    // norm = a^2 - u b^2
    long long n = ((x.a * x.a - F.u % l * (x.b * x.b % l)) % l + l * l) % l;
    long long ninv = mod_inverse(n, l);
    return {x.a * ninv % l, (l - x.b) * ninv % l};
}

Fq2Element fq2_pow(const Fq2& F, Fq2Element x, long long e) {
    Fq2Element r{1, 0};
    while (e > 0) {
        if (e & 1) r = fq2_mul(F, r, x);
        x = fq2_mul(F, x, x);
        e >>= 1;
    }
    return r;
}

Fq2Element fq2_frobenius(const Fq2& F, Fq2Element x) {
    // (a + bt)^l = a - bt
    return {x.a, x.b ? F.ell - x.b : 0};
}

std::string fq2_str(const Fq2Element& x) {
    std::ostringstream os;
    if (x.b == 0) os << x.a;
    else os << x.a << "+" << x.b << "t";
    return os.str();
}

FpPoly poly_trim(FpPoly f) {
    while (!f.c.empty() && f.c.back() == Fq2Element{0, 0}) f.c.pop_back();
    return f;
}

FpPoly poly_from_base(const std::vector<long long>& coeffs, const Fq2& F) {
    FpPoly f;
    for (long long c : coeffs) {
        long long a = c % F.ell;
        if (a < 0) a += F.ell;
        f.c.push_back({a, 0});
    }
    return poly_trim(f);
}

FpPoly poly_add(const Fq2& F, const FpPoly& f, const FpPoly& g) {
    FpPoly r;
    r.c.resize(std::max(f.c.size(), g.c.size()), {0, 0});
    for (size_t i = 0; i < r.c.size(); i++) {
        Fq2Element x = i < f.c.size() ? f.c[i] : Fq2Element{0, 0};
        Fq2Element y = i < g.c.size() ? g.c[i] : Fq2Element{0, 0};
        r.c[i] = fq2_add(F, x, y);
    }
    return poly_trim(r);
}

FpPoly poly_sub(const Fq2& F, const FpPoly& f, const FpPoly& g) {
    FpPoly r;
    r.c.resize(std::max(f.c.size(), g.c.size()), {0, 0});
    for (size_t i = 0; i < r.c.size(); i++) {
        Fq2Element x = i < f.c.size() ? f.c[i] : Fq2Element{0, 0};
        Fq2Element y = i < g.c.size() ? g.c[i] : Fq2Element{0, 0};
        r.c[i] = fq2_sub(F, x, y);
    }
    return poly_trim(r);
}

FpPoly poly_mul(const Fq2& F, const FpPoly& f, const FpPoly& g) {
    if (f.is_zero() || g.is_zero()) return {};
    FpPoly r;
    r.c.resize(f.c.size() + g.c.size() - 1, {0, 0});
    for (size_t i = 0; i < f.c.size(); i++)
        for (size_t j = 0; j < g.c.size(); j++)
            r.c[i + j] = fq2_add(F, r.c[i + j], fq2_mul(F, f.c[i], g.c[j]));
    return poly_trim(r);
}

void poly_divmod(const Fq2& F, const FpPoly& f, const FpPoly& g, FpPoly& q, FpPoly& r) {
    if (g.is_zero()) throw std::invalid_argument("poly_divmod: division by zero");
    r = f;
    q.c.clear();
    int dg = g.degree();
    Fq2Element lead_inv = fq2_inv(F, g.c.back());
    if (r.degree() >= dg) q.c.resize(r.degree() - dg + 1, {0, 0});
    while (!r.is_zero() && r.degree() >= dg) {
        int k = r.degree() - dg;
        Fq2Element t = fq2_mul(F, r.c.back(), lead_inv);
        q.c[k] = t;
        for (int i = 0; i <= dg; i++)
            r.c[k + i] = fq2_sub(F, r.c[k + i], fq2_mul(F, t, g.c[i]));
        r = poly_trim(r);
    }
    q = poly_trim(q);
}

FpPoly poly_mod(const Fq2& F, const FpPoly& f, const FpPoly& g) {
    FpPoly q, r;
    poly_divmod(F, f, g, q, r);
    return r;
}

FpPoly poly_monic(const Fq2& F, FpPoly f) {
    if (f.is_zero()) return f;
    Fq2Element inv = fq2_inv(F, f.c.back());
    for (auto& x : f.c) x = fq2_mul(F, x, inv);
    return f;
}

FpPoly poly_gcd(const Fq2& F, FpPoly f, FpPoly g) {
    while (!g.is_zero()) {
        FpPoly r = poly_mod(F, f, g);
        f = g;
        g = r;
    }
    return poly_monic(F, f);
}

Fq2Element poly_eval(const Fq2& F, const FpPoly& f, Fq2Element x) {
    Fq2Element r{0, 0};
    for (int i = f.degree(); i >= 0; i--)
        r = fq2_add(F, fq2_mul(F, r, x), f.c[i]);
    return r;
}

static FpPoly poly_powmod(const Fq2& F, FpPoly base, long long e, const FpPoly& m) {
    FpPoly r;
    r.c = {{1, 0}};
    base = poly_mod(F, base, m);
    while (e > 0) {
        if (e & 1) r = poly_mod(F, poly_mul(F, r, base), m);
        base = poly_mod(F, poly_mul(F, base, base), m);
        e >>= 1;
    }
    return r;
}

FpPoly poly_xq_mod(const Fq2& F, const FpPoly& f, int k) {
    FpPoly x;
    x.c = {{0, 0}, {1, 0}};
    FpPoly r = poly_mod(F, x, f);
    for (int i = 0; i < k; i++) r = poly_powmod(F, r, F.ell, f);
    return r;
}

// splits a monic product of distinct linear factors over the field of size q
static void split_linear(const Fq2& F, const FpPoly& g, bool base_field,
                         std::vector<Fq2Element>& out) {
    if (g.degree() <= 0) return;
    if (g.degree() == 1) {
        out.push_back(fq2_neg(F, g.c[0]));
        return;
    }
    long long q = base_field ? F.ell : F.ell * F.ell;
    FpPoly x_plus_c;
    x_plus_c.c = {{0, 0}, {1, 0}};
    for (long long trial = 0;; trial++) {
        Fq2Element c = base_field ? Fq2Element{trial % F.ell, 0}
                                  : Fq2Element{trial % F.ell, trial / F.ell % F.ell};
        x_plus_c.c[0] = c;
        FpPoly h = poly_powmod(F, x_plus_c, (q - 1) / 2, g);
        h.c.resize(std::max<size_t>(h.c.size(), 1), {0, 0});
        h.c[0] = fq2_sub(F, h.c[0], {1, 0});
        h = poly_trim(h);
        FpPoly d = poly_gcd(F, g, h);
        if (d.degree() > 0 && d.degree() < g.degree()) {
            FpPoly quo, rem;
            poly_divmod(F, g, d, quo, rem);
            split_linear(F, d, base_field, out);
            split_linear(F, quo, base_field, out);
            return;
        }
    }
}

std::vector<PolyRoot> poly_roots(const Fq2& F, const FpPoly& f, bool base_field_only) {
    if (f.is_zero()) throw std::invalid_argument("poly_roots: zero polynomial");
    FpPoly xq = poly_xq_mod(F, f, base_field_only ? 1 : 2);
    FpPoly x;
    x.c = {{0, 0}, {1, 0}};
    FpPoly g = poly_gcd(F, poly_sub(F, xq, poly_mod(F, x, f)), f);
    std::vector<Fq2Element> roots;
    split_linear(F, g, base_field_only, roots);
    std::sort(roots.begin(), roots.end());
    std::vector<PolyRoot> out;
    for (auto r : roots) {
        FpPoly lin;
        lin.c = {fq2_neg(F, r), {1, 0}};
        FpPoly rest = f;
        int mult = 0;
        for (;;) {
            FpPoly quo, rem;
            poly_divmod(F, rest, lin, quo, rem);
            if (!rem.is_zero()) break;
            mult++;
            rest = quo;
        }
        out.push_back({r, mult});
    }
    return out;
}

} // namespace heegner
