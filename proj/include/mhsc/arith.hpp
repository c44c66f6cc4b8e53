#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "integer.hpp"

namespace mhsc {

inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 s : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % s == 0) return n == s;
    }
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // deterministic witness set for the full 64-bit range
    for (u64 w : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = pow_mod_u64(w, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

inline std::vector<u64> sieve_primes(u64 limit) {
    std::vector<u64> out;
    if (limit < 2) return out;
    std::vector<bool> comp(limit + 1, false);
    for (u64 i = 2; i <= limit; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= limit; j += i) comp[j] = true;
    }
    return out;
}

// prime-power residue ring p^a; a plain-value form exists because utility
// contexts (generic power sums, tests) use composite moduli like 1000
struct modulus {
    bigint p;
    unsigned a = 1;
    bigint q;
    bool structured = false;

    static modulus prime_power(const bigint& p, unsigned a) {
        if (a < 1) throw precondition_violated("modulus exponent must be >= 1");
        if (p < 2 || p > bigint(~0ull)) throw precondition_violated("modulus base outside deterministic primality range");
        if (!is_prime_u64(static_cast<u64>(p))) throw precondition_violated("modulus base is not prime");
        modulus m;
        m.p = p;
        m.a = a;
        m.q = boost::multiprecision::pow(p, a);
        m.structured = true;
        return m;
    }

    static modulus value(const bigint& q) {
        if (q < 2) throw precondition_violated("modulus value must be >= 2");
        modulus m;
        m.p = q;
        m.a = 1;
        m.q = q;
        m.structured = false;
        return m;
    }

    bool operator==(const modulus& o) const { return q == o.q; }
};

struct residue {
    bigint v;
    modulus m;

    residue() = default;
    residue(bigint value, modulus mod) : v(std::move(value)), m(std::move(mod)) {
        v %= m.q;
        if (v < 0) v += m.q;
    }

    bool operator==(const residue& o) const { return v == o.v && m == o.m; }
};

inline void require_same(const modulus& a, const modulus& b) {
    if (!(a == b)) throw modulus_mismatch("residue operands have different moduli");
}

inline residue add(const residue& x, const residue& y) {
    require_same(x.m, y.m);
    return residue(x.v + y.v, x.m);
}

inline residue sub(const residue& x, const residue& y) {
    require_same(x.m, y.m);
    return residue(x.v - y.v, x.m);
}

inline residue mul(const residue& x, const residue& y) {
    require_same(x.m, y.m);
    return residue(x.v * y.v, x.m);
}

inline residue neg(const residue& x) { return residue(-x.v, x.m); }

inline bigint inverse_mod(const bigint& x, const bigint& q) {
    // extended Euclid; the gcd must be 1 for a unit
    bigint r0 = q, r1 = ((x % q) + q) % q, t0 = 0, t1 = 1;
    while (r1 != 0) {
        bigint k = r0 / r1;
        bigint r2 = r0 - k * r1;
        bigint t2 = t0 - k * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if (r0 != 1) throw non_invertible("non-unit residue has no inverse");
    t0 %= q;
    if (t0 < 0) t0 += q;
    return t0;
}

inline residue inverse(const residue& x) { return residue(inverse_mod(x.v, x.m.q), x.m); }

inline residue mod_pow(const residue& base, const bigint& exp) {
    if (exp < 0) throw precondition_violated("mod_pow exponent must be nonnegative");
    return residue(pow_mod_big(base.v, exp, base.m.q), base.m);
}

inline residue rational_residue(const rational& x, const modulus& m) {
    bigint n = num(x), d = den(x);
    if (n == 0) return residue(0, m);
    if (boost::multiprecision::gcd(d, m.q) != 1)
        throw non_invertible("rational denominator shares a factor with the modulus");
    return residue(n % m.q * inverse_mod(d, m.q), m);
}

// returns (V, M): 0 <= V < M = product of moduli, V matching every part
inline std::pair<bigint, bigint> crt_combine(const std::vector<residue>& parts) {
    bigint V = 0, M = 1;
    for (const residue& part : parts) {
        const bigint& q = part.m.q;
        if (boost::multiprecision::gcd(M, q) != 1)
            throw moduli_not_coprime("crt moduli are not pairwise coprime");
        // V' = V + M * ((v - V) / M mod q)
        bigint s = inverse_mod(M % q, q);
        bigint t = (part.v - V) % q * s % q;
        if (t < 0) t += q;
        V += M * t;
        M *= q;
    }
    return {V, M};
}

// exact division of a residue mod p^a by p^k, landing in mod p^{a-k}
inline residue divide_by_p_power(const residue& x, unsigned k) {
    if (!x.m.structured) throw precondition_violated("p-power division needs a prime-power modulus");
    if (k == 0) return x;
    if (x.m.a <= k) throw precondition_violated("p-power division exhausts the modulus");
    bigint pk = boost::multiprecision::pow(x.m.p, k);
    if (x.v % pk != 0) throw non_invertible("residue is not divisible by p^k");
    return residue(x.v / pk, modulus::prime_power(x.m.p, x.m.a - k));
}

inline u64 binomial_lucas(bigint n, bigint k, u64 p) {
    if (!is_prime_u64(p)) throw precondition_violated("lucas base must be prime");
    if (k < 0 || n < 0) throw precondition_violated("lucas arguments must be nonnegative");
    u64 out = 1;
    while (k > 0 || n > 0) {
        u64 nd = static_cast<u64>(n % p), kd = static_cast<u64>(k % p);
        if (kd > nd) return 0;
        // C(nd, kd) mod p by the multiplicative formula, all factors < p
        u64 c = 1;
        for (u64 j = 1; j <= kd; ++j) {
            c = mul_mod(c, (nd - kd + j) % p, p);
            c = mul_mod(c, pow_mod_u64(j % p, p - 2, p), p);
        }
        out = mul_mod(out, c, p);
        n /= p;
        k /= p;
    }
    return out;
}

// ---- internal rings: same template interface over u64 and cpp_int --------

struct ring64 {
    u64 q;
    using elem = u64;
    elem from_big(const bigint& x) const {
        bigint r = x % q;
        if (r < 0) r += q;
        return static_cast<u64>(r);
    }
    elem from_int(long long x) const {
        long long r = x % static_cast<long long>(q);
        if (r < 0) r += static_cast<long long>(q);
        return static_cast<u64>(r);
    }
    elem zero() const { return 0; }
    elem one() const { return 1 % q; }
    elem add(elem a, elem b) const {
        u64 s = a + b;
        if (s >= q || s < a) s -= q;
        return s;
    }
    elem sub(elem a, elem b) const { return a >= b ? a - b : a + (q - b); }
    elem mul(elem a, elem b) const { return mul_mod(a, b, q); }
    elem pow(elem a, u64 e) const { return pow_mod_u64(a, e, q); }
    elem inv(elem a) const { return static_cast<u64>(inverse_mod(bigint(a), bigint(q))); }
    bigint lift(elem a) const { return bigint(a); }
};

struct ringz {
    bigint q;
    using elem = bigint;
    elem from_big(const bigint& x) const {
        bigint r = x % q;
        if (r < 0) r += q;
        return r;
    }
    elem from_int(long long x) const { return from_big(bigint(x)); }
    elem zero() const { return 0; }
    elem one() const { return 1 % q; }
    elem add(const elem& a, const elem& b) const {
        bigint s = a + b;
        if (s >= q) s -= q;
        return s;
    }
    elem sub(const elem& a, const elem& b) const {
        bigint s = a - b;
        if (s < 0) s += q;
        return s;
    }
    elem mul(const elem& a, const elem& b) const { return a * b % q; }
    elem pow(const elem& a, u64 e) const { return pow_mod_big(a, bigint(e), q); }
    elem inv(const elem& a) const { return inverse_mod(a, q); }
    bigint lift(const elem& a) const { return a; }
};

inline bool fits_ring64(const bigint& q) { return q > 0 && q < (bigint(1) << 63); }

template <class F>
auto with_ring(const bigint& q, F&& f) {
    if (fits_ring64(q)) return f(ring64{static_cast<u64>(q)});
    return f(ringz{q});
}

// Montgomery trick: one inversion for a whole batch; every value must be a unit
template <class R>
std::vector<typename R::elem> batch_inverse(const R& ring, const std::vector<typename R::elem>& xs) {
    std::vector<typename R::elem> out(xs.size());
    if (xs.empty()) return out;
    std::vector<typename R::elem> prefix(xs.size());
    typename R::elem acc = ring.one();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        prefix[i] = acc;
        acc = ring.mul(acc, xs[i]);
    }
    typename R::elem inv_all = ring.inv(acc);
    for (std::size_t i = xs.size(); i-- > 0;) {
        out[i] = ring.mul(inv_all, prefix[i]);
        inv_all = ring.mul(inv_all, xs[i]);
    }
    return out;
}

} // namespace mhsc
