#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace mhsc {

using bigint = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline bigint num(const rational& x) { return boost::multiprecision::numerator(x); }
inline bigint den(const rational& x) { return boost::multiprecision::denominator(x); }

inline u64 mul_mod(u64 a, u64 b, u64 q) {
    return static_cast<u64>(u128(a) * b % q);
}

inline u64 pow_mod_u64(u64 base, u64 exp, u64 q) {
    u64 r = 1 % q;
    base %= q;
    while (exp) {
        if (exp & 1) r = mul_mod(r, base, q);
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    return r;
}

inline bigint pow_mod_big(bigint base, bigint exp, const bigint& q) {
    return boost::multiprecision::powm(base, exp, q);
}

// p-adic valuation of a nonzero integer; vp(0) is undefined and asserted away
inline int vp(bigint n, const bigint& p) {
    if (n == 0) throw precondition_violated("vp of zero");
    int e = 0;
    while (n % p == 0) {
        n /= p;
        ++e;
    }
    return e;
}

inline bigint isqrt_floor(const bigint& n) {
    if (n < 0) throw precondition_violated("isqrt of negative");
    return boost::multiprecision::sqrt(n);
}

// floor k-th root by binary search; exact integer arithmetic only
inline bigint iroot_floor(const bigint& n, unsigned k) {
    if (n < 0 || k == 0) throw precondition_violated("iroot domain");
    if (n <= 1 || k == 1) return n;
    bigint lo = 1, hi = 2;
    while (boost::multiprecision::pow(hi, k) <= n) hi <<= 1;
    while (lo + 1 < hi) {
        bigint mid = (lo + hi) >> 1;
        if (boost::multiprecision::pow(mid, k) <= n)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

inline bigint binomial_exact(u64 n, u64 k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    bigint r = 1;
    for (u64 i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

inline bigint factorial_exact(u64 n) {
    bigint r = 1;
    for (u64 i = 2; i <= n; ++i) r *= i;
    return r;
}

// dense polynomial helpers over exact rationals, low degree first
using poly = std::vector<rational>;

inline poly poly_mul(const poly& a, const poly& b) {
    if (a.empty() || b.empty()) return {};
    poly c(a.size() + b.size() - 1, rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

inline rational poly_eval(const poly& a, const rational& x) {
    rational r = 0;
    for (std::size_t i = a.size(); i-- > 0;) r = r * x + a[i];
    return r;
}

} // namespace mhsc
