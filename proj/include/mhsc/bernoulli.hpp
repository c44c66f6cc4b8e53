#pragma once

#include <mutex>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "integer.hpp"

namespace mhsc {

inline constexpr unsigned bernoulli_default_bound = 64;
inline constexpr unsigned bernoulli_hard_bound = 360;

namespace detail {

// memo is append-only under a mutex; concurrent fills recompute the same values
inline const std::vector<rational>& bernoulli_table(unsigned k) {
    static std::mutex mu;
    static std::vector<rational> table{rational(1)};
    std::lock_guard<std::mutex> lock(mu);
    while (table.size() <= k) {
        unsigned m = static_cast<unsigned>(table.size());
        rational acc(0);
        for (unsigned j = 0; j < m; ++j) acc += rational(binomial_exact(m + 1, j)) * table[j];
        table.push_back(-acc / rational(m + 1));
    }
    return table;
}

} // namespace detail

// exact B_k with B_1 = -1/2
inline rational bernoulli_exact(unsigned k, unsigned bound = bernoulli_default_bound) {
    if (k > bound) throw bound_exceeded("bernoulli index above configured bound");
    return detail::bernoulli_table(k)[k];
}

inline residue power_sum_direct(unsigned m, const bigint& n, const modulus& mod) {
    if (n < 1) throw precondition_violated("power sum needs n >= 1");
    return with_ring(mod.q, [&](auto ring) {
        auto acc = ring.zero();
        for (bigint j = 1; j < n; ++j) acc = ring.add(acc, ring.pow(ring.from_big(j), m));
        return residue(ring.lift(acc), mod);
    });
}

// exact Faulhaber value of sum_{j=1}^{n-1} j^m; the closed form counts j=0 at m=0
inline rational power_sum_formula(unsigned m, const bigint& n, unsigned bound = bernoulli_default_bound) {
    if (m > bound) throw bound_exceeded("power sum exponent above configured bound");
    rational acc(0);
    std::vector<bigint> powers(m + 2);
    powers[0] = 1;
    for (unsigned i = 1; i <= m + 1; ++i) powers[i] = powers[i - 1] * n;
    for (unsigned k = 0; k <= m; ++k)
        acc += rational(binomial_exact(m + 1, k)) * bernoulli_exact(k, bound) * rational(powers[m + 1 - k]);
    acc /= rational(m + 1);
    if (m == 0) acc -= 1;
    return acc;
}

// B_{p-w} mod p via sum_{j<p} j^{p-w} = p B_{p-w} mod p^2
inline residue bernoulli_top_mod_p(u64 p, unsigned w) {
    if (p < 5 || !is_prime_u64(p)) throw precondition_violated("base must be a prime >= 5");
    if (w % 2 == 0 || w < 3 || w >= p - 1) throw bad_weight("weight must be odd with 3 <= w <= p-2");
    u64 q = p * p;
    ring64 ring{q};
    u64 acc = 0;
    for (u64 j = 1; j < p; ++j) acc = ring.add(acc, ring.pow(j, p - w));
    return residue(bigint(acc / p), modulus::prime_power(p, 1));
}

namespace detail {

// sum_{j<p} j^k = p B_k mod p^{a+1}, valid for even k >= 4 once B_{k-2} is p-integral
inline bigint bernoulli_residue_power_sum(unsigned k, u64 p, unsigned a) {
    if (a > 2 || k < 4 || k % 2 != 0 || p < 7) throw precondition_violated("power-sum route out of range");
    if (k % (p - 1) == 0 || (k - 2) % (p - 1) == 0) throw precondition_violated("power-sum route needs p-integral tail");
    bigint q1 = boost::multiprecision::pow(bigint(p), a + 1);
    bigint P = with_ring(q1, [&](auto ring) {
        auto acc = ring.zero();
        for (u64 j = 1; j < p; ++j) acc = ring.add(acc, ring.pow(ring.from_int(static_cast<long long>(j)), k));
        return ring.lift(acc);
    });
    if (P % p != 0) throw valuation_error("power sum lost its p factor");
    return P / p;
}

} // namespace detail

// B_k mod p^a for p-integral B_k; allows residue 0 (e.g. irregular pairs)
inline residue bernoulli_residue(unsigned k, u64 p, unsigned a) {
    modulus m = modulus::prime_power(p, a);
    if (k == 0) return residue(1, m);
    if (k == 1) return rational_residue(rational(-1, 2), m);
    if (k % 2 == 1) return residue(0, m);
    if (k % (p - 1) == 0) throw valuation_error("bernoulli index divisible by p-1 is not p-integral");
    if (k <= bernoulli_hard_bound) return rational_residue(bernoulli_exact(k, bernoulli_hard_bound), m);
    return residue(detail::bernoulli_residue_power_sum(k, p, a), m);
}

struct padic_value {
    enum class kind_t { zero, value };
    kind_t kind;
    int e = 0;  // valuation of B_k; -1 exactly when (p-1) | k
    residue u;  // unit part mod p^a; guaranteed only mod p^{a-e} on the power-sum route

    bool is_zero() const { return kind == kind_t::zero; }
};

inline padic_value bernoulli_mod_pk(unsigned k, u64 p, unsigned a) {
    if (a < 1 || a > 3) throw precondition_violated("exponent a must be in {1,2,3}");
    if (bigint(k) > 3 * bigint(p)) throw precondition_violated("index above 3p bound");
    modulus m = modulus::prime_power(p, a);
    if (k % 2 == 1 && k >= 3) return padic_value{padic_value::kind_t::zero, 0, residue(0, m)};
    if (k == 0) return padic_value{padic_value::kind_t::value, 0, residue(1, m)};
    if (k == 1) return padic_value{padic_value::kind_t::value, 0, rational_residue(rational(-1, 2), m)};
    if (k % (p - 1) == 0) {
        // von Staudt-Clausen: v_p(B_k) = -1 and p B_k = -1 mod p
        if (k > bernoulli_hard_bound) throw bound_exceeded("pole unit needs the exact route");
        rational b = bernoulli_exact(k, bernoulli_hard_bound);
        bigint d = den(b);
        if (d % p != 0 || (d / p) % p == 0) throw valuation_error("expected simple pole at p");
        return padic_value{padic_value::kind_t::value, -1, rational_residue(rational(num(b), d / p), m)};
    }
    if (k <= bernoulli_hard_bound) {
        rational b = bernoulli_exact(k, bernoulli_hard_bound);
        int e = vp(num(b), p);
        return padic_value{padic_value::kind_t::value, e,
                           rational_residue(rational(num(b) / boost::multiprecision::pow(bigint(p), e), den(b)), m)};
    }
    bigint r = detail::bernoulli_residue_power_sum(k, p, a);
    if (r == 0) throw valuation_error("valuation at least a, unit indeterminate");
    int e = vp(r, p);
    return padic_value{padic_value::kind_t::value, e, residue(r / boost::multiprecision::pow(bigint(p), e), m)};
}

struct kummer_result {
    bool equal;
    residue lhs, rhs;
};

// B_{m1}/m1 = B_{m2}/m2 mod p for m1 = m2 mod (p-1), neither divisible by p-1
inline kummer_result kummer_check(u64 p, unsigned m1, unsigned m2, unsigned bound = bernoulli_default_bound) {
    if (!is_prime_u64(p) || p < 5) throw precondition_violated("kummer base must be a prime >= 5");
    if (m1 % 2 != 0 || m2 % 2 != 0 || m1 == 0 || m2 == 0) throw precondition_violated("kummer indices must be positive even");
    if (m1 % (p - 1) != m2 % (p - 1)) throw precondition_violated("kummer indices differ mod p-1");
    if (m1 % (p - 1) == 0 || m2 % (p - 1) == 0) throw precondition_violated("kummer indices must avoid multiples of p-1");
    modulus m = modulus::prime_power(p, 1);
    residue lhs = rational_residue(bernoulli_exact(m1, bound) / rational(m1), m);
    residue rhs = rational_residue(bernoulli_exact(m2, bound) / rational(m2), m);
    return kummer_result{lhs.v == rhs.v, lhs, rhs};
}

} // namespace mhsc
