#pragma once

#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "integer.hpp"
#include "mhs.hpp"

namespace mhsc {

inline constexpr u64 composition_budget_default = 10'000'000;

namespace detail {

template <class R>
std::vector<typename R::elem> coprime_inverse_table(const R& ring, u64 total, u64 p) {
    using E = typename R::elem;
    std::vector<E> inv(total + 1, ring.zero());
    std::vector<u64> keys;
    std::vector<E> vals;
    for (u64 i = 1; i <= total; ++i)
        if (i % p != 0) {
            keys.push_back(i);
            vals.push_back(ring.from_int(static_cast<long long>(i)));
        }
    std::vector<E> invs = batch_inverse(ring, vals);
    for (std::size_t j = 0; j < keys.size(); ++j) inv[keys[j]] = invs[j];
    return inv;
}

// sum over ordered compositions i_1+...+i_n = total, all parts coprime to p,
// of prod i_j^{-1}; convolution over exact partial sums
inline residue comp_sum_fast(unsigned n, u64 total, u64 p, const modulus& mod) {
    if (n < 1) throw precondition_violated("composition length must be positive");
    if (total < n) return residue(0, mod);
    return with_ring(mod.q, [&](auto ring) -> residue {
        using E = typename std::decay_t<decltype(ring)>::elem;
        std::vector<E> inv = coprime_inverse_table(ring, total, p);
        if (n == 1) return residue(ring.lift(inv[total]), mod);
        if (n == 2) {
            // i coprime forces total-i coprime when p | total; keep both checks for general totals
            E acc = ring.zero();
            for (u64 i = 1; i < total; ++i)
                if (i % p != 0 && (total - i) % p != 0) acc = ring.add(acc, ring.mul(inv[i], inv[total - i]));
            return residue(ring.lift(acc), mod);
        }
        std::vector<E> f = inv; // f_1(s) = s^{-1} on coprime s
        f[0] = ring.zero();
        for (unsigned j = 2; j + 1 <= n; ++j) {
            std::vector<E> g(total + 1, ring.zero());
            for (u64 t = j; t + (n - j) <= total; ++t) {
                E acc = ring.zero();
                for (u64 i = 1; i + (j - 1) <= t; ++i)
                    if (i % p != 0) acc = ring.add(acc, ring.mul(f[t - i], inv[i]));
                g[t] = acc;
            }
            f.swap(g);
        }
        E acc = ring.zero();
        for (u64 i = 1; i + (n - 1) <= total; ++i)
            if (i % p != 0) acc = ring.add(acc, ring.mul(f[total - i], inv[i]));
        return residue(ring.lift(acc), mod);
    });
}

inline residue comp_sum_naive(unsigned n, u64 total, u64 p, const modulus& mod, u64 budget) {
    if (n < 1) throw precondition_violated("composition length must be positive");
    if (total < n) return residue(0, mod);
    if (binomial_exact(total - 1, n - 1) > budget) throw budget_exceeded("composition enumeration over budget");
    return with_ring(mod.q, [&](auto ring) -> residue {
        using E = typename std::decay_t<decltype(ring)>::elem;
        std::vector<E> inv = coprime_inverse_table(ring, total, p);
        E acc = ring.zero();
        auto rec = [&](auto&& self, unsigned level, u64 rem, E prod) -> void {
            if (level == n) {
                if (rem >= 1 && rem % p != 0) acc = ring.add(acc, ring.mul(prod, inv[rem]));
                return;
            }
            for (u64 i = 1; i + (n - level) <= rem; ++i)
                if (i % p != 0) self(self, level + 1, rem - i, ring.mul(prod, inv[i]));
        };
        rec(rec, 1, total, ring.one());
        return residue(ring.lift(acc), mod);
    });
}

inline void require_comp_domain(unsigned n, u64 p, const modulus& mod) {
    if (n < 2) throw precondition_violated("composition length must be at least 2");
    if (!mod.structured || mod.p != p) throw precondition_violated("modulus must be a power of p");
    if (p <= n) throw precondition_violated("requires p > n");
}

inline u64 prime_power_u64(u64 p, unsigned r) {
    bigint t = boost::multiprecision::pow(bigint(p), r);
    if (!fits_ring64(t)) throw precondition_violated("p^r exceeds the supported range");
    return static_cast<u64>(t);
}

} // namespace detail

inline residue t_n_naive(unsigned n, u64 p, unsigned r, const modulus& mod, u64 budget = composition_budget_default) {
    detail::require_comp_domain(n, p, mod);
    if (r < 1) throw precondition_violated("r must be positive");
    return detail::comp_sum_naive(n, detail::prime_power_u64(p, r), p, mod, budget);
}

inline residue t_n_fast(unsigned n, u64 p, unsigned r, const modulus& mod) {
    detail::require_comp_domain(n, p, mod);
    if (r < 1) throw precondition_violated("r must be positive");
    return detail::comp_sum_fast(n, detail::prime_power_u64(p, r), p, mod);
}

inline residue t_n(unsigned n, u64 p, unsigned r, const modulus& mod) { return t_n_fast(n, p, r, mod); }

inline residue r_nm_naive(unsigned n, unsigned m, u64 p, const modulus& mod, u64 budget = composition_budget_default) {
    detail::require_comp_domain(n, p, mod);
    if (m < 1 || m >= n) throw precondition_violated("requires n > m >= 1");
    return detail::comp_sum_naive(n, static_cast<u64>(m) * p, p, mod, budget);
}

inline residue r_nm_fast(unsigned n, unsigned m, u64 p, const modulus& mod) {
    detail::require_comp_domain(n, p, mod);
    if (m < 1 || m >= n) throw precondition_violated("requires n > m >= 1");
    return detail::comp_sum_fast(n, static_cast<u64>(m) * p, p, mod);
}

struct sigma_decomposition {
    residue sigma, s1, s2, s3;
};

// sigma(p^r): triple sum with u_1, u_3, u_2-u_1, u_3-u_2 all coprime to p;
// u_2 itself may be divisible by p, so its inverse is tracked as a scaled
// unit and divided out exactly at the end
inline sigma_decomposition sigma_parts(u64 p, unsigned r, const modulus& mod) {
    if (p < 5) throw precondition_violated("requires p >= 5");
    if (r < 2) throw precondition_violated("requires r >= 2");
    if (!mod.structured || mod.p != p) throw precondition_violated("modulus must be a power of p");
    u64 N = detail::prime_power_u64(p, r);
    unsigned f_max = r - 1;
    bigint Q = mod.q * boost::multiprecision::pow(bigint(p), f_max);
    residue sigma = with_ring(Q, [&](auto ring) -> residue {
        using E = typename std::decay_t<decltype(ring)>::elem;
        // running coprime prefix sums of inverses, split by residue class to
        // drop the u_1 = u_2 and u_3 = u_2 couplings
        std::vector<E> inv = detail::coprime_inverse_table(ring, N - 1, p);
        std::vector<E> tot(p, ring.zero()), cur(p, ring.zero());
        E cop_tot = ring.zero(), cop_cur = ring.zero();
        for (u64 u = 1; u < N; ++u)
            if (u % p != 0) {
                tot[u % p] = ring.add(tot[u % p], inv[u]);
                cop_tot = ring.add(cop_tot, inv[u]);
            }
        std::vector<E> ppow(f_max + 1);
        ppow[0] = ring.one();
        for (unsigned f = 1; f <= f_max; ++f) ppow[f] = ring.mul(ppow[f - 1], ring.from_int(static_cast<long long>(p)));
        E acc = ring.zero();
        for (u64 u2 = 1; u2 < N; ++u2) {
            u64 x = u2 % p;
            E self_c = (x != 0) ? inv[u2] : ring.zero();
            if (u2 >= 2 && u2 + 1 < N) {
                E w;
                if (x != 0) {
                    w = ring.mul(inv[u2], ppow[f_max]);
                } else {
                    u64 v = u2;
                    unsigned e = 0;
                    while (v % p == 0) {
                        v /= p;
                        ++e;
                    }
                    w = ring.mul(ring.inv(ring.from_int(static_cast<long long>(v))), ppow[f_max - e]);
                }
                E A = ring.sub(cop_cur, cur[x]);
                E cop_suf = ring.sub(ring.sub(cop_tot, cop_cur), self_c);
                E cls_suf = ring.sub(ring.sub(tot[x], cur[x]), self_c);
                acc = ring.add(acc, ring.mul(w, ring.mul(A, ring.sub(cop_suf, cls_suf))));
            }
            if (x != 0) {
                cur[x] = ring.add(cur[x], self_c);
                cop_cur = ring.add(cop_cur, self_c);
            }
        }
        bigint X = ring.lift(acc);
        bigint pf = boost::multiprecision::pow(bigint(p), f_max);
        if (X % pf != 0) throw non_invertible("sigma is not p-integral");
        return residue(X / pf, mod);
    });

    auto part = [&](std::vector<char> cop, std::vector<std::pair<unsigned, unsigned>> congr) {
        return constrained_mhs(N, {1, 1, 1}, constraint_set(std::move(cop), std::move(congr)), p, mod);
    };
    residue s1 = part({1, 0, 1}, {});
    residue s2 = add(part({1, 0, 1}, {{2, 1}}), part({1, 0, 1}, {{3, 2}}));
    residue s3 = part({1, 0, 0}, {{2, 1}, {3, 2}});
    if (sigma.v != sub(add(s1, s3), s2).v) throw inconsistent_data("sigma decomposition identity failed");
    return sigma_decomposition{sigma, s1, s2, s3};
}

} // namespace mhsc
