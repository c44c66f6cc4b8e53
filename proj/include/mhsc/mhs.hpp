#pragma once

#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "integer.hpp"

namespace mhsc {

// exponent list in ascending variable order: parts[i] attaches to u_{i+1} in
// sum over 0 < u_1 < ... < u_d < N; texts that display the reversed order are
// translated at the call site
using index = std::vector<unsigned>;

inline unsigned weight(const index& s) { return std::accumulate(s.begin(), s.end(), 0u); }

// per-position coprimality plus congruences u_i = u_j (mod p); j = 0 means
// u_i = 0 (mod p); conflicts are rejected here, not at evaluation
struct constraint_set {
    std::vector<char> coprime;
    std::vector<std::pair<unsigned, unsigned>> congruences;
    std::vector<unsigned> root;       // congruence-class root over {0,...,d}, 0 = divisible class
    std::vector<char> class_coprime;  // indexed by root

    constraint_set() : root{0}, class_coprime{0} {}
    constraint_set(std::vector<char> cop, std::vector<std::pair<unsigned, unsigned>> congr)
        : coprime(std::move(cop)), congruences(std::move(congr)) {
        unsigned d = static_cast<unsigned>(coprime.size());
        root.resize(d + 1);
        for (unsigned i = 0; i <= d; ++i) root[i] = i;
        auto find = [&](unsigned i) {
            while (root[i] != i) i = root[i] = root[root[i]];
            return i;
        };
        for (auto [i, j] : congruences) {
            if (i < 1 || i > d || j > d) throw precondition_violated("congruence position outside depth");
            root[find(i)] = find(j);
        }
        for (unsigned i = 0; i <= d; ++i) root[i] = find(i);
        class_coprime.assign(d + 1, 0);
        for (unsigned i = 1; i <= d; ++i)
            if (coprime[i - 1]) class_coprime[root[i]] = 1;
        if (class_coprime[root[0]]) throw inconsistent_data("coprime position forced divisible by p");
    }

    static constraint_set none(unsigned d) { return constraint_set(std::vector<char>(d, 0), {}); }
    static constraint_set all_coprime(unsigned d) { return constraint_set(std::vector<char>(d, 1), {}); }

    unsigned depth() const { return static_cast<unsigned>(coprime.size()); }
};

// sum over 0 < u_1 < ... < u_d < N under cs of prod u_i^{-s_i}, exact in the
// residue ring; p-divisible positions are tracked through a scaled
// accumulator mod q*p^{f_max} and divided out exactly at the end
inline residue constrained_mhs(u64 N, const index& idx, const constraint_set& cs, u64 p, const modulus& mod) {
    unsigned d = static_cast<unsigned>(idx.size());
    if (cs.depth() != d) throw precondition_violated("constraint depth does not match index depth");
    for (unsigned s : idx)
        if (s < 1) throw precondition_violated("index parts must be positive");
    if (!mod.structured || mod.p != p) throw precondition_violated("modulus must be a power of p");
    if (N < 1) throw precondition_violated("range bound must be positive");
    if (d == 0) return residue(1, mod);
    if (N <= d) return residue(0, mod);

    std::vector<char> zero_pos(d), cop_pos(d);
    std::vector<int> mate(d, -1); // earliest same-class position, for the mod-p equality check
    for (unsigned i = 0; i < d; ++i) {
        unsigned r = cs.root[i + 1];
        zero_pos[i] = (r == cs.root[0]);
        cop_pos[i] = cs.class_coprime[r];
        if (!zero_pos[i])
            for (unsigned j = 0; j < i; ++j)
                if (cs.root[j + 1] == r) {
                    mate[i] = static_cast<int>(j);
                    break;
                }
    }

    unsigned v_max = 0;
    for (u64 pw = 1; pw <= (N - 1) / p; pw *= p) ++v_max;
    unsigned f_max = 0;
    for (unsigned i = 0; i < d; ++i)
        if (!cop_pos[i]) f_max += v_max * idx[i];

    bigint Q = mod.q * boost::multiprecision::pow(bigint(p), f_max);
    return with_ring(Q, [&](auto ring) -> residue {
        using E = typename std::decay_t<decltype(ring)>::elem;
        std::vector<unsigned> e_of(N, 0);
        std::vector<E> units(N, ring.one());
        for (u64 u = 1; u < N; ++u) {
            u64 v = u;
            unsigned e = 0;
            while (v % p == 0) {
                v /= p;
                ++e;
            }
            e_of[u] = e;
            units[u] = ring.from_int(static_cast<long long>(v));
        }
        std::vector<E> inv_units = batch_inverse(ring, units);
        std::vector<std::vector<E>> pw(d, std::vector<E>(N));
        std::vector<std::vector<unsigned>> es(d, std::vector<unsigned>(N));
        for (unsigned i = 0; i < d; ++i)
            for (u64 u = 1; u < N; ++u) {
                pw[i][u] = ring.pow(inv_units[u], idx[i]);
                es[i][u] = e_of[u] * idx[i];
            }
        std::vector<E> ppow(f_max + 1);
        ppow[0] = ring.one();
        for (unsigned f = 1; f <= f_max; ++f) ppow[f] = ring.mul(ppow[f - 1], ring.from_int(static_cast<long long>(p)));

        E acc = ring.zero();
        std::vector<unsigned> chosen_mod(d, 0);
        auto rec = [&](auto&& self, unsigned i, u64 lo, E prod, unsigned etot) -> void {
            u64 hi = N - (d - i); // leaves room for the remaining positions
            for (u64 u = lo; u <= hi; ++u) {
                unsigned um = static_cast<unsigned>(u % p);
                if (zero_pos[i]) {
                    if (um != 0) continue;
                } else if (cop_pos[i] && um == 0) {
                    continue;
                }
                if (mate[i] >= 0 && um != chosen_mod[mate[i]]) continue;
                chosen_mod[i] = um;
                E next = ring.mul(prod, pw[i][u]);
                unsigned etot2 = etot + es[i][u];
                if (i + 1 == d)
                    acc = ring.add(acc, ring.mul(next, ppow[f_max - etot2]));
                else
                    self(self, i + 1, u + 1, next, etot2);
            }
        };
        rec(rec, 0, 1, ring.one(), 0u);

        bigint X = ring.lift(acc);
        if (f_max > 0) {
            bigint pf = boost::multiprecision::pow(bigint(p), f_max);
            if (X % pf != 0) throw non_invertible("sum is not p-integral");
            X /= pf;
        }
        return residue(X, mod);
    });
}

// sum over 0 < i < p^r with i = x (mod p) of i^{-k}
inline residue s_k_x(u64 x, unsigned k, u64 p, unsigned r, const modulus& mod) {
    if (!mod.structured || mod.p != p) throw precondition_violated("modulus must be a power of p");
    if (x < 1 || x >= p) throw precondition_violated("class representative must lie in [1, p-1]");
    if (k < 1 || r < 1) throw precondition_violated("exponent and radius must be positive");
    bigint pr = boost::multiprecision::pow(bigint(p), r);
    return with_ring(mod.q, [&](auto ring) -> residue {
        using E = typename std::decay_t<decltype(ring)>::elem;
        std::vector<E> vals;
        for (bigint i = x; i < pr; i += p) vals.push_back(ring.from_big(i));
        std::vector<E> invs = batch_inverse(ring, vals);
        E acc = ring.zero();
        for (const E& v : invs) acc = ring.add(acc, ring.pow(v, k));
        return residue(ring.lift(acc), mod);
    });
}

using formal_sum = std::map<index, long long>;

inline void formal_add(formal_sum& fs, const index& k, long long c) {
    auto it = fs.find(k);
    if (it == fs.end()) {
        if (c != 0) fs.emplace(k, c);
        return;
    }
    it->second += c;
    if (it->second == 0) fs.erase(it);
}

// quasi-shuffle product; recursion peels the largest summation variable
inline formal_sum stuffle_product(const index& s, const index& t) {
    if (s.empty()) return {{t, 1}};
    if (t.empty()) return {{s, 1}};
    index s_tail(s.begin(), s.end() - 1), t_tail(t.begin(), t.end() - 1);
    formal_sum out;
    auto append = [&](const formal_sum& base, unsigned last) {
        for (const auto& [k, c] : base) {
            index k2 = k;
            k2.push_back(last);
            formal_add(out, k2, c);
        }
    };
    append(stuffle_product(s_tail, t), s.back());
    append(stuffle_product(s, t_tail), t.back());
    append(stuffle_product(s_tail, t_tail), s.back() + t.back());
    return out;
}

inline bool stuffle_check(const index& s, const index& t, u64 N, u64 p, const modulus& mod) {
    auto H = [&](const index& k) { return constrained_mhs(N, k, constraint_set::all_coprime(static_cast<unsigned>(k.size())), p, mod); };
    residue lhs = mul(H(s), H(t));
    residue rhs(0, mod);
    for (const auto& [k, c] : stuffle_product(s, t)) rhs = add(rhs, mul(H(k), residue(bigint(c), mod)));
    return lhs == rhs;
}

} // namespace mhsc
