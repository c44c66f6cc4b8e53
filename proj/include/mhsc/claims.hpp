#pragma once

#include <mhsc/bernoulli.hpp>
#include <mhsc/mhs.hpp>
#include <mhsc/sums.hpp>

#include <algorithm>
#include <atomic>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace mhsc {

inline constexpr const char* engine_version = "1.0.0";

// linear form a + b*p + c*m; indexes Bernoulli factors, factorials, divisors
struct linear_form {
    long long a = 0, b = 0, c = 0;

    long long eval(u64 p, unsigned m) const {
        return a + b * static_cast<long long>(p) + c * static_cast<long long>(m);
    }
};

// one product term: coeff * m_poly(m) * fact! * p^(c0+c1*r) * prod B_idx / prod divs
struct bern_term {
    rational coeff = rational(1);
    poly m_poly{rational(1)};
    bool has_fact = false;
    linear_form fact_arg{};
    int p_c0 = 0, p_c1 = 0;
    std::vector<linear_form> b_idx;
    std::vector<linear_form> divs;

    bern_term times_poly(poly q) const {
        bern_term t = *this;
        t.m_poly = poly_mul(t.m_poly, q);
        return t;
    }
    bern_term times_fact(long long a, long long b, long long c) const {
        bern_term t = *this;
        t.has_fact = true;
        t.fact_arg = {a, b, c};
        return t;
    }
    bern_term times_p(int c0, int c1) const {
        bern_term t = *this;
        t.p_c0 = c0;
        t.p_c1 = c1;
        return t;
    }
    bern_term times_bern(long long a, long long b, long long c = 0) const {
        bern_term t = *this;
        t.b_idx.push_back({a, b, c});
        return t;
    }
    bern_term divided_by(long long a, long long b, long long c = 0) const {
        bern_term t = *this;
        t.divs.push_back({a, b, c});
        return t;
    }
};

inline bern_term term(rational c) {
    bern_term t;
    t.coeff = std::move(c);
    return t;
}

struct bernoulli_expression {
    std::vector<bern_term> terms;

    residue eval(u64 p, unsigned r, unsigned m, const modulus& mod) const {
        residue acc(0, mod);
        for (const bern_term& t : terms) {
            rational c = t.coeff * poly_eval(t.m_poly, rational(m));
            if (t.has_fact) {
                long long f = t.fact_arg.eval(p, m);
                if (f < 0) throw precondition_violated("negative factorial argument");
                c *= factorial_exact(static_cast<unsigned>(f));
            }
            residue v = rational_residue(c, mod);
            long long ex = t.p_c0 + static_cast<long long>(t.p_c1) * r;
            if (ex < 0) throw precondition_violated("negative power of p");
            v = mul(v, mod_pow(residue(p, mod), ex));
            for (const linear_form& f : t.b_idx) {
                long long k = f.eval(p, m);
                if (k < 0) throw precondition_violated("negative bernoulli index");
                v = mul(v, bernoulli_residue(static_cast<unsigned>(k), p, mod.a));
            }
            for (const linear_form& f : t.divs) v = mul(v, inverse(residue(f.eval(p, m), mod)));
            acc = add(acc, v);
        }
        return acc;
    }
};

// binomial(m + shift, k) expanded as a polynomial in m
inline poly binomial_poly(long long shift, unsigned k) {
    poly q{rational(1)};
    for (unsigned i = 0; i < k; ++i) q = poly_mul(q, poly{rational(shift - static_cast<long long>(i)), rational(1)});
    rational scale(1, factorial_exact(k));
    for (rational& c : q) c *= scale;
    return q;
}

struct conjunct {
    std::string label;
    residue lhs, rhs;

    bool pass() const { return lhs.v == rhs.v; }
};

struct claim_domain {
    u64 p_min = 3;
    unsigned r_min = 1, r_max_hint = 1;
    bool uses_r = false;
    unsigned m_min = 1, m_max_hint = 1;
    bool uses_m = false;
};

struct claim {
    std::string id;
    std::string description;
    std::string lhs_recipe;
    bernoulli_expression rhs;  // headline right side (first conjunct)
    int mod_c0 = 1, mod_c1 = 0;  // residue modulus exponent e = c0 + c1*r
    claim_domain domain;
    std::function<std::optional<std::string>(u64, unsigned, unsigned)> extra_admit;
    std::function<std::vector<conjunct>(u64, unsigned, unsigned)> eval;

    // nullopt when (p, r, m) is inside the domain, else the skip reason
    std::optional<std::string> admit(u64 p, unsigned r, unsigned m) const {
        if (!is_prime_u64(p)) return "not prime";
        if (p < domain.p_min) return "p below domain";
        if (domain.uses_r && r < domain.r_min) return "r below domain";
        if (domain.uses_m && m < domain.m_min) return "m below domain";
        if (extra_admit) return extra_admit(p, r, m);
        return std::nullopt;
    }
};

enum class verdict { pass, fail, skipped };

struct verification_record {
    std::string claim_id;
    u64 p = 0;
    unsigned r = 0, m = 0;  // 0 when the claim ignores that parameter
    bool uses_r = false, uses_m = false;
    verdict status = verdict::skipped;
    std::string detail;  // skip reason or failing conjunct label
    std::optional<residue> lhs, rhs;  // first failing conjunct, else the first one
};

namespace detail {

inline modulus claim_modulus(const claim& c, u64 p, unsigned r) {
    long long e = c.mod_c0 + static_cast<long long>(c.mod_c1) * r;
    if (e < 1) throw precondition_violated("modulus exponent must be positive");
    return modulus::prime_power(p, static_cast<unsigned>(e));
}

// claim whose single conjunct compares an evaluator against the headline expression
template <class F>
claim simple_claim(std::string id, std::string desc, std::string recipe, bernoulli_expression rhs,
                   int mod_c0, int mod_c1, claim_domain dom,
                   std::function<std::optional<std::string>(u64, unsigned, unsigned)> extra, F&& lhs_fn) {
    claim c;
    c.id = std::move(id);
    c.description = std::move(desc);
    c.lhs_recipe = std::move(recipe);
    c.rhs = rhs;
    c.mod_c0 = mod_c0;
    c.mod_c1 = mod_c1;
    c.domain = dom;
    c.extra_admit = std::move(extra);
    c.eval = [rhs, mod_c0, mod_c1, fn = std::forward<F>(lhs_fn)](u64 p, unsigned r, unsigned m) {
        long long e = mod_c0 + static_cast<long long>(mod_c1) * r;
        modulus mod = modulus::prime_power(p, static_cast<unsigned>(e));
        return std::vector<conjunct>{{"", fn(p, r, m, mod), rhs.eval(p, r, m, mod)}};
    };
    return c;
}

inline u64 pow_u64_checked(u64 p, unsigned r) {
    bigint v = boost::multiprecision::pow(bigint(p), r);
    if (!fits_ring64(v)) throw precondition_violated("prime power exceeds the 64-bit range");
    return static_cast<u64>(v);
}

inline residue mhs_at(u64 p, unsigned r, const index& parts, const constraint_set& cs, const modulus& mod) {
    return constrained_mhs(pow_u64_checked(p, r), parts, cs, p, mod);
}

inline constraint_set cs_of(unsigned d, std::initializer_list<unsigned> cop,
                            std::initializer_list<std::pair<unsigned, unsigned>> congr) {
    std::vector<char> flags(d, 0);
    for (unsigned i : cop) flags[i - 1] = 1;
    return constraint_set(flags, std::vector<std::pair<unsigned, unsigned>>(congr));
}

inline std::vector<claim> build_registry() {
    std::vector<claim> reg;
    const rational one(1);

    // weight-3 composition sum at total p, depth 3, mod p
    reg.push_back(simple_claim(
        "zhao", "triple composition sum at total p is -2 B_{p-3} mod p",
        "sum of 1/(i j k) over i+j+k = p with all parts coprime to p",
        {{term(rational(-2)).times_bern(-3, 1)}}, 1, 0, {.p_min = 3}, nullptr,
        [](u64 p, unsigned, unsigned, const modulus& mod) { return detail::comp_sum_fast(3, p, p, mod); }));

    // odd-depth composition sums at total p, mod p; m is the depth
    reg.push_back(simple_claim(
        "zhoucai_odd", "odd-depth composition sum at total p is -(m-1)! B_{p-m} mod p",
        "sum of 1/(i_1 ... i_m) over i_1+...+i_m = p with parts coprime to p, m odd",
        {{term(rational(-1)).times_fact(-1, 0, 1).times_bern(0, 1, -1)}}, 1, 0,
        {.p_min = 7, .m_min = 3, .m_max_hint = 7, .uses_m = true},
        [](u64 p, unsigned, unsigned m) -> std::optional<std::string> {
            if (m % 2 == 0) return "depth must be odd";
            if (p < m + 3) return "p below m+3";
            return std::nullopt;
        },
        [](u64 p, unsigned, unsigned m, const modulus& mod) { return detail::comp_sum_fast(m, p, p, mod); }));

    // even-depth composition sums at total p, mod p^2; m is the depth
    reg.push_back(simple_claim(
        "zhoucai_even", "even-depth composition sum at total p is -(m m!/(2(m+1))) B_{p-m-1} p mod p^2",
        "sum of 1/(i_1 ... i_m) over i_1+...+i_m = p with parts coprime to p, m even",
        {{term(rational(-1, 2)).times_poly({rational(0), one}).times_fact(0, 0, 1).divided_by(1, 0, 1).times_bern(-1, 1, -1).times_p(1, 0)}},
        2, 0, {.p_min = 5, .m_min = 2, .m_max_hint = 6, .uses_m = true},
        [](u64 p, unsigned, unsigned m) -> std::optional<std::string> {
            if (m % 2 == 1) return "depth must be even";
            if (p < m + 3) return "p below m+3";
            return std::nullopt;
        },
        [](u64 p, unsigned, unsigned m, const modulus& mod) { return detail::comp_sum_fast(m, p, p, mod); }));

    // mod-p^2 refinement of the triple sum; divisor-weighted Bernoulli pair
    reg.push_back(simple_claim(
        "xiacai", "triple composition sum at total p is 12 B_{p-3}/(p-3) - 6 B_{2p-4}/(2p-4) mod p^2",
        "sum of 1/(i j k) over i+j+k = p with all parts coprime to p",
        {{term(rational(12)).times_bern(-3, 1).divided_by(-3, 1),
          term(rational(-6)).times_bern(-4, 2).divided_by(-4, 2)}},
        2, 0, {.p_min = 7}, nullptr,
        [](u64 p, unsigned, unsigned, const modulus& mod) { return detail::comp_sum_fast(3, p, p, mod); }));

    // triple composition sum at total p^r, mod p^r
    reg.push_back(simple_claim(
        "wangcai", "triple composition sum at total p^r is -2 p^{r-1} B_{p-3} mod p^r",
        "sum of 1/(i j k) over i+j+k = p^r with all parts coprime to p",
        {{term(rational(-2)).times_p(-1, 1).times_bern(-3, 1)}}, 0, 1,
        {.p_min = 3, .r_max_hint = 3, .uses_r = true}, nullptr,
        [](u64 p, unsigned r, unsigned, const modulus& mod) {
            return detail::comp_sum_fast(3, detail::pow_u64_checked(p, r), p, mod);
        }));

    // depth-2 composition sum at total p^r, mod p^{r+1}
    reg.push_back(simple_claim(
        "main_n2", "pair composition sum at total p^r is -(2/3) p^r B_{p-3} mod p^{r+1}",
        "sum of 1/(i j) over i+j = p^r with both parts coprime to p",
        {{term(rational(-2, 3)).times_p(0, 1).times_bern(-3, 1)}}, 1, 1,
        {.p_min = 5, .r_max_hint = 3, .uses_r = true}, nullptr,
        [](u64 p, unsigned r, unsigned, const modulus& mod) {
            return detail::comp_sum_fast(2, detail::pow_u64_checked(p, r), p, mod);
        }));

    // depth-4 composition sum at total p^r, mod p^{r+1}
    reg.push_back(simple_claim(
        "main_n4", "depth-4 composition sum at total p^r is -(24/5) p^r B_{p-5} mod p^{r+1}",
        "sum of 1/(i j k l) over i+j+k+l = p^r with all parts coprime to p",
        {{term(rational(-24, 5)).times_p(0, 1).times_bern(-5, 1)}}, 1, 1,
        {.p_min = 7, .r_min = 2, .r_max_hint = 2, .uses_r = true}, nullptr,
        [](u64 p, unsigned r, unsigned, const modulus& mod) {
            return detail::comp_sum_fast(4, detail::pow_u64_checked(p, r), p, mod);
        }));

    // harmonic triple sums below p^r; middle variable restricted various ways
    claim_domain w5dom{.p_min = 7, .r_min = 2, .r_max_hint = 2, .uses_r = true};
    auto w5expr = [](rational c) {
        return bernoulli_expression{{term(std::move(c)).times_p(0, 2).times_bern(-5, 1)}};
    };

    reg.push_back(simple_claim(
        "lemma_h2zero", "triple harmonic sum with p-divisible middle variable vanishes mod p^{2r+1}",
        "sum of 1/(u1 u2 u3) over 0<u1<u2<u3<p^r, u1 u3 coprime to p, u2 divisible by p",
        {}, 1, 2, w5dom, nullptr,
        [](u64 p, unsigned r, unsigned, const modulus& mod) {
            return mhs_at(p, r, {1, 1, 1}, cs_of(3, {1, 3}, {{2, 0}}), mod);
        }));

    {
        claim c;
        c.id = "lemma_h111";
        c.description = "triple harmonic sum below p^r is -(2/5) B_{p-5} p^{2r} mod p^{2r+1}";
        c.lhs_recipe = "sum of 1/(u1 u2 u3) over 0<u1<u2<u3<p^r with coprimality constraints";
        c.rhs = w5expr(rational(-2, 5));
        c.mod_c0 = 1;
        c.mod_c1 = 2;
        c.domain = w5dom;
        c.eval = [rhs = c.rhs](u64 p, unsigned r, unsigned m) {
            modulus mod = modulus::prime_power(p, 2 * r + 1);
            residue want = rhs.eval(p, r, m, mod);
            return std::vector<conjunct>{
                {"all coprime", mhs_at(p, r, {1, 1, 1}, constraint_set::all_coprime(3), mod), want},
                {"middle free", mhs_at(p, r, {1, 1, 1}, cs_of(3, {1, 3}, {}), mod), want}};
        };
        reg.push_back(std::move(c));
    }

    {
        claim c;
        c.id = "lemma_h12_h21";
        c.description = "congruent-pair weight-3 sums are (6/5) B_{p-5} p^{2r} mod p^{2r+1}, matching -H(3)";
        c.lhs_recipe = "sums of 1/(u1^2 u2) + 1/(u1 u2^2) over 0<u1<u2<p^r, u1 = u2 mod p, both coprime";
        c.rhs = w5expr(rational(6, 5));
        c.mod_c0 = 1;
        c.mod_c1 = 2;
        c.domain = w5dom;
        c.eval = [pos = w5expr(rational(6, 5)), neg = w5expr(rational(-6, 5))](u64 p, unsigned r, unsigned m) {
            modulus mod = modulus::prime_power(p, 2 * r + 1);
            constraint_set cls = cs_of(2, {1, 2}, {{2, 1}});
            residue pair = add(mhs_at(p, r, {2, 1}, cls, mod), mhs_at(p, r, {1, 2}, cls, mod));
            residue cubic = mhs_at(p, r, {3}, constraint_set::all_coprime(1), mod);
            return std::vector<conjunct>{{"congruent pair", pair, pos.eval(p, r, m, mod)},
                                         {"depth-1 cubic", cubic, neg.eval(p, r, m, mod)}};
        };
        reg.push_back(std::move(c));
    }

    reg.push_back(simple_claim(
        "cor_h3_111", "fully congruent triple harmonic sum is -(2/5) B_{p-5} p^{2r} mod p^{2r+1}",
        "sum of 1/(u1 u2 u3) over 0<u1<u2<u3<p^r, u1 = u2 = u3 mod p, coprime to p",
        w5expr(rational(-2, 5)), 1, 2, w5dom, nullptr,
        [](u64 p, unsigned r, unsigned, const modulus& mod) {
            return mhs_at(p, r, {1, 1, 1}, cs_of(3, {1}, {{2, 1}, {3, 2}}), mod);
        }));

    reg.push_back(simple_claim(
        "lemma_h13_111", "outer-congruent triple harmonic sum is -(3/5) B_{p-5} p^{2r} mod p^{2r+1}",
        "sum of 1/(u1 u2 u3) over 0<u1<u2<u3<p^r, u1 = u3 mod p, all coprime to p",
        w5expr(rational(-3, 5)), 1, 2, w5dom, nullptr,
        [](u64 p, unsigned r, unsigned, const modulus& mod) {
            return mhs_at(p, r, {1, 1, 1}, cs_of(3, {1, 2, 3}, {{3, 1}}), mod);
        }));

    reg.push_back(simple_claim(
        "lemma_h12_h23_111", "adjacent-congruent triple harmonic sums add to -(3/5) B_{p-5} p^{2r} mod p^{2r+1}",
        "sums of 1/(u1 u2 u3) over 0<u1<u2<u3<p^r with u1 = u2 or u2 = u3 mod p, u1 u3 coprime",
        w5expr(rational(-3, 5)), 1, 2, w5dom, nullptr,
        [](u64 p, unsigned r, unsigned, const modulus& mod) {
            return add(mhs_at(p, r, {1, 1, 1}, cs_of(3, {1, 3}, {{2, 1}}), mod),
                       mhs_at(p, r, {1, 1, 1}, cs_of(3, {1, 3}, {{3, 2}}), mod));
        }));

    reg.push_back(simple_claim(
        "sigma_value", "separated triple harmonic sum is -(1/5) B_{p-5} p^{2r} mod p^{2r+1}",
        "sum of 1/(u1 u2 u3) over 0<u1<u2<u3<p^r with u1, u3, u2-u1, u3-u2 coprime to p",
        w5expr(rational(-1, 5)), 1, 2, w5dom, nullptr,
        [](u64 p, unsigned r, unsigned, const modulus& mod) { return sigma_parts(p, r, mod).sigma; }));

    // residue-class power sums S_k(x, p^r) = sum of i^{-k} over i = x mod p, 0 < i < p^r
    claim_domain keydom{.p_min = 5, .r_min = 2, .r_max_hint = 3, .uses_r = true, .m_min = 1, .m_max_hint = 2, .uses_m = true};

    {
        claim c;
        c.id = "lemma_key_i";
        c.description = "class power sums lift by p one level up, with vanishing low moments of the defect";
        c.lhs_recipe = "S_m(x, p^{r+1}) vs p S_m(x, p^r); moments sum x^l (S_m(x,p^{r+1}) - p S_m(x,p^r))";
        c.mod_c0 = 2;
        c.mod_c1 = 1;
        c.domain = keydom;
        c.eval = [](u64 p, unsigned r, unsigned k) {
            modulus lm = modulus::prime_power(p, r + 2);
            modulus wm = modulus::prime_power(p, r + 3);
            std::vector<conjunct> cj;
            for (u64 x = 1; x < p; ++x)
                cj.push_back({"lift x=" + std::to_string(x), s_k_x(x, k, p, r + 1, lm),
                              mul(residue(p, lm), s_k_x(x, k, p, r, lm))});
            for (unsigned l = 0; l <= 3; ++l) {
                long long pm1 = static_cast<long long>(p) - 1;
                long long diff = static_cast<long long>(l) - k - 1;
                if (r == 2 && ((diff % pm1) + pm1) % pm1 == 0) continue;  // defect drops a power there
                residue acc(0, wm);
                for (u64 x = 1; x < p; ++x) {
                    residue d = sub(s_k_x(x, k, p, r + 1, wm), mul(residue(p, wm), s_k_x(x, k, p, r, wm)));
                    acc = add(acc, mul(mod_pow(residue(x, wm), l), d));
                }
                cj.push_back({"moment l=" + std::to_string(l), acc, residue(0, wm)});
            }
            return cj;
        };
        reg.push_back(std::move(c));
    }

    {
        claim c;
        c.id = "lemma_key_ii";
        c.description = "class power sums vanish mod p^{r-1}";
        c.lhs_recipe = "S_m(x, p^r) mod p^{r-1} for every coprime class x";
        c.mod_c0 = -1;
        c.mod_c1 = 1;
        c.domain = keydom;
        c.eval = [](u64 p, unsigned r, unsigned k) {
            modulus vm = modulus::prime_power(p, r - 1);
            std::vector<conjunct> cj;
            for (u64 x = 1; x < p; ++x)
                cj.push_back({"x=" + std::to_string(x), s_k_x(x, k, p, r, vm), residue(0, vm)});
            return cj;
        };
        reg.push_back(std::move(c));
    }

    {
        claim c;
        c.id = "lemma_key_iii";
        c.description = "d-th powers of class power sums lift by p^d one level up";
        c.lhs_recipe = "S_m(x, p^{r+1})^d vs p^d S_m(x, p^r)^d mod p^{dr+2}, d = 1..3";
        c.mod_c0 = 2;
        c.mod_c1 = 1;
        c.domain = keydom;
        c.eval = [](u64 p, unsigned r, unsigned k) {
            std::vector<conjunct> cj;
            for (unsigned d = 1; d <= 3; ++d) {
                modulus dm = modulus::prime_power(p, d * r + 2);
                for (u64 x = 1; x < p; ++x)
                    cj.push_back({"d=" + std::to_string(d) + " x=" + std::to_string(x),
                                  mod_pow(s_k_x(x, k, p, r + 1, dm), d),
                                  mul(mod_pow(residue(p, dm), d), mod_pow(s_k_x(x, k, p, r, dm), d))});
            }
            return cj;
        };
        reg.push_back(std::move(c));
    }

    {
        claim c;
        c.id = "lemma_key_iv";
        c.description = "powers of class power sums expand to two explicit terms mod p^{d(r-1)+2}";
        c.lhs_recipe = "S_m(x, p^r)^d vs p^{d(r-1)} x^{-dm} + (dm/2) p^{d(r-1)+1} x^{-dm-1}";
        c.mod_c0 = 1;
        c.mod_c1 = 1;
        c.domain = keydom;
        c.eval = [](u64 p, unsigned r, unsigned k) {
            std::vector<conjunct> cj;
            for (unsigned d = 1; d <= 3; ++d) {
                modulus em = modulus::prime_power(p, d * (r - 1) + 2);
                bigint pd = boost::multiprecision::pow(bigint(p), d * (r - 1));
                for (u64 x = 1; x < p; ++x) {
                    residue xinv = inverse(residue(x, em));
                    residue rhs = add(mul(residue(pd, em), mod_pow(xinv, d * k)),
                                      mul(mul(rational_residue(rational(d * k, 2), em), residue(pd * p, em)),
                                          mod_pow(xinv, d * k + 1)));
                    cj.push_back({"d=" + std::to_string(d) + " x=" + std::to_string(x),
                                  mod_pow(s_k_x(x, k, p, r, em), d), rhs});
                }
            }
            return cj;
        };
        reg.push_back(std::move(c));
    }

    {
        claim c;
        c.id = "lemma_key_v";
        c.description = "class sums of S_m powers close to (dm/(dm+1)) B_{p-1-dm} p^{d(r-1)+1}";
        c.lhs_recipe = "sum over x of S_m(x, p^r)^d mod p^{d(r-1)+2}, for d with d m <= p-3";
        c.rhs = {{term(rational(1)).times_poly({rational(0), rational(1)}).divided_by(1, 0, 1).times_bern(-1, 1, -1).times_p(0, 1)}};
        c.mod_c0 = 1;
        c.mod_c1 = 1;
        c.domain = keydom;
        c.extra_admit = [](u64 p, unsigned, unsigned m) -> std::optional<std::string> {
            if (m > p - 3) return "weight dm exceeds p-3";
            return std::nullopt;
        };
        c.eval = [](u64 p, unsigned r, unsigned k) {
            std::vector<conjunct> cj;
            for (unsigned d = 1; d <= 3 && d * k <= p - 3; ++d) {
                modulus em = modulus::prime_power(p, d * (r - 1) + 2);
                residue acc(0, em);
                for (u64 x = 1; x < p; ++x) acc = add(acc, mod_pow(s_k_x(x, k, p, r, em), d));
                bigint pd1 = boost::multiprecision::pow(bigint(p), d * (r - 1) + 1);
                residue rhs = mul(mul(rational_residue(rational(d * k, d * k + 1), em),
                                      bernoulli_residue(static_cast<unsigned>(p - 1 - d * k), p, em.a)),
                                  residue(pd1, em));
                cj.push_back({"d=" + std::to_string(d), acc, rhs});
            }
            return cj;
        };
        reg.push_back(std::move(c));
    }

    {
        claim c;
        c.id = "lemma_key_vi";
        c.description = "mixed products S_1 S_2 lift by p^2 and their class sum vanishes mod p^{2r+1}";
        c.lhs_recipe = "S_1(x, p^{r+1}) S_2(x, p^{r+1}) vs p^2 S_1(x, p^r) S_2(x, p^r); sum over x of S_1 S_2";
        c.mod_c0 = 2;
        c.mod_c1 = 2;
        c.domain = {.p_min = 7, .r_min = 2, .r_max_hint = 3, .uses_r = true};
        c.eval = [](u64 p, unsigned r, unsigned) {
            modulus mm = modulus::prime_power(p, 2 * r + 2);
            std::vector<conjunct> cj;
            for (u64 x = 1; x < p; ++x)
                cj.push_back({"lift x=" + std::to_string(x),
                              mul(s_k_x(x, 1, p, r + 1, mm), s_k_x(x, 2, p, r + 1, mm)),
                              mul(residue(bigint(p) * p, mm), mul(s_k_x(x, 1, p, r, mm), s_k_x(x, 2, p, r, mm)))});
            modulus sm = modulus::prime_power(p, 2 * r + 1);
            residue acc(0, sm);
            for (u64 x = 1; x < p; ++x) acc = add(acc, mul(s_k_x(x, 1, p, r, sm), s_k_x(x, 2, p, r, sm)));
            cj.push_back({"class sum", acc, residue(0, sm)});
            return cj;
        };
        reg.push_back(std::move(c));
    }

    // depth-4 composition sum at total m*p, mod p^2
    reg.push_back(simple_claim(
        "r4_formula", "depth-4 composition sum at total mp is -(24/5) m(m^2+1) B_{p-5} p mod p^2",
        "sum of 1/(i j k l) over i+j+k+l = m p with all parts coprime to p",
        {{term(rational(-24, 5)).times_poly({rational(0), one, rational(0), one}).times_p(1, 0).times_bern(-5, 1)}},
        2, 0, {.p_min = 7, .m_min = 1, .m_max_hint = 3, .uses_m = true}, nullptr,
        [](u64 p, unsigned, unsigned m, const modulus& mod) { return detail::comp_sum_fast(4, m * p, p, mod); }));

    // depth-8 composition sum at total m*p, mod p
    reg.push_back(simple_claim(
        "r8_formula", "depth-8 composition sum at total mp is (112/5) m(m^2+16)(m^2-1) B_{p-3} B_{p-5} mod p",
        "sum of 1/(i_1 ... i_8) over i_1+...+i_8 = m p with parts coprime to p",
        {{term(rational(112, 5)).times_poly({rational(0), rational(-16), rational(0), rational(15), rational(0), one}).times_bern(-3, 1).times_bern(-5, 1)}},
        1, 0, {.p_min = 11, .m_min = 1, .m_max_hint = 5, .uses_m = true}, nullptr,
        [](u64 p, unsigned, unsigned m, const modulus& mod) { return detail::comp_sum_fast(8, m * p, p, mod); }));

    // depth-11 composition sum at total m*p, mod p
    reg.push_back(simple_claim(
        "conj_r11", "depth-11 composition sum at total mp matches its two-term Bernoulli expression mod p",
        "sum of 1/(i_1 ... i_11) over i_1+...+i_11 = m p with parts coprime to p",
        {{term(rational(-88) * factorial_exact(5)).times_poly(poly_mul(binomial_poly(2, 5), {rational(33), rational(0), one})).times_bern(-3, 1).times_bern(-3, 1).times_bern(-5, 1),
          term(rational(-10)).times_poly({rational(0), rational(193248), rational(0), rational(152900), rational(0), rational(16401), rational(0), rational(330), rational(0), one}).times_bern(-11, 1)}},
        1, 0, {.p_min = 13, .m_min = 1, .m_max_hint = 4, .uses_m = true}, nullptr,
        [](u64 p, unsigned, unsigned m, const modulus& mod) { return detail::comp_sum_fast(11, m * p, p, mod); }));

    // depth-12 composition sum at total m*p, mod p; total 13 is a degenerate window
    reg.push_back(simple_claim(
        "conj_r12", "depth-12 composition sum at total mp matches its three-term Bernoulli expression mod p",
        "sum of 1/(i_1 ... i_12) over i_1+...+i_12 = m p with parts coprime to p",
        {{term(rational(55) * factorial_exact(8) / 9).times_poly(binomial_poly(3, 7)).times_bern(-3, 1).times_bern(-3, 1).times_bern(-3, 1).times_bern(-3, 1),
          term(rational(22) * factorial_exact(5) / 9).times_poly(poly_mul(binomial_poly(1, 3), {rational(32256), rational(0), rational(6196), rational(0), rational(211), rational(0), one})).times_bern(-3, 1).times_bern(-9, 1),
          term(rational(66) * factorial_exact(4) / 7).times_poly(poly_mul(binomial_poly(1, 3), {rational(31392), rational(0), rational(6508), rational(0), rational(187), rational(0), one})).times_bern(-5, 1).times_bern(-7, 1)}},
        1, 0, {.p_min = 13, .m_min = 1, .m_max_hint = 4, .uses_m = true},
        [](u64 p, unsigned, unsigned m) -> std::optional<std::string> {
            if (m * p < 14) return "total mp below depth+2";
            return std::nullopt;
        },
        [](u64 p, unsigned, unsigned m, const modulus& mod) { return detail::comp_sum_fast(12, m * p, p, mod); }));

    return reg;
}

} // namespace detail

inline const std::vector<claim>& list_claims() {
    static const std::vector<claim> reg = detail::build_registry();
    return reg;
}

inline const claim* find_claim(const std::string& id) {
    for (const claim& c : list_claims())
        if (c.id == id) return &c;
    return nullptr;
}

inline residue evaluate_lhs(const claim& c, u64 p, unsigned r = 1, unsigned m = 1) {
    if (auto reason = c.admit(p, r, m)) throw out_of_domain(*reason);
    return c.eval(p, r, m).front().lhs;
}

inline residue evaluate_rhs(const claim& c, u64 p, unsigned r = 1, unsigned m = 1) {
    if (auto reason = c.admit(p, r, m)) throw out_of_domain(*reason);
    return c.eval(p, r, m).front().rhs;
}

inline verification_record skeleton_record(const claim& c, u64 p, unsigned r, unsigned m) {
    verification_record rec;
    rec.claim_id = c.id;
    rec.p = p;
    rec.uses_r = c.domain.uses_r;
    rec.uses_m = c.domain.uses_m;
    rec.r = c.domain.uses_r ? r : 0;
    rec.m = c.domain.uses_m ? m : 0;
    return rec;
}

// verdict and displayed sides from an evaluated conjunct list: the first
// failing conjunct wins, otherwise the first conjunct represents the claim.
inline verification_record record_from_conjuncts(const claim& c, u64 p, unsigned r, unsigned m,
                                                 const std::vector<conjunct>& cj) {
    verification_record rec = skeleton_record(c, p, r, m);
    rec.status = verdict::pass;
    rec.lhs = cj.front().lhs;
    rec.rhs = cj.front().rhs;
    for (const conjunct& x : cj) {
        if (!x.pass()) {
            rec.status = verdict::fail;
            rec.detail = x.label;
            rec.lhs = x.lhs;
            rec.rhs = x.rhs;
            break;
        }
    }
    return rec;
}

inline verification_record verify_claim(const claim& c, u64 p, unsigned r = 1, unsigned m = 1) {
    if (auto reason = c.admit(p, r, m)) {
        verification_record rec = skeleton_record(c, p, r, m);
        rec.status = verdict::skipped;
        rec.detail = *reason;
        return rec;
    }
    std::vector<conjunct> cj;
    try {
        cj = c.eval(p, r, m);
    } catch (const error& e) {
        verification_record rec = skeleton_record(c, p, r, m);
        rec.status = verdict::skipped;
        rec.detail = std::string("error: ") + e.what();
        return rec;
    }
    return record_from_conjuncts(c, p, r, m, cj);
}

struct grid_range {
    u64 lo = 0, hi = 0;  // inclusive
};

struct grid_point {
    const claim* c = nullptr;
    u64 p = 0;
    unsigned r = 1, m = 1;
};

// canonical sweep order: claim ids ascending, then p, then r, then m; the
// r/m axes collapse to the claim's minimum when it does not use them.
inline std::vector<grid_point> sweep_grid(std::vector<std::string> ids, grid_range p_range,
                                          grid_range r_range = {1, 1}, grid_range m_range = {1, 1}) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::vector<grid_point> grid;
    std::vector<u64> primes = sieve_primes(p_range.hi);
    for (const std::string& id : ids) {
        const claim* c = find_claim(id);
        if (!c) throw out_of_domain("unknown claim id: " + id);
        std::vector<unsigned> rs, ms;
        if (c->domain.uses_r)
            for (u64 r = r_range.lo; r <= r_range.hi; ++r) rs.push_back(static_cast<unsigned>(r));
        else
            rs.push_back(c->domain.r_min);
        if (c->domain.uses_m)
            for (u64 m = m_range.lo; m <= m_range.hi; ++m) ms.push_back(static_cast<unsigned>(m));
        else
            ms.push_back(c->domain.m_min);
        for (u64 p : primes) {
            if (p < p_range.lo) continue;
            for (unsigned r : rs)
                for (unsigned m : ms) grid.push_back({c, p, r, m});
        }
    }
    return grid;
}

// run fn(i) over [0, count) on `jobs` workers; results land by index, so the
// output order never depends on scheduling.
template <typename Fn>
inline void for_each_indexed(std::size_t count, unsigned jobs, Fn fn) {
    unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count ? count : 1)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    for (std::thread& t : pool) t.join();
}

inline std::vector<verification_record> sweep_claims(std::vector<std::string> ids, grid_range p_range,
                                                     grid_range r_range = {1, 1}, grid_range m_range = {1, 1},
                                                     unsigned jobs = 1) {
    std::vector<grid_point> grid = sweep_grid(std::move(ids), p_range, r_range, m_range);
    std::vector<verification_record> out(grid.size());
    for_each_indexed(grid.size(), jobs,
                     [&](std::size_t i) { out[i] = verify_claim(*grid[i].c, grid[i].p, grid[i].r, grid[i].m); });
    return out;
}

} // namespace mhsc
