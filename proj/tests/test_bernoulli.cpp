#include <catch2/catch_amalgamated.hpp>

#include <mhsc/bernoulli.hpp>

using namespace mhsc;

TEST_CASE("bernoulli_exact small values and bound") {
    CHECK(bernoulli_exact(0) == rational(1));
    CHECK(bernoulli_exact(1) == rational(-1, 2));
    CHECK(bernoulli_exact(2) == rational(1, 6));
    CHECK(bernoulli_exact(3) == rational(0));
    CHECK(bernoulli_exact(12) == rational(-691, 2730));
    CHECK_THROWS_AS(bernoulli_exact(65), bound_exceeded);
    CHECK(bernoulli_exact(65, bernoulli_hard_bound) == rational(0));
    CHECK(den(bernoulli_exact(360, bernoulli_hard_bound)) % 2 == 0); // denominators stay squarefree-even
}

TEST_CASE("bernoulli_top_mod_p examples") {
    CHECK(bernoulli_top_mod_p(5, 3).v == 1);
    CHECK(bernoulli_top_mod_p(7, 3).v == 3);
    CHECK(bernoulli_top_mod_p(7, 5).v == 6); // 1/6 = 6^{-1} = 6 mod 7, matching the exact recurrence
    CHECK_THROWS_AS(bernoulli_top_mod_p(7, 4), bad_weight);
    CHECK_THROWS_AS(bernoulli_top_mod_p(7, 7), bad_weight);
    CHECK_THROWS_AS(bernoulli_top_mod_p(7, 1), bad_weight);
    CHECK_THROWS_AS(bernoulli_top_mod_p(4, 3), precondition_violated);
}

TEST_CASE("bernoulli_top_mod_p equals the exact recurrence for p <= 50") {
    for (u64 p : sieve_primes(50)) {
        if (p < 5) continue;
        modulus m = modulus::prime_power(p, 1);
        for (unsigned w = 3; w + 1 < p; w += 2) {
            residue fast = bernoulli_top_mod_p(p, w);
            residue slow = rational_residue(bernoulli_exact(static_cast<unsigned>(p - w), bernoulli_hard_bound), m);
            CHECK(fast.v == slow.v);
        }
    }
}

TEST_CASE("bernoulli_mod_pk valuations and units") {
    {
        padic_value v = bernoulli_mod_pk(6, 7, 1); // (p-1) | 6: simple pole, p B_6 = -1 mod p
        CHECK(v.kind == padic_value::kind_t::value);
        CHECK(v.e == -1);
        CHECK(v.u.v == 6);
    }
    {
        padic_value v = bernoulli_mod_pk(12, 7, 1);
        CHECK(v.e == -1);
        CHECK(v.u.v == 6);
    }
    {
        padic_value v = bernoulli_mod_pk(2, 5, 2);
        CHECK(v.e == 0);
        CHECK(v.u.v == 21);
    }
    {
        padic_value v = bernoulli_mod_pk(10, 7, 2); // B_10 = 5/66 = 32 mod 49
        CHECK(v.e == 0);
        CHECK(v.u.v == 32);
    }
    CHECK(bernoulli_mod_pk(9, 7, 2).is_zero());
    CHECK(bernoulli_mod_pk(3, 5, 1).is_zero());
    {
        padic_value v = bernoulli_mod_pk(0, 5, 1);
        CHECK(v.e == 0);
        CHECK(v.u.v == 1);
    }
    CHECK(bernoulli_mod_pk(1, 5, 1).u.v == 2); // -1/2 = 2 mod 5
    CHECK_THROWS_AS(bernoulli_mod_pk(40, 13, 2), precondition_violated); // above 3p
    CHECK_THROWS_AS(bernoulli_mod_pk(4, 7, 4), precondition_violated);
}

TEST_CASE("power-sum route agrees with the exact recurrence") {
    for (u64 p : {7ull, 11ull, 13ull}) {
        for (unsigned a = 1; a <= 2; ++a) {
            bigint q = boost::multiprecision::pow(bigint(p), a);
            for (unsigned k = 4; k <= 3 * p; k += 2) {
                if (k % (p - 1) == 0 || (k - 2) % (p - 1) == 0) continue;
                bigint fast = detail::bernoulli_residue_power_sum(k, p, a);
                bigint slow = rational_residue(bernoulli_exact(k, bernoulli_hard_bound), modulus::prime_power(p, a)).v;
                CHECK(fast == slow);
            }
        }
    }
}

TEST_CASE("bernoulli_residue routes and rejections") {
    CHECK(bernoulli_residue(0, 7, 2).v == 1);
    CHECK(bernoulli_residue(5, 7, 2).v == 0);
    CHECK(bernoulli_residue(10, 7, 2).v == 32);
    CHECK_THROWS_AS(bernoulli_residue(12, 7, 2), valuation_error);
    CHECK_THROWS_AS(bernoulli_residue(16, 17, 1), valuation_error);
}

TEST_CASE("power_sum_direct examples") {
    CHECK(power_sum_direct(1, 5, modulus::value(100)).v == 10);
    CHECK(power_sum_direct(3, 4, modulus::value(1000)).v == 36);
    CHECK(power_sum_direct(9, 1, modulus::prime_power(5, 2)).v == 0);
    CHECK(power_sum_direct(0, 8, modulus::value(1000)).v == 7);
}

TEST_CASE("power_sum_formula examples") {
    CHECK(power_sum_formula(1, 5) == rational(10));
    CHECK(power_sum_formula(0, 9) == rational(8));
    CHECK(power_sum_formula(5, 10) == rational(120825));
    CHECK_THROWS_AS(power_sum_formula(65, 10), bound_exceeded);
}

TEST_CASE("power sum closed form equals direct accumulation") {
    for (unsigned m = 0; m <= 12; ++m) {
        for (bigint n = 1; n <= 50; ++n) {
            bigint direct = 0;
            for (bigint j = 1; j < n; ++j) direct += boost::multiprecision::pow(j, m);
            rational formula = power_sum_formula(m, n);
            CHECK(den(formula) == 1);
            CHECK(num(formula) == direct);
        }
    }
}

TEST_CASE("power sums over ranges below a prime power vanish to the expected depth") {
    for (u64 p : {5ull, 7ull, 11ull, 13ull}) {
        for (unsigned s = 1; s <= 3; ++s) {
            bigint ps = boost::multiprecision::pow(bigint(p), s);
            for (unsigned l = 3; l <= 15; l += 2) {
                if (s == 1 && (l - 1) % (p - 1) == 0) continue; // valuation is exactly s there
                CHECK(power_sum_direct(l, ps, modulus::prime_power(p, s + 1)).v == 0);
            }
            for (unsigned l = 2; l <= 14; l += 2) {
                if (l % (p - 1) == 0) continue;
                CHECK(power_sum_direct(l, ps, modulus::prime_power(p, s)).v == 0);
            }
        }
    }
}

TEST_CASE("kummer_check") {
    {
        kummer_result r = kummer_check(7, 4, 10);
        CHECK(r.equal);
        CHECK(r.lhs.v == 6);
        CHECK(r.rhs.v == 6);
    }
    {
        kummer_result r = kummer_check(5, 2, 6);
        CHECK(r.equal);
        CHECK(r.lhs.v == 3);
    }
    CHECK_THROWS_AS(kummer_check(7, 4, 8), precondition_violated);
    CHECK_THROWS_AS(kummer_check(7, 6, 12), precondition_violated);
    CHECK_THROWS_AS(kummer_check(7, 3, 9), precondition_violated);
}
