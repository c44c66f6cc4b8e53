#include <catch2/catch_amalgamated.hpp>

#include <mhsc/sums.hpp>

using namespace mhsc;

namespace {

// independent reference: enumerate ascending multisets and expand with
// multinomial coefficients instead of walking ordered compositions
bigint comp_sum_by_multisets(unsigned n, u64 total, u64 p, const modulus& mod) {
    return with_ring(mod.q, [&](auto ring) -> bigint {
        using E = typename std::decay_t<decltype(ring)>::elem;
        E acc = ring.zero();
        std::vector<u64> parts;
        auto coeff = [&]() {
            bigint c = factorial_exact(n);
            u64 run = 1;
            for (std::size_t i = 1; i <= parts.size(); ++i) {
                if (i < parts.size() && parts[i] == parts[i - 1]) {
                    ++run;
                } else {
                    c /= factorial_exact(static_cast<unsigned>(run));
                    run = 1;
                }
            }
            return c;
        };
        auto rec = [&](auto&& self, u64 min_val, u64 rem, E prod) -> void {
            if (parts.size() + 1 == n) {
                if (rem >= min_val && rem % p != 0) {
                    parts.push_back(rem);
                    E term = ring.mul(prod, ring.inv(ring.from_int(static_cast<long long>(rem))));
                    acc = ring.add(acc, ring.mul(term, ring.from_big(coeff())));
                    parts.pop_back();
                }
                return;
            }
            for (u64 i = min_val; i * (n - parts.size()) <= rem; ++i) {
                if (i % p == 0) continue;
                parts.push_back(i);
                self(self, i, rem - i, ring.mul(prod, ring.inv(ring.from_int(static_cast<long long>(i)))));
                parts.pop_back();
            }
        };
        rec(rec, 1, total, ring.one());
        return ring.lift(acc);
    });
}

} // namespace

TEST_CASE("t_n_naive examples") {
    CHECK(t_n_naive(2, 5, 1, modulus::prime_power(5, 2)).v == 5);
    CHECK(t_n_naive(3, 5, 1, modulus::prime_power(5, 1)).v == 3);
    CHECK(t_n_naive(4, 7, 2, modulus::prime_power(7, 3)).v == 98);
}

TEST_CASE("t_n_fast reproduces the naive values") {
    CHECK(t_n_fast(2, 5, 1, modulus::prime_power(5, 2)).v == 5);
    CHECK(t_n_fast(3, 5, 1, modulus::prime_power(5, 1)).v == 3);
    CHECK(t_n_fast(4, 7, 2, modulus::prime_power(7, 3)).v == 98);
    CHECK(t_n_fast(6, 7, 2, modulus::prime_power(7, 3)).v == 126);
    CHECK(t_n_naive(6, 7, 2, modulus::prime_power(7, 3)).v == 126);
    CHECK(t_n(4, 7, 2, modulus::prime_power(7, 3)).v == 98);
}

TEST_CASE("fast and naive composition sums agree on the grid") {
    for (unsigned n : {2u, 3u, 4u}) {
        for (u64 p : {5ull, 7ull, 11ull}) {
            for (unsigned r = 1; r <= 2; ++r) {
                modulus m = modulus::prime_power(p, r + 1);
                CAPTURE(n, p, r);
                CHECK(t_n_fast(n, p, r, m).v == t_n_naive(n, p, r, m).v);
            }
        }
    }
}

TEST_CASE("composition budget and domain guards") {
    CHECK_THROWS_AS(t_n_naive(4, 7, 2, modulus::prime_power(7, 3), 100), budget_exceeded);
    CHECK_THROWS_AS(t_n_naive(5, 5, 1, modulus::prime_power(5, 1)), precondition_violated);
    CHECK_THROWS_AS(t_n_fast(2, 5, 0, modulus::prime_power(5, 1)), precondition_violated);
    CHECK_THROWS_AS(t_n_fast(2, 5, 1, modulus::prime_power(7, 1)), precondition_violated);
    CHECK_THROWS_AS(t_n_fast(2, 5, 1, modulus::value(25)), precondition_violated);
    CHECK_THROWS_AS(r_nm_fast(4, 4, 7, modulus::prime_power(7, 1)), precondition_violated);
    CHECK_THROWS_AS(r_nm_fast(4, 0, 7, modulus::prime_power(7, 1)), precondition_violated);
    CHECK_THROWS_AS(r_nm_fast(7, 1, 7, modulus::prime_power(7, 1)), precondition_violated);
}

TEST_CASE("r_nm examples") {
    CHECK(r_nm_naive(3, 1, 5, modulus::prime_power(5, 1)).v == 3);
    CHECK(r_nm_naive(4, 1, 7, modulus::prime_power(7, 2)).v == 28);
    CHECK(r_nm_naive(2, 1, 7, modulus::prime_power(7, 1)).v == 0);
    CHECK(r_nm_naive(2, 1, 7, modulus::prime_power(7, 2)).v == 35);
    CHECK(r_nm_fast(8, 2, 11, modulus::prime_power(11, 1)).v == 3);
    CHECK(r_nm_naive(8, 2, 11, modulus::prime_power(11, 1)).v == 3);
    CHECK(r_nm_fast(11, 1, 13, modulus::prime_power(13, 1)).v == r_nm_naive(11, 1, 13, modulus::prime_power(13, 1)).v);
}

TEST_CASE("r_nm fast and naive agree for n <= 6, m < n, p <= 13") {
    for (unsigned n = 2; n <= 6; ++n) {
        for (u64 p : {5ull, 7ull, 11ull, 13ull}) {
            if (p <= n) continue;
            for (unsigned m = 1; m < n; ++m) {
                modulus mod = modulus::prime_power(p, 2);
                CAPTURE(n, m, p);
                CHECK(r_nm_fast(n, m, p, mod).v == r_nm_naive(n, m, p, mod).v);
            }
        }
    }
}

TEST_CASE("composition order convention does not matter") {
    for (unsigned n : {2u, 3u, 4u}) {
        for (u64 p : {5ull, 7ull, 11ull}) {
            for (unsigned r = 1; r <= 2; ++r) {
                modulus m = modulus::prime_power(p, 2);
                u64 total = static_cast<u64>(boost::multiprecision::pow(bigint(p), r));
                CAPTURE(n, p, r);
                CHECK(t_n_fast(n, p, r, m).v == comp_sum_by_multisets(n, total, p, m));
            }
        }
    }
}

TEST_CASE("modular projections are consistent") {
    for (unsigned a = 1; a <= 3; ++a) {
        bigint q = boost::multiprecision::pow(bigint(7), a);
        CHECK(t_n_fast(3, 7, 2, modulus::prime_power(7, 3)).v % q == t_n_fast(3, 7, 2, modulus::prime_power(7, a)).v);
        CHECK(r_nm_fast(4, 2, 7, modulus::prime_power(7, 3)).v % q == r_nm_fast(4, 2, 7, modulus::prime_power(7, a)).v);
    }
}

TEST_CASE("divide_by_p_power") {
    CHECK(divide_by_p_power(residue(50, modulus::prime_power(5, 3)), 2).v == 2);
    CHECK(divide_by_p_power(residue(50, modulus::prime_power(5, 3)), 2).m.q == 5);
    CHECK_THROWS_AS(divide_by_p_power(residue(51, modulus::prime_power(5, 3)), 2), non_invertible);
    CHECK_THROWS_AS(divide_by_p_power(residue(0, modulus::prime_power(5, 3)), 3), precondition_violated);
    CHECK_THROWS_AS(divide_by_p_power(residue(10, modulus::value(100)), 1), precondition_violated);
}

TEST_CASE("sigma decomposition at p=7, r=2") {
    modulus m = modulus::prime_power(7, 5);
    sigma_decomposition sd = sigma_parts(7, 2, m);
    CHECK(sd.sigma.v == 7203);
    CHECK(sd.s1.v == 14406);
    CHECK(sd.s2.v == 4802);
    CHECK(sd.s3.v == 14406);
    CHECK(sub(add(sd.s1, sd.s3), sd.s2).v == sd.sigma.v);
    CHECK_THROWS_AS(sigma_parts(7, 1, m), precondition_violated);
    CHECK_THROWS_AS(sigma_parts(3, 2, modulus::prime_power(3, 5)), precondition_violated);
}

TEST_CASE("24 sigma equals p^r T_4 exactly") {
    for (u64 p : {5ull, 7ull, 11ull}) {
        unsigned r = 2;
        modulus big = modulus::prime_power(p, 3 * r + 1);
        sigma_decomposition sd = sigma_parts(p, r, big);
        residue t4_from_sigma = divide_by_p_power(mul(residue(24, big), sd.sigma), r);
        residue t4 = t_n_fast(4, p, r, modulus::prime_power(p, 2 * r + 1));
        CAPTURE(p);
        CHECK(t4_from_sigma.v == t4.v);
        if (p == 7) CHECK(t4_from_sigma.v == t_n_naive(4, 7, 2, modulus::prime_power(7, 2 * r + 1)).v);
    }
}
