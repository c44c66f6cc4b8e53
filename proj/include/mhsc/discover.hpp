#pragma once
// Linear-relation discovery over prime windows. A window holds residues of
// one quantity at many primes (all to the same exponent); CRT folds it into
// a single residue mod the product, and an exact lattice reduction searches
// for a small rational combination of basis columns. Candidates must clear a
// height filter and re-verify at every prime before they count as found.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "bernoulli.hpp"
#include "errors.hpp"
#include "integer.hpp"

namespace mhsc {

// entries[p] is the value mod p^a; map order keeps primes strictly increasing.
struct prime_window {
    unsigned a = 1;
    std::map<u64, bigint> entries;
};

inline void require_aligned(const prime_window& x, const prime_window& y) {
    if (x.a != y.a) throw mismatched_windows("windows use different exponents");
    if (x.entries.size() != y.entries.size()) throw mismatched_windows("windows cover different primes");
    auto ix = x.entries.begin();
    for (auto iy = y.entries.begin(); iy != y.entries.end(); ++ix, ++iy)
        if (ix->first != iy->first) throw mismatched_windows("windows cover different primes");
}

inline prime_window window_product(const prime_window& x, const prime_window& y) {
    require_aligned(x, y);
    prime_window out;
    out.a = x.a;
    for (const auto& [p, v] : x.entries) {
        bigint q = boost::multiprecision::pow(bigint(p), x.a);
        out.entries[p] = v * y.entries.at(p) % q;
    }
    return out;
}

inline std::vector<u64> first_primes_from(u64 start, std::size_t count) {
    std::vector<u64> out;
    for (u64 p = std::max<u64>(start, 2); out.size() < count; ++p)
        if (is_prime_u64(p)) out.push_back(p);
    return out;
}

// beta_w(p) = B_{p-w} / w mod p, defined for odd w >= 3 and p >= w + 2.
inline prime_window beta_window(unsigned w, const std::vector<u64>& primes) {
    if (w < 3 || w % 2 == 0) throw bad_weight("beta weight must be odd and >= 3");
    if (primes.empty()) throw precondition_violated("beta window needs at least one prime");
    prime_window out;
    out.a = 1;
    for (u64 p : primes) {
        if (!is_prime_u64(p)) throw precondition_violated("beta window entries must be prime");
        if (p < w + 2) throw prime_too_small("beta window needs p >= w + 2");
        auto m1 = modulus::prime_power(bigint(p), 1);
        residue v = mul(bernoulli_residue(static_cast<unsigned>(p - w), p, 1),
                        inverse(residue(bigint(w), m1)));
        if (!out.entries.emplace(p, v.v).second) throw precondition_violated("duplicate prime in window");
    }
    return out;
}

// A product of beta factors; weights are odd, >= 3, ascending.
struct bernoulli_monomial {
    std::vector<unsigned> weights;

    unsigned total_weight() const {
        unsigned s = 0;
        for (unsigned w : weights) s += w;
        return s;
    }
    std::string label() const {
        std::string s = "{";
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(weights[i]);
        }
        return s + "}";
    }
};

// All monomials of total weight w, ascending parts, lexicographic order.
inline std::vector<bernoulli_monomial> basis_monomials(unsigned w) {
    std::vector<bernoulli_monomial> out;
    if (w < 3) return out;
    std::vector<unsigned> cur;
    auto rec = [&](auto&& self, unsigned rem, unsigned min_part) -> void {
        if (rem == 0) {
            out.push_back({cur});
            return;
        }
        for (unsigned part = min_part; part <= rem; part += 2) {
            if (rem - part == 1 || rem - part == 2) continue;
            cur.push_back(part);
            self(self, rem - part, part);
            cur.pop_back();
        }
    };
    rec(rec, w, 3);
    return out;
}

inline prime_window monomial_window(const bernoulli_monomial& mono, const std::vector<u64>& primes) {
    if (mono.weights.empty()) throw precondition_violated("monomial window needs at least one factor");
    prime_window out = beta_window(mono.weights[0], primes);
    for (std::size_t i = 1; i < mono.weights.size(); ++i)
        out = window_product(out, beta_window(mono.weights[i], primes));
    return out;
}

// A coefficient c on the beta monomial prod B_{p-w_i}/w_i equals
// c / prod w_i on the plain Bernoulli monomial prod B_{p-w_i}.
inline rational beta_to_bernoulli(const bernoulli_monomial& mono, const rational& c) {
    bigint d = 1;
    for (unsigned w : mono.weights) d *= w;
    return c / rational(d);
}

struct crt_image {
    bigint v;  // combined residue in [0, m)
    bigint m;  // product of the window moduli p^a
};

inline crt_image window_crt(const prime_window& win) {
    if (win.entries.empty()) throw precondition_violated("cannot fold an empty window");
    std::vector<residue> parts;
    parts.reserve(win.entries.size());
    for (const auto& [p, v] : win.entries)
        parts.emplace_back(v, modulus::prime_power(bigint(p), win.a));
    auto [v, m] = crt_combine(parts);
    return {v, m};
}

// Lift V mod M to the unique fraction a/b with |a|, b <= sqrt(M/2) and
// gcd(b, M) = 1, when one exists (half-extended Euclid with a final check).
inline std::optional<rational> rational_reconstruction(const bigint& V, const bigint& M) {
    if (M <= 1) throw precondition_violated("reconstruction modulus must exceed 1");
    const bigint bound = isqrt_floor(M / 2);
    bigint r0 = M, t0 = 0;
    bigint r1 = ((V % M) + M) % M, t1 = 1;
    while (r1 != 0 && r1 > bound) {
        bigint q = r0 / r1;
        bigint r2 = r0 - q * r1, t2 = t0 - q * t1;
        r0 = r1;
        t0 = t1;
        r1 = r2;
        t1 = t2;
    }
    bigint a = r1, b = t1;
    if (b < 0) {
        a = -a;
        b = -b;
    }
    if (b == 0 || b > bound) return std::nullopt;
    if (boost::multiprecision::gcd(a < 0 ? bigint(-a) : a, b) != 1) return std::nullopt;
    if (boost::multiprecision::gcd(b, M) != 1) return std::nullopt;
    if ((V * b - a) % M != 0) return std::nullopt;
    return rational(a, b);
}

namespace detail {

// b > 0; quotient rounded toward minus infinity.
inline bigint floor_div(const bigint& a, const bigint& b) {
    bigint q = a / b;
    if (a % b != 0 && a < 0) --q;
    return q;
}

// Nearest integer, halves rounded up.
inline bigint nearest_int(const rational& x) { return floor_div(2 * num(x) + den(x), 2 * den(x)); }

struct gram_data {
    std::vector<std::vector<rational>> mu;
    std::vector<rational> B;  // squared lengths of the orthogonalized rows
};

inline gram_data gram_schmidt(const std::vector<std::vector<bigint>>& b) {
    const std::size_t n = b.size(), dim = b[0].size();
    gram_data g;
    g.mu.assign(n, std::vector<rational>(n, rational(0)));
    g.B.assign(n, rational(0));
    std::vector<std::vector<rational>> bs(n);
    for (std::size_t i = 0; i < n; ++i) {
        bs[i].assign(b[i].begin(), b[i].end());
        for (std::size_t j = 0; j < i; ++j) {
            if (g.B[j] != 0) {
                rational d = 0;
                for (std::size_t t = 0; t < dim; ++t) d += rational(b[i][t]) * bs[j][t];
                g.mu[i][j] = d / g.B[j];
            }
            for (std::size_t t = 0; t < dim; ++t) bs[i][t] -= g.mu[i][j] * bs[j][t];
        }
        for (std::size_t t = 0; t < dim; ++t) g.B[i] += bs[i][t] * bs[i][t];
        if (g.B[i] == 0) throw singular_input("lattice rows are linearly dependent");
    }
    return g;
}

}  // namespace detail

// Exact LLL with delta = 3/4 over arbitrary-precision rationals. The rows
// must be linearly independent; the output spans the same lattice.
inline std::vector<std::vector<bigint>> lll_reduce(std::vector<std::vector<bigint>> rows) {
    if (rows.empty() || rows[0].empty()) throw precondition_violated("lll needs a nonempty row matrix");
    for (const auto& r : rows)
        if (r.size() != rows[0].size()) throw precondition_violated("lll rows must have equal length");
    const rational delta(3, 4);
    const std::size_t dim = rows[0].size();
    auto g = detail::gram_schmidt(rows);
    std::size_t k = 1;
    while (k < rows.size()) {
        for (std::size_t j = k; j-- > 0;) {
            bigint q = detail::nearest_int(g.mu[k][j]);
            if (q != 0) {
                for (std::size_t t = 0; t < dim; ++t) rows[k][t] -= q * rows[j][t];
                g = detail::gram_schmidt(rows);
            }
        }
        if (g.B[k] >= (delta - g.mu[k][k - 1] * g.mu[k][k - 1]) * g.B[k - 1]) {
            ++k;
        } else {
            std::swap(rows[k], rows[k - 1]);
            g = detail::gram_schmidt(rows);
            k = std::max<std::size_t>(k - 1, 1);
        }
    }
    return rows;
}

// Integer vectors c with sum_i c_i * cols_i ≡ 0 (mod M), found by reducing
// the rows [e_i | M * cols_i] together with [0 | M * M] and keeping reduced
// rows whose scaled coordinate vanished.
inline std::vector<std::vector<bigint>> find_relation(const std::vector<bigint>& cols, const bigint& M) {
    if (cols.empty() || M <= 1) throw precondition_violated("relation search needs columns and M > 1");
    const std::size_t k = cols.size();
    std::vector<std::vector<bigint>> rows(k + 1, std::vector<bigint>(k + 1, 0));
    for (std::size_t i = 0; i < k; ++i) {
        rows[i][i] = 1;
        rows[i][k] = M * (((cols[i] % M) + M) % M);
    }
    rows[k][k] = M * M;
    auto red = lll_reduce(std::move(rows));
    std::vector<std::vector<bigint>> out;
    for (const auto& r : red) {
        if (r[k] != 0) continue;
        bool nonzero = false;
        for (std::size_t i = 0; i < k; ++i) nonzero = nonzero || r[i] != 0;
        if (nonzero) out.emplace_back(r.begin(), r.begin() + k);
    }
    return out;
}

// found=false carries the smallest candidate height seen (0 when none had a
// nonzero target coefficient), as a lower bound on any missed relation.
struct relation_result {
    bool found = false;
    std::vector<rational> coefficients;  // target = sum coefficients[i] * basis[i]
    std::vector<bigint> relation;        // integer relation on [target, basis...]
    bigint height{0};
    bool verified = false;
};

inline relation_result discover_combination(const prime_window& target,
                                            const std::vector<prime_window>& basis,
                                            const bigint& height_bound) {
    if (basis.empty()) throw precondition_violated("discovery needs at least one basis window");
    if (height_bound <= 0) throw precondition_violated("height bound must be positive");
    for (const auto& b : basis) require_aligned(target, b);

    auto tc = window_crt(target);
    std::vector<bigint> cols{tc.v};
    for (const auto& b : basis) cols.push_back(window_crt(b).v);

    relation_result best;
    for (const auto& rel : find_relation(cols, tc.m)) {
        if (rel[0] == 0) continue;
        std::vector<rational> co;
        bigint h = rel[0] < 0 ? bigint(-rel[0]) : rel[0];
        for (std::size_t i = 1; i < rel.size(); ++i) {
            bigint cn = -rel[i], cd = rel[0];
            if (cd < 0) {
                cn = -cn;
                cd = -cd;
            }
            rational c(cn, cd);
            bigint an = num(c) < 0 ? bigint(-num(c)) : num(c);
            h = std::max(h, std::max(an, den(c)));
            co.push_back(std::move(c));
        }
        if (best.relation.empty() || h < best.height) {
            best.coefficients = std::move(co);
            best.relation = rel;
            best.height = h;
        }
    }
    if (best.relation.empty()) return best;

    // Junk-relation heights scale like the lattice-dimension root of M; a
    // genuine relation's height does not grow with the window at all.
    const bigint significance = iroot_floor(tc.m, static_cast<unsigned>(basis.size()) + 2);
    if (best.height > height_bound || 16 * best.height > significance) return best;

    try {
        auto pit = target.entries.begin();
        for (; pit != target.entries.end(); ++pit) {
            modulus q = modulus::prime_power(bigint(pit->first), target.a);
            residue rhs(bigint(0), q);
            for (std::size_t i = 0; i < basis.size(); ++i)
                rhs = add(rhs, mul(rational_residue(best.coefficients[i], q),
                                   residue(basis[i].entries.at(pit->first), q)));
            if (residue(pit->second, q).v != rhs.v) return best;
        }
    } catch (const error&) {
        return best;  // a coefficient denominator hit the prime: not a valid combination
    }
    best.found = true;
    best.verified = true;
    return best;
}

// Fit a degree <= degree_bound polynomial in m through exact per-m values:
// solve on the first degree_bound + 1 points, then every remaining point
// must match. Coefficients are returned in ascending order.
inline poly fit_coefficient_polynomial(const std::map<unsigned, rational>& points, unsigned degree_bound) {
    const std::size_t need = static_cast<std::size_t>(degree_bound) + 1;
    if (points.size() < need) throw precondition_violated("need degree_bound + 1 sample points");
    std::vector<std::pair<unsigned, rational>> pts(points.begin(), points.end());
    std::vector<std::vector<rational>> aug(need, std::vector<rational>(need + 1, rational(0)));
    for (std::size_t i = 0; i < need; ++i) {
        rational pw(1);
        for (std::size_t j = 0; j < need; ++j) {
            aug[i][j] = pw;
            pw *= rational(pts[i].first);
        }
        aug[i][need] = pts[i].second;
    }
    for (std::size_t col = 0; col < need; ++col) {
        std::size_t piv = col;
        while (piv < need && aug[piv][col] == 0) ++piv;
        if (piv == need) throw singular_input("degenerate interpolation system");
        std::swap(aug[piv], aug[col]);
        const rational lead = aug[col][col];
        for (auto& v : aug[col]) v /= lead;
        for (std::size_t r = 0; r < need; ++r) {
            if (r == col || aug[r][col] == 0) continue;
            const rational f = aug[r][col];
            for (std::size_t j = col; j <= need; ++j) aug[r][j] -= f * aug[col][j];
        }
    }
    poly out(need);
    for (std::size_t i = 0; i < need; ++i) out[i] = aug[i][need];
    for (std::size_t i = need; i < pts.size(); ++i)
        if (poly_eval(out, rational(pts[i].first)) != pts[i].second)
            throw inconsistent_data("sample point off the fitted polynomial");
    return out;
}

}  // namespace mhsc
