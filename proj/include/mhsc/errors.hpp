#pragma once

#include <stdexcept>
#include <string>

namespace mhsc {

// Every library error derives from mhsc::error; the CLI maps domain/usage
// problems to exit code 2 and keeps computation failures as exit 1.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// configured bound exceeded (Bernoulli index, modulus width)
struct bound_exceeded : error {
    using error::error;
};

// enumeration budget exceeded; caller should switch to the fast path
struct budget_exceeded : error {
    using error::error;
};

// division by a non-unit in the residue ring
struct non_invertible : error {
    using error::error;
};

// arithmetic between residues with different moduli
struct modulus_mismatch : error {
    using error::error;
};

struct moduli_not_coprime : error {
    using error::error;
};

// Bernoulli top-index request with even weight or weight >= p-1
struct bad_weight : error {
    using error::error;
};

struct precondition_violated : error {
    using error::error;
};

struct out_of_domain : error {
    using error::error;
};

// a Bernoulli factor of a claim RHS is not p-integral (registry bug)
struct valuation_error : error {
    using error::error;
};

struct prime_too_small : error {
    using error::error;
};

struct mismatched_windows : error {
    using error::error;
};

struct singular_input : error {
    using error::error;
};

struct inconsistent_data : error {
    using error::error;
};

} // namespace mhsc
