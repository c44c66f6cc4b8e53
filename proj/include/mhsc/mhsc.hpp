#ifndef MHSC_MHSC_HPP
#define MHSC_MHSC_HPP

// umbrella header: the full library except the CLI layer,
// which pulls in vendored argument/json parsers

#include <mhsc/errors.hpp>
#include <mhsc/integer.hpp>
#include <mhsc/arith.hpp>
#include <mhsc/bernoulli.hpp>
#include <mhsc/mhs.hpp>
#include <mhsc/sums.hpp>
#include <mhsc/claims.hpp>
#include <mhsc/discover.hpp>

#endif
