#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace bayimp {

// All probabilities, utilities and payoff gaps are exact rationals. Strict
// vs. weak inequalities decide verdicts, so no floating point appears
// anywhere in the analysis path.
using Rat = mpq_class;
using Int = mpz_class;

/// Parses "p/q" (q > 0) or a bare integer "p". Throws ScenarioError on
/// anything else. The result is canonicalized (gcd(p,q)=1).
Rat parse_rational(std::string_view text);

/// Canonical "p/q" form, denominator always explicit ("3" -> "3/1").
std::string rational_to_string(const Rat& value);

inline Rat make_rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace bayimp
