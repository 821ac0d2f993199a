#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "twistfactor/error.hpp"

namespace twistfactor {

using Int = mpz_class;
using Rational = mpq_class;

// Decimal string <-> Int. parse_int rejects anything but an optional sign
// followed by decimal digits.
Int parse_int(std::string_view text);
std::string to_dec(const Int& value);

// floor(sqrt(n)) for n >= 0.
Int isqrt(const Int& n);

// True when n is a perfect square; stores the root when requested.
bool is_perfect_square(const Int& n, Int* root = nullptr);

// ceil(n / d) for d > 0.
Int ceil_div(const Int& n, const Int& d);

// Jacobi symbol (a/m); m must be odd and >= 3.
int jacobi(const Int& a, const Int& m);

// Miller-Rabin with the first thirteen prime bases, which is deterministic
// below 3.3e24. Larger inputs additionally get BPSW plus 64 random rounds.
bool is_prime(const Int& n);

struct PrimePower {
  Int prime;
  unsigned exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// An integer together with its complete factorization. Factors are kept
// sorted by prime with strictly increasing primes.
class FactoredInteger {
 public:
  FactoredInteger() : value_(1) {}

  // Validates primality of every prime, merges duplicates and sorts.
  static FactoredInteger from_factors(std::vector<PrimePower> factors);

  const Int& value() const noexcept { return value_; }
  const std::vector<PrimePower>& factors() const noexcept { return factors_; }

  // d(n): product of (e_i + 1).
  Int divisor_count() const;

  FactoredInteger operator*(const FactoredInteger& other) const;

  friend bool operator==(const FactoredInteger&, const FactoredInteger&) = default;

 private:
  Int value_;
  std::vector<PrimePower> factors_;
};

inline constexpr std::uint64_t kDefaultFactorBudget = 100'000'000;
inline constexpr std::uint32_t kTrialDivisionLimit = 1'000'000;

// Raised by factor() when the step budget runs out. Carries what was found
// so far: partial.value() * cofactor == n.
class FactorBudgetError : public Error {
 public:
  FactorBudgetError(FactoredInteger partial, Int cofactor);

  const FactoredInteger& partial() const noexcept { return partial_; }
  const Int& cofactor() const noexcept { return cofactor_; }

 private:
  FactoredInteger partial_;
  Int cofactor_;
};

// Trial division to 10^6, then Pollard rho with Brent's cycle detection on
// x^2 + c starting at c = 1. One step is one trial division or one rho
// iteration.
FactoredInteger factor(const Int& n, std::uint64_t budget = kDefaultFactorBudget);

inline constexpr std::size_t kDefaultDivisorCap = std::size_t{1} << 20;

// All divisors of f.value() in [lo, hi], ascending. Throws cap_exceeded if
// more than `cap` would be produced.
std::vector<Int> divisors_in_interval(const FactoredInteger& f, const Int& lo,
                                      const Int& hi,
                                      std::size_t cap = kDefaultDivisorCap);

// (sum_{n <= x} d(n)) / x, exact, using the Dirichlet hyperbola identity.
Rational divisor_average(const Int& x);

// Euler-Mascheroni constant to 50 digits. Only used for comparisons.
inline constexpr std::string_view kEulerGamma =
    "0.57721566490153286060651209008240243104215933593992";

}  // namespace twistfactor
