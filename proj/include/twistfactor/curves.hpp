#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "twistfactor/arith.hpp"

namespace twistfactor {

enum class Convention { affine, projective };

// y^2 = x^3 + a x + b over Z/mZ. Construct through make_curve, which enforces
// gcd(6, m) = 1 and gcd(4a^3 + 27b^2, m) = 1.
struct CurveSpec {
  Int a;
  Int b;
  Int modulus;

  friend bool operator==(const CurveSpec&, const CurveSpec&) = default;
};

CurveSpec make_curve(const Int& a, const Int& b, const Int& modulus);

// 4a^3 + 27b^2 (not reduced).
Int curve_discriminant(const Int& a, const Int& b);

struct PrimeLocalCount {
  Int p;
  Int affine;
  Int projective;
  Int trace;  // p + 1 - projective
};

struct CountsModN {
  Int n;
  Int affine;
  Int projective;

  const Int& get(Convention c) const {
    return c == Convention::affine ? affine : projective;
  }
  friend bool operator==(const CountsModN&, const CountsModN&) = default;
};

inline constexpr unsigned kMaxCountBits = 26;

// Exhaustive character-sum count over a prime field: affine count is
// sum_x (1 + chi(x^3 + a x + b)). The modulus must be a prime below 2^26.
PrimeLocalCount count_points_prime(const CurveSpec& curve);

// Counts of a curve modulo N = p q, from the two local counts.
CountsModN count_points_modN(const CurveSpec& curve, const Int& p, const Int& q);

// Short Weierstrass model (a d^2, b d^3) of d y^2 = x^3 + a x + b.
CurveSpec twist(const CurveSpec& curve, const Int& d);

// (d/p); the twist's local trace is trace_sign_class(d, p) * a_p.
int trace_sign_class(const Int& d, const Int& p);

// Squarefree non-squares 2, 3, 5, 6, 7, 10, ... up to ceil(2 * bits(N)^2),
// truncated to `limit` entries when given.
std::vector<Int> nonresidue_scan(const Int& n, std::optional<std::size_t> limit = {});

// Largest |t| with t^2 <= 4p.
Int hasse_bound(const Int& p);

}  // namespace twistfactor
