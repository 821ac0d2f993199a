#include "twistfactor/curves.hpp"

#include <cstdint>

namespace twistfactor {

Int curve_discriminant(const Int& a, const Int& b) {
  return 4 * a * a * a + 27 * b * b;
}

CurveSpec make_curve(const Int& a, const Int& b, const Int& modulus) {
  if (modulus < 5) {
    throw Error(ErrorCode::invalid_argument, "curve modulus must be >= 5");
  }
  Int g;
  const Int six = 6;
  mpz_gcd(g.get_mpz_t(), six.get_mpz_t(), modulus.get_mpz_t());
  if (g != 1) {
    throw Error(ErrorCode::invalid_argument,
                "curve modulus must be coprime to 6, got " + to_dec(modulus));
  }
  CurveSpec c;
  mpz_mod(c.a.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t());
  mpz_mod(c.b.get_mpz_t(), b.get_mpz_t(), modulus.get_mpz_t());
  c.modulus = modulus;
  const Int disc = curve_discriminant(c.a, c.b);
  mpz_gcd(g.get_mpz_t(), disc.get_mpz_t(), modulus.get_mpz_t());
  if (g != 1) {
    throw Error(ErrorCode::singular_curve,
                "curve is singular modulo a factor of " + to_dec(modulus));
  }
  return c;
}

PrimeLocalCount count_points_prime(const CurveSpec& curve) {
  const Int& p = curve.modulus;
  if (mpz_sizeinbase(p.get_mpz_t(), 2) > kMaxCountBits) {
    throw Error(ErrorCode::modulus_too_large,
                "exhaustive counting is limited to primes below 2^26");
  }
  if (!is_prime(p)) {
    throw Error(ErrorCode::invalid_argument, "count_points_prime needs a prime modulus");
  }
  const Int disc = curve_discriminant(curve.a, curve.b);
  if (mpz_divisible_p(disc.get_mpz_t(), p.get_mpz_t()) != 0) {
    throw Error(ErrorCode::singular_curve, "curve is singular modulo " + to_dec(p));
  }

  const std::uint64_t m = p.get_ui();
  const std::uint64_t a = Int(curve.a % p).get_ui();
  const std::uint64_t b = Int(curve.b % p).get_ui();

  // Bitset of nonzero squares mod p, filled with (y+1)^2 = y^2 + 2y + 1.
  std::vector<std::uint64_t> square(m / 64 + 1, 0);
  for (std::uint64_t y = 1, sq = 1; y <= m / 2; ++y) {
    square[sq >> 6] |= std::uint64_t{1} << (sq & 63);
    sq += 2 * y + 1;
    while (sq >= m) sq -= m;
  }

  // f(x) = x^3 + a x + b stepped by forward differences:
  // f(x+1) - f(x) = 3x^2 + 3x + 1 + a, whose own difference is 6x + 6.
  std::int64_t char_sum = 0;
  std::uint64_t f = b % m;
  std::uint64_t d1 = (1 + a) % m;
  std::uint64_t d2 = 6 % m;
  for (std::uint64_t x = 0; x < m; ++x) {
    if (f != 0) {
      char_sum += ((square[f >> 6] >> (f & 63)) & 1) != 0 ? 1 : -1;
    }
    f += d1;
    if (f >= m) f -= m;
    d1 += d2;
    if (d1 >= m) d1 -= m;
    d2 += 6;
    while (d2 >= m) d2 -= m;
  }

  PrimeLocalCount out;
  out.p = p;
  out.affine = p + char_sum;
  out.projective = out.affine + 1;
  out.trace = -Int(char_sum);
  return out;
}

namespace {

CurveSpec make_local(const CurveSpec& curve, const Int& prime) {
  return make_curve(curve.a, curve.b, prime);
}

}  // namespace

CountsModN count_points_modN(const CurveSpec& curve, const Int& p, const Int& q) {
  if (p == q) throw Error(ErrorCode::invalid_argument, "count_points_modN needs p != q");
  if (p * q != curve.modulus) {
    throw Error(ErrorCode::invalid_argument, "p * q does not equal the curve modulus");
  }
  const PrimeLocalCount lp = count_points_prime(make_local(curve, p));
  const PrimeLocalCount lq = count_points_prime(make_local(curve, q));
  return {curve.modulus, lp.affine * lq.affine, lp.projective * lq.projective};
}

CurveSpec twist(const CurveSpec& curve, const Int& d) {
  Int g;
  mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), curve.modulus.get_mpz_t());
  if (g != 1) {
    throw Error(ErrorCode::not_invertible,
                "twist multiplier " + to_dec(d) + " is not invertible mod " +
                    to_dec(curve.modulus));
  }
  const Int d2 = d * d;
  return make_curve(curve.a * d2, curve.b * d2 * d, curve.modulus);
}

int trace_sign_class(const Int& d, const Int& p) {
  const int s = jacobi(d, p);
  if (s == 0) {
    throw Error(ErrorCode::invalid_argument, "trace_sign_class needs gcd(d, p) = 1");
  }
  return s;
}

std::vector<Int> nonresidue_scan(const Int& n, std::optional<std::size_t> limit) {
  const std::uint64_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  const std::uint64_t bound = 2 * bits * bits;
  std::vector<Int> out;
  for (std::uint64_t d = 2; d <= bound; ++d) {
    if (limit && out.size() >= *limit) break;
    bool squarefree = true;
    for (std::uint64_t f = 2; f * f <= d; ++f) {
      if (d % (f * f) == 0) {
        squarefree = false;
        break;
      }
    }
    // Squarefree d >= 2 is never a perfect square.
    if (squarefree) out.emplace_back(static_cast<unsigned long>(d));
  }
  return out;
}

Int hasse_bound(const Int& p) { return isqrt(4 * p); }

}  // namespace twistfactor
