#pragma once

#include <cstdint>
#include <vector>

#include "twistfactor/arith.hpp"

namespace twistfactor {

using IntVector = std::vector<Int>;

// Row-major lattice basis; every row has the same length.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(std::vector<IntVector> rows);

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return rows_.empty() ? 0 : rows_.front().size(); }

  const IntVector& operator[](std::size_t i) const { return rows_[i]; }
  IntVector& operator[](std::size_t i) { return rows_[i]; }
  const std::vector<IntVector>& data() const noexcept { return rows_; }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::vector<IntVector> rows_;
};

Int dot(const IntVector& x, const IntVector& y);

// Determinant of the Gram matrix B B^T, computed with fraction-free
// elimination.
Int gram_determinant(const IntMatrix& basis);

// Univariate polynomial with integer coefficients, ascending degree. The
// zero polynomial has no coefficients.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<Int> coefficients);

  const std::vector<Int>& coefficients() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  // -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

  Int operator()(const Int& x) const;
  IntPolynomial derivative() const;

  IntPolynomial operator*(const IntPolynomial& other) const;
  IntPolynomial operator*(const Int& scalar) const;
  // Multiplication by x^k.
  IntPolynomial shifted(std::size_t k) const;

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

 private:
  void trim();
  std::vector<Int> coeffs_;
};

// All integer roots of `poly` in [-bound, bound], ascending. Roots are
// located by bisection on monotone pieces whose breakpoints come from the
// derivative's roots, recursively.
std::vector<Int> integer_roots(const IntPolynomial& poly, const Int& bound);

// Bases with at most this many rows also get a shortest first vector.
inline constexpr std::size_t kShortestVectorRows = 4;

// Integral LLL (exact Gram-Schmidt kept as integers d_i and lambda_ij).
// The result spans the same lattice, is size reduced and satisfies the
// Lovasz condition with parameter delta in (1/4, 1]. With at most
// kShortestVectorRows rows a shortest vector found by enumeration is moved to
// the front before a final pass. Throws dependent_rows.
IntMatrix lll_reduce(const IntMatrix& basis, const Rational& delta = Rational(3, 4));

struct CoppersmithParams {
  unsigned multiplicity = 4;  // m
  unsigned dimension = 9;     // k
  Rational beta{1, 2};

  void validate() const;
};

// Largest log2(X) for which the Howgrave-Graham lattice built from `params`
// provably exposes a root of x + A modulo a divisor of size 2^log2_divisor,
// given the LLL approximation factor 2^((k-1)/4).
double root_bound_bits(double log2_n, double log2_divisor, const CoppersmithParams& params);

enum class SearchStatus { found, not_found, budget_exceeded };

struct DivisorSearch {
  SearchStatus status = SearchStatus::not_found;
  Int divisor;  // nontrivial divisor of N when status == found
  std::uint64_t lattice_calls = 0;

  bool found() const noexcept { return status == SearchStatus::found; }
};

// Finds a divisor p of N with |p - A| <= X. Builds the lattice of
// x^j N^max(m-i,0) (x + A)^i evaluated at xX, reduces it, and checks every
// integer root x0 of every reduced row via gcd(A + x0, N). Never reports a
// non-divisor.
DivisorSearch approx_divisor(const Int& n, const Int& approx, const Int& bound,
                             const CoppersmithParams& params = {});

// approx_divisor over [center - X, center + X], split into 2^s equal pieces
// when X exceeds root_bound_bits by s bits. Gives up with budget_exceeded
// when s > max_offset_bits. `log2_divisor` is a lower bound on log2(p).
DivisorSearch find_divisor_near(const Int& n, const Int& center, const Int& bound,
                                double log2_divisor, const CoppersmithParams& params,
                                unsigned max_offset_bits);

inline constexpr unsigned kDefaultOffsetBits = 12;

// p = high * 2^t + (unknown t bits).
DivisorSearch factor_high_bits(const Int& n, const Int& high, unsigned t,
                               const CoppersmithParams& params = {},
                               unsigned max_offset_bits = kDefaultOffsetBits);

// Finds p | N with p = r (mod m). Requires m^4 >= N; smaller moduli report
// not_found without building a lattice. The root bound assumes p < sqrt(2N).
DivisorSearch divisor_from_residue(const Int& n, const Int& residue, const Int& modulus,
                                   const CoppersmithParams& params = {});

}  // namespace twistfactor
