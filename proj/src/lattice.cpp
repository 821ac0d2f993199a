#include "twistfactor/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

namespace twistfactor {

IntMatrix::IntMatrix(std::vector<IntVector> rows) : rows_(std::move(rows)) {
  for (const auto& r : rows_) {
    if (r.size() != rows_.front().size()) {
      throw Error(ErrorCode::invalid_argument, "matrix rows have different lengths");
    }
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  std::vector<IntVector> rows(n, IntVector(n, Int(0)));
  for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1;
  return IntMatrix(std::move(rows));
}

Int dot(const IntVector& x, const IntVector& y) {
  Int s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mpz_addmul(s.get_mpz_t(), x[i].get_mpz_t(), y[i].get_mpz_t());
  return s;
}

Int gram_determinant(const IntMatrix& basis) {
  const std::size_t n = basis.rows();
  std::vector<IntVector> g(n, IntVector(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) g[i][j] = g[j][i] = dot(basis[i], basis[j]);
  }
  // Bareiss elimination; every division is exact.
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (g[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && g[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(g[k], g[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        g[i][j] = g[i][j] * g[k][k] - g[i][k] * g[k][j];
        mpz_divexact(g[i][j].get_mpz_t(), g[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = g[k][k];
  }
  return n == 0 ? Int(1) : Int(sign * g[n - 1][n - 1]);
}

IntPolynomial::IntPolynomial(std::vector<Int> coefficients) : coeffs_(std::move(coefficients)) {
  trim();
}

void IntPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Int IntPolynomial::operator()(const Int& x) const {
  Int acc = 0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    acc *= x;
    acc += coeffs_[i];
  }
  return acc;
}

IntPolynomial IntPolynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Int> out(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) out[i - 1] = coeffs_[i] * static_cast<unsigned long>(i);
  return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::operator*(const IntPolynomial& other) const {
  if (is_zero() || other.is_zero()) return {};
  std::vector<Int> out(coeffs_.size() + other.coeffs_.size() - 1, Int(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < other.coeffs_.size(); ++j) {
      mpz_addmul(out[i + j].get_mpz_t(), coeffs_[i].get_mpz_t(), other.coeffs_[j].get_mpz_t());
    }
  }
  return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::operator*(const Int& scalar) const {
  std::vector<Int> out = coeffs_;
  for (auto& c : out) c *= scalar;
  return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::shifted(std::size_t k) const {
  if (is_zero()) return {};
  std::vector<Int> out(k, Int(0));
  out.insert(out.end(), coeffs_.begin(), coeffs_.end());
  return IntPolynomial(std::move(out));
}

namespace {

int sign_of(const Int& v) { return sgn(v); }

// Integers k in [lo, hi] such that every sign change of `f` in [lo, hi] lies
// in some [k, k+1], every integer root of f in range is listed, and the list
// contains the same points for f'.
std::set<Int> root_cells(const IntPolynomial& f, const Int& lo, const Int& hi) {
  std::set<Int> cells;
  if (f.degree() <= 0) return cells;

  cells = root_cells(f.derivative(), lo, hi);
  std::set<Int> breaks = {lo, hi};
  for (const Int& k : cells) {
    breaks.insert(k);
    if (k + 1 <= hi) breaks.insert(k + 1);
  }

  std::vector<Int> pts(breaks.begin(), breaks.end());
  std::vector<int> signs(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    signs[i] = sign_of(f(pts[i]));
    if (signs[i] == 0) cells.insert(pts[i]);
  }
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (signs[i] == 0 || signs[i + 1] == 0 || signs[i] == signs[i + 1]) continue;
    // f is monotone on [pts[i], pts[i+1]] unless the segment is a unit cell,
    // in which case there is nothing to bisect.
    Int a = pts[i], b = pts[i + 1];
    const int sa = signs[i];
    while (b - a > 1) {
      Int mid = (a + b) / 2;
      if (mid < a + 1) mid = a + 1;
      const int sm = sign_of(f(mid));
      if (sm == 0) {
        a = mid;
        break;
      }
      (sm == sa ? a : b) = mid;
    }
    cells.insert(a);
  }
  return cells;
}

}  // namespace

std::vector<Int> integer_roots(const IntPolynomial& poly, const Int& bound) {
  if (poly.is_zero()) {
    throw Error(ErrorCode::invalid_argument, "integer_roots of the zero polynomial");
  }
  if (bound < 0) throw Error(ErrorCode::invalid_argument, "root bound must be >= 0");
  std::vector<Int> roots;
  for (const Int& k : root_cells(poly, -bound, bound)) {
    if (poly(k) == 0) roots.push_back(k);
    if (k + 1 <= bound && poly(k + 1) == 0) roots.push_back(k + 1);
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

namespace {

IntMatrix integral_lll(const IntMatrix& basis, const Rational& delta) {
  const std::size_t n = basis.rows();
  if (n == 0) return basis;

  // 1-based to follow the usual statement of integral LLL: d[0] = 1 and
  // d[i] = Gram determinant of b_1..b_i; lam[i][j] = d[j] * mu_ij.
  std::vector<IntVector> b(n + 1);
  for (std::size_t i = 1; i <= n; ++i) b[i] = basis[i - 1];
  std::vector<Int> d(n + 1, Int(0));
  std::vector<std::vector<Int>> lam(n + 1, std::vector<Int>(n + 1, Int(0)));
  const Int dnum = delta.get_num();
  const Int dden = delta.get_den();

  d[0] = 1;
  d[1] = dot(b[1], b[1]);
  if (d[1] == 0) throw Error(ErrorCode::dependent_rows, "lattice basis has a zero row");

  Int q, t, tmp;
  auto reduce = [&](std::size_t k, std::size_t l) {
    tmp = 2 * lam[k][l];
    if (abs(tmp) <= d[l]) return;
    // q = round(lam / d) = floor((2 lam + d) / (2 d))
    tmp += d[l];
    t = 2 * d[l];
    mpz_fdiv_q(q.get_mpz_t(), tmp.get_mpz_t(), t.get_mpz_t());
    for (std::size_t c = 0; c < b[k].size(); ++c) mpz_submul(b[k][c].get_mpz_t(), q.get_mpz_t(), b[l][c].get_mpz_t());
    mpz_submul(lam[k][l].get_mpz_t(), q.get_mpz_t(), d[l].get_mpz_t());
    for (std::size_t i = 1; i < l; ++i) mpz_submul(lam[k][i].get_mpz_t(), q.get_mpz_t(), lam[l][i].get_mpz_t());
  };

  std::size_t k = 2, kmax = 1;
  while (k <= n) {
    if (k > kmax) {
      kmax = k;
      for (std::size_t j = 1; j <= k; ++j) {
        Int u = dot(b[k], b[j]);
        for (std::size_t i = 1; i < j; ++i) {
          u = d[i] * u - lam[k][i] * lam[j][i];
          mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), d[i - 1].get_mpz_t());
        }
        if (j < k) {
          lam[k][j] = u;
        } else {
          if (u == 0) throw Error(ErrorCode::dependent_rows, "lattice basis rows are linearly dependent");
          d[k] = u;
        }
      }
    }

    reduce(k, k - 1);
    const Int& lk = lam[k][k - 1];
    if (dden * (d[k] * d[k - 2] + lk * lk) < dnum * d[k - 1] * d[k - 1]) {
      std::swap(b[k], b[k - 1]);
      for (std::size_t j = 1; j + 1 < k; ++j) std::swap(lam[k][j], lam[k - 1][j]);
      const Int lm = lam[k][k - 1];
      Int big_b = d[k - 2] * d[k] + lm * lm;
      mpz_divexact(big_b.get_mpz_t(), big_b.get_mpz_t(), d[k - 1].get_mpz_t());
      for (std::size_t i = k + 1; i <= kmax; ++i) {
        t = lam[i][k];
        lam[i][k] = d[k] * lam[i][k - 1] - lm * t;
        mpz_divexact(lam[i][k].get_mpz_t(), lam[i][k].get_mpz_t(), d[k - 1].get_mpz_t());
        lam[i][k - 1] = big_b * t + lm * lam[i][k];
        mpz_divexact(lam[i][k - 1].get_mpz_t(), lam[i][k - 1].get_mpz_t(), d[k].get_mpz_t());
      }
      d[k - 1] = big_b;
      k = std::max<std::size_t>(2, k - 1);
      continue;
    }
    for (std::size_t l = k - 1; l-- > 1;) reduce(k, l);
    ++k;
  }

  std::vector<IntVector> out(b.begin() + 1, b.end());
  return IntMatrix(std::move(out));
}

// Coefficients x of a lattice vector strictly shorter than b_1, or nullopt.
// For a reduced basis, |x_j|^2 <= |b_1|^2 (G^-1)_jj and (G^-1)_jj is the
// Gram determinant without row j over the full one, so the box is tiny.
std::optional<std::vector<Int>> shorter_than_first(const IntMatrix& b) {
  const std::size_t n = b.rows();
  const Int det = gram_determinant(b);
  const Int r2 = dot(b[0], b[0]);
  std::vector<long> bound(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<IntVector> minor;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != j) minor.push_back(b[i]);
    }
    const Int cofactor = minor.empty() ? Int(1) : gram_determinant(IntMatrix(std::move(minor)));
    bound[j] = isqrt(r2 * cofactor / det).get_si();
  }

  std::vector<std::vector<Int>> gram(n, std::vector<Int>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) gram[i][j] = dot(b[i], b[j]);
  }

  std::optional<std::vector<Int>> best;
  Int best_norm = r2;
  std::vector<long> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = -bound[j];
  Int norm;
  for (;;) {
    // Skip zero and one of each +-x pair: the last nonzero entry is positive.
    std::size_t last = n;
    for (std::size_t j = n; j-- > 0;) {
      if (x[j] != 0) {
        last = j;
        break;
      }
    }
    if (last < n && x[last] > 0) {
      norm = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (x[j] != 0) norm += gram[i][j] * (x[i] * x[j]);
        }
      }
      if (norm < best_norm) {
        best_norm = norm;
        best.emplace(x.begin(), x.end());
      }
    }
    std::size_t j = 0;
    while (j < n && x[j] == bound[j]) {
      x[j] = -bound[j];
      ++j;
    }
    if (j == n) break;
    ++x[j];
  }
  return best;
}

// Basis of the same lattice starting with sum x_i b_i, for primitive x.
// Euclid steps on x are mirrored by unimodular row operations until a single
// coefficient +-1 remains.
IntMatrix with_front_vector(const IntMatrix& basis, std::vector<Int> x) {
  std::vector<IntVector> b = basis.data();
  const std::size_t n = b.size();
  Int q;
  for (;;) {
    std::size_t pivot = n;
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] == 0) continue;
      ++nonzero;
      if (pivot == n || abs(x[i]) < abs(x[pivot])) pivot = i;
    }
    if (nonzero == 1) {
      if (x[pivot] < 0) {
        for (Int& c : b[pivot]) c = -c;
      }
      std::rotate(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(pivot),
                  b.begin() + static_cast<std::ptrdiff_t>(pivot) + 1);
      return IntMatrix(std::move(b));
    }
    // x_j b_j + x_p b_p = (x_j - q x_p) b_j + x_p (b_p + q b_j)
    for (std::size_t j = 0; j < n; ++j) {
      if (j == pivot || x[j] == 0) continue;
      mpz_tdiv_q(q.get_mpz_t(), x[j].get_mpz_t(), x[pivot].get_mpz_t());
      x[j] -= q * x[pivot];
      for (std::size_t c = 0; c < b[pivot].size(); ++c) b[pivot][c] += q * b[j][c];
    }
  }
}

}  // namespace

IntMatrix lll_reduce(const IntMatrix& basis, const Rational& delta) {
  if (delta <= Rational(1, 4) || delta > 1) {
    throw Error(ErrorCode::invalid_argument, "LLL delta must lie in (1/4, 1]");
  }
  IntMatrix reduced = integral_lll(basis, delta);
  if (reduced.rows() < 2 || reduced.rows() > kShortestVectorRows) return reduced;
  // A shortest first vector is never swapped out again, since any swap at the
  // front would need |b_2| < |b_1|.
  if (auto x = shorter_than_first(reduced)) {
    reduced = integral_lll(with_front_vector(reduced, std::move(*x)), delta);
  }
  return reduced;
}

void CoppersmithParams::validate() const {
  if (multiplicity < 1 || dimension <= multiplicity) {
    throw Error(ErrorCode::invalid_argument, "Coppersmith parameters need k > m >= 1");
  }
  if (beta <= 0 || beta > 1) {
    throw Error(ErrorCode::invalid_argument, "Coppersmith beta must lie in (0, 1]");
  }
}

double root_bound_bits(double log2_n, double log2_divisor, const CoppersmithParams& params) {
  const double m = params.multiplicity;
  const double k = params.dimension;
  return 2.0 / (k - 1) * (m * log2_divisor - 0.5 * std::log2(k) - (k - 1) / 4) -
         m * (m + 1) * log2_n / (k * (k - 1));
}

namespace {

double log2_of(const Int& v) {
  if (v <= 0) return 0.0;
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log2(mant) + static_cast<double>(exp);
}

// Nontrivial gcd(v, n), or 0.
Int nontrivial_gcd(const Int& v, const Int& n) {
  Int g;
  mpz_gcd(g.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
  return (g > 1 && g < n) ? g : Int(0);
}

}  // namespace

namespace {

// Rows g(xX) for the shift polynomials N^(m-i) f^i (0 <= i <= m) and
// x^j f^m (1 <= j < k - m), f = x + A.
IntMatrix howgrave_graham_basis(const Int& n, const Int& approx, const std::vector<Int>& x_pow,
                                const CoppersmithParams& params) {
  const unsigned m = params.multiplicity;
  const unsigned k = params.dimension;
  const IntPolynomial f({approx, Int(1)});

  std::vector<IntPolynomial> shifts;
  IntPolynomial f_pow({Int(1)});
  Int n_pow;
  for (unsigned i = 0; i <= m; ++i) {
    mpz_pow_ui(n_pow.get_mpz_t(), n.get_mpz_t(), m - i);
    shifts.push_back(f_pow * n_pow);
    if (i < m) f_pow = f_pow * f;
  }
  for (unsigned j = 1; m + j < k; ++j) shifts.push_back(f_pow.shifted(j));

  std::vector<IntVector> rows;
  for (const auto& g : shifts) {
    IntVector row(k, Int(0));
    const auto& c = g.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) row[i] = c[i] * x_pow[i];
    rows.push_back(std::move(row));
  }
  return IntMatrix(std::move(rows));
}

std::vector<Int> powers(const Int& x, unsigned k) {
  std::vector<Int> out(k);
  out[0] = 1;
  for (unsigned i = 1; i < k; ++i) out[i] = out[i - 1] * x;
  return out;
}

// Checks every integer root x0, |x0| <= X, of every reduced row.
std::optional<Int> divisor_from_rows(const IntMatrix& reduced, const std::vector<Int>& x_pow,
                                     const Int& n, const Int& approx, const Int& bound) {
  for (std::size_t r = 0; r < reduced.rows(); ++r) {
    std::vector<Int> coeffs(x_pow.size());
    for (std::size_t i = 0; i < x_pow.size(); ++i) {
      mpz_divexact(coeffs[i].get_mpz_t(), reduced[r][i].get_mpz_t(), x_pow[i].get_mpz_t());
    }
    const IntPolynomial h(std::move(coeffs));
    if (h.degree() < 1) continue;
    for (const Int& x0 : integer_roots(h, bound)) {
      if (Int g = nontrivial_gcd(approx + x0, n); g != 0) return g;
    }
  }
  return std::nullopt;
}

// Each row as G(y) -> G(y + 2) (Taylor shift). Moving the center of f by 2X
// maps the lattice for the old center onto the lattice for the new one.
IntMatrix shift_rows_by_two(const IntMatrix& rows) {
  std::vector<IntVector> out = rows.data();
  for (IntVector& c : out) {
    const std::size_t k = c.size();
    for (std::size_t i = 0; i + 1 < k; ++i) {
      for (std::size_t j = k - 1; j > i; --j) mpz_addmul_ui(c[j - 1].get_mpz_t(), c[j].get_mpz_t(), 2);
    }
  }
  return IntMatrix(std::move(out));
}

}  // namespace

DivisorSearch approx_divisor(const Int& n, const Int& approx, const Int& bound,
                             const CoppersmithParams& params) {
  params.validate();
  if (bound < 0) throw Error(ErrorCode::invalid_argument, "root bound X must be >= 0");
  if (n < 4) throw Error(ErrorCode::invalid_argument, "approx_divisor needs a composite N");

  DivisorSearch out;
  if (bound == 0) {
    if (Int g = nontrivial_gcd(approx, n); g != 0) {
      out.status = SearchStatus::found;
      out.divisor = g;
    }
    return out;
  }

  const std::vector<Int> x_pow = powers(bound, params.dimension);
  const IntMatrix reduced = lll_reduce(howgrave_graham_basis(n, approx, x_pow, params));
  ++out.lattice_calls;
  if (auto g = divisor_from_rows(reduced, x_pow, n, approx, bound)) {
    out.status = SearchStatus::found;
    out.divisor = *g;
  }
  return out;
}

DivisorSearch find_divisor_near(const Int& n, const Int& center, const Int& bound,
                                double log2_divisor, const CoppersmithParams& params,
                                unsigned max_offset_bits) {
  params.validate();
  if (bound <= 0) return approx_divisor(n, center, 0, params);

  const double capacity = root_bound_bits(log2_of(n), log2_divisor, params);
  const double excess = log2_of(bound) - std::max(capacity, 0.0);
  const unsigned split_bits = excess <= 0 ? 0U : static_cast<unsigned>(std::ceil(excess));

  DivisorSearch out;
  if (split_bits > max_offset_bits) {
    out.status = SearchStatus::budget_exceeded;
    return out;
  }
  if (split_bits == 0) return approx_divisor(n, center, bound, params);

  // Pieces [c - h, c + h] with c stepping by 2h. Each lattice after the first
  // is the previous reduced basis moved to the new center, which LLL finishes
  // far faster than a fresh basis.
  const Int pieces = Int(1) << split_bits;
  const Int half = ceil_div(bound, pieces);
  const std::vector<Int> x_pow = powers(half, params.dimension);
  Int piece_center = center - bound + half;
  IntMatrix reduced = howgrave_graham_basis(n, piece_center, x_pow, params);
  for (Int j = 0; j < pieces; ++j) {
    if (j > 0) {
      reduced = shift_rows_by_two(reduced);
      piece_center += 2 * half;
    }
    reduced = lll_reduce(reduced);
    ++out.lattice_calls;
    if (auto g = divisor_from_rows(reduced, x_pow, n, piece_center, half)) {
      out.status = SearchStatus::found;
      out.divisor = *g;
      return out;
    }
  }
  return out;
}

DivisorSearch factor_high_bits(const Int& n, const Int& high, unsigned t,
                               const CoppersmithParams& params, unsigned max_offset_bits) {
  if (high < 1) throw Error(ErrorCode::invalid_argument, "known high part must be >= 1");
  const Int base = high << t;
  if (base > isqrt(4 * n)) {
    throw Error(ErrorCode::invalid_argument, "high bits exceed 2 sqrt(N)");
  }
  if (t == 0) return approx_divisor(n, high, 0, params);
  const Int half = Int(1) << (t - 1);
  return find_divisor_near(n, base + half, half, log2_of(base), params, max_offset_bits);
}

DivisorSearch divisor_from_residue(const Int& n, const Int& residue, const Int& modulus,
                                   const CoppersmithParams& params) {
  if (modulus < 2) throw Error(ErrorCode::invalid_argument, "residue modulus must be >= 2");
  if (n < 4) throw Error(ErrorCode::invalid_argument, "divisor_from_residue needs a composite N");
  params.validate();

  DivisorSearch out;
  Int r;
  mpz_mod(r.get_mpz_t(), residue.get_mpz_t(), modulus.get_mpz_t());

  Int g;
  mpz_gcd(g.get_mpz_t(), modulus.get_mpz_t(), n.get_mpz_t());
  if (g > 1 && g < n) {
    out.status = SearchStatus::found;
    out.divisor = g;
    return out;
  }
  if (r > 1 && r < n && mpz_divisible_p(n.get_mpz_t(), r.get_mpz_t()) != 0) {
    out.status = SearchStatus::found;
    out.divisor = r;
    return out;
  }
  if (g != 1) return out;
  const Int m2 = modulus * modulus;
  if (m2 * m2 < n) return out;

  // p = modulus * x0 + r with 0 <= x0 <= X. Then x0 is a root modulo p of
  // x + r / modulus (mod N).
  Int inv;
  mpz_invert(inv.get_mpz_t(), modulus.get_mpz_t(), n.get_mpz_t());
  Int shift = r * inv % n;
  const Int root_bound = (isqrt(2 * n) + 1) / modulus + 1;
  const Int half = ceil_div(root_bound, 2);
  const double log2_divisor =
      log2_of(n) * params.beta.get_d();
  return find_divisor_near(n, shift + half, half, log2_divisor, params, kDefaultOffsetBits);
}

}  // namespace twistfactor
