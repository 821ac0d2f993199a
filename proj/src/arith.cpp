#include "twistfactor/arith.hpp"

#include <algorithm>
#include <array>
#include <optional>

namespace twistfactor {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::singular_curve: return "singular-curve";
    case ErrorCode::modulus_too_large: return "modulus-too-large";
    case ErrorCode::not_invertible: return "d-not-invertible";
    case ErrorCode::budget_exhausted: return "budget-exhausted";
    case ErrorCode::cap_exceeded: return "cap-exceeded";
    case ErrorCode::dependent_rows: return "dependent-rows";
    case ErrorCode::all_hypotheses_failed: return "all-hypotheses-failed";
    case ErrorCode::degenerate_gcd: return "degenerate-gcd";
    case ErrorCode::scan_budget_exhausted: return "scan-budget-exhausted";
    case ErrorCode::no_divisor_in_window: return "no-divisor-in-window";
    case ErrorCode::coppersmith_exhausted: return "coppersmith-exhausted";
    case ErrorCode::parse_error: return "parse-error";
  }
  return "unknown";
}

Int parse_int(std::string_view text) {
  std::string_view digits = text;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
    digits.remove_prefix(1);
  }
  if (digits.empty() ||
      !std::all_of(digits.begin(), digits.end(),
                   [](char c) { return c >= '0' && c <= '9'; })) {
    throw Error(ErrorCode::parse_error,
                "not a decimal integer: '" + std::string(text) + "'");
  }
  std::string s(text.front() == '+' ? text.substr(1) : text);
  return Int(s, 10);
}

std::string to_dec(const Int& value) { return value.get_str(10); }

Int isqrt(const Int& n) {
  if (n < 0) throw Error(ErrorCode::invalid_argument, "isqrt of a negative number");
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

bool is_perfect_square(const Int& n, Int* root) {
  if (n < 0) return false;
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return false;
  if (root != nullptr) mpz_sqrt(root->get_mpz_t(), n.get_mpz_t());
  return true;
}

Int ceil_div(const Int& n, const Int& d) {
  Int r;
  mpz_cdiv_q(r.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  return r;
}

int jacobi(const Int& a, const Int& m) {
  if (m < 3 || mpz_even_p(m.get_mpz_t())) {
    throw Error(ErrorCode::invalid_argument,
                "jacobi symbol needs an odd modulus >= 3, got " + to_dec(m));
  }
  return mpz_jacobi(a.get_mpz_t(), m.get_mpz_t());
}

namespace {

constexpr std::array<unsigned long, 13> kWitnesses = {2,  3,  5,  7,  11, 13, 17,
                                                      19, 23, 29, 31, 37, 41};

const Int& deterministic_mr_limit() {
  static const Int limit("3317044064679887385961981", 10);
  return limit;
}

bool miller_rabin(const Int& n, const Int& witness) {
  Int d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  Int x;
  mpz_powm(x.get_mpz_t(), witness.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  const Int n_minus_1 = n - 1;
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned long i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kTrialDivisionLimit + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= kTrialDivisionLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t{i} * i; j <= kTrialDivisionLimit; j += i) {
        composite[j] = true;
      }
    }
    return out;
  }();
  return primes;
}

}  // namespace

bool is_prime(const Int& n) {
  if (n < 2) return false;
  for (unsigned long p : kWitnesses) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) return false;
  }
  for (unsigned long p : kWitnesses) {
    if (!miller_rabin(n, Int(p))) return false;
  }
  if (n < deterministic_mr_limit()) return true;
  // BPSW followed by 64 Miller-Rabin rounds.
  return mpz_probab_prime_p(n.get_mpz_t(), 88) != 0;
}

FactoredInteger FactoredInteger::from_factors(std::vector<PrimePower> factors) {
  std::sort(factors.begin(), factors.end(),
            [](const PrimePower& x, const PrimePower& y) { return x.prime < y.prime; });
  FactoredInteger out;
  for (auto& f : factors) {
    if (f.exponent == 0) continue;
    if (!is_prime(f.prime)) {
      throw Error(ErrorCode::invalid_argument, "not a prime: " + to_dec(f.prime));
    }
    if (!out.factors_.empty() && out.factors_.back().prime == f.prime) {
      out.factors_.back().exponent += f.exponent;
    } else {
      out.factors_.push_back(f);
    }
    Int pw;
    mpz_pow_ui(pw.get_mpz_t(), f.prime.get_mpz_t(), f.exponent);
    out.value_ *= pw;
  }
  return out;
}

Int FactoredInteger::divisor_count() const {
  Int count = 1;
  for (const auto& f : factors_) count *= f.exponent + 1;
  return count;
}

FactoredInteger FactoredInteger::operator*(const FactoredInteger& other) const {
  std::vector<PrimePower> merged = factors_;
  merged.insert(merged.end(), other.factors_.begin(), other.factors_.end());
  return from_factors(std::move(merged));
}

FactorBudgetError::FactorBudgetError(FactoredInteger partial, Int cofactor)
    : Error(ErrorCode::budget_exhausted,
            "factorization budget exhausted; unfactored cofactor " + to_dec(cofactor)),
      partial_(std::move(partial)),
      cofactor_(std::move(cofactor)) {}

namespace {

// Brent's variant of Pollard rho. Returns a nontrivial divisor of the odd
// composite n, or nullopt when the step budget runs out.
std::optional<Int> brent_rho(const Int& n, std::uint64_t& steps, std::uint64_t budget) {
  constexpr std::uint64_t kBatch = 128;
  for (unsigned long c = 1;; ++c) {
    Int y = 2, x, ys, q = 1, g = 1, diff;
    std::uint64_t r = 1;
    auto step = [&](Int& v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) step(y);
      steps += r;
      std::uint64_t k = 0;
      do {
        ys = y;
        const std::uint64_t batch = std::min(kBatch, r - k);
        for (std::uint64_t i = 0; i < batch; ++i) {
          step(y);
          diff = x - y;
          q = q * abs(diff) % n;
        }
        steps += batch;
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += kBatch;
      } while (k < r && g == 1);
      r *= 2;
      if (steps > budget) return std::nullopt;
    } while (g == 1);
    if (g == n) {
      // The batched product overshot; retrace one step at a time.
      do {
        step(ys);
        diff = x - ys;
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        ++steps;
      } while (g == 1);
    }
    if (g != n) return g;
    if (steps > budget) return std::nullopt;
  }
}

}  // namespace

FactoredInteger factor(const Int& n, std::uint64_t budget) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "factor() needs n >= 1");
  std::vector<PrimePower> found;
  Int rest = n;
  std::uint64_t steps = 0;

  for (std::uint32_t p : small_primes()) {
    if (Int(p) * p > rest) break;
    if (++steps > budget) {
      throw FactorBudgetError(FactoredInteger::from_factors(found), rest);
    }
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p) == 0) continue;
    unsigned e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++e;
    }
    found.push_back({Int(p), e});
  }

  std::vector<Int> pending;
  if (rest > 1) pending.push_back(rest);
  while (!pending.empty()) {
    Int c = std::move(pending.back());
    pending.pop_back();
    if (is_prime(c)) {
      found.push_back({c, 1});
      continue;
    }
    auto d = brent_rho(c, steps, budget);
    if (!d) {
      Int cofactor = c;
      for (const auto& other : pending) cofactor *= other;
      throw FactorBudgetError(FactoredInteger::from_factors(found), cofactor);
    }
    pending.push_back(c / *d);
    pending.push_back(*d);
  }
  return FactoredInteger::from_factors(std::move(found));
}

std::vector<Int> divisors_in_interval(const FactoredInteger& f, const Int& lo,
                                      const Int& hi, std::size_t cap) {
  if (lo > hi) throw Error(ErrorCode::invalid_argument, "divisor interval has lo > hi");
  if (cap == 0) throw Error(ErrorCode::invalid_argument, "divisor cap must be >= 1");

  const auto& fs = f.factors();
  // remaining[i] = product of the prime powers at positions >= i; bounds the
  // largest divisor reachable from a partial product.
  std::vector<Int> remaining(fs.size() + 1, Int(1));
  for (std::size_t i = fs.size(); i-- > 0;) {
    Int pw;
    mpz_pow_ui(pw.get_mpz_t(), fs[i].prime.get_mpz_t(), fs[i].exponent);
    remaining[i] = remaining[i + 1] * pw;
  }

  std::vector<Int> out;
  auto visit = [&](auto& self, std::size_t i, const Int& d) -> void {
    if (d > hi || d * remaining[i] < lo) return;
    if (i == fs.size()) {
      if (out.size() == cap) {
        throw Error(ErrorCode::cap_exceeded,
                    "more than " + std::to_string(cap) + " divisors in interval");
      }
      out.push_back(d);
      return;
    }
    Int cur = d;
    for (unsigned e = 0; e <= fs[i].exponent; ++e) {
      if (cur > hi) break;
      self(self, i + 1, cur);
      cur *= fs[i].prime;
    }
  };
  visit(visit, 0, Int(1));
  std::sort(out.begin(), out.end());
  return out;
}

Rational divisor_average(const Int& x) {
  if (x < 1) throw Error(ErrorCode::invalid_argument, "divisor_average needs x >= 1");
  // sum_{n<=x} d(n) = 2 * sum_{k<=r} floor(x/k) - r^2 with r = isqrt(x).
  const Int r = isqrt(x);
  Int sum = 0;
  for (Int k = 1; k <= r; ++k) sum += x / k;
  sum = 2 * sum - r * r;
  Rational avg(sum, x);
  avg.canonicalize();
  return avg;
}

}  // namespace twistfactor
