#include <random>

#include "doctest.h"
#include "expect.hpp"
#include "oracles.hpp"
#include "twistfactor/arith.hpp"

using namespace twistfactor;

TEST_CASE("decimal parsing accepts only signed digit strings") {
  CHECK(parse_int("0") == 0);
  CHECK(parse_int("-17") == -17);
  CHECK(parse_int("+5") == 5);
  CHECK(to_dec(parse_int("340282366920938463463374607431768211457")) ==
        "340282366920938463463374607431768211457");
  for (const char* bad : {"", "-", "1e5", " 3", "3 ", "0x10", "+-3", "12a"}) {
    CAPTURE(bad);
    CHECK(error_code_of([&] { parse_int(bad); }) == ErrorCode::parse_error);
  }
}

TEST_CASE("isqrt and perfect squares") {
  for (long n = 0; n < 5000; ++n) {
    long r = 0;
    while ((r + 1) * (r + 1) <= n) ++r;
    CHECK(isqrt(Int(n)) == r);
    Int root;
    CHECK(is_perfect_square(Int(n), &root) == (r * r == n));
    if (r * r == n) CHECK(root == r);
  }
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Int n = (Int(static_cast<unsigned long>(rng())) << 64) + static_cast<unsigned long>(rng());
    const Int r = isqrt(n);
    CHECK(r * r <= n);
    CHECK((r + 1) * (r + 1) > n);
    CHECK(is_perfect_square(r * r));
    CHECK_FALSE(is_perfect_square(r * r + 1 + (r > 0 ? 0 : 1)));
  }
  CHECK_FALSE(is_perfect_square(Int(-4)));
  CHECK(error_code_of([] { isqrt(Int(-1)); }) == ErrorCode::invalid_argument);
}

TEST_CASE("ceil_div") {
  CHECK(ceil_div(Int(7), Int(2)) == 4);
  CHECK(ceil_div(Int(8), Int(2)) == 4);
  CHECK(ceil_div(Int(-7), Int(2)) == -3);
  CHECK(ceil_div(Int(0), Int(5)) == 0);
}

TEST_CASE("Jacobi symbol against Euler's criterion and multiplicativity") {
  for (long p : {3L, 5L, 7L, 11L, 101L, 65537L}) {
    for (long a = -20; a < 60; ++a) {
      Int e;
      const Int base = ((Int(a) % p) + p) % p;
      mpz_powm_ui(e.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>((p - 1) / 2),
                  Int(p).get_mpz_t());
      const int euler = e == 0 ? 0 : (e == 1 ? 1 : -1);
      CHECK(jacobi(Int(a), Int(p)) == euler);
    }
  }
  for (long a = 1; a < 40; ++a) CHECK(jacobi(Int(a), Int(35)) == jacobi(Int(a), Int(5)) * jacobi(Int(a), Int(7)));
  CHECK(error_code_of([] { jacobi(Int(3), Int(8)); }) == ErrorCode::invalid_argument);
  CHECK(error_code_of([] { jacobi(Int(3), Int(1)); }) == ErrorCode::invalid_argument);
}

TEST_CASE("primality against a sieve and known pseudoprimes") {
  const long limit = 100000;
  std::vector<bool> composite(limit + 1, false);
  composite[0] = composite[1] = true;
  for (long i = 2; i * i <= limit; ++i) {
    if (!composite[static_cast<std::size_t>(i)]) {
      for (long j = i * i; j <= limit; j += i) composite[static_cast<std::size_t>(j)] = true;
    }
  }
  for (long n = 0; n <= limit; ++n) CHECK(is_prime(Int(n)) == !composite[static_cast<std::size_t>(n)]);

  // Carmichael numbers and strong pseudoprimes to several small bases.
  for (const char* c : {"561", "41041", "3215031751", "3825123056546413051",
                        "318665857834031151167461"}) {
    CAPTURE(c);
    CHECK_FALSE(is_prime(parse_int(c)));
  }
  CHECK(is_prime((Int(1) << 127) - 1));
  CHECK(is_prime((Int(1) << 89) - 1));
  CHECK_FALSE(is_prime((Int(1) << 128) + 1));
  CHECK_FALSE(is_prime(((Int(1) << 61) - 1) * ((Int(1) << 89) - 1)));
  CHECK_FALSE(is_prime(Int(-7)));
}

TEST_CASE("factorizations multiply back and have prime parts") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 60; ++i) {
    Int n = Int(static_cast<unsigned long>(rng() >> (i % 40))) + 2;
    if (i % 3 == 0) {
      Int p = Int(static_cast<unsigned long>(rng() >> 34)), q = Int(static_cast<unsigned long>(rng() >> 34));
      mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
      mpz_nextprime(q.get_mpz_t(), q.get_mpz_t());
      n = p * q;
    }
    const FactoredInteger f = factor(n);
    Int product = 1;
    Int prev = 0;
    for (const auto& pp : f.factors()) {
      CHECK(is_prime(pp.prime));
      CHECK(pp.prime > prev);
      CHECK(pp.exponent >= 1);
      prev = pp.prime;
      for (unsigned e = 0; e < pp.exponent; ++e) product *= pp.prime;
    }
    CHECK(product == n);
    CHECK(f.value() == n);
  }
  CHECK(factor(Int(1)).factors().empty());
  CHECK(error_code_of([] { factor(Int(0)); }) == ErrorCode::invalid_argument);
}

TEST_CASE("factor budget exhaustion keeps the partial factorization") {
  const Int p = parse_int("1000000000000000003");
  const Int q = parse_int("1000000000000000009");
  const Int n = 2 * 3 * 3 * p * q;
  try {
    factor(n, 50);
    FAIL("expected a budget error");
  } catch (const FactorBudgetError& e) {
    CHECK(e.code() == ErrorCode::budget_exhausted);
    CHECK(e.partial().value() * e.cofactor() == n);
  }
}

TEST_CASE("FactoredInteger validates, merges and multiplies") {
  const FactoredInteger f = FactoredInteger::from_factors({{7, 1}, {2, 2}, {7, 2}});
  CHECK(f.value() == 4 * 343);
  REQUIRE(f.factors().size() == 2);
  CHECK(f.factors()[0] == PrimePower{2, 2});
  CHECK(f.factors()[1] == PrimePower{7, 3});
  CHECK(f.divisor_count() == 12);
  CHECK((f * FactoredInteger::from_factors({{3, 1}, {2, 1}})).value() == 4 * 343 * 6);
  CHECK(error_code_of([] { FactoredInteger::from_factors({{9, 1}}); }) == ErrorCode::invalid_argument);
}

TEST_CASE("divisors in an interval match the full divisor list") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) {
    const Int n = Int(static_cast<unsigned long>(rng() >> 20)) + 1;
    const FactoredInteger f = factor(n);
    const std::vector<Int> all = oracle::all_divisors(f);
    CHECK(Int(static_cast<unsigned long>(all.size())) == f.divisor_count());
    Int lo = Int(static_cast<unsigned long>(rng() % 5000));
    Int hi = lo + Int(static_cast<unsigned long>(rng() % (1UL << (rng() % 40))));
    std::vector<Int> want;
    for (const Int& d : all) {
      if (d >= lo && d <= hi) want.push_back(d);
    }
    CHECK(divisors_in_interval(f, lo, hi) == want);
  }
  const FactoredInteger f = factor(Int(720720));
  CHECK(error_code_of([&] { divisors_in_interval(f, Int(1), Int(720720), 10); }) ==
        ErrorCode::cap_exceeded);
  CHECK(error_code_of([&] { divisors_in_interval(f, Int(5), Int(4)); }) == ErrorCode::invalid_argument);
  CHECK(error_code_of([&] { divisors_in_interval(f, Int(1), Int(5), 0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("divisor average equals the sieve sum") {
  const auto d = oracle::divisor_count_sieve(3000);
  std::uint64_t sum = 0;
  for (std::uint32_t x = 1; x <= 3000; ++x) {
    sum += d[x];
    Rational want(Int(static_cast<unsigned long>(sum)), Int(x));
    want.canonicalize();
    CHECK(divisor_average(Int(x)) == want);
  }
  CHECK(error_code_of([] { divisor_average(Int(0)); }) == ErrorCode::invalid_argument);
}
