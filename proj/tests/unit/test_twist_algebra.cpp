#include <random>

#include "doctest.h"
#include "expect.hpp"
#include "oracles.hpp"
#include "twistfactor/curves.hpp"
#include "twistfactor/twist_algebra.hpp"

using namespace twistfactor;

namespace {

struct Pair {
  Int p, q, ap, aq;
};

// Primes from [lo, hi) and traces uniform in the Hasse range.
Pair random_pair(std::mt19937_64& rng, unsigned long lo, unsigned long hi) {
  Pair s;
  do {
    s.p = Int(lo + rng() % (hi - lo));
    s.q = Int(lo + rng() % (hi - lo));
    mpz_nextprime(s.p.get_mpz_t(), s.p.get_mpz_t());
    mpz_nextprime(s.q.get_mpz_t(), s.q.get_mpz_t());
  } while (s.p == s.q);
  if (s.p > s.q) std::swap(s.p, s.q);
  const long hp = hasse_bound(s.p).get_si(), hq = hasse_bound(s.q).get_si();
  s.ap = static_cast<long>(rng() % static_cast<unsigned long>(2 * hp + 1)) - hp;
  s.aq = static_cast<long>(rng() % static_cast<unsigned long>(2 * hq + 1)) - hq;
  return s;
}

}  // namespace

TEST_CASE("N = 35 quadruples in both conventions") {
  const TwistQuadruple a = quadruple_from_traces(5, 7, -3, 3, Convention::affine);
  CHECK(a.e == 32);
  CHECK(a.e_hat == 20);
  CHECK(a.e_tilde == 80);
  CHECK(a.e_bar == 8);
  CHECK(a.pq == 35);
  const TwistQuadruple p = quadruple_from_traces(5, 7, -3, 3, Convention::projective);
  CHECK(p.e == 45);
  CHECK(p.e_hat == 33);
  CHECK(p.e_tilde == 99);
  CHECK(p.e_bar == 15);
  CHECK(p.pq == 48);
}

TEST_CASE("sum and product identities hold for any traces") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 2000; ++i) {
    const Pair s = random_pair(rng, 5, 1UL << 40);
    for (Convention c : {Convention::affine, Convention::projective}) {
      const TwistQuadruple t = quadruple_from_traces(s.p, s.q, s.ap, s.aq, c);
      CHECK(satisfies_sum_identity(t));
      CHECK(satisfies_product_identity(t));
      TwistQuadruple broken = t;
      broken.e_bar += 1;
      CHECK_FALSE(satisfies_sum_identity(broken));
    }
  }
}

TEST_CASE("completion from the N = 35 opposite pair") {
  const auto t = complete_quadruple_opposite(32, 20, 35, Convention::affine);
  REQUIRE(t);
  CHECK(t->e_tilde == 80);
  CHECK(t->e_bar == 8);
  const auto adj = complete_quadruple_adjacent(32, 80, 35, Convention::affine);
  REQUIRE(adj);
  CHECK(adj->e_hat == 20);
  CHECK(adj->e_bar == 8);
  CHECK(error_code_of([] { complete_quadruple_opposite(0, 20, 35, Convention::affine); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("completion round trip on random quadruples") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 1000; ++i) {
    const Pair s = random_pair(rng, 5, 1UL << 30);
    const Convention c = i % 2 ? Convention::affine : Convention::projective;
    const TwistQuadruple t = quadruple_from_traces(s.p, s.q, s.ap, s.aq, c);
    const auto o = complete_quadruple_opposite(t.e, t.e_hat, t.pq, c);
    REQUIRE(o);
    CHECK(std::max(t.e_tilde, t.e_bar) == o->e_tilde);
    CHECK(std::min(t.e_tilde, t.e_bar) == o->e_bar);
    const auto a = complete_quadruple_adjacent(t.e_tilde, t.e_hat, t.pq, c);
    REQUIRE(a);
    CHECK(a->e_hat == t.e_bar);
    CHECK(a->e_bar == t.e);
  }
}

TEST_CASE("affine and projective pair factoring on N = 35") {
  const FactorResult a = factor_affine_pair(35, 32, 8);
  CHECK(a.p == 5);
  CHECK(a.q == 7);
  CHECK(a.ap == -3);
  CHECK(a.aq == 3);
  const FactorResult p = factor_projective_pair(35, 45, 15);
  CHECK(p.p == 5);
  CHECK(p.q == 7);
  CHECK(p.ap == -3);
  CHECK(p.aq == 3);
  CHECK(error_code_of([] { factor_affine_pair(35, 32, 32); }) == ErrorCode::all_hypotheses_failed);
  CHECK(error_code_of([] { factor_projective_pair(35, 45, 45); }) ==
        ErrorCode::all_hypotheses_failed);
}

TEST_CASE("pair factoring recovers balanced primes and traces for every flip pattern") {
  std::mt19937_64 rng(33);
  int cases = 0;
  for (int i = 0; i < 300; ++i) {
    const unsigned long lo = 1UL << (10 + i % 10);
    const Pair s = random_pair(rng, lo, 2 * lo - 200);
    const Int n = s.p * s.q;
    for (auto [fp, fq] : {std::pair{-1, 1}, std::pair{1, -1}, std::pair{-1, -1}}) {
      if (fp * s.ap == s.ap && fq * s.aq == s.aq) continue;
      for (Convention c : {Convention::affine, Convention::projective}) {
        const TwistQuadruple base = quadruple_from_traces(s.p, s.q, s.ap, s.aq, c);
        const TwistQuadruple tw = quadruple_from_traces(s.p, s.q, fp * s.ap, fq * s.aq, c);
        const FactorResult r = c == Convention::affine
                                   ? factor_affine_pair(n, base.e, tw.e)
                                   : factor_projective_pair(n, base.e, tw.e);
        CAPTURE(n);
        CHECK(r.p == s.p);
        CHECK(r.q == s.q);
        CHECK(r.ap == s.ap);
        CHECK(r.aq == s.aq);
        ++cases;
      }
    }
  }
  CHECK(cases > 1500);
}

TEST_CASE("verification rejects non-divisors and inconsistent counts") {
  std::mt19937_64 rng(34);
  for (int i = 0; i < 200; ++i) {
    const Pair s = random_pair(rng, 1UL << 10, 1UL << 20);
    const Int n = s.p * s.q;
    const TwistQuadruple t = quadruple_from_traces(s.p, s.q, s.ap, s.aq, Convention::affine);
    for (const Int& wrong : {Int(1), n, Int(s.p + 2), Int(s.q + 2)}) {
      CHECK_FALSE(verify_twist_factorization(n, wrong, t.e, t.e_hat, Convention::affine).has_value());
    }
    if (s.ap != 0 || s.aq != 0) {
      CHECK(verify_twist_factorization(n, s.p, t.e, t.e_hat, Convention::affine).has_value());
      CHECK_FALSE(verify_twist_factorization(n, s.p, t.e, t.e_hat + 2, Convention::affine).has_value());
    }
  }
}

TEST_CASE("the two-sided projective scan honours its budget") {
  const Int p = 1000003, q = 1700021;
  const TwistQuadruple t = quadruple_from_traces(p, q, 1001, -1500, Convention::projective);
  ProjectiveOptions tight;
  tight.scan_budget = 16;
  CHECK(error_code_of([&] { factor_projective_pair(p * q, t.e, t.e_hat, tight); }) ==
        ErrorCode::scan_budget_exhausted);
  const FactorResult r = factor_projective_pair(p * q, t.e, t.e_hat);
  CHECK(r.p == p);
  CHECK(r.aq == -1500);
}
