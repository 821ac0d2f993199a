#include <cmath>

#include "doctest.h"
#include "expect.hpp"
#include "oracles.hpp"
#include "twistfactor/attacks.hpp"

using namespace twistfactor;

TEST_CASE("malleability window holds the local counts") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const AttackInstance inst = random_instance(16, seed);
    const auto [lo, hi] = malleability_window(inst.n);
    for (Convention c : {Convention::affine, Convention::projective}) {
      for (const Int& h : local_count_hints(inst, c)) {
        CHECK(lo <= h);
        CHECK(h <= hi);
      }
    }
  }
}

TEST_CASE("small difference width is the least k with 864 k^3 >= N") {
  for (const Int& n : {Int(35), Int(1000003), parse_int("340282366920938463463374607431768211457")}) {
    const Int k = small_diff_width(n);
    CHECK(864 * k * k * k >= n);
    const Int km = k - 1;
    CHECK(864 * km * km * km < n);
  }
}

TEST_CASE("malleability attack factors counted and synthetic instances") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    for (unsigned bits : {12u, 24u}) {
      const AttackInstance inst = random_instance(bits, seed);
      for (Convention c : {Convention::affine, Convention::projective}) {
        const AttackReport r = malleability_attack(inst.n, factor(inst.counts.get(c)), c);
        CAPTURE(inst.n);
        REQUIRE(r.factored());
        CHECK(r.p == *inst.p);
        CHECK(r.q == *inst.q);
        CHECK(r.coppersmith_calls <= r.divisors_tried);
      }
    }
  }
  InstanceOptions synth;
  synth.mode = InstanceMode::synthetic;
  const AttackInstance big = random_instance(48, 3, synth);
  AuxiliaryFactoringOracle aux(big.n, kDefaultFactorBudget,
                               local_count_hints(big, Convention::affine));
  const AttackReport r =
      malleability_attack(big.n, aux.factor(big.counts.affine), Convention::affine);
  REQUIRE(r.factored());
  CHECK(r.p * r.q == big.n);
}

TEST_CASE("toy moduli skip the lattice") {
  const AttackInstance inst = random_instance(9, 5);
  REQUIRE(inst.n < (Int(1) << kToyModulusBits));
  const AttackReport r =
      malleability_attack(inst.n, factor(inst.counts.affine), Convention::affine);
  REQUIRE(r.factored());
  CHECK(r.lattice_reductions == 0);
}

TEST_CASE("small difference attack on close primes") {
  InstanceOptions close;
  close.close_primes = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const AttackInstance inst = random_instance(24, seed, close);
    REQUIRE(is_close_prime_pair(*inst.p, *inst.q));
    const AttackReport r =
        small_diff_attack(inst.n, factor(inst.counts.projective), Convention::projective);
    REQUIRE(r.factored());
    CHECK(r.p == *inst.p);
  }
}

TEST_CASE("Fermat factoring and its cap") {
  const auto r = fermat_factor(Int(5959), 10);  // 59 * 101
  REQUIRE(r);
  CHECK(r->p == 101);
  CHECK(r->q == 59);
  CHECK(r->iterations == 3);
  CHECK_FALSE(fermat_factor(Int(5959), 2).has_value());
  const auto sq = fermat_factor(Int(49), 1);
  REQUIRE(sq);
  CHECK(sq->p == 7);
  CHECK(sq->iterations == 1);
}

TEST_CASE("circumradius forms against the circumcenter") {
  const HyperbolaTriple t{Int(12), {Int(1), Int(3), Int(4)}};
  const CircumradiusSq c = circumradius_sq(t);
  const Rational px[3] = {Rational(1), Rational(3), Rational(4)};
  const Rational py[3] = {Rational(12), Rational(4), Rational(3)};
  CHECK(c.geometric == oracle::circumradius_sq(px, py));
  CHECK(c.displayed == c.geometric);
  CHECK(error_code_of([] { circumradius_sq({Int(12), {Int(1), Int(1), Int(4)}}); }) ==
        ErrorCode::invalid_argument);
  CHECK(error_code_of([] { circumradius_sq({Int(0), {Int(1), Int(2), Int(4)}}); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("arc length bound dominates the numeric arc length") {
  for (auto [a, b, t] : {std::tuple{1, 5, 3}, std::tuple{10, 20, 150}, std::tuple{2, 3, 100}}) {
    double arc = 0;
    const int steps = 200000;
    const double h = static_cast<double>(b - a) / steps;
    for (int i = 0; i < steps; ++i) {
      const double x = a + (i + 0.5) * h;
      const double dy = t / (x * x);
      arc += std::sqrt(1 + dy * dy) * h;
    }
    const double bound = arc_length_bound(Int(a), Int(b), Int(t)).get_d();
    CHECK(bound >= arc);
  }
}

TEST_CASE("heron census lists window divisors") {
  InstanceOptions close;
  close.close_primes = true;
  const AttackInstance inst = random_instance(20, 7, close);
  const HeronCensus h = heron_census(factor(inst.counts.affine), inst.n);
  const auto [lo, hi] = small_diff_window(inst.n);
  CHECK(h.lo == lo);
  CHECK(h.hi == hi);
  for (const Int& d : h.divisors) {
    CHECK(inst.counts.affine % d == 0);
    CHECK(lo <= d);
    CHECK(d <= hi);
  }
}

TEST_CASE("game 0 fails and game 1 factors") {
  const AttackInstance inst = random_instance(20, 11);
  const AttackReport g0 = game_simulation(inst, Scenario::game0, Convention::affine);
  CHECK_FALSE(g0.factored());
  CHECK_FALSE(g0.reason.empty());
  const AttackReport g1 = game_simulation(inst, Scenario::game1, Convention::projective);
  REQUIRE(g1.factored());
  CHECK(g1.p == *inst.p);
}

TEST_CASE("twist equivalence demo through the exhaustive oracle") {
  const AttackInstance inst = random_instance(14, 2);
  ExhaustiveCountOracle oracle(*inst.p, *inst.q);
  const AttackReport r = twist_equivalence_demo(inst, oracle);
  REQUIRE(r.factored());
  CHECK(r.p == *inst.p);
  CHECK(r.q == *inst.q);
  REQUIRE(r.twists_tried);
  CHECK(*r.twists_tried >= 1);
}

TEST_CASE("auxiliary oracle refuses inputs sharing a factor with N") {
  AuxiliaryFactoringOracle aux(Int(35));
  CHECK(error_code_of([&] { aux.factor(Int(10)); }) == ErrorCode::invalid_argument);
  const FactoredInteger f = aux.factor(Int(144));
  CHECK(f.value() == 144);
}
