#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twistfactor/arith.hpp"
#include "twistfactor/curves.hpp"
#include "twistfactor/instance.hpp"
#include "twistfactor/lattice.hpp"

namespace twistfactor {

// ---------------------------------------------------------------------------
// Oracles
//
// The count oracle is what the adversary gets in game 0: point counts of
// curves modulo N. The auxiliary factoring oracle is the extra power of
// game 1: complete factorizations of integers coprime to N.

class CountOracle {
 public:
  virtual ~CountOracle() = default;
  virtual CountsModN counts(const CurveSpec& curve) = 0;
  virtual CountsModN twist_counts(const CurveSpec& curve, const Int& d) {
    return counts(twist(curve, d));
  }
};

// Counts by exhaustive enumeration using the secret factorization.
class ExhaustiveCountOracle : public CountOracle {
 public:
  ExhaustiveCountOracle(Int p, Int q) : p_(std::move(p)), q_(std::move(q)) {}
  CountsModN counts(const CurveSpec& curve) override;

 private:
  Int p_;
  Int q_;
};

// Serves a synthetic instance: the base curve's counts come from its traces
// and twists flip them by Legendre symbols. Other curves are rejected.
class SyntheticCountOracle : public CountOracle {
 public:
  explicit SyntheticCountOracle(AttackInstance instance);
  CountsModN counts(const CurveSpec& curve) override;
  CountsModN twist_counts(const CurveSpec& curve, const Int& d) override;

 private:
  AttackInstance instance_;
};

class FactoringOracle {
 public:
  virtual ~FactoringOracle() = default;
  // Complete factorization of m; m must be coprime to the oracle's N.
  virtual FactoredInteger factor(const Int& m) = 0;
};

// factor() with a step budget. `hints` are integers the oracle may try to
// split inputs along before factoring (for example the secret local counts of
// a synthetic instance); they only affect speed, never the answer.
class AuxiliaryFactoringOracle : public FactoringOracle {
 public:
  AuxiliaryFactoringOracle(Int n, std::uint64_t budget = kDefaultFactorBudget,
                           std::vector<Int> hints = {});
  FactoredInteger factor(const Int& m) override;

 private:
  Int n_;
  std::uint64_t budget_;
  std::vector<Int> hints_;
};

// Local counts of an instance's base curve, for use as oracle hints.
std::vector<Int> local_count_hints(const AttackInstance& instance, Convention convention);

// ---------------------------------------------------------------------------
// Reports

enum class Outcome { factored, failed };

struct AttackReport {
  Outcome outcome = Outcome::failed;
  Int p;  // p < q when factored
  Int q;
  std::string method;
  std::string reason;  // failure reason
  std::uint64_t divisors_tried = 0;
  std::uint64_t coppersmith_calls = 0;
  std::uint64_t lattice_reductions = 0;
  std::optional<std::uint64_t> twists_tried;
  std::chrono::milliseconds wall_time{0};

  bool factored() const noexcept { return outcome == Outcome::factored; }
};

struct AttackOptions {
  CoppersmithParams coppersmith;
  unsigned max_offset_bits = kDefaultOffsetBits;
  std::size_t divisor_cap = kDefaultDivisorCap;
  std::uint64_t factor_budget = kDefaultFactorBudget;
  std::uint64_t scan_budget = std::uint64_t{1} << 24;
};

// Below this modulus the lattice step is replaced by testing every candidate
// in the Hasse window directly.
inline constexpr unsigned kToyModulusBits = 20;

// Window [isqrt(N/2) - B, isqrt(2N) + B], B = 2 isqrt(2 isqrt(N)) + 2, which
// holds the local counts of both primes for balanced N.
std::pair<Int, Int> malleability_window(const Int& n);

// Factors N from the factorization of the affine (E_N) or projective (E*_N)
// count of one curve. Each divisor in the window is a local count; the
// matching prime is within 2 sqrt(p) + 2 of it and is recovered by the
// Coppersmith step.
AttackReport malleability_attack(const Int& n, const FactoredInteger& count,
                                 Convention convention, const AttackOptions& options = {});

// ceil(c N^(1/3)) with c = 1/(3 * 32^(1/3)): least k with 864 k^3 >= N.
Int small_diff_width(const Int& n);

// [isqrt(N) - ceil(w/2) - 1, isqrt(N) + ceil(w/2) + 1], w = small_diff_width(N).
std::pair<Int, Int> small_diff_window(const Int& n);

// Variant for |p - q| <= c' N^(1/3): only divisors near sqrt(N) are tried.
AttackReport small_diff_attack(const Int& n, const FactoredInteger& count,
                               Convention convention, const AttackOptions& options = {});

struct FermatResult {
  Int p;  // s + r
  Int q;  // s - r
  std::uint64_t iterations = 0;
};

// s = ceil(sqrt(N)), ceil(sqrt(N)) + 1, ... until s^2 - N is a square.
// nullopt when `cap` iterations do not suffice.
std::optional<FermatResult> fermat_factor(const Int& n, std::uint64_t cap);

// Three points (x_i, T / x_i) on the hyperbola x y = T.
struct HyperbolaTriple {
  Int t;
  std::array<Int, 3> x;
};

struct CircumradiusSq {
  Rational geometric;  // product of squared sides / (16 area^2)
  Rational displayed;  // prod((x_i x_j)^2 + T^2) / (4 T^2 (x0 x1 x2)^2)
};

// Throws invalid_argument for repeated or zero x_i, T <= 0 or collinear points.
CircumradiusSq circumradius_sq(const HyperbolaTriple& triple);

// (b - a) (1 + T^2 / (a^3 b)), an upper bound for the arc length of x y = T
// over a <= x <= b.
Rational arc_length_bound(const Int& a, const Int& b, const Int& t);

struct HeronCensus {
  Int lo;
  Int hi;
  std::vector<Int> divisors;
  bool at_most_two() const noexcept { return divisors.size() <= 2; }
};

// Divisors of the count inside small_diff_window(N).
HeronCensus heron_census(const FactoredInteger& count, const Int& n,
                         std::size_t cap = kDefaultDivisorCap);

enum class Scenario { game0, game1 };

// Game 0 hands the adversary only the count and reports failure; game 1
// also factors the count with the auxiliary oracle and runs the
// malleability attack.
AttackReport game_simulation(const AttackInstance& instance, Scenario scenario,
                             Convention convention, const AttackOptions& options = {});

// Instance from random_instance(bits, seed): counted below 2^26, synthetic
// above.
AttackReport game_simulation(unsigned bits, std::uint64_t seed, Scenario scenario,
                             Convention convention, const AttackOptions& options = {});

// Counting with the factorization is direct; the other direction scans twist
// multipliers from nonresidue_scan, asks the oracle for twist counts and
// factors from the pair.
AttackReport twist_equivalence_demo(const AttackInstance& instance, CountOracle& oracle,
                                    const AttackOptions& options = {});

AttackReport twist_equivalence_demo(unsigned bits, std::uint64_t seed,
                                    const AttackOptions& options = {});

}  // namespace twistfactor
