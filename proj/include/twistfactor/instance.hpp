#pragma once

#include <cstdint>
#include <optional>

#include "twistfactor/arith.hpp"
#include "twistfactor/curves.hpp"

namespace twistfactor {

struct Traces {
  Int ap;
  Int aq;

  friend bool operator==(const Traces&, const Traces&) = default;
};

// One experiment: a modulus, a curve on it, a twist multiplier and the
// counts an oracle would hand out. Ground truth (p, q, traces) is present
// only when the instance was generated here.
struct AttackInstance {
  Int n;
  CurveSpec curve;
  Int d;
  CountsModN counts;
  std::optional<CountsModN> twist_counts;
  std::optional<Int> p;
  std::optional<Int> q;
  std::optional<Traces> traces;
  std::uint64_t seed = 0;

  bool has_ground_truth() const noexcept { return p.has_value() && q.has_value(); }

  friend bool operator==(const AttackInstance&, const AttackInstance&) = default;
};

enum class InstanceMode {
  counted,    // counts by exhaustive enumeration; primes below 2^26
  synthetic,  // traces drawn from the Hasse range; counts built from them
};

struct InstanceOptions {
  InstanceMode mode = InstanceMode::counted;
  // |p - q| <= c' N^(1/3) with c' = 1/(6 * 32^(1/3)).
  bool close_primes = false;
  // Fixed twist multiplier; otherwise drawn from nonresidue_scan(N).
  std::optional<Int> d;
  // Only accept d with (d/p) = -1 or (d/q) = -1.
  bool genuine_twist = true;
};

// Distinct primes p < q of exactly `bits` bits (so q < 2p), a nonsingular
// curve, a twist multiplier and counts. Deterministic in (bits, seed, options).
AttackInstance random_instance(unsigned bits, std::uint64_t seed,
                               const InstanceOptions& options = {});

// Instance with known primes and exhaustively counted curve and twist.
AttackInstance counted_instance(const Int& p, const Int& q, const Int& a, const Int& b,
                                const Int& d, std::uint64_t seed = 0);

// Instance whose counts are built from the given traces.
AttackInstance synthetic_instance(const Int& p, const Int& q, const Int& a, const Int& b,
                                  const Int& d, const Traces& traces, std::uint64_t seed = 0);

// 6912 |p - q|^3 <= p q, i.e. |p - q| <= N^(1/3) / (6 * 32^(1/3)).
bool is_close_prime_pair(const Int& p, const Int& q);

}  // namespace twistfactor
