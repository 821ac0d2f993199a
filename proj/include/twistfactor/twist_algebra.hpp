#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "twistfactor/arith.hpp"
#include "twistfactor/curves.hpp"

namespace twistfactor {

// The four values a twist's count can take modulo N = p q, labelled by which
// local traces flip:
//   e       = (P - a_p)(Q - a_q)    original curve
//   e_hat   = (P + a_p)(Q + a_q)    both flip
//   e_tilde = (P - a_p)(Q + a_q)    q-side flips
//   e_bar   = (P + a_p)(Q - a_q)    p-side flips
// with P = p, Q = q (affine) or P = p + 1, Q = q + 1 (projective); pq = P Q.
struct TwistQuadruple {
  Int e;
  Int e_hat;
  Int e_tilde;
  Int e_bar;
  Int pq;
  Convention convention = Convention::affine;

  friend bool operator==(const TwistQuadruple&, const TwistQuadruple&) = default;
};

TwistQuadruple quadruple_from_traces(const Int& p, const Int& q, const Int& ap,
                                     const Int& aq, Convention convention);

// Sum identity e + e_hat + e_tilde + e_bar = 4 pq and product identity
// e * e_hat = e_tilde * e_bar.
bool satisfies_sum_identity(const TwistQuadruple& t);
bool satisfies_product_identity(const TwistQuadruple& t);

// Given an opposite pair (e, e_hat) and pq, the other two counts are the
// roots of X^2 - (4pq - e - e_hat) X + e e_hat. The larger root is stored as
// e_tilde. nullopt when the discriminant is not a square or a root is not a
// positive integer: pq or the pairing hypothesis is wrong.
std::optional<TwistQuadruple> complete_quadruple_opposite(const Int& e, const Int& e_hat,
                                                          const Int& pq,
                                                          Convention convention);

// Given an adjacent pair (e, e_tilde): with M = e / e_tilde,
// e_hat = (4pq - e - e_tilde) / (M + 1) and e_bar = M e_hat. Any adjacent pair
// (x, y) works the same way and yields (opposite of x, opposite of y) in
// (e_hat, e_bar). nullopt when either value is not a positive integer.
std::optional<TwistQuadruple> complete_quadruple_adjacent(const Int& e, const Int& e_tilde,
                                                          const Int& pq,
                                                          Convention convention);

struct FactorResult {
  Int p;  // p < q
  Int q;
  Int ap;
  Int aq;
  std::string method;

  friend bool operator==(const FactorResult&, const FactorResult&) = default;
};

// Recovers the traces for a candidate factorization and checks that they
// reproduce e and e_d as a curve/twist pair with both traces inside the Hasse
// bound. Returns nullopt unless everything checks.
std::optional<FactorResult> verify_twist_factorization(const Int& n, const Int& divisor,
                                                       const Int& e, const Int& e_d,
                                                       Convention convention);

// Factors N from the affine counts of a curve and a genuine twist of it.
// Throws all_hypotheses_failed or degenerate_gcd.
FactorResult factor_affine_pair(const Int& n, const Int& e, const Int& e_d);

struct ProjectiveOptions {
  std::uint64_t scan_budget = std::uint64_t{1} << 24;
};

// Factors N from projective counts, where pq = (p+1)(q+1) is unknown.
// Route A handles a one-sided flip through the ratio (e_d - e)/(e_d + e) =
// a/P; route B handles the two-sided flip by scanning pq. Both routes bound
// their search assuming balanced primes (q < 2p). Throws
// scan_budget_exhausted or all_hypotheses_failed.
FactorResult factor_projective_pair(const Int& n, const Int& e, const Int& e_d,
                                    const ProjectiveOptions& options = {});

}  // namespace twistfactor
