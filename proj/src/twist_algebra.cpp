#include "twistfactor/twist_algebra.hpp"

#include <array>
#include <utility>
#include <vector>

#include "twistfactor/lattice.hpp"

namespace twistfactor {

namespace {

std::pair<Int, Int> local_sizes(const Int& p, const Int& q, Convention c) {
  return c == Convention::affine ? std::pair{p, q} : std::pair<Int, Int>{p + 1, q + 1};
}

bool divides(const Int& d, const Int& n) {
  return d != 0 && mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

bool within_hasse(const Int& trace, const Int& p) { return trace * trace <= 4 * p; }

struct TraceCandidate {
  Int ap;
  Int aq;
};

// Traces (a_p, a_q) with (P - a_p)(Q - a_q) = e and (P + a_p)(Q + a_q) = e_d:
// with w = (e_d - e)/2 and u = (e + e_d)/2 - PQ = a_p a_q, a_p solves
// Q a^2 - w a + u P = 0.
std::vector<TraceCandidate> opposite_traces(const Int& big_p, const Int& big_q, const Int& e,
                                            const Int& e_d) {
  std::vector<TraceCandidate> out;
  const Int sum = e + e_d;
  if (mpz_odd_p(sum.get_mpz_t()) != 0) return out;
  const Int u = sum / 2 - big_p * big_q;
  const Int w = (e_d - e) / 2;
  const Int disc = w * w - 4 * big_q * big_p * u;
  Int root;
  if (!is_perfect_square(disc, &root)) return out;
  const Int denom = 2 * big_q;
  for (const Int& num : {Int(w + root), Int(w - root)}) {
    if (!divides(denom, num)) continue;
    const Int ap = num / denom;
    if (ap != 0) {
      if (divides(ap, u)) out.push_back({ap, u / ap});
    } else if (u == 0 && divides(big_p, w)) {
      out.push_back({ap, w / big_p});
    }
  }
  return out;
}

}  // namespace

TwistQuadruple quadruple_from_traces(const Int& p, const Int& q, const Int& ap,
                                     const Int& aq, Convention convention) {
  const auto [big_p, big_q] = local_sizes(p, q, convention);
  return {(big_p - ap) * (big_q - aq), (big_p + ap) * (big_q + aq),
          (big_p - ap) * (big_q + aq), (big_p + ap) * (big_q - aq),
          big_p * big_q,               convention};
}

bool satisfies_sum_identity(const TwistQuadruple& t) {
  return t.e + t.e_hat + t.e_tilde + t.e_bar == 4 * t.pq;
}

bool satisfies_product_identity(const TwistQuadruple& t) {
  return t.e * t.e_hat == t.e_tilde * t.e_bar;
}

std::optional<TwistQuadruple> complete_quadruple_opposite(const Int& e, const Int& e_hat,
                                                          const Int& pq,
                                                          Convention convention) {
  if (e < 1 || e_hat < 1 || pq < 1) {
    throw Error(ErrorCode::invalid_argument, "quadruple completion needs positive counts");
  }
  const Int product = e * e_hat;
  const Int rest = 4 * pq - (e + e_hat);
  const Int disc = rest * rest - 4 * product;
  Int root;
  if (!is_perfect_square(disc, &root)) return std::nullopt;
  const Int hi = rest + root;
  const Int lo = rest - root;
  if (mpz_odd_p(hi.get_mpz_t()) != 0 || lo <= 0) return std::nullopt;
  return TwistQuadruple{e, e_hat, hi / 2, lo / 2, pq, convention};
}

std::optional<TwistQuadruple> complete_quadruple_adjacent(const Int& e, const Int& e_tilde,
                                                          const Int& pq,
                                                          Convention convention) {
  if (e < 1 || e_tilde < 1 || pq < 1) {
    throw Error(ErrorCode::invalid_argument, "quadruple completion needs positive counts");
  }
  // M = e / e_tilde, so e_hat = rest / (M + 1) = rest * e_tilde / (e + e_tilde)
  // and e_bar = M * e_hat = rest * e / (e + e_tilde).
  const Int rest = 4 * pq - (e + e_tilde);
  const Int denom = e + e_tilde;
  const Int hat_num = rest * e_tilde;
  const Int bar_num = rest * e;
  if (rest <= 0 || !divides(denom, hat_num) || !divides(denom, bar_num)) return std::nullopt;
  return TwistQuadruple{e, hat_num / denom, e_tilde, bar_num / denom, pq, convention};
}

std::optional<FactorResult> verify_twist_factorization(const Int& n, const Int& divisor,
                                                       const Int& e, const Int& e_d,
                                                       Convention convention) {
  if (divisor <= 1 || divisor >= n || !divides(divisor, n)) return std::nullopt;
  Int p = divisor;
  Int q = n / divisor;
  if (p > q) std::swap(p, q);
  if (p == q || !is_prime(p) || !is_prime(q)) return std::nullopt;
  if (e == e_d) return std::nullopt;

  const auto [big_p, big_q] = local_sizes(p, q, convention);
  const Int sum = e + e_d;
  const Int diff = e_d - e;

  // Candidate traces for each flip pattern, tagged with the quadruple slot
  // e_d must occupy.
  std::vector<std::pair<TraceCandidate, int>> candidates;
  if (divides(2 * big_p, sum)) {  // p-side flip: e_d = e_bar
    const Int q_rest = sum / (2 * big_p);
    if (q_rest != 0 && divides(2 * q_rest, diff)) {
      candidates.push_back({{diff / (2 * q_rest), big_q - q_rest}, 3});
    }
  }
  if (divides(2 * big_q, sum)) {  // q-side flip: e_d = e_tilde
    const Int p_rest = sum / (2 * big_q);
    if (p_rest != 0 && divides(2 * p_rest, diff)) {
      candidates.push_back({{big_p - p_rest, diff / (2 * p_rest)}, 2});
    }
  }
  for (const auto& c : opposite_traces(big_p, big_q, e, e_d)) candidates.push_back({c, 1});

  for (const auto& [c, slot] : candidates) {
    if (!within_hasse(c.ap, p) || !within_hasse(c.aq, q)) continue;
    const TwistQuadruple t = quadruple_from_traces(p, q, c.ap, c.aq, convention);
    const std::array<const Int*, 4> slots = {&t.e, &t.e_hat, &t.e_tilde, &t.e_bar};
    if (t.e == e && *slots[slot] == e_d) return FactorResult{p, q, c.ap, c.aq, {}};
  }
  return std::nullopt;
}

FactorResult factor_affine_pair(const Int& n, const Int& e, const Int& e_d) {
  if (e == e_d) {
    throw Error(ErrorCode::all_hypotheses_failed,
                e == n ? "E = E_d = N: both primes supersingular, the affine pair carries no "
                         "information"
                       : "E = E_d: trivial twist carries no information");
  }
  bool any_quadruple = false;
  auto attempt = [&](const std::optional<TwistQuadruple>& t,
                     const char* method) -> std::optional<FactorResult> {
    if (!t) return std::nullopt;
    any_quadruple = true;
    // e + e_tilde = 2 Q (P - a_p) and e + e_bar = 2 P (Q - a_q).
    for (const Int* partner : {&t->e_tilde, &t->e_bar}) {
      const Int s = t->e + *partner;
      Int g;
      mpz_gcd(g.get_mpz_t(), s.get_mpz_t(), n.get_mpz_t());
      if (g == 1 || g == n) continue;
      if (auto r = verify_twist_factorization(n, g, e, e_d, Convention::affine)) {
        r->method = method;
        return r;
      }
    }
    return std::nullopt;
  };

  if (auto r = attempt(complete_quadruple_opposite(e, e_d, n, Convention::affine),
                       "affine-opposite")) {
    return *r;
  }
  if (auto r = attempt(complete_quadruple_adjacent(e, e_d, n, Convention::affine),
                       "affine-adjacent")) {
    return *r;
  }
  if (any_quadruple) {
    throw Error(ErrorCode::degenerate_gcd, "no hypothesis produced a nontrivial verified gcd");
  }
  throw Error(ErrorCode::all_hypotheses_failed, "counts are not an affine curve/twist pair");
}

FactorResult factor_projective_pair(const Int& n, const Int& e, const Int& e_d,
                                    const ProjectiveOptions& options) {
  if (n < 15 || e < 1 || e_d < 1) {
    throw Error(ErrorCode::invalid_argument, "factor_projective_pair needs N >= 15 and positive counts");
  }

  if (e == e_d) {
    // Only informative when both traces vanish: then e = (p+1)(q+1).
    const Int s = e + 1 - n;  // P + Q
    Int root;
    if (s > 0 && is_perfect_square(s * s - 4 * e, &root)) {
      const Int p = (s - root) / 2 - 1;
      const Int q = (s + root) / 2 - 1;
      if (p > 1 && p * q == n && p != q && is_prime(p) && is_prime(q)) {
        return FactorResult{p, q, 0, 0, "projective-supersingular"};
      }
    }
    throw Error(ErrorCode::all_hypotheses_failed, "E = E_d: trivial twist carries no information");
  }

  bool budget_hit = false;

  // Route A: one-sided flip. (e_d - e) / (e_d + e) = a / P with P = den * t
  // and a = num * t for the prime whose trace flipped.
  {
    Rational ratio(e_d - e, e_d + e);
    ratio.canonicalize();
    const Int num = abs(ratio.get_num());
    const Int den = ratio.get_den();
    if (num != 0) {
      const Int d2 = den * den;
      if (d2 * d2 >= n) {
        const DivisorSearch s = divisor_from_residue(n, -1, den);
        if (s.found()) {
          if (auto r = verify_twist_factorization(n, s.divisor, e, e_d, Convention::projective)) {
            r->method = "projective-route-a-lattice";
            return *r;
          }
        }
      }
      const Int two_n = 2 * n;
      Int t_max = (2 * isqrt(two_n) + 3) / den;
      const Int by_hasse = (2 * isqrt(isqrt(two_n)) + 2) / num;
      if (by_hasse < t_max) t_max = by_hasse;
      if (t_max > options.scan_budget) {
        t_max = options.scan_budget;
        budget_hit = true;
      }
      for (Int t = 1; t <= t_max; ++t) {
        const Int p = den * t - 1;
        if (p <= 1 || !divides(p, n)) continue;
        if (auto r = verify_twist_factorization(n, p, e, e_d, Convention::projective)) {
          r->method = "projective-route-a";
          return *r;
        }
      }
    }
  }

  // Route B: two-sided flip. Scan X = PQ; P + Q = X + 1 - N and
  // (P + Q)^2 - 4X = (p - q)^2 must be a square.
  {
    const Int lo = n + 2 * isqrt(n) + 2;
    const Int hi = n + ceil_div(3 * isqrt(2 * n), 2) + 2;
    Int count = hi - lo + 1;
    if (count > options.scan_budget) {
      count = options.scan_budget;
      budget_hit = true;
    }
    Int s = lo + 1 - n;
    Int disc = s * s - 4 * lo;
    Int root;
    for (Int i = 0; i < count; ++i) {
      if (disc >= 0 && is_perfect_square(disc, &root)) {
        const Int big_p = (s - root) / 2;
        const Int big_q = (s + root) / 2;
        if (big_p > 2 && (big_p - 1) * (big_q - 1) == n &&
            (!opposite_traces(big_p, big_q, e, e_d).empty() ||
             !opposite_traces(big_q, big_p, e, e_d).empty())) {
          if (auto r = verify_twist_factorization(n, big_p - 1, e, e_d,
                                                  Convention::projective)) {
            r->method = "projective-route-b";
            return *r;
          }
        }
      }
      // X -> X + 1: disc changes by 2s + 1 - 4.
      disc += 2 * s - 3;
      s += 1;
    }
  }

  if (budget_hit) {
    throw Error(ErrorCode::scan_budget_exhausted, "projective scan budget exhausted");
  }
  throw Error(ErrorCode::all_hypotheses_failed, "counts are not a projective curve/twist pair");
}

}  // namespace twistfactor
