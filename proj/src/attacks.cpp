#include "twistfactor/attacks.hpp"

#include <cmath>
#include <tuple>

#include "twistfactor/twist_algebra.hpp"

namespace twistfactor {

namespace {

using Clock = std::chrono::steady_clock;

Int gcd_of(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

double log2_of(const Int& v) {
  if (v <= 0) return 0.0;
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log2(mant) + static_cast<double>(exp);
}

// Records a factorization only after checking p q = N with both prime.
bool accept_divisor(AttackReport& report, const Int& n, const Int& divisor) {
  if (divisor <= 1 || divisor >= n || mpz_divisible_p(n.get_mpz_t(), divisor.get_mpz_t()) == 0) {
    return false;
  }
  Int p = divisor;
  Int q = n / divisor;
  if (p > q) std::swap(p, q);
  if (!is_prime(p) || !is_prime(q)) return false;
  report.outcome = Outcome::factored;
  report.p = p;
  report.q = q;
  report.reason.clear();
  return true;
}

void fail(AttackReport& report, std::string reason) {
  report.outcome = Outcome::failed;
  report.reason = std::move(reason);
}

template <class Body>
AttackReport timed(Body&& body) {
  const auto start = Clock::now();
  AttackReport report = body();
  report.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
  return report;
}

// Shared tail of both count-factorization attacks: every divisor A of the
// count in [lo, hi] is taken as a local count, so a prime of N lies within
// X = 2 isqrt(A) + 2 of A (affine) or A - 1 (projective).
void finish_from_window(AttackReport& report, const Int& n, const FactoredInteger& count,
                        Convention convention, const Int& lo, const Int& hi,
                        const AttackOptions& options) {
  if (Int g = gcd_of(count.value(), n); g > 1 && g < n) {
    if (accept_divisor(report, n, g)) {
      report.method = "gcd";
      return;
    }
  }
  const Int lo_clamped = lo < 1 ? Int(1) : lo;
  std::vector<Int> window;
  if (lo_clamped <= hi) window = divisors_in_interval(count, lo_clamped, hi, options.divisor_cap);
  if (window.empty()) {
    fail(report, "no-divisor-in-window");
    return;
  }

  const bool toy = mpz_sizeinbase(n.get_mpz_t(), 2) <= kToyModulusBits;
  const Int offset = convention == Convention::projective ? 1 : 0;
  for (const Int& a : window) {
    ++report.divisors_tried;
    const Int center = a - offset;
    const Int bound = 2 * isqrt(a) + 2;
    ++report.coppersmith_calls;
    if (toy) {
      for (Int c = center - bound; c <= center + bound; ++c) {
        if (accept_divisor(report, n, c)) return;
      }
      continue;
    }
    const DivisorSearch s = find_divisor_near(n, center, bound, log2_of(center - bound),
                                              options.coppersmith, options.max_offset_bits);
    report.lattice_reductions += s.lattice_calls;
    if (s.found() && accept_divisor(report, n, s.divisor)) return;
  }
  fail(report, "coppersmith-exhausted");
}

const char* convention_name(Convention c) {
  return c == Convention::affine ? "affine" : "projective";
}

}  // namespace

CountsModN ExhaustiveCountOracle::counts(const CurveSpec& curve) {
  return count_points_modN(curve, p_, q_);
}

SyntheticCountOracle::SyntheticCountOracle(AttackInstance instance)
    : instance_(std::move(instance)) {
  if (!instance_.has_ground_truth() || !instance_.traces) {
    throw Error(ErrorCode::invalid_argument, "synthetic oracle needs ground-truth traces");
  }
}

CountsModN SyntheticCountOracle::counts(const CurveSpec& curve) {
  if (curve != instance_.curve) {
    throw Error(ErrorCode::invalid_argument, "synthetic oracle only knows its base curve");
  }
  return instance_.counts;
}

CountsModN SyntheticCountOracle::twist_counts(const CurveSpec& curve, const Int& d) {
  if (curve != instance_.curve) {
    throw Error(ErrorCode::invalid_argument, "synthetic oracle only knows its base curve");
  }
  const Int& p = *instance_.p;
  const Int& q = *instance_.q;
  const Int ap = trace_sign_class(d, p) * instance_.traces->ap;
  const Int aq = trace_sign_class(d, q) * instance_.traces->aq;
  return {instance_.n, (p - ap) * (q - aq), (p + 1 - ap) * (q + 1 - aq)};
}

AuxiliaryFactoringOracle::AuxiliaryFactoringOracle(Int n, std::uint64_t budget,
                                                   std::vector<Int> hints)
    : n_(std::move(n)), budget_(budget), hints_(std::move(hints)) {}

FactoredInteger AuxiliaryFactoringOracle::factor(const Int& m) {
  if (m < 1 || gcd_of(m, n_) != 1) {
    throw Error(ErrorCode::invalid_argument,
                "the auxiliary oracle only factors positive integers coprime to N");
  }
  for (const Int& h : hints_) {
    if (h > 1 && h < m && mpz_divisible_p(m.get_mpz_t(), h.get_mpz_t()) != 0) {
      return twistfactor::factor(h, budget_) * twistfactor::factor(m / h, budget_);
    }
  }
  return twistfactor::factor(m, budget_);
}

std::vector<Int> local_count_hints(const AttackInstance& instance, Convention convention) {
  if (!instance.has_ground_truth() || !instance.traces) return {};
  const Int extra = convention == Convention::projective ? 1 : 0;
  return {*instance.p + extra - instance.traces->ap, *instance.q + extra - instance.traces->aq};
}

std::pair<Int, Int> malleability_window(const Int& n) {
  const Int slack = 2 * isqrt(isqrt(n) * 2) + 2;
  return {isqrt(n / 2) - slack, isqrt(2 * n) + slack};
}

AttackReport malleability_attack(const Int& n, const FactoredInteger& count,
                                 Convention convention, const AttackOptions& options) {
  return timed([&] {
    AttackReport report;
    report.method = std::string("malleability-") + convention_name(convention);
    const auto [lo, hi] = malleability_window(n);
    finish_from_window(report, n, count, convention, lo, hi, options);
    return report;
  });
}

Int small_diff_width(const Int& n) {
  Int k;
  mpz_root(k.get_mpz_t(), Int(n / 864).get_mpz_t(), 3);
  while (864 * k * k * k < n) ++k;
  while (k > 0 && 864 * (k - 1) * (k - 1) * (k - 1) >= n) --k;
  return k;
}

std::pair<Int, Int> small_diff_window(const Int& n) {
  const Int root = isqrt(n);
  const Int half = ceil_div(small_diff_width(n), 2) + 1;
  return {root - half, root + half};
}

AttackReport small_diff_attack(const Int& n, const FactoredInteger& count,
                               Convention convention, const AttackOptions& options) {
  return timed([&] {
    AttackReport report;
    report.method = std::string("small-diff-") + convention_name(convention);
    const auto [lo, hi] = small_diff_window(n);
    finish_from_window(report, n, count, convention, lo, hi, options);
    return report;
  });
}

std::optional<FermatResult> fermat_factor(const Int& n, std::uint64_t cap) {
  if (n < 9 || mpz_even_p(n.get_mpz_t()) != 0) {
    throw Error(ErrorCode::invalid_argument, "fermat_factor needs an odd composite N");
  }
  Int s = isqrt(n);
  if (s * s < n) ++s;
  Int excess = s * s - n;
  Int r;
  for (std::uint64_t i = 1; i <= cap; ++i) {
    if (is_perfect_square(excess, &r)) return FermatResult{s + r, s - r, i};
    excess += 2 * s + 1;
    ++s;
  }
  return std::nullopt;
}

CircumradiusSq circumradius_sq(const HyperbolaTriple& triple) {
  const Int& t = triple.t;
  const auto& x = triple.x;
  if (t <= 0) throw Error(ErrorCode::invalid_argument, "hyperbola constant must be positive");
  for (std::size_t i = 0; i < 3; ++i) {
    if (x[i] == 0) throw Error(ErrorCode::invalid_argument, "hyperbola abscissa must be nonzero");
    for (std::size_t j = i + 1; j < 3; ++j) {
      if (x[i] == x[j]) throw Error(ErrorCode::invalid_argument, "hyperbola points must be distinct");
    }
  }

  std::array<Rational, 3> y;
  for (std::size_t i = 0; i < 3; ++i) {
    y[i] = Rational(t, x[i]);
    y[i].canonicalize();
  }
  auto side_sq = [&](std::size_t i, std::size_t j) {
    const Rational dx = Rational(x[i] - x[j]);
    const Rational dy = y[i] - y[j];
    return Rational(dx * dx + dy * dy);
  };
  const Rational twice_area = Rational(x[0]) * (y[1] - y[2]) + Rational(x[1]) * (y[2] - y[0]) +
                              Rational(x[2]) * (y[0] - y[1]);
  if (twice_area == 0) throw Error(ErrorCode::invalid_argument, "points are collinear");

  CircumradiusSq out;
  out.geometric = side_sq(0, 1) * side_sq(0, 2) * side_sq(1, 2) / (4 * twice_area * twice_area);

  const Int t2 = t * t;
  const Int x012 = x[0] * x[1] * x[2];
  auto term = [&](std::size_t i, std::size_t j) {
    const Int xx = x[i] * x[j];
    return Int(xx * xx + t2);
  };
  out.displayed = Rational(term(0, 1) * term(0, 2) * term(1, 2), 4 * t2 * x012 * x012);
  out.displayed.canonicalize();
  return out;
}

Rational arc_length_bound(const Int& a, const Int& b, const Int& t) {
  if (a <= 0 || b < a) throw Error(ErrorCode::invalid_argument, "arc_length_bound needs 0 < a <= b");
  Rational tail(t * t, a * a * a * b);
  tail.canonicalize();
  return Rational(b - a) * (1 + tail);
}

HeronCensus heron_census(const FactoredInteger& count, const Int& n, std::size_t cap) {
  HeronCensus c;
  std::tie(c.lo, c.hi) = small_diff_window(n);
  if (c.lo < 1) c.lo = 1;
  if (c.lo <= c.hi) c.divisors = divisors_in_interval(count, c.lo, c.hi, cap);
  return c;
}

AttackReport game_simulation(const AttackInstance& instance, Scenario scenario,
                             Convention convention, const AttackOptions& options) {
  const Int& n = instance.n;
  const Int& count = instance.counts.get(convention);
  if (scenario == Scenario::game0) {
    AttackReport report;
    report.method = "game0";
    fail(report, "no known algorithm factors N from the point count alone");
    return report;
  }

  return timed([&] {
    AttackReport report;
    if (Int g = gcd_of(count, n); g > 1 && g < n && accept_divisor(report, n, g)) {
      report.method = "game1-gcd";
      return report;
    }
    AuxiliaryFactoringOracle oracle(n, options.factor_budget,
                                    local_count_hints(instance, convention));
    report = malleability_attack(n, oracle.factor(count), convention, options);
    report.method = "game1-" + report.method;
    return report;
  });
}

AttackReport game_simulation(unsigned bits, std::uint64_t seed, Scenario scenario,
                             Convention convention, const AttackOptions& options) {
  InstanceOptions io;
  io.mode = bits <= kMaxCountBits ? InstanceMode::counted : InstanceMode::synthetic;
  return game_simulation(random_instance(bits, seed, io), scenario, convention, options);
}

namespace {

AttackReport scan_twists(const AttackInstance& instance, CountOracle& oracle,
                         const AttackOptions& options) {
  AttackReport report;
  report.method = "equivalence";
  report.twists_tried = 0;
  const Int& n = instance.n;

  const CountsModN base = oracle.counts(instance.curve);
  for (const Int& d : nonresidue_scan(n)) {
    ++*report.twists_tried;
    if (Int g = gcd_of(d, n); g > 1) {
      if (g < n && accept_divisor(report, n, g)) {
        report.method = "equivalence-gcd";
        return report;
      }
      continue;
    }
    const CountsModN tw = oracle.twist_counts(instance.curve, d);
    // Equal counts in both conventions: d is a square modulo both primes.
    if (tw.affine == base.affine && tw.projective == base.projective) continue;
    try {
      const FactorResult r = factor_affine_pair(n, base.affine, tw.affine);
      if (accept_divisor(report, n, r.p)) {
        report.method = "equivalence-affine";
        return report;
      }
    } catch (const Error&) {
      // fall through to the projective counts
    }
    try {
      const FactorResult r =
          factor_projective_pair(n, base.projective, tw.projective, {options.scan_budget});
      if (accept_divisor(report, n, r.p)) {
        report.method = "equivalence-projective";
        return report;
      }
    } catch (const Error&) {
    }
  }
  fail(report, "scan-exhausted");
  return report;
}

}  // namespace

AttackReport twist_equivalence_demo(const AttackInstance& instance, CountOracle& oracle,
                                    const AttackOptions& options) {
  return timed([&] { return scan_twists(instance, oracle, options); });
}

AttackReport twist_equivalence_demo(unsigned bits, std::uint64_t seed,
                                    const AttackOptions& options) {
  InstanceOptions io;
  io.mode = InstanceMode::counted;
  const AttackInstance inst = random_instance(bits, seed, io);
  ExhaustiveCountOracle oracle(*inst.p, *inst.q);
  return twist_equivalence_demo(inst, oracle, options);
}

}  // namespace twistfactor
