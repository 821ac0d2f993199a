#include "twistfactor/instance.hpp"

#include <vector>

namespace twistfactor {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(gmp_randinit_mt) {
    state_.seed(Int(static_cast<unsigned long>(seed)));
  }

  // Uniform in [0, bound).
  Int below(const Int& bound) { return state_.get_z_range(bound); }

  // Uniform in [lo, hi].
  Int between(const Int& lo, const Int& hi) { return lo + below(hi - lo + 1); }

  Int prime_with_bits(unsigned bits) {
    const Int lo = Int(1) << (bits - 1);
    const Int hi = Int(1) << bits;
    for (;;) {
      Int candidate = lo + below(lo);
      mpz_nextprime(candidate.get_mpz_t(), candidate.get_mpz_t());
      if (candidate < hi && candidate >= 5) return candidate;
    }
  }

 private:
  gmp_randclass state_;
};

Traces twisted_traces(const Traces& t, const Int& d, const Int& p, const Int& q) {
  return {trace_sign_class(d, p) * t.ap, trace_sign_class(d, q) * t.aq};
}

CountsModN counts_from_traces(const Int& p, const Int& q, const Traces& t) {
  return {p * q, (p - t.ap) * (q - t.aq), (p + 1 - t.ap) * (q + 1 - t.aq)};
}

Int cube_root_floor(const Int& v) {
  Int r;
  mpz_root(r.get_mpz_t(), v.get_mpz_t(), 3);
  return r;
}

}  // namespace

bool is_close_prime_pair(const Int& p, const Int& q) {
  const Int delta = abs(p - q);
  return 6912 * delta * delta * delta <= p * q;
}

AttackInstance counted_instance(const Int& p, const Int& q, const Int& a, const Int& b,
                                const Int& d, std::uint64_t seed) {
  AttackInstance inst;
  inst.n = p * q;
  inst.curve = make_curve(a, b, inst.n);
  inst.d = d;
  inst.p = p < q ? p : q;
  inst.q = p < q ? q : p;
  inst.seed = seed;

  const PrimeLocalCount lp = count_points_prime(make_curve(a, b, *inst.p));
  const PrimeLocalCount lq = count_points_prime(make_curve(a, b, *inst.q));
  inst.counts = {inst.n, lp.affine * lq.affine, lp.projective * lq.projective};
  inst.twist_counts = count_points_modN(twist(inst.curve, d), *inst.p, *inst.q);
  inst.traces = Traces{lp.trace, lq.trace};
  return inst;
}

AttackInstance synthetic_instance(const Int& p, const Int& q, const Int& a, const Int& b,
                                  const Int& d, const Traces& traces, std::uint64_t seed) {
  if (p > q) return synthetic_instance(q, p, a, b, d, Traces{traces.aq, traces.ap}, seed);
  if (traces.ap * traces.ap > 4 * p || traces.aq * traces.aq > 4 * q) {
    throw Error(ErrorCode::invalid_argument, "synthetic traces violate the Hasse bound");
  }
  AttackInstance inst;
  inst.n = p * q;
  inst.curve = make_curve(a, b, inst.n);
  inst.d = d;
  inst.p = p;
  inst.q = q;
  inst.seed = seed;
  inst.traces = traces;
  inst.counts = counts_from_traces(p, q, traces);
  inst.twist_counts = counts_from_traces(p, q, twisted_traces(traces, d, p, q));
  return inst;
}

AttackInstance random_instance(unsigned bits, std::uint64_t seed, const InstanceOptions& options) {
  if (bits < 3) throw Error(ErrorCode::invalid_argument, "prime size must be at least 3 bits");
  if (options.mode == InstanceMode::counted && bits > kMaxCountBits) {
    throw Error(ErrorCode::modulus_too_large, "counted instances need primes below 2^26");
  }
  if (bits > 512) throw Error(ErrorCode::invalid_argument, "prime size above 512 bits");

  Rng rng(seed);
  Int p, q;
  for (;;) {
    p = rng.prime_with_bits(bits);
    if (options.close_primes) {
      const Int delta_max = cube_root_floor(p * p / 6912);
      if (delta_max < 2) {
        throw Error(ErrorCode::invalid_argument, "primes too small for the close-prime regime");
      }
      q = p + rng.between(1, delta_max);
      mpz_nextprime(q.get_mpz_t(), q.get_mpz_t());
      if (mpz_sizeinbase(q.get_mpz_t(), 2) != bits || !is_close_prime_pair(p, q)) continue;
    } else {
      q = rng.prime_with_bits(bits);
    }
    if (p == q) continue;
    if (p > q) std::swap(p, q);
    break;
  }
  const Int n = p * q;

  Int a, b;
  for (;;) {
    a = rng.below(n);
    b = rng.below(n);
    Int g;
    const Int disc = curve_discriminant(a, b);
    mpz_gcd(g.get_mpz_t(), disc.get_mpz_t(), n.get_mpz_t());
    if (g == 1) break;
  }

  Int d;
  if (options.d) {
    d = *options.d;
  } else {
    std::vector<Int> pool;
    for (const Int& c : nonresidue_scan(n)) {
      Int g;
      mpz_gcd(g.get_mpz_t(), c.get_mpz_t(), n.get_mpz_t());
      if (g != 1) continue;
      if (options.genuine_twist && jacobi(c, p) == 1 && jacobi(c, q) == 1) continue;
      pool.push_back(c);
    }
    if (pool.empty()) {
      throw Error(ErrorCode::invalid_argument, "no admissible twist multiplier for this modulus");
    }
    d = pool[rng.below(Int(static_cast<unsigned long>(pool.size()))).get_ui()];
  }

  if (options.mode == InstanceMode::counted) return counted_instance(p, q, a, b, d, seed);

  Traces t;
  t.ap = rng.between(-hasse_bound(p), hasse_bound(p));
  t.aq = rng.between(-hasse_bound(q), hasse_bound(q));
  return synthetic_instance(p, q, a, b, d, t, seed);
}

}  // namespace twistfactor
