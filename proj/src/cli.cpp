#include "twistfactor/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "twistfactor/attacks.hpp"
#include "twistfactor/io.hpp"
#include "twistfactor/twist_algebra.hpp"

namespace twistfactor {

namespace {

using Clock = std::chrono::steady_clock;

struct RunConfig {
  std::uint64_t seed = 0;
  std::optional<unsigned> bits;
  std::string instance_path;
  std::string in_path;
  std::string out_path;
  std::string format = "json";
  bool deterministic = false;
  unsigned jobs = 1;
  std::optional<std::uint64_t> budget;
  std::optional<std::uint64_t> cap;
  unsigned mult = 4;
  unsigned dim = 9;
  std::string beta = "1/2";
  std::string delta = "3/4";
  unsigned offset_bits = kDefaultOffsetBits;
  std::string convention = "auto";
  std::string scenario = "game1";
  bool synthetic = false;

  // count / coppersmith / fermat operands
  std::string n, p, q, a = "1", b = "1", d, approx, bound;

  // sweep grid
  std::vector<unsigned> grid_bits{64};
  std::vector<double> grid_fraction{0.55};
  std::vector<unsigned> grid_mult{4};
  std::vector<unsigned> grid_dim{9};
  unsigned seeds = 10;
};

Rational parse_rational(const std::string& s, const char* what) {
  Rational r;
  if (r.set_str(s, 10) != 0) {
    throw Error(ErrorCode::invalid_argument, std::string("--") + what + " is not a rational");
  }
  r.canonicalize();
  return r;
}

CoppersmithParams coppersmith_params(const RunConfig& cfg) {
  CoppersmithParams params{cfg.mult, cfg.dim, parse_rational(cfg.beta, "beta")};
  params.validate();
  return params;
}

AttackOptions attack_options(const RunConfig& cfg) {
  AttackOptions options;
  options.coppersmith = coppersmith_params(cfg);
  options.max_offset_bits = cfg.offset_bits;
  if (cfg.cap) options.divisor_cap = static_cast<std::size_t>(*cfg.cap);
  if (cfg.budget) {
    options.factor_budget = *cfg.budget;
    options.scan_budget = *cfg.budget;
  }
  return options;
}

Int require_int(const std::string& value, const char* flag) {
  if (value.empty()) throw Error(ErrorCode::invalid_argument, std::string("--") + flag + " is required");
  return parse_int(value);
}

AttackInstance load_instance(const RunConfig& cfg, bool close_primes) {
  if (!cfg.instance_path.empty()) return instance_from_json(read_json_file(cfg.instance_path));
  if (!cfg.bits) throw Error(ErrorCode::invalid_argument, "give --instance or --bits");
  InstanceOptions options;
  options.close_primes = close_primes;
  options.mode = (cfg.synthetic || *cfg.bits > kMaxCountBits) ? InstanceMode::synthetic
                                                              : InstanceMode::counted;
  if (!cfg.d.empty()) options.d = parse_int(cfg.d);
  return random_instance(*cfg.bits, cfg.seed, options);
}

std::vector<Convention> conventions(const std::string& name) {
  if (name == "affine") return {Convention::affine};
  if (name == "projective") return {Convention::projective};
  return {Convention::affine, Convention::projective};
}

Scenario parse_scenario(const std::string& name) {
  return name == "game0" ? Scenario::game0 : Scenario::game1;
}

std::string format_text(const Json& j) {
  if (!j.is_object()) return to_text(j);
  std::string s;
  for (const auto& [key, value] : j.items()) {
    s += key + ": " + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
  }
  return s;
}

class Output {
 public:
  Output(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

  void json(const Json& j) { raw(cfg_.format == "text" ? format_text(j) : to_text(j)); }

  void raw(const std::string& text) {
    if (cfg_.out_path.empty()) {
      out_ << text;
      return;
    }
    std::ofstream file(cfg_.out_path, std::ios::binary);
    if (!file) throw Error(ErrorCode::invalid_argument, "cannot write " + cfg_.out_path);
    file << text;
  }

 private:
  const RunConfig& cfg_;
  std::ostream& out_;
};

int report_exit(const AttackReport& report) {
  return report.factored() ? kExitOk : kExitAttackFailed;
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_keygen(const RunConfig& cfg, Output& out, bool close) {
  if (!cfg.bits) throw Error(ErrorCode::invalid_argument, "--bits is required");
  out.json(instance_to_json(load_instance(cfg, close)));
  return kExitOk;
}

int cmd_count(const RunConfig& cfg, Output& out) {
  Int p, q;
  CurveSpec curve;
  std::optional<Int> d;
  if (!cfg.instance_path.empty()) {
    const AttackInstance inst = instance_from_json(read_json_file(cfg.instance_path));
    if (!inst.has_ground_truth()) {
      throw Error(ErrorCode::invalid_argument, "counting needs an instance with p and q");
    }
    p = *inst.p;
    q = *inst.q;
    curve = inst.curve;
    d = inst.d;
  } else {
    p = require_int(cfg.p, "p");
    q = require_int(cfg.q, "q");
    curve = make_curve(parse_int(cfg.a), parse_int(cfg.b), p * q);
  }
  if (!cfg.d.empty()) d = parse_int(cfg.d);

  Json j = Json::object();
  j["n"] = int_to_json(curve.modulus);
  j["curve"] = {{"a", int_to_json(curve.a)}, {"b", int_to_json(curve.b)}};
  const CountsModN c = count_points_modN(curve, p, q);
  j["counts"] = {{"affine", int_to_json(c.affine)}, {"projective", int_to_json(c.projective)}};
  Json local = Json::array();
  for (const Int& prime : {p, q}) {
    const PrimeLocalCount lc = count_points_prime(make_curve(curve.a, curve.b, prime));
    local.push_back({{"p", int_to_json(lc.p)},
                     {"affine", int_to_json(lc.affine)},
                     {"projective", int_to_json(lc.projective)},
                     {"trace", int_to_json(lc.trace)}});
  }
  j["local"] = std::move(local);
  if (d) {
    const CountsModN t = count_points_modN(twist(curve, *d), p, q);
    j["d"] = int_to_json(*d);
    j["twist_counts"] = {{"affine", int_to_json(t.affine)},
                         {"projective", int_to_json(t.projective)}};
  }
  out.json(j);
  return kExitOk;
}

int cmd_twist_attack(const RunConfig& cfg, Output& out) {
  const AttackInstance inst = load_instance(cfg, false);
  if (!inst.twist_counts) throw Error(ErrorCode::invalid_argument, "instance has no twist_counts");
  const auto start = Clock::now();
  AttackReport report;
  report.method = "twist";
  for (Convention conv : conventions(cfg.convention)) {
    try {
      const FactorResult r =
          conv == Convention::affine
              ? factor_affine_pair(inst.n, inst.counts.affine, inst.twist_counts->affine)
              : factor_projective_pair(inst.n, inst.counts.projective,
                                       inst.twist_counts->projective,
                                       {attack_options(cfg).scan_budget});
      report.outcome = Outcome::factored;
      report.p = r.p;
      report.q = r.q;
      report.method = r.method;
      report.reason.clear();
      break;
    } catch (const Error& e) {
      report.reason = std::string(to_string(e.code()));
    }
  }
  report.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
  out.json(report_to_json(report, cfg.deterministic));
  return report_exit(report);
}

Convention single_convention(const RunConfig& cfg) {
  return cfg.convention == "projective" ? Convention::projective : Convention::affine;
}

int cmd_count_attack(const RunConfig& cfg, Output& out, bool small_diff) {
  const AttackInstance inst = load_instance(cfg, small_diff);
  const Convention conv = single_convention(cfg);
  const AttackOptions options = attack_options(cfg);
  std::vector<Int> hints;
  if (inst.has_ground_truth()) hints = local_count_hints(inst, conv);
  AuxiliaryFactoringOracle oracle(inst.n, options.factor_budget, std::move(hints));
  const FactoredInteger count = oracle.factor(inst.counts.get(conv));
  const AttackReport report = small_diff ? small_diff_attack(inst.n, count, conv, options)
                                         : malleability_attack(inst.n, count, conv, options);
  out.json(report_to_json(report, cfg.deterministic));
  return report_exit(report);
}

int cmd_fermat(const RunConfig& cfg, Output& out) {
  Int n;
  if (!cfg.n.empty()) {
    n = parse_int(cfg.n);
  } else {
    n = load_instance(cfg, true).n;
  }
  const std::uint64_t cap = cfg.cap.value_or(std::uint64_t{1} << 24);
  const auto start = Clock::now();
  const std::optional<FermatResult> r = fermat_factor(n, cap);
  AttackReport report;
  report.method = "fermat";
  if (r && r->q > 1) {
    report.outcome = Outcome::factored;
    report.p = r->q;
    report.q = r->p;
  } else {
    report.reason = r ? "trivial-square" : "iteration-cap";
  }
  report.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
  Json j = report_to_json(report, cfg.deterministic);
  j["iterations"] = r ? r->iterations : cap;
  out.json(j);
  return report_exit(report);
}

Json search_to_json(const DivisorSearch& s, const Int& n) {
  Json j = Json::object();
  switch (s.status) {
    case SearchStatus::found:
      j["outcome"] = "factored";
      j["p"] = int_to_json(s.divisor < n / s.divisor ? s.divisor : n / s.divisor);
      j["q"] = int_to_json(s.divisor < n / s.divisor ? n / s.divisor : s.divisor);
      break;
    case SearchStatus::not_found:
      j["outcome"] = "failed";
      j["reason"] = "not-found";
      break;
    case SearchStatus::budget_exceeded:
      j["outcome"] = "failed";
      j["reason"] = "budget-exceeded";
      break;
  }
  j["lattice_calls"] = s.lattice_calls;
  return j;
}

int cmd_coppersmith(const RunConfig& cfg, Output& out) {
  const Int n = require_int(cfg.n, "n");
  const Int approx = require_int(cfg.approx, "approx");
  const Int bound = require_int(cfg.bound, "bound");
  if (n < 4 || bound < 0) throw Error(ErrorCode::invalid_argument, "need n >= 4 and bound >= 0");
  const CoppersmithParams params = coppersmith_params(cfg);
  const double log2_divisor =
      params.beta.get_d() * static_cast<double>(mpz_sizeinbase(n.get_mpz_t(), 2) - 1);
  const DivisorSearch s = find_divisor_near(n, approx, bound, log2_divisor, params, cfg.offset_bits);
  out.json(search_to_json(s, n));
  return s.found() ? kExitOk : kExitAttackFailed;
}

int cmd_lll(const RunConfig& cfg, Output& out) {
  if (cfg.in_path.empty()) throw Error(ErrorCode::invalid_argument, "--in is required");
  const IntMatrix basis = matrix_from_json(read_json_file(cfg.in_path));
  out.json(matrix_to_json(lll_reduce(basis, parse_rational(cfg.delta, "delta"))));
  return kExitOk;
}

int cmd_heron_census(const RunConfig& cfg, Output& out) {
  const AttackInstance inst = load_instance(cfg, true);
  const Convention conv = single_convention(cfg);
  const AttackOptions options = attack_options(cfg);
  std::vector<Int> hints;
  if (inst.has_ground_truth()) hints = local_count_hints(inst, conv);
  AuxiliaryFactoringOracle oracle(inst.n, options.factor_budget, std::move(hints));
  const HeronCensus census =
      heron_census(oracle.factor(inst.counts.get(conv)), inst.n, options.divisor_cap);
  Json divisors = Json::array();
  for (const Int& v : census.divisors) divisors.push_back(int_to_json(v));
  Json j = Json::object();
  j["n"] = int_to_json(inst.n);
  j["lo"] = int_to_json(census.lo);
  j["hi"] = int_to_json(census.hi);
  j["divisors"] = std::move(divisors);
  j["at_most_two"] = census.at_most_two();
  out.json(j);
  return kExitOk;
}

int cmd_game_sim(const RunConfig& cfg, Output& out) {
  const AttackInstance inst = load_instance(cfg, false);
  const AttackReport report = game_simulation(inst, parse_scenario(cfg.scenario),
                                              single_convention(cfg), attack_options(cfg));
  out.json(report_to_json(report, cfg.deterministic));
  return report_exit(report);
}

int cmd_equivalence(const RunConfig& cfg, Output& out) {
  const AttackInstance inst = load_instance(cfg, false);
  const AttackOptions options = attack_options(cfg);
  AttackReport report;
  if (inst.has_ground_truth() && inst.p->get_str(2).size() <= kMaxCountBits &&
      inst.q->get_str(2).size() <= kMaxCountBits && !cfg.synthetic) {
    ExhaustiveCountOracle oracle(*inst.p, *inst.q);
    report = twist_equivalence_demo(inst, oracle, options);
  } else if (inst.traces) {
    SyntheticCountOracle oracle(inst);
    report = twist_equivalence_demo(inst, oracle, options);
  } else {
    throw Error(ErrorCode::invalid_argument, "equivalence demo needs ground truth to serve counts");
  }
  out.json(report_to_json(report, cfg.deterministic));
  return report_exit(report);
}

std::string format_fraction(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

int cmd_sweep(const RunConfig& cfg, Output& out) {
  if (cfg.seeds == 0) throw Error(ErrorCode::invalid_argument, "--seeds must be positive");
  std::ostringstream csv;
  csv << "bits,fraction,mult,dim,seeds,success_rate,mean_coppersmith_calls,mean_wall_ms\n";
  InstanceOptions inst_opts;
  inst_opts.mode = InstanceMode::synthetic;
  for (unsigned bits : cfg.grid_bits) {
    for (double fraction : cfg.grid_fraction) {
      if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw Error(ErrorCode::invalid_argument, "--fraction values must lie in [0, 1]");
      }
      for (unsigned mult : cfg.grid_mult) {
        for (unsigned dim : cfg.grid_dim) {
          CoppersmithParams params{mult, dim, parse_rational(cfg.beta, "beta")};
          params.validate();
          unsigned successes = 0;
          std::uint64_t calls = 0;
          double wall_ms = 0;
          for (unsigned i = 0; i < cfg.seeds; ++i) {
            const AttackInstance inst = random_instance(bits, cfg.seed + i, inst_opts);
            const Int& p = *inst.p;
            const unsigned known = std::min<unsigned>(
                bits, static_cast<unsigned>(std::ceil(fraction * static_cast<double>(bits))));
            const unsigned t = bits - known;
            const auto start = Clock::now();
            const DivisorSearch s = factor_high_bits(inst.n, p >> t, t, params, cfg.offset_bits);
            wall_ms += std::chrono::duration<double, std::milli>(Clock::now() - start).count();
            if (s.found() && (s.divisor == p || s.divisor == *inst.q)) ++successes;
            calls += s.lattice_calls;
          }
          const double n_seeds = cfg.seeds;
          csv << bits << ',' << format_fraction(fraction) << ',' << mult << ',' << dim << ','
              << cfg.seeds << ',' << format_fraction(successes / n_seeds) << ','
              << format_fraction(static_cast<double>(calls) / n_seeds) << ','
              << (cfg.deterministic ? std::string("0") : format_fraction(wall_ms / n_seeds))
              << '\n';
        }
      }
    }
  }
  out.raw(csv.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--seed", cfg.seed, "Instance seed");
  sub->add_option("--bits", cfg.bits, "Prime size in bits");
  sub->add_option("--instance", cfg.instance_path, "Instance JSON")->check(CLI::ExistingFile);
  sub->add_option("--out", cfg.out_path, "Write the report here instead of stdout");
  sub->add_option("--format", cfg.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
  sub->add_flag("--deterministic", cfg.deterministic, "Zero all timing fields");
  sub->add_option("--jobs", cfg.jobs, "Worker cap")->check(CLI::PositiveNumber);
  sub->add_option("--budget", cfg.budget, "Factoring and scan step budget");
  sub->add_option("--cap", cfg.cap, "Divisor or iteration cap");
  sub->add_option("--mult", cfg.mult, "Coppersmith multiplicity m");
  sub->add_option("--dim", cfg.dim, "Coppersmith lattice dimension k");
  sub->add_option("--beta", cfg.beta, "Divisor exponent, e.g. 1/2");
  sub->add_option("--delta", cfg.delta, "LLL parameter, e.g. 3/4");
  sub->add_option("--offset-bits", cfg.offset_bits, "Largest interval split exponent");
  sub->add_option("--convention", cfg.convention, "affine, projective or auto")
      ->check(CLI::IsMember({"affine", "projective", "auto"}));
  sub->add_option("--d", cfg.d, "Twist multiplier");
  sub->add_flag("--synthetic", cfg.synthetic, "Generate traces instead of counting");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Factoring from elliptic curve point counts and their twists", "twistfactor"};
  app.require_subcommand(1);

  auto* keygen = app.add_subcommand("keygen", "Generate an attack instance");
  bool close = false;
  keygen->add_flag("--close", close, "Close primes, 6912 |p - q|^3 <= N");
  auto* count = app.add_subcommand("count", "Count points modulo N = p q");
  count->add_option("--p", cfg.p);
  count->add_option("--q", cfg.q);
  count->add_option("--a", cfg.a);
  count->add_option("--b", cfg.b);
  auto* twist_attack = app.add_subcommand("twist-attack", "Factor from a curve and twist count");
  auto* malleability = app.add_subcommand("malleability", "Factor from a factored point count");
  auto* small_diff = app.add_subcommand("small-diff", "Malleability for close primes");
  auto* fermat = app.add_subcommand("fermat", "Fermat factorization");
  fermat->add_option("--n", cfg.n);
  auto* coppersmith = app.add_subcommand("coppersmith", "Find p | N near an approximation");
  coppersmith->add_option("--n", cfg.n);
  coppersmith->add_option("--approx", cfg.approx);
  coppersmith->add_option("--bound", cfg.bound);
  auto* lll = app.add_subcommand("lll", "LLL-reduce a matrix JSON");
  lll->add_option("--in", cfg.in_path)->check(CLI::ExistingFile);
  auto* heron = app.add_subcommand("heron-census", "Divisors of a count near sqrt(N)");
  auto* game = app.add_subcommand("game-sim", "Run game 0 or game 1");
  game->add_option("--scenario", cfg.scenario)->check(CLI::IsMember({"game0", "game1"}));
  auto* equivalence = app.add_subcommand("equivalence-demo", "Factor through a count oracle");
  auto* sweep = app.add_subcommand("sweep", "High-bits parameter sweep as CSV");
  sweep->add_option("--grid-bits", cfg.grid_bits, "Prime sizes")->delimiter(',');
  sweep->add_option("--fraction", cfg.grid_fraction, "Known fractions of p's bits")
      ->delimiter(',');
  sweep->add_option("--grid-mult", cfg.grid_mult, "Multiplicities")->delimiter(',');
  sweep->add_option("--grid-dim", cfg.grid_dim, "Dimensions")->delimiter(',');
  sweep->add_option("--seeds", cfg.seeds, "Seeds per cell");

  for (CLI::App* sub : app.get_subcommands({})) add_common(sub, cfg);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "twistfactor: " << e.what() << "\n";
    return kExitUsage;
  }

  Output output(cfg, out);
  try {
    if (*keygen) return cmd_keygen(cfg, output, close);
    if (*count) return cmd_count(cfg, output);
    if (*twist_attack) return cmd_twist_attack(cfg, output);
    if (*malleability) return cmd_count_attack(cfg, output, false);
    if (*small_diff) return cmd_count_attack(cfg, output, true);
    if (*fermat) return cmd_fermat(cfg, output);
    if (*coppersmith) return cmd_coppersmith(cfg, output);
    if (*lll) return cmd_lll(cfg, output);
    if (*heron) return cmd_heron_census(cfg, output);
    if (*game) return cmd_game_sim(cfg, output);
    if (*equivalence) return cmd_equivalence(cfg, output);
    if (*sweep) return cmd_sweep(cfg, output);
  } catch (const Error& e) {
    err << "twistfactor: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace twistfactor
