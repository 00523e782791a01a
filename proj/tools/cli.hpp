#pragma once

// Command-line front-end. Everything is reachable through run(), which the
// executable and the acceptance tests share.
//
// Exit codes: 0 success, 2 bad input, 3 learner failure.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pbdpowers/pbdpowers.hpp"

namespace pbdpowers::cli {

inline constexpr const char* kSchema = "pbd-powers/1";
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitLearnerFailure = 3;

// ---------------------------------------------------------------------------
// Parsing helpers
// ---------------------------------------------------------------------------

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

inline double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw PreconditionError(std::string(what) + ": cannot parse \"" + s + "\" as a number");
  }
}

inline long long parse_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw PreconditionError(std::string(what) + ": cannot parse \"" + s + "\" as an integer");
  }
}

/// "b:<n>:<p>", "@file.json", or a comma list of probabilities.
inline ProbVector parse_distribution(const std::string& lit) {
  if (lit.rfind("b:", 0) == 0) {
    const auto parts = split(lit, ':');
    detail::require(parts.size() == 3, "distribution literal must look like b:<n>:<p>");
    const long long n = parse_int(parts[1], "binomial order");
    detail::require(n >= 1, "binomial order must be positive");
    return BinomialSpec(static_cast<std::size_t>(n), parse_double(parts[2], "binomial p")).as_vector();
  }
  if (lit.rfind('@', 0) == 0) return instance_vector(read_json_file(lit.substr(1)));
  std::vector<double> probs;
  for (const auto& tok : split(lit, ',')) probs.push_back(parse_double(tok, "probability"));
  return ProbVector(std::move(probs));
}

/// "1..16", "1,2,4.5", or a mix such as "0.5,1..4".
inline std::vector<double> parse_powers(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split(s, ',')) {
    const auto dots = tok.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_double(tok, "power"));
      continue;
    }
    const long long a = parse_int(tok.substr(0, dots), "power range start");
    const long long b = parse_int(tok.substr(dots + 2), "power range end");
    detail::require(a <= b && b - a <= 100000, "power range must be ascending and at most 10^5 long");
    for (long long k = a; k <= b; ++k) out.push_back(static_cast<double>(k));
  }
  detail::require(!out.empty(), "no powers given");
  for (double k : out) {
    if (!(k > 0.0)) throw InvalidPower("powers must be positive");
  }
  return out;
}

inline std::vector<int> parse_int_list(const std::string& s, const char* what) {
  std::vector<int> out;
  for (const auto& tok : split(s, ',')) out.push_back(static_cast<int>(parse_int(tok, what)));
  return out;
}

inline std::string csv_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

/// Wilson score interval for k successes in n trials.
struct Interval {
  double low = 0.0;
  double high = 1.0;
};

inline Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (ph + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {k == 0 ? 0.0 : std::max(0.0, centre - half), k == n ? 1.0 : std::min(1.0, centre + half)};
}

inline unsigned thread_cap() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PBD_POWERS_THREADS")) {
    try {
      const long long v = std::stoll(env);
      if (v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
    } catch (const std::exception&) {
    }
  }
  return n;
}

inline json ledger_json(const PowerOracle& oracle, std::optional<std::size_t> powers_learned = std::nullopt) {
  json j = to_json(oracle.ledger());
  if (powers_learned && *powers_learned > 0) {
    j["powers_learned"] = *powers_learned;
    j["per_learned_power"] = static_cast<double>(oracle.total()) / static_cast<double>(*powers_learned);
  }
  return j;
}

inline json base_report(const std::string& command) {
  return json{{"schema", kSchema}, {"command", command}, {"rng", kRngAlgorithm}};
}

// ---------------------------------------------------------------------------
// Learner runs. Each returns a report without runtime; trial-suite reuses them.
// ---------------------------------------------------------------------------

struct BinomialArgs {
  std::size_t n = 1000;
  double p = 0.5;
  double eps = 0.05;
  double delta = 0.1;
  std::uint64_t seed = 0;
  bool integer_powers = false;
  int extended = 0;
  bool evaluate = false;
  std::optional<std::uint64_t> budget;
};

inline const std::vector<double>& binomial_real_grid() {
  static const std::vector<double> grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9,
                                        1.5, 2.0, 5.0, 10.0, 1e2, 1e3, 1e4};
  return grid;
}

inline const std::vector<double>& binomial_integer_grid() {
  static const std::vector<double> grid{1, 2, 3, 4, 5, 10, 20, 50, 100, 1000, 10000};
  return grid;
}

inline json binomial_output_json(const BinomialLearnOutput& o) {
  return json{{"a_hat", o.a_hat},
              {"q1_hat", o.q1_hat},
              {"q2_hat", o.q2_hat},
              {"p_hat", o.p_hat},
              {"base_power", o.base_power},
              {"anchor_power", o.anchor_power},
              {"anchored", o.anchored},
              {"samples_first", o.samples_first},
              {"samples_anchor", o.samples_anchor}};
}

inline json run_learn_binomial(const BinomialArgs& a) {
  detail::require(a.n >= 1, "learn-binomial: n must be positive");
  detail::require(a.p >= 0.0 && a.p <= 1.0, "learn-binomial: p must lie in [0,1]");
  detail::require(!(a.integer_powers && a.extended > 0), "learn-binomial: --integer-powers and --extended exclude each other");
  PowerOracle oracle(ProbVector::constant(a.n, a.p), a.seed, a.budget);

  json report = base_report("learn-binomial");
  report["algorithm"] = a.extended > 0 ? "binomial-extended" : a.integer_powers ? "binomial-integer" : "binomial";
  report["params"] = {{"n", a.n},          {"p", a.p},
                      {"eps", a.eps},      {"delta", a.delta},
                      {"integer_powers", a.integer_powers}, {"extended", a.extended},
                      {"evaluate", a.evaluate}};
  report["seed"] = a.seed;

  BinomialLearnOutput out;
  json estimates;
  if (a.extended > 0) {
    const ExtendedRangeOutput ext = learn_extended_range(oracle, a.extended, a.eps, a.delta);
    out = ext.inner;
    estimates = binomial_output_json(out);
    estimates["t"] = ext.t;
    estimates["regime"] = to_string(ext.regime);
    estimates["first_q1"] = ext.first_q1;
    estimates["first_q2"] = ext.first_q2;
    json probes = json::array();
    for (const RangeProbe& pr : ext.probes) {
      probes.push_back({{"index", pr.index}, {"power", pr.power}, {"estimate", pr.estimate}, {"qualifies", pr.qualifies}});
    }
    estimates["probes"] = probes;
    // Guarantees refer to powers l * composite_exponent.
    estimates["composite_exponent"] = ext.t * out.a_hat;
  } else {
    out = a.integer_powers ? learn_integer_powers(oracle, a.eps, a.delta) : learn_binomial_powers(oracle, a.eps, a.delta);
    estimates = binomial_output_json(out);
    estimates["composite_exponent"] = out.anchor_power;
  }
  report["estimates"] = estimates;

  std::optional<std::size_t> learned;
  if (a.evaluate) {
    const double bound = kBinomialTvdConstant * a.eps;
    const auto& grid = a.integer_powers ? binomial_integer_grid() : binomial_real_grid();
    json rows = json::array();
    double worst = 0.0;
    for (double g : grid) {
      // Integer mode: g is a raw power j, served through l = j / a_hat.
      const double l = a.integer_powers ? g / out.a_hat : g;
      const double target_power = a.integer_powers ? g : out.anchor_power * l;
      const double predicted = predicted_parameter(out, l);
      const double truth = pow_prob(a.p, target_power);
      const double d = tvd(binomial_pmf(a.n, predicted), binomial_pmf(a.n, truth));
      worst = std::max(worst, d);
      rows.push_back({{"l", l}, {"power", target_power}, {"predicted_p", predicted}, {"true_p", truth}, {"tvd", d}});
    }
    report["evaluation"] = {{"rows", rows}, {"max_tvd", worst}, {"bound", bound}};
    report["success"] = worst <= bound;
    learned = grid.size();
  }
  report["ledger"] = ledger_json(oracle, learned);
  return report;
}

struct SeparatedArgs {
  double c = 2.0;
  int s = 3;
  std::string alpha;  // empty: random from the seed
  std::optional<int> alpha_max;
  double eps = 1.0 / 12.0;
  double delta = 0.1;
  std::uint64_t seed = 0;
  bool exact_means = false;
  std::optional<std::uint64_t> budget;
};

inline constexpr std::size_t kSeparatedSampledCap = 20'000;

inline json run_learn_separated(const SeparatedArgs& a) {
  const SeparatedClassSpec spec =
      a.alpha.empty() ? make_separated_instance(a.c, a.s, splitmix64(a.seed ^ 0xa1fa5eedULL), a.alpha_max)
                      : make_separated_instance(a.c, a.s, parse_int_list(a.alpha, "alpha"), a.alpha_max);
  const SeparatedPublic& pub = spec.pub;

  json report = base_report("learn-separated");
  report["algorithm"] = "separated";
  report["params"] = {{"c", a.c}, {"s", a.s}, {"alpha", spec.alpha}, {"alpha_max", pub.alpha_max},
                      {"eps", a.eps}, {"delta", a.delta}, {"exact_means", a.exact_means}};
  report["seed"] = a.seed;
  report["instance"] = {{"n", pub.n},
                        {"block_size", pub.block_size()},
                        {"fixed_point_n", spec.fixed_point.n},
                        {"rounding_residual", spec.rounding_residual},
                        {"p", spec.block_probs()},
                        {"size_conditions_hold", satisfies_size_conditions(pub, a.eps)}};

  SeparatedLearnOutput out;
  std::optional<PowerOracle> oracle;
  if (a.exact_means) {
    out = learn_separated_exact(spec);
  } else {
    detail::require(pub.n <= kSeparatedSampledCap, "learn-separated: sampled mode needs n <= 20000 (use --exact-means)");
    oracle.emplace(spec.vector(), a.seed, a.budget);
    out = learn_separated(*oracle, pub, a.eps, a.delta);
  }

  const double threshold = large_diff_threshold(pub, a.eps);
  json blocks = json::array();
  for (const SeparatedBlock& b : out.blocks) {
    blocks.push_back({{"index", b.index},
                      {"power", b.power},
                      {"mu_hat", b.mu_hat},
                      {"tau_hat", b.tau_hat},
                      {"beta", b.beta},
                      {"a", b.a},
                      {"b", b.b},
                      {"margin", b.b - b.a},
                      {"margin_threshold", threshold},
                      {"alpha_hat", b.alpha_hat},
                      {"samples", b.samples}});
  }
  report["estimates"] = {{"alpha_hat", out.alpha_hat}, {"blocks", blocks}};
  report["success"] = out.alpha_hat == spec.alpha;
  if (oracle) {
    report["ledger"] = ledger_json(*oracle, static_cast<std::size_t>(pub.s));
  } else {
    report["ledger"] = {{"powers", json::array()}, {"total", 0}};
  }
  return report;
}

struct NewtonArgs {
  std::size_t n = 3;
  std::string probs;  // empty: random from the seed
  double eps = 0.1;
  double delta = 0.1;
  std::string mode = "sampled";
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> samples_per_power;
  double tol = kDefaultRootTolerance;
  std::optional<std::uint64_t> budget;
};

// n sorted values in [0,1] at least `gap` apart, uniform over that set.
inline ProbVector random_gapped_vector(std::size_t n, std::uint64_t seed, double gap = 0.05) {
  const double room = 1.0 - gap * static_cast<double>(n - 1);
  detail::require(room >= 0.0, "random vector: n too large for the minimum gap");
  Xoshiro256 rng(seed);
  std::vector<double> u(n);
  for (double& x : u) x = room * rng.uniform();
  std::sort(u.begin(), u.end());
  for (std::size_t i = 0; i < n; ++i) u[i] += gap * static_cast<double>(i);
  return ProbVector(std::move(u));
}

inline json run_learn_newton(const NewtonArgs& a) {
  detail::require(a.mode == "sampled" || a.mode == "exact", "learn-newton: --mode must be sampled or exact");
  const ProbVector hidden = a.probs.empty() ? random_gapped_vector(a.n, splitmix64(a.seed ^ 0x4e3770ULL))
                                            : parse_distribution(a.probs);
  detail::require(hidden.order() <= kMaxRootDegree, "learn-newton: n must be at most 64");

  json report = base_report("learn-newton");
  report["algorithm"] = "newton";
  report["params"] = {{"n", hidden.order()}, {"eps", a.eps}, {"delta", a.delta}, {"mode", a.mode}, {"tol", a.tol}};
  if (a.samples_per_power) report["params"]["samples_per_power"] = *a.samples_per_power;
  report["seed"] = a.seed;
  report["hidden"] = to_json(hidden);

  NewtonLearnOutput out;
  std::optional<PowerOracle> oracle;
  if (a.mode == "exact") {
    out = learn_parameters_exact(hidden, a.tol);
  } else {
    oracle.emplace(hidden, a.seed, a.budget);
    out = learn_parameters(*oracle, a.eps, a.delta, a.samples_per_power, a.tol);
  }
  const std::vector<double> truth(hidden.probs().begin(), hidden.probs().end());
  const std::vector<double> true_coeffs = vieta_coeffs(hidden.probs());
  double coeff_err = 0.0;
  for (std::size_t k = 0; k < true_coeffs.size(); ++k) coeff_err = std::max(coeff_err, std::abs(true_coeffs[k] - out.coeffs[k]));
  const double linf = sorted_linf(out.estimate.roots, truth);

  json est = {{"p_hat", out.estimate.roots},
              {"residual", out.estimate.residual},
              {"real_residual", out.estimate.real_residual},
              {"max_imag", out.estimate.max_imag},
              {"imag_warning", out.estimate.imag_warning},
              {"iterations", out.estimate.iterations},
              {"mus", out.mus},
              {"coeffs", out.coeffs},
              {"observed_coeff_error", coeff_err},
              {"linf_error", linf}};
  if (out.budget) {
    est["u"] = out.budget->u;
    est["coeff_tol"] = out.budget->coeff_tol;
    est["predicted_coeff_error"] = out.budget->predicted_coeff_error;
    est["guard"] = out.budget->guard;
    est["groups"] = out.plan.groups;
    est["group_size"] = out.plan.group_size;
  }
  report["estimates"] = est;
  report["success"] = linf <= a.eps;
  if (oracle) {
    report["ledger"] = ledger_json(*oracle, hidden.order());
  } else {
    report["ledger"] = {{"powers", json::array()}, {"total", 0}};
  }
  return report;
}

// ---------------------------------------------------------------------------
// Subcommand bodies that emit text.
// ---------------------------------------------------------------------------

inline void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw PreconditionError("cannot write " + out_path);
  f << text;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct TrialSuiteArgs {
  std::string algorithm = "binomial";
  std::uint64_t trials = 20;
  std::uint64_t seed = 0;
};

inline json run_trial_suite(const TrialSuiteArgs& t, const BinomialArgs& bin, const SeparatedArgs& sep,
                            const NewtonArgs& newt) {
  detail::require(t.algorithm == "binomial" || t.algorithm == "separated" || t.algorithm == "newton",
                  "trial-suite: --algorithm must be binomial, separated or newton");
  detail::require(t.trials >= 1, "trial-suite: need at least one trial");

  struct Outcome {
    std::uint64_t seed = 0;
    bool success = false;
    std::uint64_t samples = 0;
    std::string error;
  };
  std::vector<Outcome> outcomes(t.trials);

  auto run_one = [&](std::uint64_t i) {
    Outcome& o = outcomes[i];
    o.seed = mix_stream(t.seed, 0, i);
    try {
      json r;
      if (t.algorithm == "binomial") {
        BinomialArgs b = bin;
        b.seed = o.seed;
        b.evaluate = true;
        r = run_learn_binomial(b);
      } else if (t.algorithm == "separated") {
        SeparatedArgs s = sep;
        s.seed = o.seed;
        r = run_learn_separated(s);
      } else {
        NewtonArgs nw = newt;
        nw.seed = o.seed;
        r = run_learn_newton(nw);
      }
      o.success = r.value("success", false);
      o.samples = r["ledger"]["total"].get<std::uint64_t>();
    } catch (const LearnerFailure& e) {
      o.error = e.what();
    }
  };

  const unsigned workers = std::min<std::uint64_t>(thread_cap(), t.trials);
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < t.trials; ++i) run_one(i);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t i; (i = next++) < t.trials;) {
          try {
            run_one(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  std::uint64_t successes = 0;
  json runs = json::array();
  for (std::uint64_t i = 0; i < t.trials; ++i) {
    const Outcome& o = outcomes[i];
    successes += o.success ? 1 : 0;
    json r = {{"trial", i}, {"seed", o.seed}, {"success", o.success}, {"samples", o.samples}};
    if (!o.error.empty()) r["error"] = o.error;
    runs.push_back(r);
  }
  const Interval ci = wilson_interval(successes, t.trials);
  json report = base_report("trial-suite");
  report["algorithm"] = t.algorithm;
  report["seed"] = t.seed;
  report["trials"] = t.trials;
  report["successes"] = successes;
  report["frequency"] = static_cast<double>(successes) / static_cast<double>(t.trials);
  report["ci"] = {{"method", "wilson"}, {"level", 0.95}, {"low", ci.low}, {"high", ci.high}};
  report["runs"] = runs;
  return report;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learning powers of Poisson binomial distributions"};
  app.name("pbd-powers");
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_path;
  app.add_option("--out", out_path, "Write the report to this file instead of stdout");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Draw samples from a power of a PBD");
  std::string sim_dist;
  double sim_power = 1.0;
  std::uint64_t sim_count = 10;
  std::uint64_t sim_seed = 0;
  bool sim_hist = false;
  sim->add_option("--dist", sim_dist, "b:<n>:<p>, @file.json or p1,p2,...")->required();
  sim->add_option("--power", sim_power, "Power k > 0");
  sim->add_option("--count", sim_count, "Number of draws");
  sim->add_option("--seed", sim_seed, "Seed");
  sim->add_flag("--histogram", sim_hist, "Emit counts per value instead of the draws");

  // distances
  auto* dist = app.add_subcommand("distances", "Exact TVD, KL and Hellinger between two PBDs");
  std::string left, right, dist_format = "json";
  double dist_power = 1.0;
  dist->add_option("--left", left, "First distribution")->required();
  dist->add_option("--right", right, "Second distribution")->required();
  dist->add_option("--power", dist_power, "Compare the k-th powers");
  dist->add_option("--format", dist_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  // learn-binomial
  BinomialArgs bin;
  auto* lb = app.add_subcommand("learn-binomial", "Learn all powers of B(n,p) from two sampled powers");
  auto add_binomial_opts = [&](CLI::App* c) {
    c->add_option("--n", bin.n, "Order n");
    c->add_option("--p", bin.p, "Hidden parameter p");
    c->add_option("--eps", bin.eps, "Accuracy eps");
    c->add_option("--delta", bin.delta, "Failure probability delta");
  };
  add_binomial_opts(lb);
  lb->add_option("--seed", bin.seed, "Seed");
  lb->add_flag("--integer-powers", bin.integer_powers, "Integer powers only");
  lb->add_option("--extended", bin.extended, "Extended range with exponent d");
  lb->add_flag("--evaluate", bin.evaluate, "Add the per-power TVD table");
  lb->add_option("--budget", bin.budget, "Cap on total samples");

  // learn-separated
  SeparatedArgs sep;
  std::optional<int> sep_amax;
  auto* ls = app.add_subcommand("learn-separated", "Exactly recover alpha for the separated class");
  auto add_separated_opts = [&](CLI::App* c) {
    c->add_option("--c", sep.c, "Scale c >= 2");
    c->add_option("--s", sep.s, "Number of blocks s");
    c->add_option("--alpha-max", sep_amax, "Largest admissible alpha_i");
    c->add_flag("--exact-means", sep.exact_means, "Use exact block means instead of samples");
  };
  add_separated_opts(ls);
  ls->add_option("--alpha", sep.alpha, "a0,a1,... (random from the seed when omitted)");
  ls->add_option("--eps", sep.eps, "Accuracy eps");
  ls->add_option("--delta", sep.delta, "Failure probability delta");
  ls->add_option("--seed", sep.seed, "Seed");
  ls->add_option("--budget", sep.budget, "Cap on total samples");

  // learn-newton
  NewtonArgs newt;
  auto* ln = app.add_subcommand("learn-newton", "Recover all parameters from the first n power sums");
  auto add_newton_opts = [&](CLI::App* c) {
    c->add_option("--mode", newt.mode, "sampled or exact")->check(CLI::IsMember({"sampled", "exact"}));
    c->add_option("--samples-per-power", newt.samples_per_power, "Override the per-power sample count");
    c->add_option("--tol", newt.tol, "Root-finder tolerance");
  };
  add_newton_opts(ln);
  ln->add_option("--n", newt.n, "Order n (random hidden vector)");
  ln->add_option("--probs", newt.probs, "Hidden vector: p1,p2,... or @file.json");
  ln->add_option("--eps", newt.eps, "Accuracy eps");
  ln->add_option("--delta", newt.delta, "Failure probability delta");
  ln->add_option("--seed", newt.seed, "Seed");
  ln->add_option("--budget", newt.budget, "Cap on total samples");

  // verify-instance
  auto* vi = app.add_subcommand("verify-instance", "Distance table between the powers of an instance pair");
  std::string vi_file, vi_powers = "1", vi_format = "csv";
  vi->add_option("--file", vi_file, "Instance JSON file")->required();
  vi->add_option("--powers", vi_powers, "e.g. 1..16 or 1,2,4");
  vi->add_option("--format", vi_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  // trial-suite
  TrialSuiteArgs ts;
  auto* tr = app.add_subcommand("trial-suite", "Success frequency of a learner over seeded trials");
  tr->add_option("--algorithm", ts.algorithm, "binomial, separated or newton")
      ->check(CLI::IsMember({"binomial", "separated", "newton"}));
  tr->add_option("--trials", ts.trials, "Number of trials");
  tr->add_option("--seed", ts.seed, "Master seed");
  double tr_eps = -1.0;
  double tr_delta = -1.0;
  tr->add_option("--eps", tr_eps, "Accuracy eps");
  tr->add_option("--delta", tr_delta, "Failure probability delta");
  std::optional<std::size_t> tr_n;
  tr->add_option("--n", tr_n, "Order n (binomial) or vector size (newton)");
  tr->add_option("--p", bin.p, "Hidden p (binomial)");
  tr->add_flag("--integer-powers", bin.integer_powers, "Binomial: integer powers only");
  tr->add_option("--extended", bin.extended, "Binomial: extended range exponent d");
  add_separated_opts(tr);
  add_newton_opts(tr);
  tr->add_option("--probs", newt.probs, "Newton: fixed hidden vector");

  std::vector<const char*> argv{"pbd-powers"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitUsage;
  }
  sep.alpha_max = sep_amax;

  const auto started = std::chrono::steady_clock::now();
  auto finish = [&](json report) {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    report["runtime_ms"] = ms.count();
    emit(dump(report), out_path, out);
  };

  try {
    if (sim->parsed()) {
      detail::require(sim_count >= 1, "simulate: count must be at least 1");
      const ProbVector pv = power(parse_distribution(sim_dist), sim_power);
      const std::vector<int> draws = sample(pv, sim_seed, sim_count);
      json report = base_report("simulate");
      report["params"] = {{"dist", sim_dist}, {"power", sim_power}, {"count", sim_count}};
      report["seed"] = sim_seed;
      double mean = 0.0;
      for (int x : draws) mean += x;
      report["mean"] = mean / static_cast<double>(draws.size());
      if (sim_hist) {
        SampleHistogram h(pv.order());
        for (int x : draws) h.add(static_cast<std::size_t>(x));
        report["counts"] = std::vector<std::uint64_t>(h.counts().begin(), h.counts().end());
      } else {
        report["samples"] = draws;
      }
      finish(report);
    } else if (dist->parsed()) {
      const ProbVector l = power(parse_distribution(left), dist_power);
      const ProbVector r = power(parse_distribution(right), dist_power);
      detail::require(l.order() == r.order(), "distances: orders differ");
      const DistanceReport d = distances(pmf_of_pbd(l), pmf_of_pbd(r));
      if (dist_format == "csv") {
        emit("power,tvd,kl,hellinger\n" + csv_number(dist_power) + "," + csv_number(d.tvd) + "," + csv_number(d.kl) +
                 "," + csv_number(d.hellinger) + "\n",
             out_path, out);
      } else {
        json report = base_report("distances");
        report["params"] = {{"left", left}, {"right", right}, {"power", dist_power}};
        report.update(to_json(d));
        finish(report);
      }
    } else if (lb->parsed()) {
      finish(run_learn_binomial(bin));
    } else if (ls->parsed()) {
      finish(run_learn_separated(sep));
    } else if (ln->parsed()) {
      finish(run_learn_newton(newt));
    } else if (vi->parsed()) {
      const json inst = read_json_file(vi_file);
      const std::vector<double> powers = parse_powers(vi_powers);
      const std::vector<InstancePair> pairs = instance_pairs(inst);
      if (vi_format == "csv") {
        std::string text = "label,power,tvd,kl,hellinger\n";
        for (const InstancePair& pr : pairs) {
          for (const PowerRow& row : indistinguishability_report(pr, powers)) {
            text += pr.label + "," + csv_number(row.power) + "," + csv_number(row.distances.tvd) + "," +
                    csv_number(row.distances.kl) + "," + csv_number(row.distances.hellinger) + "\n";
          }
        }
        emit(text, out_path, out);
      } else {
        json report = base_report("verify-instance");
        report["params"] = {{"file", vi_file}, {"powers", powers}};
        report["instance"] = inst;
        json tables = json::array();
        for (const InstancePair& pr : pairs) {
          json rows = json::array();
          for (const PowerRow& row : indistinguishability_report(pr, powers)) {
            json r = to_json(row.distances);
            r["power"] = row.power;
            rows.push_back(r);
          }
          tables.push_back({{"label", pr.label}, {"rows", rows}});
        }
        report["pairs"] = tables;
        finish(report);
      }
    } else if (tr->parsed()) {
      if (tr_eps > 0.0) bin.eps = sep.eps = newt.eps = tr_eps;
      if (tr_delta > 0.0) bin.delta = sep.delta = newt.delta = tr_delta;
      if (tr_n) bin.n = newt.n = *tr_n;
      json report = run_trial_suite(ts, bin, sep, newt);
      json params = {{"trials", ts.trials}};
      if (ts.algorithm == "binomial") {
        params.update({{"n", bin.n}, {"p", bin.p}, {"eps", bin.eps}, {"delta", bin.delta},
                       {"integer_powers", bin.integer_powers}, {"extended", bin.extended}});
      } else if (ts.algorithm == "separated") {
        params.update({{"c", sep.c}, {"s", sep.s}, {"eps", sep.eps}, {"delta", sep.delta}, {"exact_means", sep.exact_means}});
        if (sep.alpha_max) params["alpha_max"] = *sep.alpha_max;
      } else {
        params.update({{"n", newt.n}, {"eps", newt.eps}, {"delta", newt.delta}, {"mode", newt.mode}});
        if (newt.samples_per_power) params["samples_per_power"] = *newt.samples_per_power;
      }
      report["params"] = params;
      finish(report);
    }
  } catch (const LearnerFailure& e) {
    err << "pbd-powers: learner failure: " << e.what() << "\n";
    return kExitLearnerFailure;
  } catch (const PreconditionError& e) {
    err << "pbd-powers: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "pbd-powers: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace pbdpowers::cli
