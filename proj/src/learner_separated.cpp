#include "pbdpowers/learner_separated.hpp"

namespace pbdpowers {

FixedPoint solve_fixed_point(double c, int s) {
  detail::require(c >= 2.0 && std::isfinite(c), "make_separated_instance: c must be at least 2");
  detail::require(s >= 1, "make_separated_instance: s must be at least 1");
  const double sd = static_cast<double>(s);
  auto f = [&](double t) { return t - sd * std::log(c * t); };
  double lo = std::max(2.0 * c, sd);
  if (f(lo) >= 0.0) {
    throw NoFixedPoint("make_separated_instance: (c ln n)^s = n has no root with n >= e^(2c) for c=" +
                       std::to_string(c) + ", s=" + std::to_string(s));
  }
  double hi = 2.0 * lo;
  while (f(hi) <= 0.0) {
    hi *= 2.0;
    if (hi > 700.0) throw NoFixedPoint("make_separated_instance: fixed point beyond double range");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  const double t = 0.5 * (lo + hi);
  return {t, std::exp(t)};
}

namespace detail {

void validate_alpha(const SeparatedClassSpec& spec) {
  require(spec.alpha.size() == static_cast<std::size_t>(spec.pub.s),
          "make_separated_instance: alpha must have s entries");
  for (int a : spec.alpha) {
    require(a >= 1 && a <= spec.pub.alpha_max, "make_separated_instance: alpha_i must lie in {1..alpha_max}");
  }
  for (int i = 0; i + 1 < spec.pub.s; ++i) {
    require(spec.p(i) > spec.p(i + 1), "make_separated_instance: block parameters must strictly decrease");
  }
  for (int i = 0; i < spec.pub.s; ++i) require(spec.p(i) > 0.0, "make_separated_instance: p_i must be positive");
}

}  // namespace detail

SeparatedClassSpec make_separated_instance(double c, int s, std::vector<int> alpha,
                                                  std::optional<int> alpha_max) {
  SeparatedClassSpec spec;
  spec.fixed_point = solve_fixed_point(c, s);
  const double sd = static_cast<double>(s);
  const double blocks = std::max(1.0, std::round(spec.fixed_point.n / sd));
  spec.pub.c = c;
  spec.pub.s = s;
  spec.pub.n = static_cast<std::size_t>(blocks) * static_cast<std::size_t>(s);
  spec.pub.alpha_max = alpha_max.value_or(default_alpha_max(spec.pub.n));
  detail::require(spec.pub.alpha_max >= 1, "make_separated_instance: alpha_max must be at least 1");
  spec.rounding_residual = static_cast<double>(spec.pub.n) - spec.fixed_point.n;
  spec.alpha = std::move(alpha);
  detail::validate_alpha(spec);
  return spec;
}

SeparatedClassSpec make_separated_instance(double c, int s, std::uint64_t seed,
                                                  std::optional<int> alpha_max) {
  const FixedPoint fp = solve_fixed_point(c, s);
  const double blocks = std::max(1.0, std::round(fp.n / static_cast<double>(s)));
  const auto n = static_cast<std::size_t>(blocks) * static_cast<std::size_t>(s);
  const int amax = alpha_max.value_or(default_alpha_max(n));
  detail::require(amax >= 1, "make_separated_instance: alpha_max must be at least 1");
  Xoshiro256 rng(seed);
  std::vector<int> alpha(static_cast<std::size_t>(s));
  for (int& a : alpha) a = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(amax));
  return make_separated_instance(c, s, std::move(alpha), amax);
}

double exact_mean_at(const SeparatedClassSpec& spec, double k) {
  double m = 0.0;
  for (int j = 0; j < spec.pub.s; ++j) m += pow_prob(spec.p(j), k);
  return m * static_cast<double>(spec.pub.block_size());
}

namespace detail {

SeparatedLearnOutput learn_separated_core(const SeparatedPublic& pub, const BlockMeanFn& mean_at) {
  SeparatedLearnOutput out;
  std::vector<double> learned;
  const double n0 = static_cast<double>(pub.block_size());
  for (int i = 0; i < pub.s; ++i) {
    SeparatedBlock blk;
    blk.index = i;
    blk.power = pub.ell(i);
    const auto [mu, used] = mean_at(i, blk.power);
    blk.mu_hat = mu;
    blk.samples = used;
    blk.tau_hat = mu / n0;
    for (double pj : learned) blk.tau_hat -= pow_prob(pj, blk.power);

    const double h = pub.step(i);
    for (int beta = 1; beta <= pub.alpha_max + 1; ++beta) {
      if (pow_one_minus(beta * h, blk.power) <= blk.tau_hat) {
        blk.beta = beta;
        break;
      }
    }
    if (blk.beta == 0) {
      throw BetaNotFound("learn_separated: no beta in {1.." + std::to_string(pub.alpha_max + 1) +
                         "} brackets tau_hat=" + std::to_string(blk.tau_hat) + " at block " + std::to_string(i));
    }
    blk.a = pow_one_minus(blk.beta * h, blk.power);
    blk.b = pow_one_minus((blk.beta - 1) * h, blk.power);
    blk.alpha_hat = blk.tau_hat < 0.5 * (blk.a + blk.b) ? blk.beta : blk.beta - 1;

    learned.push_back(1.0 - blk.alpha_hat * h);
    out.alpha_hat.push_back(blk.alpha_hat);
    out.samples += blk.samples;
    out.blocks.push_back(blk);
  }
  return out;
}

}  // namespace detail

SeparatedLearnOutput learn_separated(PowerOracle& oracle, const SeparatedPublic& pub, double eps,
                                            double delta) {
  detail::require(pub.s >= 1 && pub.n % static_cast<std::size_t>(pub.s) == 0,
                  "learn_separated: n must be a positive multiple of s");
  detail::require(oracle.order() == pub.n, "learn_separated: oracle order differs from n");
  detail::require(eps > 0.0 && eps <= 1.0 / (6.0 * pub.c), "learn_separated: eps must lie in (0, 1/(6c)]");
  detail::require(delta > 0.0 && delta < 1.0, "learn_separated: delta must lie in (0,1)");
  const MeanVarPlan plan = mean_var_plan(eps, delta / pub.s);
  return detail::learn_separated_core(pub, [&](int, double power) {
    PowerSource src(oracle, power);
    const MeanVarEstimate e = estimate_mean_var(src, plan);
    return std::pair{e.mu_hat, e.samples_used};
  });
}

SeparatedLearnOutput learn_separated_exact(const SeparatedClassSpec& spec) {
  return detail::learn_separated_core(spec.pub, [&](int, double power) {
    return std::pair{exact_mean_at(spec, power), std::uint64_t{0}};
  });
}

}  // namespace pbdpowers
