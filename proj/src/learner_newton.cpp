#include "pbdpowers/learner_newton.hpp"

namespace pbdpowers {

std::vector<double> coeffs_from_power_sums(const std::vector<double>& mus) {
  const std::size_t n = mus.size();
  detail::require(n >= 1, "coeffs_from_power_sums: need at least one power sum");
  std::vector<double> c(n, 0.0);  // c[k] = c_{n-1-k}
  for (std::size_t j = 1; j <= n; ++j) {
    double acc = mus[j - 1];
    for (std::size_t i = 1; i < j; ++i) acc += c[i - 1] * mus[j - i - 1];
    c[j - 1] = -acc / static_cast<double>(j);
  }
  return c;
}

std::vector<double> vieta_coeffs(std::span<const double> roots) {
  std::vector<double> poly{1.0};  // highest degree first
  for (double r : roots) {
    poly.push_back(0.0);
    for (std::size_t k = poly.size() - 1; k > 0; --k) poly[k] -= r * poly[k - 1];
  }
  return {poly.begin() + 1, poly.end()};
}

RootEstimate roots_of_monic(const std::vector<double>& coeffs, double tol) {
  const std::size_t deg = coeffs.size();
  detail::require(deg >= 1 && deg <= kMaxRootDegree, "roots_of_monic: degree must lie in 1..64");
  detail::require(tol > 0.0, "roots_of_monic: tol must be positive");
  for (double ck : coeffs) detail::require(std::isfinite(ck), "roots_of_monic: coefficients must be finite");

  double cmax = 0.0;
  for (double ck : coeffs) cmax = std::max(cmax, std::abs(ck));
  // Cauchy bound 1 + max|c_k| or Fujiwara bound 2 max |c_{n-k}|^(1/k),
  // whichever is smaller; the latter keeps |z|^deg finite at high degree.
  double fujiwara = 0.0;
  for (std::size_t k = 1; k <= deg; ++k) {
    const double weight = k == deg ? 0.5 : 1.0;
    fujiwara = std::max(fujiwara, std::pow(weight * std::abs(coeffs[k - 1]), 1.0 / static_cast<double>(k)));
  }
  const double radius = std::max(std::min(1.0 + cmax, 2.0 * fujiwara), 1e-3);
  constexpr double kMachine = std::numeric_limits<double>::epsilon();

  std::vector<std::complex<double>> z(deg);
  for (std::size_t k = 0; k < deg; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(deg) + 0.4;
    z[k] = std::polar(radius, theta);
  }

  std::vector<bool> done(deg, false);
  const std::size_t cap = 1000 * deg;
  std::size_t it = 0;
  for (; it < cap; ++it) {
    bool all = true;
    for (std::size_t k = 0; k < deg; ++k) {
      if (done[k]) continue;
      const detail::HornerResult h = detail::horner(coeffs, z[k]);
      if (std::isfinite(h.magnitude) && std::abs(h.value) <= 4.0 * kMachine * h.magnitude * static_cast<double>(deg)) {
        done[k] = true;
        continue;
      }
      all = false;
      const std::complex<double> w = h.value / h.derivative;
      std::complex<double> rep = 0.0;
      for (std::size_t j = 0; j < deg; ++j) {
        if (j != k) rep += 1.0 / (z[k] - z[j]);
      }
      const std::complex<double> step = w / (1.0 - w * rep);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
        z[k] += std::complex<double>(1e-8, 1e-8) * (1.0 + std::abs(z[k]));
        continue;
      }
      z[k] -= step;
      if (std::abs(step) <= 4.0 * kMachine * (1.0 + std::abs(z[k]))) done[k] = true;
    }
    if (all) break;
  }

  RootEstimate out;
  out.iterations = it;
  for (const auto& zk : z) {
    out.residual = std::max(out.residual, std::abs(detail::horner(coeffs, zk).value));
    out.max_imag = std::max(out.max_imag, std::abs(zk.imag()));
    out.roots.push_back(std::clamp(zk.real(), 0.0, 1.0));
  }
  if (!(out.residual <= tol * (1.0 + cmax))) {
    throw NonConverged("roots_of_monic: residual " + std::to_string(out.residual) + " exceeds tolerance after " +
                       std::to_string(it) + " sweeps");
  }
  out.imag_warning = out.max_imag > 10.0 * tol;
  std::sort(out.roots.begin(), out.roots.end());
  for (double r : out.roots) {
    out.real_residual = std::max(out.real_residual, std::abs(detail::horner(coeffs, r).value));
  }
  return out;
}

PerturbationBudget perturbation_budget(std::size_t n, double eps) {
  detail::require(n >= 1, "perturbation_budget: n must be at least 1");
  detail::require(eps > 0.0 && eps < 1.0, "perturbation_budget: eps must lie in (0,1)");
  PerturbationBudget b;
  b.n = n;
  b.eps = eps;
  const double nn = static_cast<double>(n);
  b.coeff_tol = std::pow(std::min(eps, 1.0 / nn), nn);
  b.u = b.coeff_tol / predicted_coeff_error(n, 1.0);
  b.predicted_coeff_error = predicted_coeff_error(n, b.u);
  b.guard = b.u * std::sqrt(nn) * nn * (nn + 1.0) / 2.0;
  if (!(b.guard < 1.0) || !(b.u > 0.0)) {
    throw GuardViolated("perturbation_budget: first-order condition fails (guard " + std::to_string(b.guard) + ")");
  }
  return b;
}

NewtonLearnOutput learn_parameters_from_means(std::vector<double> mus, double tol) {
  NewtonLearnOutput out;
  out.coeffs = coeffs_from_power_sums(mus);
  out.mus = std::move(mus);
  out.estimate = roots_of_monic(out.coeffs, tol);
  return out;
}

NewtonLearnOutput learn_parameters_exact(const ProbVector& pv, double tol) {
  return learn_parameters_from_means(power_sums(pv, pv.order()), tol);
}

MeanVarPlan newton_plan(std::size_t n, double delta, const PerturbationBudget& budget,
                               std::optional<std::uint64_t> samples_per_power) {
  const double dn = delta / static_cast<double>(n);
  MeanVarPlan plan;
  if (!samples_per_power) {
    plan = mean_var_plan(budget.u, dn);
  } else {
    plan.groups = detail::ceil_count(8.0 * std::log(2.0 / dn));
    detail::require(*samples_per_power >= plan.groups, "learn_parameters: samples_per_power below the group count");
    plan.group_size = *samples_per_power / plan.groups;
  }
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  detail::require(plan.group_size <= kMax / plan.groups && plan.total() <= kMax / n,
                  "learn_parameters: total sample count overflows 64 bits");
  return plan;
}

NewtonLearnOutput learn_parameters(PowerOracle& oracle, double eps, double delta,
                                          std::optional<std::uint64_t> samples_per_power,
                                          double tol) {
  detail::require(delta > 0.0 && delta < 1.0, "learn_parameters: delta must lie in (0,1)");
  const std::size_t n = oracle.order();
  detail::require(n <= kMaxRootDegree, "learn_parameters: n must be at most 64");
  const PerturbationBudget budget = perturbation_budget(n, eps);
  const MeanVarPlan plan = newton_plan(n, delta, budget, samples_per_power);

  std::vector<double> mus(n);
  std::uint64_t samples = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    PowerSource src(oracle, static_cast<double>(j));
    const MeanVarEstimate e = estimate_mean_var(src, plan);
    mus[j - 1] = e.mu_hat;
    samples += e.samples_used;
  }
  NewtonLearnOutput out = learn_parameters_from_means(std::move(mus), tol);
  out.budget = budget;
  out.plan = plan;
  out.samples = samples;
  return out;
}

}  // namespace pbdpowers
