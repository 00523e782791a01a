#include "pbdpowers/divergences.hpp"

namespace pbdpowers {

double tvd(const DiscretePMF& f, const DiscretePMF& g) {
  detail::require_same_support(f, g, "tvd");
  double s = 0.0;
  for (std::size_t i = 0; i <= f.support_order(); ++i) s += std::abs(f[i] - g[i]);
  return std::min(1.0, 0.5 * s);
}

double kl_generic(const DiscretePMF& f, const DiscretePMF& g) {
  detail::require_same_support(f, g, "kl_generic");
  double s = 0.0;
  for (std::size_t i = 0; i <= f.support_order(); ++i) {
    if (f[i] == 0.0) continue;
    if (g[i] == 0.0) return kInfinity;
    s += f[i] * std::log(f[i] / g[i]);
  }
  return std::max(0.0, s);
}

double kl_binomial(std::size_t n, double p, double q) {
  detail::require(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0, "kl_binomial: p and q must lie in (0,1)");
  const double nn = static_cast<double>(n);
  return std::max(0.0, nn * p * std::log(p / q) + nn * (1.0 - p) * (std::log1p(-p) - std::log1p(-q)));
}

double hellinger(const DiscretePMF& f, const DiscretePMF& g) {
  detail::require_same_support(f, g, "hellinger");
  double s = 0.0;
  for (std::size_t i = 0; i <= f.support_order(); ++i) {
    const double d = std::sqrt(f[i]) - std::sqrt(g[i]);
    s += d * d;
  }
  return std::min(1.0, std::sqrt(0.5 * s));
}

RoosTerms roos_terms(const ProbVector& pv, double p) {
  detail::require(p > 0.0 && p < 1.0, "roos_bound: p must lie in (0,1)");
  RoosTerms t;
  for (double pi : pv.probs()) {
    const double d = p - pi;
    t.gamma1 += d;
    t.gamma2 += d * d;
  }
  const double n = static_cast<double>(pv.order());
  t.tau = (t.gamma1 * t.gamma1 + 2.0 * t.gamma2) / (2.0 * n * p * (1.0 - p));
  const double r = std::sqrt(t.tau);
  if (r >= 1.0) {
    t.bound = kInfinity;
  } else {
    const double gap = 1.0 - r;
    t.bound = 0.5 * std::sqrt(std::numbers::e) * r / (gap * gap);
  }
  return t;
}

bool mean_gap_tvd_lower(double mu_x, double var_x, double mu_y, double var_y, double eps) {
  detail::require(var_x >= 0.0 && var_y >= 0.0, "mean_gap_tvd_lower: variances must be nonnegative");
  detail::require(eps > 0.0 && eps < 1.0, "mean_gap_tvd_lower: eps must lie in (0,1)");
  const double level = std::log(2.0 / (1.0 - eps));
  if (var_x < level || var_y < level) return false;
  const double lambda = 2.0 * std::sqrt(level);
  return std::abs(mu_y - mu_x) > lambda * (std::sqrt(var_x) + std::sqrt(var_y));
}

double normal_tvd_equal_variance(double mu1, double mu2, double sigma) {
  detail::require(sigma > 0.0, "normal_tvd_equal_variance: sigma must be positive");
  return std::erf(std::abs(mu1 - mu2) / (2.0 * std::numbers::sqrt2 * sigma));
}

}  // namespace pbdpowers
