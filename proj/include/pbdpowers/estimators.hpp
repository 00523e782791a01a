#pragma once

// Sampling primitives shared by the learners. Every estimator pulls its draws
// through a SampleSource, so the oracle ledger accounts for all of them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "pbdpowers/core.hpp"
#include "pbdpowers/errors.hpp"
#include "pbdpowers/oracle.hpp"

namespace pbdpowers {

namespace detail {

inline std::uint64_t ceil_count(double x) {
  require(std::isfinite(x) && x < 1.8e19, "sample count overflows 64 bits");
  return static_cast<std::uint64_t>(std::ceil(x));
}

// Median; mean of the two central values for even sizes.
inline double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Mean and variance of a PBD: median of group means and of group variances.
//
// r = ceil(8 ln(2/delta)) groups of m = ceil(16/eps^2) draws. By Chebyshev a
// single group mean lands within eps*sigma with probability >= 15/16 (>= 3/4
// is what the median step needs); the median over r groups then fails with
// probability at most delta.
// ---------------------------------------------------------------------------

struct MeanVarPlan {
  std::uint64_t groups = 0;
  std::uint64_t group_size = 0;
  std::uint64_t total() const noexcept { return groups * group_size; }
};

inline MeanVarPlan mean_var_plan(double eps, double delta) {
  detail::require(eps > 0.0 && eps < 1.0, "estimate_mean_var: eps must lie in (0,1)");
  detail::require(delta > 0.0 && delta < 1.0, "estimate_mean_var: delta must lie in (0,1)");
  return {detail::ceil_count(8.0 * std::log(2.0 / delta)), detail::ceil_count(16.0 / (eps * eps))};
}

struct MeanVarEstimate {
  double mu_hat = 0.0;
  double var_hat = 0.0;
  std::uint64_t samples_used = 0;
  double eps = 0.0;
  double delta = 0.0;
};

template <SampleSource Source>
MeanVarEstimate estimate_mean_var(Source& source, const MeanVarPlan& plan) {
  detail::require(plan.groups >= 1 && plan.group_size >= 1, "estimate_mean_var: empty plan");
  std::vector<double> means;
  std::vector<double> vars;
  means.reserve(plan.groups);
  vars.reserve(plan.groups);
  for (std::uint64_t g = 0; g < plan.groups; ++g) {
    const SampleHistogram h = source.histogram(plan.group_size);
    means.push_back(h.mean());
    vars.push_back(h.unbiased_variance());
  }
  MeanVarEstimate e;
  e.mu_hat = detail::median(std::move(means));
  e.var_hat = detail::median(std::move(vars));
  e.samples_used = plan.total();
  return e;
}

template <SampleSource Source>
MeanVarEstimate estimate_mean_var(Source& source, double eps, double delta) {
  MeanVarEstimate e = estimate_mean_var(source, mean_var_plan(eps, delta));
  e.eps = eps;
  e.delta = delta;
  return e;
}

// ---------------------------------------------------------------------------
// Binomial parameter estimates.
// ---------------------------------------------------------------------------

namespace detail {

inline void require_binomial_args(double eps, double delta, double psi, const char* op) {
  require(eps > 0.0 && eps < 0.5, std::string(op) + ": eps must lie in (0,1/2)");
  require(delta > 0.0 && delta < 0.5, std::string(op) + ": delta must lie in (0,1/2)");
  require(psi > 0.0 && std::isfinite(psi), std::string(op) + ": psi must be positive");
}

}  // namespace detail

// m = ceil(4 ln(1/delta) / (eps^2 psi^2))
inline std::uint64_t estimate_p_sample_count(double eps, double delta, double psi) {
  detail::require_binomial_args(eps, delta, psi, "estimate_p");
  return detail::ceil_count(4.0 * std::log(1.0 / delta) / (eps * eps * psi * psi));
}

struct PEstimate {
  double p_hat = 0.0;
  std::uint64_t samples_used = 0;
};

/// p_hat = (s_1 + ... + s_m) / (m n). Each one-sided deviation beyond
/// psi * err(n, p, eps) has probability at most delta.
template <SampleSource Source>
PEstimate estimate_p(Source& source, double eps, double delta, double psi) {
  const std::uint64_t m = estimate_p_sample_count(eps, delta, psi);
  const SampleHistogram h = source.histogram(m);
  const double n = static_cast<double>(source.order());
  return {std::clamp(h.sum() / (static_cast<double>(m) * n), 0.0, 1.0), m};
}

struct OneSidedPlan {
  std::uint64_t batches = 0;     // k = ceil(ln(4/delta) / ln 2)
  std::uint64_t batch_size = 0;  // m = ceil(4 ln(ceil(2k/delta)) / (eps^2 psi^2))
  std::uint64_t total() const noexcept { return batches * batch_size; }
};

inline OneSidedPlan one_sided_plan(double eps, double delta, double psi) {
  detail::require_binomial_args(eps, delta, psi, "one_sided_estimates");
  OneSidedPlan plan;
  plan.batches = detail::ceil_count(std::log(4.0 / delta) / std::numbers::ln2);
  const double inner = std::ceil(2.0 * static_cast<double>(plan.batches) / delta);
  plan.batch_size = detail::ceil_count(4.0 * std::log(inner) / (eps * eps * psi * psi));
  return plan;
}

struct OneSidedPair {
  double q1_hat = 0.0;  // lower: min of the batch means
  double q2_hat = 0.0;  // upper: max of the batch means
  std::uint64_t samples_used = 0;
};

/// k batch means w_i of m draws each; q1 = min w_i sits just below p and
/// q2 = max w_i just above, each within psi * err(n, p, eps) w.p. >= 1 - delta.
template <SampleSource Source>
OneSidedPair one_sided_estimates(Source& source, double eps, double delta, double psi) {
  const OneSidedPlan plan = one_sided_plan(eps, delta, psi);
  const double n = static_cast<double>(source.order());
  OneSidedPair out;
  out.q1_hat = 1.0;
  out.q2_hat = 0.0;
  for (std::uint64_t i = 0; i < plan.batches; ++i) {
    const SampleHistogram h = source.histogram(plan.batch_size);
    const double w = std::clamp(h.sum() / (static_cast<double>(plan.batch_size) * n), 0.0, 1.0);
    out.q1_hat = std::min(out.q1_hat, w);
    out.q2_hat = std::max(out.q2_hat, w);
  }
  out.samples_used = plan.total();
  return out;
}

}  // namespace pbdpowers
