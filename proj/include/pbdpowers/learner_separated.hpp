#pragma once

// Exact recovery for the separated class: s blocks of n/s equal trials with
// p_i = 1 - alpha_i / (c ln n)^(s-i). Block i is isolated by sampling the
// single power l_i = (c ln n)^(s-i) / c, at which later blocks have all but
// vanished and earlier ones are already known.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pbdpowers/core.hpp"
#include "pbdpowers/errors.hpp"
#include "pbdpowers/estimators.hpp"
#include "pbdpowers/oracle.hpp"
#include "pbdpowers/rng.hpp"

namespace pbdpowers {

struct FixedPoint {
  double t = 0.0;  // ln n
  double n = 0.0;  // e^t, unrounded
};

/// Largest solution of (c ln n)^s = n, written as t = s ln(c t) with t = ln n,
/// restricted to n >= e^(2c). On t >= s the map t - s ln(ct) is increasing,
/// so a root exists there iff it is negative at t0 = max(2c, s).
FixedPoint solve_fixed_point(double c, int s);

inline int default_alpha_max(std::size_t n) {
  return static_cast<int>(std::floor(std::sqrt(std::log(static_cast<double>(n)))));
}

/// What the learner is told: the class parameters, not alpha.
struct SeparatedPublic {
  double c = 2.0;
  int s = 1;
  std::size_t n = 0;
  int alpha_max = 1;

  double log_scale() const { return c * std::log(static_cast<double>(n)); }
  std::size_t block_size() const { return n / static_cast<std::size_t>(s); }
  double ell(int i) const { return std::pow(log_scale(), s - i) / c; }
  // 1/(c l_i) = 1/(c ln n)^(s-i)
  double step(int i) const { return 1.0 / (c * ell(i)); }
};

struct SeparatedClassSpec {
  SeparatedPublic pub;
  std::vector<int> alpha;
  FixedPoint fixed_point;
  double rounding_residual = 0.0;  // n - e^t after rounding to a multiple of s

  double p(int i) const { return 1.0 - alpha[static_cast<std::size_t>(i)] * pub.step(i); }
  std::vector<double> block_probs() const {
    std::vector<double> out;
    for (int i = 0; i < pub.s; ++i) out.push_back(p(i));
    return out;
  }
  // Materializes all n entries; only sensible for small n.
  ProbVector vector() const {
    std::vector<double> v;
    v.reserve(pub.n);
    for (int i = 0; i < pub.s; ++i) v.insert(v.end(), pub.block_size(), p(i));
    return ProbVector(std::move(v));
  }
};

namespace detail {

void validate_alpha(const SeparatedClassSpec& spec);

}  // namespace detail

/// Solves the fixed point, rounds n to the nearest multiple of s and takes
/// alpha as given. alpha_max defaults to floor(sqrt(ln n)).
SeparatedClassSpec make_separated_instance(double c, int s, std::vector<int> alpha,
                                                  std::optional<int> alpha_max = std::nullopt);

/// Same, with alpha_i drawn uniformly from {1..alpha_max}.
SeparatedClassSpec make_separated_instance(double c, int s, std::uint64_t seed,
                                                  std::optional<int> alpha_max = std::nullopt);

/// The two size conditions the exactness guarantee relies on.
inline bool satisfies_size_conditions(const SeparatedPublic& pub, double eps) {
  const double n = static_cast<double>(pub.n);
  const double k = 2.0 - std::numbers::sqrt2;
  return n >= std::exp(2.0 * pub.c) && n >= 4.0 / (k * k * eps * eps);
}

/// (1 - a/(c l_i))^l_i - (1 - b/(c l_i))^l_i for a < b.
inline double large_diff_margin(int i, const SeparatedPublic& pub, int a, int b) {
  detail::require(i >= 0 && i < pub.s, "large_diff_margin: block index out of range");
  detail::require(a >= 0 && a < b && b <= pub.alpha_max + 1, "large_diff_margin: need 0 <= a < b <= alpha_max+1");
  const double l = pub.ell(i);
  const double h = pub.step(i);
  return pow_one_minus(a * h, l) - pow_one_minus(b * h, l);
}

inline double large_diff_threshold(const SeparatedPublic& pub, double eps) {
  return 4.0 * eps / std::sqrt(static_cast<double>(pub.block_size()));
}

/// sum_{j>i} p_j^(l_i): what later blocks still contribute, per trial, at power l_i.
inline double residual_sum(const SeparatedClassSpec& spec, int i) {
  const double l = spec.pub.ell(i);
  double r = 0.0;
  for (int j = i + 1; j < spec.pub.s; ++j) r += pow_prob(spec.p(j), l);
  return r;
}

/// Exact mean of the instance's PBD at power k, without materializing it.
double exact_mean_at(const SeparatedClassSpec& spec, double k);

struct SeparatedBlock {
  int index = 0;
  double power = 0.0;
  double mu_hat = 0.0;
  double tau_hat = 0.0;
  int beta = 0;
  double a = 0.0;  // (1 - beta/(c l))^l
  double b = 0.0;  // (1 - (beta-1)/(c l))^l
  int alpha_hat = 0;
  std::uint64_t samples = 0;
};

struct SeparatedLearnOutput {
  std::vector<int> alpha_hat;
  std::vector<SeparatedBlock> blocks;
  std::uint64_t samples = 0;
};

// Returns the mean estimate at power l together with the samples it used.
using BlockMeanFn = std::function<std::pair<double, std::uint64_t>(int block, double power)>;

namespace detail {

SeparatedLearnOutput learn_separated_core(const SeparatedPublic& pub, const BlockMeanFn& mean_at);

}  // namespace detail

/// Sampled run: one mean estimate per block at precision eps, confidence delta/s.
SeparatedLearnOutput learn_separated(PowerOracle& oracle, const SeparatedPublic& pub, double eps,
                                            double delta);

/// Noiseless run: block means are the exact means of the instance.
SeparatedLearnOutput learn_separated_exact(const SeparatedClassSpec& spec);

}  // namespace pbdpowers
