#pragma once

// Recovering every parameter of a PBD from its first n power sums.
//
// mu_j = E[power j] = sum_i p_i^j. The monic polynomial prod (x - p_i) has
// coefficients tied to the power sums by a lower-triangular system with
// diagonal 1..n, solved here by forward substitution; its roots are found by
// Aberth-Ehrlich simultaneous iteration.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pbdpowers/core.hpp"
#include "pbdpowers/errors.hpp"
#include "pbdpowers/estimators.hpp"
#include "pbdpowers/oracle.hpp"

namespace pbdpowers {

inline constexpr std::size_t kMaxRootDegree = 64;
inline constexpr double kDefaultRootTolerance = 1e-10;

inline std::vector<double> power_sums(const ProbVector& pv, std::size_t upto) {
  detail::require(upto >= 1, "power_sums: upto must be at least 1");
  std::vector<double> mus(upto, 0.0);
  for (double p : pv.probs()) {
    double x = 1.0;
    for (std::size_t j = 0; j < upto; ++j) {
      x *= p;
      mus[j] += x;
    }
  }
  return mus;
}

/// Coefficients (c_{n-1}, ..., c_0) of x^n + c_{n-1} x^{n-1} + ... + c_0 from
/// mu_1..mu_n, using mu_j + sum_{i<j} c_{n-i} mu_{j-i} + j c_{n-j} = 0.
std::vector<double> coeffs_from_power_sums(const std::vector<double>& mus);

/// Expands prod (x - r_i) into (c_{n-1}, ..., c_0).
std::vector<double> vieta_coeffs(std::span<const double> roots);

struct RootEstimate {
  std::vector<double> roots;      // real parts clamped to [0,1], ascending
  double residual = 0.0;          // max |P(z)| over the converged complex iterates
  double real_residual = 0.0;     // max |P(r)| over the returned real roots
  double max_imag = 0.0;
  bool imag_warning = false;      // some |Im z| exceeded 10 tol
  std::size_t iterations = 0;
};

namespace detail {

// P(z) and P'(z) by Horner; also the running bound sum |c_k| |z|^k used to
// judge whether |P(z)| is already at rounding level.
struct HornerResult {
  std::complex<double> value;
  std::complex<double> derivative;
  double magnitude = 0.0;
};

inline HornerResult horner(const std::vector<double>& c, std::complex<double> z) {
  std::complex<double> p = 1.0;
  std::complex<double> dp = 0.0;
  const double az = std::abs(z);
  double mag = 1.0;
  for (double ck : c) {
    dp = dp * z + p;
    p = p * z + ck;
    mag = mag * az + std::abs(ck);
  }
  return {p, dp, mag};
}

}  // namespace detail

/// All roots of the monic polynomial with coefficients (c_{n-1}, ..., c_0).
/// Starts on a circle enclosing every root (see below), caps at 1000 deg
/// sweeps, and fails with NonConverged unless the residual ends up within
/// tol (1 + max|c_k|).
RootEstimate roots_of_monic(const std::vector<double>& coeffs, double tol = kDefaultRootTolerance);

/// ||c - c_hat||_inf <= u n^{3/2} (2^{n-1} + 1) when every |mu_j - mu_hat_j| is
/// at most u sigma_j, sigma_j the standard deviation of power j.
inline double predicted_coeff_error(std::size_t n, double u) {
  const double nn = static_cast<double>(n);
  return u * std::pow(nn, 1.5) * (std::ldexp(1.0, static_cast<int>(n) - 1) + 1.0);
}

struct PerturbationBudget {
  std::size_t n = 0;
  double eps = 0.0;
  double coeff_tol = 0.0;              // target ||c - c_hat||_inf = min(eps, 1/n)^n
  double u = 0.0;                      // per-mean precision
  double predicted_coeff_error = 0.0;  // equals coeff_tol by construction
  double guard = 0.0;                  // u ||A^{-1}| E||_inf, must be < 1
};

/// Chooses u so the predicted coefficient error meets min(eps, 1/n)^n, and
/// checks the first-order validity condition u sqrt(n) n(n+1)/2 < 1.
PerturbationBudget perturbation_budget(std::size_t n, double eps);

struct NewtonLearnOutput {
  RootEstimate estimate;
  std::vector<double> mus;
  std::vector<double> coeffs;
  std::optional<PerturbationBudget> budget;
  MeanVarPlan plan;  // per power; empty in exact-means mode
  std::uint64_t samples = 0;
};

NewtonLearnOutput learn_parameters_from_means(std::vector<double> mus, double tol = kDefaultRootTolerance);

/// Exact-means mode: the true power sums go straight into the solver.
NewtonLearnOutput learn_parameters_exact(const ProbVector& pv, double tol = kDefaultRootTolerance);

/// The per-power estimator plan for sampled mode: median of means at
/// precision u and confidence delta/n, or, with an explicit per-power sample
/// count S, the same number of groups holding floor(S / groups) draws each.
MeanVarPlan newton_plan(std::size_t n, double delta, const PerturbationBudget& budget,
                               std::optional<std::uint64_t> samples_per_power);

/// Sampled mode: estimate mu_1..mu_n from powers 1..n of the oracle.
NewtonLearnOutput learn_parameters(PowerOracle& oracle, double eps, double delta,
                                          std::optional<std::uint64_t> samples_per_power = std::nullopt,
                                          double tol = kDefaultRootTolerance);

/// max_i |a_i - b_i| after sorting both ascending.
inline double sorted_linf(std::vector<double> a, std::vector<double> b) {
  detail::require(a.size() == b.size(), "sorted_linf: size mismatch");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace pbdpowers
