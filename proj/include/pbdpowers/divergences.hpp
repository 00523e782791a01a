#pragma once

// Distances between PMFs and the closed-form bounds that relate them.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>

#include "pbdpowers/core.hpp"
#include "pbdpowers/errors.hpp"

namespace pbdpowers {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// 2 * sqrt(e): TVD between B(n,p) and B(n,q) is at most this times eps when
// |p - q| <= err(n, p, eps) and eps < 1/2.
inline const double kBinomialTvdConstant = 2.0 * std::sqrt(std::numbers::e);

namespace detail {

inline void require_same_support(const DiscretePMF& f, const DiscretePMF& g, const char* op) {
  require(f.support_order() == g.support_order(), std::string(op) + ": PMFs have different supports");
}

}  // namespace detail

double tvd(const DiscretePMF& f, const DiscretePMF& g);

// Natural-log KL divergence D(f || g), with 0 ln(0/q) = 0.
double kl_generic(const DiscretePMF& f, const DiscretePMF& g);

double kl_binomial(std::size_t n, double p, double q);

// sqrt( (1/2) sum (sqrt f - sqrt g)^2 )
double hellinger(const DiscretePMF& f, const DiscretePMF& g);

struct DistanceReport {
  double tvd = 0.0;
  double kl = 0.0;  // may be +inf
  double hellinger = 0.0;
};

inline DistanceReport distances(const DiscretePMF& f, const DiscretePMF& g) {
  return {tvd(f, g), kl_generic(f, g), hellinger(f, g)};
}

inline double err(std::size_t n, double p, double eps) {
  return eps * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

struct RoosTerms {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double tau = 0.0;
  double bound = 0.0;  // +inf when sqrt(tau) >= 1
};

/// Upper bound on TVD(PBD(pv), B(n,p)) from the moment quantities
/// gamma_j = sum (p - p_i)^j and tau = (gamma_1^2 + 2 gamma_2) / (2 n p (1-p)).
RoosTerms roos_terms(const ProbVector& pv, double p);

inline double roos_bound(const ProbVector& pv, double p) { return roos_terms(pv, p).bound; }

/// True when the two PBDs' means are far enough apart, relative to their
/// standard deviations, to certify TVD > eps. Requires both variances to be
/// at least ln(2/(1-eps)).
bool mean_gap_tvd_lower(double mu_x, double var_x, double mu_y, double var_y, double eps);

// TVD between N(mu1, sigma^2) and N(mu2, sigma^2).
double normal_tvd_equal_variance(double mu1, double mu2, double sigma);

}  // namespace pbdpowers
