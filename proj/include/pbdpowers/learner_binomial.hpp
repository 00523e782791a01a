#pragma once

// Learning every real power of a binomial B(n, p) from two sampled powers.
//
// Step 1 estimates p from the first power. Its anchor exponent
// a_hat = -1/ln(p_hat) moves p^a_hat into [e^-2, e^-3/2], where every power
// of a precise enough estimate tracks the corresponding power of p. Step 2
// brackets p^a_hat from below (q1) and above (q2); B(n, q1^l) then predicts
// B(n, p^(a_hat l)) for l > 1 and B(n, q2^l) for l <= 1.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "pbdpowers/core.hpp"
#include "pbdpowers/divergences.hpp"
#include "pbdpowers/errors.hpp"
#include "pbdpowers/estimators.hpp"
#include "pbdpowers/oracle.hpp"

namespace pbdpowers {

// C = 2 + W0(-2/e^2) and D = sqrt(e^C - 1) / C. Regenerated by Newton
// iteration in the unit tests.
inline constexpr double kLambertC = 1.5936242600400399;
inline constexpr double kPsiD = 1.2426337563300258;

/// psi(p) = D sqrt(p/(1-p)) ln(1/p): how much slack (in units of
/// err(n,p,eps)) an estimate of p may have while all its powers stay within
/// err of the matching powers of p.
inline double psi(double p) {
  detail::require(p > 0.0 && p < 1.0, "psi: p must lie in (0,1)");
  return kPsiD * std::sqrt(p / (1.0 - p)) * -std::log(p);
}

// Slack used for the anchor power, valid whenever p^a_hat >= e^-2.
inline double psi_anchor_floor() { return psi(std::exp(-2.0)); }

// Same for integer anchors, valid whenever p^ceil(a_hat) >= 0.2 e^-2.
inline double psi_integer_anchor_floor() { return psi(0.2 * std::exp(-2.0)); }

// Below this first-power estimate the integer variant skips the anchor power.
inline double integer_small_p_threshold() { return std::exp(-kLambertC); }

inline bool integer_uses_first_power(double p_hat) { return p_hat <= integer_small_p_threshold(); }

inline double anchor_exponent(double p_hat) {
  detail::require(p_hat > 0.0 && p_hat < 1.0, "anchor_exponent: p_hat must lie in (0,1)");
  return -1.0 / std::log(p_hat);
}

struct BinomialLearnOutput {
  double a_hat = 1.0;
  double q1_hat = 0.0;
  double q2_hat = 0.0;
  double p_hat = 0.0;        // first-power estimate
  double base_power = 1.0;   // power treated as the "first" one (1 unless range-extended)
  double anchor_power = 1.0; // base_power * a_hat, the second power sampled
  bool anchored = true;      // false when only the first power was sampled
  std::uint64_t samples_first = 0;
  std::uint64_t samples_anchor = 0;
};

/// Parameter of the predicted binomial for power l (relative to the anchor).
inline double predicted_parameter(const BinomialLearnOutput& out, double l) {
  detail::require(l > 0.0 && std::isfinite(l), "predict_power: l must be positive");
  return l > 1.0 ? pow_prob(out.q1_hat, l) : pow_prob(out.q2_hat, l);
}

/// B(n, q1^l) for l > 1, B(n, q2^l) for l in (0, 1]; approximates
/// B(n, p^(anchor_power * l)).
inline DiscretePMF predict_power(const BinomialLearnOutput& out, std::size_t n, double l) {
  return binomial_pmf(n, predicted_parameter(out, l));
}

namespace detail {

inline void require_learner_args(double eps, double delta) {
  require(eps > 0.0 && eps < 1.0 / 6.0, "binomial learner: eps must lie in (0,1/6)");
  require(delta > 0.0 && delta < 1.0, "binomial learner: delta must lie in (0,1)");
}

// Confidence split: two one-sided tails of the first estimate at delta/4
// each, the two anchor brackets at delta/4 each.
inline BinomialLearnOutput learn_from_base(PowerOracle& oracle, double base, double eps, double delta,
                                           bool integer_anchor) {
  BinomialLearnOutput out;
  out.base_power = base;
  PowerSource first(oracle, base);
  const PEstimate est = estimate_p(first, eps, delta / 4.0, 1.0);
  out.p_hat = est.p_hat;
  out.samples_first = est.samples_used;
  if (est.p_hat <= 0.0 || est.p_hat >= 1.0) {
    throw DegenerateEstimate("binomial learner: first-power estimate is " + std::to_string(est.p_hat) +
                             "; p is outside the admissible range");
  }

  double slack = psi_anchor_floor();
  if (integer_anchor) {
    if (integer_uses_first_power(est.p_hat)) {
      out.a_hat = 1.0;
      out.q1_hat = out.q2_hat = est.p_hat;
      out.anchor_power = base;
      out.anchored = false;
      return out;
    }
    out.a_hat = std::ceil(anchor_exponent(est.p_hat));
    slack = psi_integer_anchor_floor();
  } else {
    out.a_hat = anchor_exponent(est.p_hat);
  }

  out.anchor_power = base * out.a_hat;
  PowerSource anchor(oracle, out.anchor_power);
  const OneSidedPair pair = one_sided_estimates(anchor, eps, delta / 4.0, slack);
  out.q1_hat = pair.q1_hat;
  out.q2_hat = pair.q2_hat;
  out.samples_anchor = pair.samples_used;
  return out;
}

}  // namespace detail

/// Two-power learner for all real powers of B(n, p), p in [eps^2/n, 1-eps^2/n].
inline BinomialLearnOutput learn_binomial_powers(PowerOracle& oracle, double eps, double delta) {
  detail::require_learner_args(eps, delta);
  return detail::learn_from_base(oracle, 1.0, eps, delta, false);
}

/// Variant restricted to integer powers. For p_hat <= e^-C every power l >= 1
/// is served by the first-power estimate alone; otherwise the anchor is
/// rounded up to ceil(a_hat).
inline BinomialLearnOutput learn_integer_powers(PowerOracle& oracle, double eps, double delta) {
  detail::require_learner_args(eps, delta);
  return detail::learn_from_base(oracle, 1.0, eps, delta, true);
}

struct RangeProbe {
  int index = 0;
  double power = 0.0;
  double estimate = 0.0;  // q1 in the small-p regime, q2 in the large-p regime
  bool qualifies = false;
};

enum class RangeRegime { direct, small_p, large_p };

inline std::string to_string(RangeRegime r) {
  switch (r) {
    case RangeRegime::direct: return "direct";
    case RangeRegime::small_p: return "small_p";
    case RangeRegime::large_p: return "large_p";
  }
  return "unknown";
}

struct ExtendedRangeOutput {
  double t = 1.0;
  RangeRegime regime = RangeRegime::direct;
  double first_q1 = 0.0;
  double first_q2 = 0.0;
  std::vector<RangeProbe> probes;
  BinomialLearnOutput inner;
};

/// For p in [eps^2/n^d, 1 - eps^2/n^d]: find a power t with p^t inside
/// [eps^2/n, 1 - eps^2/n], then run the two-power learner with t as the
/// first power. Guarantees then refer to powers l * t * a_hat.
///
/// Small p scans t = 1/(i ln n), i = 1..d; large p scans t = n^(i/3),
/// i = 1..3d. Either scan is a binary search for the smallest qualifying i.
inline ExtendedRangeOutput learn_extended_range(PowerOracle& oracle, int d, double eps, double delta) {
  detail::require_learner_args(eps, delta);
  detail::require(d >= 1, "learn_extended_range: d must be at least 1");
  const std::size_t n = oracle.order();
  detail::require(n >= 5, "learn_extended_range: n must be at least 5");

  const double nn = static_cast<double>(n);
  const double lo = eps * eps / nn;
  const double hi = 1.0 - lo;

  ExtendedRangeOutput out;
  {
    PowerSource first(oracle, 1.0);
    const OneSidedPair pair = one_sided_estimates(first, eps, delta / 4.0, 1.0);
    out.first_q1 = pair.q1_hat;
    out.first_q2 = pair.q2_hat;
  }

  if (out.first_q1 > lo && out.first_q2 < hi) {
    out.regime = RangeRegime::direct;
    out.t = 1.0;
  } else {
    const bool small = out.first_q1 <= lo;
    out.regime = small ? RangeRegime::small_p : RangeRegime::large_p;
    const int range = small ? d : 3 * d;
    const int max_probes = static_cast<int>(std::floor(std::log2(static_cast<double>(range)))) + 1;
    const double probe_delta = delta / (4.0 * max_probes);

    auto grid_power = [&](int i) {
      return small ? 1.0 / (static_cast<double>(i) * std::log(nn))
                   : std::pow(nn, static_cast<double>(i) / 3.0);
    };
    auto probe = [&](int i) {
      PowerSource src(oracle, grid_power(i));
      const OneSidedPair pair = one_sided_estimates(src, eps, probe_delta, 1.0);
      RangeProbe rec{i, src.power(), small ? pair.q1_hat : pair.q2_hat, false};
      rec.qualifies = small ? pair.q1_hat >= lo : pair.q2_hat < hi;
      out.probes.push_back(rec);
      return rec.qualifies;
    };

    int left = 1;
    int right = range;
    int found = 0;
    while (left <= right) {
      const int mid = left + (right - left) / 2;
      if (probe(mid)) {
        found = mid;
        right = mid - 1;
      } else {
        left = mid + 1;
      }
    }
    if (found == 0) {
      throw GridExhausted("learn_extended_range: no grid power brings p into [eps^2/n, 1-eps^2/n]");
    }
    out.t = grid_power(found);
  }

  out.inner = detail::learn_from_base(oracle, out.t, eps, delta / 2.0, false);
  return out;
}

}  // namespace pbdpowers
