#pragma once

// Exact representation of Poisson binomial distributions (PBDs): parameter
// vectors, probability mass functions, moments, powers and sampling.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pbdpowers/errors.hpp"
#include "pbdpowers/rng.hpp"

namespace pbdpowers {

// Values of p^k below this are treated as exactly zero.
inline constexpr double kUnderflowFloor = 1e-300;

// p^k for p in [0,1], k > 0, evaluated as exp(k ln p).
inline double pow_prob(double p, double k) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  if (k == 1.0) return p;
  const double v = std::exp(k * std::log(p));
  return v < kUnderflowFloor ? 0.0 : v;
}

// (1 - x)^k for x in [0,1], evaluated through log1p so that x close to zero
// keeps its relative precision even when k is in the thousands.
inline double pow_one_minus(double x, double k) {
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  const double v = std::exp(k * std::log1p(-x));
  return v < kUnderflowFloor ? 0.0 : v;
}

/// Parameter vector (p_1, ..., p_n) of a PBD. Immutable; every entry in [0,1].
class ProbVector {
 public:
  explicit ProbVector(std::vector<double> probs) : probs_(std::move(probs)) {
    detail::require(!probs_.empty(), "ProbVector: order must be at least 1");
    for (double p : probs_) {
      detail::require(std::isfinite(p) && p >= 0.0 && p <= 1.0,
                      "ProbVector: entries must lie in [0,1]");
    }
  }

  static ProbVector constant(std::size_t n, double p) { return ProbVector(std::vector<double>(n, p)); }

  std::size_t order() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }

  friend bool operator==(const ProbVector&, const ProbVector&) = default;

 private:
  std::vector<double> probs_;
};

/// Probability mass function on {0, ..., n}.
class DiscretePMF {
 public:
  static constexpr double kNormalizationTolerance = 1e-12;

  explicit DiscretePMF(std::vector<double> mass) : mass_(std::move(mass)) {
    detail::require(!mass_.empty(), "DiscretePMF: support must contain at least one point");
    double total = 0.0;
    for (double m : mass_) {
      detail::require(std::isfinite(m) && m >= 0.0, "DiscretePMF: masses must be nonnegative");
      total += m;
    }
    detail::require(std::abs(total - 1.0) <= kNormalizationTolerance,
                    "DiscretePMF: masses must sum to 1");
  }

  // Rescales nonnegative weights so they sum to one.
  static DiscretePMF normalized(std::vector<double> weights) {
    double total = 0.0;
    for (double& w : weights) {
      if (w < 0.0) w = 0.0;
      total += w;
    }
    detail::require(total > 0.0, "DiscretePMF: weights sum to zero");
    for (double& w : weights) w /= total;
    return DiscretePMF(std::move(weights));
  }

  std::size_t support_order() const noexcept { return mass_.size() - 1; }
  std::span<const double> mass() const noexcept { return mass_; }
  double operator[](std::size_t i) const { return mass_[i]; }

  friend bool operator==(const DiscretePMF&, const DiscretePMF&) = default;

 private:
  std::vector<double> mass_;
};

/// B(n, p).
class BinomialSpec {
 public:
  BinomialSpec(std::size_t n, double p) : n_(n), p_(p) {
    detail::require(n >= 1, "BinomialSpec: n must be positive");
    detail::require(std::isfinite(p) && p >= 0.0 && p <= 1.0, "BinomialSpec: p must lie in [0,1]");
  }

  std::size_t n() const noexcept { return n_; }
  double p() const noexcept { return p_; }
  ProbVector as_vector() const { return ProbVector::constant(n_, p_); }

 private:
  std::size_t n_;
  double p_;
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

// Forward convolution, one Bernoulli trial at a time. O(n^2).
inline DiscretePMF pmf_of_pbd(const ProbVector& pv) {
  const std::size_t n = pv.order();
  std::vector<double> mass(n + 1, 0.0);
  mass[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = pv[i];
    const double q = 1.0 - p;
    for (std::size_t j = i + 1; j > 0; --j) mass[j] = mass[j] * q + mass[j - 1] * p;
    mass[0] *= q;
  }
  return DiscretePMF::normalized(std::move(mass));
}

inline DiscretePMF binomial_pmf(const BinomialSpec& b) {
  const std::size_t n = b.n();
  const double p = b.p();
  std::vector<double> mass(n + 1, 0.0);
  if (p == 0.0) {
    mass[0] = 1.0;
    return DiscretePMF(std::move(mass));
  }
  if (p == 1.0) {
    mass[n] = 1.0;
    return DiscretePMF(std::move(mass));
  }
  std::vector<double> log_fact(n + 1, 0.0);
  for (std::size_t i = 2; i <= n; ++i) log_fact[i] = log_fact[i - 1] + std::log(static_cast<double>(i));
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  for (std::size_t k = 0; k <= n; ++k) {
    const double lk = log_fact[n] - log_fact[k] - log_fact[n - k] + static_cast<double>(k) * lp +
                      static_cast<double>(n - k) * lq;
    mass[k] = std::exp(lk);
  }
  return DiscretePMF::normalized(std::move(mass));
}

inline DiscretePMF binomial_pmf(std::size_t n, double p) { return binomial_pmf(BinomialSpec(n, p)); }

inline Moments mean_var(const ProbVector& pv) {
  Moments m;
  for (double p : pv.probs()) {
    m.mean += p;
    m.variance += p * (1.0 - p);
  }
  return m;
}

inline Moments moments_of(const DiscretePMF& f) {
  Moments m;
  const auto mass = f.mass();
  for (std::size_t i = 0; i < mass.size(); ++i) m.mean += static_cast<double>(i) * mass[i];
  for (std::size_t i = 0; i < mass.size(); ++i) {
    const double d = static_cast<double>(i) - m.mean;
    m.variance += d * d * mass[i];
  }
  return m;
}

/// k-th power: componentwise p_i^k for real k > 0.
inline ProbVector power(const ProbVector& pv, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw InvalidPower("power: exponent must be a positive real");
  if (k == 1.0) return pv;
  std::vector<double> out(pv.order());
  for (std::size_t i = 0; i < pv.order(); ++i) out[i] = pow_prob(pv[i], k);
  return ProbVector(std::move(out));
}

/// Counts per support value of a batch of draws.
class SampleHistogram {
 public:
  explicit SampleHistogram(std::size_t order) : counts_(order + 1, 0) {}
  SampleHistogram(std::vector<std::uint64_t> counts) : counts_(std::move(counts)) {
    for (auto c : counts_) total_ += c;
  }

  void add(std::size_t value, std::uint64_t times = 1) {
    counts_[value] += times;
    total_ += times;
  }

  std::size_t order() const noexcept { return counts_.size() - 1; }
  std::uint64_t total() const noexcept { return total_; }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }

  double sum() const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < counts_.size(); ++i) s += static_cast<double>(i) * static_cast<double>(counts_[i]);
    return s;
  }

  double mean() const noexcept { return total_ == 0 ? 0.0 : sum() / static_cast<double>(total_); }

  // Unbiased (denominator total-1); zero for fewer than two draws.
  double unbiased_variance() const noexcept {
    if (total_ < 2) return 0.0;
    const double mu = mean();
    double ss = 0.0;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      const double d = static_cast<double>(i) - mu;
      ss += d * d * static_cast<double>(counts_[i]);
    }
    return ss / static_cast<double>(total_ - 1);
  }

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

namespace detail {

inline std::uint64_t binomial_draw(Xoshiro256& rng, std::uint64_t trials, double p) {
  if (trials == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  std::binomial_distribution<std::int64_t> dist(static_cast<std::int64_t>(trials), p);
  const auto v = dist(rng);
  return static_cast<std::uint64_t>(std::clamp<std::int64_t>(v, 0, static_cast<std::int64_t>(trials)));
}

}  // namespace detail

/// Inverse-CDF sampler over a fixed PMF.
class PmfSampler {
 public:
  explicit PmfSampler(DiscretePMF pmf) : pmf_(std::move(pmf)) {
    const auto mass = pmf_.mass();
    cdf_.resize(mass.size());
    tail_.resize(mass.size());
    std::partial_sum(mass.begin(), mass.end(), cdf_.begin());
    double acc = 0.0;
    for (std::size_t i = mass.size(); i > 0; --i) {
      acc += mass[i - 1];
      tail_[i - 1] = acc;
    }
  }

  const DiscretePMF& pmf() const noexcept { return pmf_; }
  std::size_t order() const noexcept { return pmf_.support_order(); }

  std::size_t draw(Xoshiro256& rng) const { return locate(rng.uniform()); }

  // Value whose CDF interval contains u in [0,1).
  std::size_t locate(double u) const {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u * cdf_.back());
    const auto idx = static_cast<std::size_t>(it - cdf_.begin());
    return std::min(idx, order());
  }

  // Multinomial draw of `count` samples by sequential conditional binomials;
  // cost is O(n) regardless of count.
  SampleHistogram multinomial(Xoshiro256& rng, std::uint64_t count) const {
    SampleHistogram h(order());
    const auto mass = pmf_.mass();
    std::uint64_t left = count;
    for (std::size_t i = 0; i < mass.size() && left > 0; ++i) {
      if (i + 1 == mass.size()) {
        h.add(i, left);
        break;
      }
      const double denom = tail_[i];
      const double cond = denom > 0.0 ? std::min(1.0, mass[i] / denom) : 1.0;
      const std::uint64_t c = detail::binomial_draw(rng, left, cond);
      if (c > 0) h.add(i, c);
      left -= c;
    }
    return h;
  }

 private:
  DiscretePMF pmf_;
  std::vector<double> cdf_;
  std::vector<double> tail_;
};

// Above this many Bernoulli evaluations the sampler switches to inverse-CDF.
inline constexpr std::uint64_t kDirectSamplingLimit = 10'000'000;

/// `count` independent draws of the PBD, deterministic in `seed`.
///
/// Small batches add up n Bernoulli trials per draw; once count * n exceeds
/// kDirectSamplingLimit the exact PMF is built once and each draw is an
/// inverse-CDF lookup.
inline std::vector<int> sample(const ProbVector& pv, std::uint64_t seed, std::uint64_t count) {
  detail::require(count >= 1, "sample: count must be at least 1");
  Xoshiro256 rng(seed);
  std::vector<int> out;
  out.reserve(count);
  const std::uint64_t n = pv.order();
  if (count <= kDirectSamplingLimit / n) {
    for (std::uint64_t s = 0; s < count; ++s) {
      int x = 0;
      for (double p : pv.probs()) x += rng.uniform() < p ? 1 : 0;
      out.push_back(x);
    }
    return out;
  }
  const PmfSampler sampler(pmf_of_pbd(pv));
  for (std::uint64_t s = 0; s < count; ++s) out.push_back(static_cast<int>(sampler.draw(rng)));
  return out;
}

}  // namespace pbdpowers
