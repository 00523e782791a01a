#pragma once

// Independent reference computations. Nothing here calls into the library,
// so tests compare two unrelated routes to the same number.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

// PMF of a sum of Bernoullis by enumerating all 2^n outcomes.
inline std::vector<double> enumerate_pmf(const std::vector<double>& p) {
  const std::size_t n = p.size();
  std::vector<double> mass(n + 1, 0.0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double w = 1.0;
    int ones = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) {
        w *= p[i];
        ++ones;
      } else {
        w *= 1.0 - p[i];
      }
    }
    mass[static_cast<std::size_t>(ones)] += w;
  }
  return mass;
}

// Binomial PMF through lgamma.
inline std::vector<double> binomial(std::size_t n, double p) {
  std::vector<double> out(n + 1, 0.0);
  if (p == 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (p == 1.0) {
    out[n] = 1.0;
    return out;
  }
  const double nn = static_cast<double>(n);
  for (std::size_t k = 0; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    out[k] = std::exp(std::lgamma(nn + 1) - std::lgamma(kk + 1) - std::lgamma(nn - kk + 1) + kk * std::log(p) +
                      (nn - kk) * std::log(1.0 - p));
  }
  return out;
}

inline double half_l1(const std::vector<double>& f, const std::vector<double>& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::abs(f[i] - g[i]);
  return 0.5 * s;
}

// Elementary symmetric polynomials e_0..e_n by subset enumeration; the monic
// polynomial prod (x - r_i) has coefficient (-1)^k e_k on x^{n-k}.
inline std::vector<double> monic_coeffs_by_subsets(const std::vector<double>& r) {
  const std::size_t n = r.size();
  std::vector<double> e(n + 1, 0.0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double prod = 1.0;
    int k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) {
        prod *= r[i];
        ++k;
      }
    }
    e[static_cast<std::size_t>(k)] += prod;
  }
  std::vector<double> c(n);
  for (std::size_t k = 1; k <= n; ++k) c[k - 1] = (k % 2 ? -1.0 : 1.0) * e[k];
  return c;  // (c_{n-1}, ..., c_0)
}

// erf by its Maclaurin series (fine for |x| <= 3).
inline double erf_series(double x) {
  double term = x;
  double sum = x;
  for (int k = 1; k < 200; ++k) {
    term *= -x * x / k;
    sum += term / (2 * k + 1);
  }
  return 2.0 / std::sqrt(std::numbers::pi) * sum;
}

// Principal branch root of w e^w = z by Newton from w0.
inline double lambert_w(double z, double w0) {
  double w = w0;
  for (int i = 0; i < 100; ++i) {
    const double ew = std::exp(w);
    const double step = (w * ew - z) / (ew * (w + 1.0));
    w -= step;
    if (std::abs(step) < 1e-17) break;
  }
  return w;
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 300) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Regularized upper incomplete gamma Q(a, x).
inline double gamma_q(double a, double x) {
  if (x <= 0.0) return 1.0;
  const double lead = std::exp(-x + a * std::log(x) - std::lgamma(a));
  if (x < a + 1.0) {
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 1; n < 10000; ++n) {
      term *= x / (a + n);
      sum += term;
      if (term < sum * 1e-16) break;
    }
    return 1.0 - sum * lead;
  }
  // Lentz continued fraction.
  double b = x + 1.0 - a;
  double c = 1.0 / 1e-300;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return lead * h;
}

// Pearson chi-square p-value of observed counts against expected
// probabilities, pooling adjacent cells until each expects at least 5.
inline double chi_square_p_value(const std::vector<std::uint64_t>& counts, const std::vector<double>& probs) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  std::vector<double> obs;
  std::vector<double> expct;
  double o = 0.0;
  double e = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    o += static_cast<double>(counts[i]);
    e += probs[i] * total;
    if (e >= 5.0) {
      obs.push_back(o);
      expct.push_back(e);
      o = e = 0.0;
    }
  }
  if (!obs.empty()) {
    obs.back() += o;
    expct.back() += e;
  }
  if (obs.size() < 2) return 1.0;
  double stat = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) stat += (obs[i] - expct[i]) * (obs[i] - expct[i]) / expct[i];
  const double dof = static_cast<double>(obs.size() - 1);
  return gamma_q(dof / 2.0, stat / 2.0);
}

}  // namespace oracle
