#include "pbdpowers/instances.hpp"

namespace pbdpowers {

ProbVector separated_vector(int nu, std::int64_t kappa, int m, std::size_t n, const std::vector<int>& a) {
  detail::require(nu >= 1 && m >= 1, "separated_vector: nu and m must be positive");
  detail::require(kappa > nu, "separated_vector: kappa must exceed nu");
  detail::require(n % static_cast<std::size_t>(m) == 0 && n > 0, "separated_vector: m must divide n");
  detail::require(a.size() == static_cast<std::size_t>(m), "separated_vector: need one a_i per group");
  std::vector<double> v;
  v.reserve(n);
  const std::size_t per = n / static_cast<std::size_t>(m);
  for (int i = 1; i <= m; ++i) {
    const int ai = a[static_cast<std::size_t>(i - 1)];
    detail::require(ai >= 1 && ai <= nu, "separated_vector: a_i must lie in {1..nu}");
    const double p = 1.0 - ai / std::pow(static_cast<double>(kappa), i);
    v.insert(v.end(), per, p);
  }
  return ProbVector(std::move(v));
}

InstancePair chebyshev_pair(std::size_t n) {
  detail::require(n >= 2, "chebyshev_pair: n must be at least 2");
  std::vector<double> p(n);
  std::vector<double> q(n);
  const double nn = static_cast<double>(n);
  for (std::size_t j = 1; j <= n; ++j) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(j);
    p[j - 1] = (1.0 + std::cos(angle / nn)) / 8.0;
    q[j - 1] = (1.0 + std::cos((angle + std::numbers::pi) / nn)) / 8.0;
  }
  return {ProbVector(std::move(p)), ProbVector(std::move(q)), "chebyshev-" + std::to_string(n)};
}

FanoTriple fano_binomial_triple(std::size_t n, std::size_t N) {
  detail::require(n >= 1 && N >= 1, "fano_binomial_triple: n and N must be positive");
  const double delta = 1.0 / std::sqrt(static_cast<double>(n) * static_cast<double>(N));
  detail::require(delta <= 0.5, "fano_binomial_triple: delta = 1/sqrt(nN) must be at most 1/2");
  return {delta,
          {BinomialSpec(n, 0.5), BinomialSpec(n, 0.5 + delta / 4.0), BinomialSpec(n, 0.5 + delta / 2.0)}};
}

std::vector<PowerRow> indistinguishability_report(const InstancePair& pair, const std::vector<double>& powers) {
  detail::require(pair.left.order() <= kReportOrderCap, "indistinguishability_report: order above 10^4");
  std::vector<PowerRow> rows;
  rows.reserve(powers.size());
  for (double k : powers) {
    const DiscretePMF f = pmf_of_pbd(power(pair.left, k));
    const DiscretePMF g = pmf_of_pbd(power(pair.right, k));
    rows.push_back({k, distances(f, g)});
  }
  return rows;
}

}  // namespace pbdpowers
