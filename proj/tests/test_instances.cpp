#include <gtest/gtest.h>

#include "checks.hpp"
#include "pbdpowers/instances.hpp"

using namespace pbdpowers;

TEST(SeparatedVector, Examples) {
  EXPECT_EQ(separated_vector(1, 10, 1, 4, {1}), ProbVector::constant(4, 0.9));
  const ProbVector v = separated_vector(3, 10, 2, 6, {2, 3});
  for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(v[i], 0.8);
  for (std::size_t i = 3; i < 6; ++i) EXPECT_DOUBLE_EQ(v[i], 0.97);
}

TEST(SeparatedVector, Preconditions) {
  EXPECT_THROW(separated_vector(3, 3, 1, 4, {1}), PreconditionError);        // kappa <= nu
  EXPECT_THROW(separated_vector(3, 10, 3, 4, {1, 1, 1}), PreconditionError);  // m does not divide n
  EXPECT_THROW(separated_vector(3, 10, 2, 4, {1}), PreconditionError);
  EXPECT_THROW(separated_vector(3, 10, 1, 4, {4}), PreconditionError);
  EXPECT_THROW(separated_vector(3, 10, 1, 4, {0}), PreconditionError);
}

TEST(SeparatedVector, GroupsEqualAndIncreasing) {
  const std::size_t n = 120;
  const int nu = static_cast<int>(std::floor(std::log(static_cast<double>(n))));
  const std::int64_t kappa = static_cast<std::int64_t>(nu) * nu * nu * nu;
  const ProbVector v = separated_vector(nu, kappa, 3, n, {nu, 1, 2});
  for (std::size_t g = 0; g < 3; ++g) {
    for (std::size_t i = 1; i < 40; ++i) EXPECT_EQ(v[g * 40 + i], v[g * 40]);
  }
  EXPECT_LT(v[0], v[40]);
  EXPECT_LT(v[40], v[80]);
}

TEST(SeparatedVector, SeparationAtGroupPower) {
  // Vectors that differ in a single a_i are told apart by the mean at power
  // nu^(4i-2): the gap exceeds 2 sqrt(ln(2/(1-eps))) (sigma_X + sigma_Y).
  const double eps = 0.25;
  for (auto [n, m] : std::vector<std::pair<std::size_t, int>>{{100000, 1}, {200000, 2}}) {
    const int nu = static_cast<int>(std::floor(std::log(static_cast<double>(n))));
    const std::int64_t kappa = static_cast<std::int64_t>(nu) * nu * nu * nu;
    for (int i = 1; i <= m; ++i) {
      std::vector<int> a(static_cast<std::size_t>(m), 1);
      std::vector<int> b = a;
      b[static_cast<std::size_t>(i - 1)] = 2;
      const double k = std::pow(static_cast<double>(nu), 4 * i - 2);
      const Moments x = mean_var(power(separated_vector(nu, kappa, m, n, a), k));
      const Moments y = mean_var(power(separated_vector(nu, kappa, m, n, b), k));
      const double need = 2.0 * std::sqrt(std::log(2.0 / (1.0 - eps))) * (std::sqrt(x.variance) + std::sqrt(y.variance));
      EXPECT_GT(std::abs(x.mean - y.mean), need) << "n=" << n << " i=" << i;
      EXPECT_TRUE(mean_gap_tvd_lower(x.mean, x.variance, y.mean, y.variance, eps));
    }
  }
}

TEST(Chebyshev, RangeAndFirstSum) {
  for (std::size_t n : {2u, 5u, 16u}) {
    const InstancePair pair = chebyshev_pair(n);
    EXPECT_EQ(pair.left.order(), n);
    EXPECT_EQ(pair.right.order(), n);
    double sp = 0.0;
    double sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_GE(pair.left[j], 0.0);
      EXPECT_LE(pair.left[j], 0.25);
      EXPECT_GE(pair.right[j], 0.0);
      EXPECT_LE(pair.right[j], 0.25);
      sp += pair.left[j];
      sq += pair.right[j];
    }
    EXPECT_NEAR(sp, n / 8.0, 1e-12);
    EXPECT_NEAR(sq, n / 8.0, 1e-12);
  }
  EXPECT_THROW(chebyshev_pair(1), PreconditionError);
}

TEST(Chebyshev, PowerSumIdentityBelowOrder) {
  for (std::size_t n = 2; n <= 32; ++n) {
    const InstancePair pair = chebyshev_pair(n);
    for (std::size_t l = 1; l < n; ++l) EXPECT_LE(std::abs(checks::power_sum_gap(pair, l)), 1e-9) << n << " " << l;
  }
}

TEST(Chebyshev, IdentityBreaksAtOrder) {
  // The degree-n polynomials differ only in their constant terms, which
  // makes the gap at l = n equal n 2^(2-4n). Beyond n = 16 it drops below
  // double round-off of the sums themselves.
  for (std::size_t n = 2; n <= 16; ++n) {
    const double want = static_cast<double>(n) * std::pow(2.0, 2.0 - 4.0 * static_cast<double>(n));
    EXPECT_NEAR(checks::power_sum_gap(chebyshev_pair(n), static_cast<double>(n)), want, 1e-5 * want) << n;
  }
}

TEST(Chebyshev, TailBound) {
  for (std::size_t n = 2; n <= 16; ++n) EXPECT_LE(checks::chebyshev_stats(n).tail_worst, 0.0) << n;
}

TEST(Chebyshev, PowersAreClose) {
  const checks::ChebyshevStats st = checks::chebyshev_stats(16);
  EXPECT_LE(st.tvd_worst, 0.05);
  EXPECT_LE(st.identity_worst, 1e-9);
}

TEST(Fano, Triple) {
  const FanoTriple t = fano_binomial_triple(10000, 10000);
  EXPECT_DOUBLE_EQ(t.delta, 1e-4);
  EXPECT_DOUBLE_EQ(t.members[0].p(), 0.5);
  EXPECT_DOUBLE_EQ(t.members[1].p(), 0.500025);
  EXPECT_DOUBLE_EQ(t.members[2].p(), 0.50005);
  EXPECT_EQ(t.members[2].n(), 10000u);
  EXPECT_THROW(fano_binomial_triple(1, 1), PreconditionError);  // delta = 1
  EXPECT_NO_THROW(fano_binomial_triple(1, 4));
}

TEST(Fano, KlAndTvdBounds) {
  for (std::size_t n : {1000u, 10000u}) {
    for (std::size_t big : {1000u, 10000u}) {
      const checks::FanoStats st = checks::fano_stats(n, big);
      EXPECT_LE(st.max_kl_extreme, 105.0 / static_cast<double>(big));
      EXPECT_TRUE(st.kl_ordered);
      EXPECT_GE(st.first_tvd, 1.0 / (9.0 * std::sqrt(static_cast<double>(big))));
    }
  }
}

TEST(Report, IdenticalPairIsZero) {
  const ProbVector v({0.1, 0.7, 0.4});
  const auto rows = indistinguishability_report(InstancePair(v, v, "same"), {1, 2, 0.5});
  ASSERT_EQ(rows.size(), 3u);
  for (const PowerRow& r : rows) {
    EXPECT_EQ(r.distances.tvd, 0.0);
    EXPECT_EQ(r.distances.kl, 0.0);
    EXPECT_EQ(r.distances.hellinger, 0.0);
  }
  EXPECT_EQ(rows[2].power, 0.5);
}

TEST(Report, MatchesDirectComputation) {
  const InstancePair pair(ProbVector({0.5, 0.5}), ProbVector::constant(2, 0.6), "x");
  const auto rows = indistinguishability_report(pair, {1.0});
  EXPECT_NEAR(rows[0].distances.tvd, 0.11, 1e-15);
}

TEST(Report, Preconditions) {
  EXPECT_THROW(InstancePair(ProbVector({0.5}), ProbVector({0.5, 0.5}), "bad"), PreconditionError);
  const InstancePair big(ProbVector::constant(10001, 0.5), ProbVector::constant(10001, 0.5), "big");
  EXPECT_THROW(indistinguishability_report(big, {1.0}), PreconditionError);
  const InstancePair ok(ProbVector({0.5}), ProbVector({0.4}), "ok");
  EXPECT_THROW(indistinguishability_report(ok, {0.0}), InvalidPower);
}
