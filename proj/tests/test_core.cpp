#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "pbdpowers/core.hpp"

using namespace pbdpowers;

namespace {

std::vector<double> random_probs(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(n);
  for (double& x : p) x = u(gen);
  return p;
}

void expect_mass(const DiscretePMF& f, const std::vector<double>& want, double tol) {
  ASSERT_EQ(f.support_order() + 1, want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(f[i], want[i], tol) << "index " << i;
}

}  // namespace

TEST(ProbVector, RejectsOutOfRangeAndEmpty) {
  EXPECT_THROW(ProbVector({}), PreconditionError);
  EXPECT_THROW(ProbVector({0.5, 1.1}), PreconditionError);
  EXPECT_THROW(ProbVector({-0.1}), PreconditionError);
  EXPECT_NO_THROW(ProbVector({0.0, 1.0}));
  EXPECT_EQ(ProbVector::constant(4, 0.3).order(), 4u);
}

TEST(DiscretePMF, ValidatesNormalization) {
  EXPECT_THROW(DiscretePMF({0.5, 0.4}), PreconditionError);
  EXPECT_THROW(DiscretePMF({1.2, -0.2}), PreconditionError);
  EXPECT_NO_THROW(DiscretePMF({0.25, 0.75}));
}

TEST(PmfOfPbd, SmallExamples) {
  expect_mass(pmf_of_pbd(ProbVector({0.5, 0.5})), {0.25, 0.5, 0.25}, 1e-15);
  expect_mass(pmf_of_pbd(ProbVector({1.0})), {0.0, 1.0}, 0.0);
  expect_mass(pmf_of_pbd(ProbVector({0.2, 0.5, 0.8})), {0.08, 0.42, 0.42, 0.08}, 1e-15);
}

TEST(PmfOfPbd, MatchesEnumeration) {
  std::mt19937_64 gen(11);
  for (int rep = 0; rep < 50; ++rep) {
    const auto p = random_probs(gen, 1 + rep % 14);
    expect_mass(pmf_of_pbd(ProbVector(p)), oracle::enumerate_pmf(p), 1e-13);
  }
}

TEST(PmfOfPbd, NormalizationProperty) {
  std::mt19937_64 gen(2);
  std::uniform_int_distribution<std::size_t> order(1, 64);
  for (int rep = 0; rep < 1000; ++rep) {
    const DiscretePMF f = pmf_of_pbd(ProbVector(random_probs(gen, order(gen))));
    double s = 0.0;
    for (double m : f.mass()) {
      ASSERT_GE(m, 0.0);
      s += m;
    }
    ASSERT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(BinomialPmf, MatchesLgammaForm) {
  for (std::size_t n : {1u, 7u, 100u, 1000u}) {
    for (double p : {0.0, 0.001, 0.3, 0.5, 0.999, 1.0}) {
      expect_mass(binomial_pmf(n, p), oracle::binomial(n, p), 1e-12);
    }
  }
  const DiscretePMF dp = pmf_of_pbd(ProbVector::constant(20, 0.35));
  expect_mass(binomial_pmf(20, 0.35), std::vector<double>(dp.mass().begin(), dp.mass().end()), 1e-14);
}

TEST(MeanVar, Examples) {
  auto a = mean_var(ProbVector({0.5, 0.5}));
  EXPECT_DOUBLE_EQ(a.mean, 1.0);
  EXPECT_DOUBLE_EQ(a.variance, 0.5);
  auto b = mean_var(ProbVector({1.0, 0.0}));
  EXPECT_DOUBLE_EQ(b.mean, 1.0);
  EXPECT_DOUBLE_EQ(b.variance, 0.0);
  auto c = mean_var(ProbVector({0.2, 0.5, 0.8}));
  EXPECT_NEAR(c.mean, 1.5, 1e-15);
  EXPECT_NEAR(c.variance, 0.57, 1e-15);
}

TEST(MeanVar, AgreesWithPmfMoments) {
  std::mt19937_64 gen(5);
  for (int rep = 0; rep < 300; ++rep) {
    const ProbVector pv(random_probs(gen, 1 + rep % 64));
    const Moments a = mean_var(pv);
    const Moments b = moments_of(pmf_of_pbd(pv));
    ASSERT_NEAR(a.mean, b.mean, 1e-9);
    ASSERT_NEAR(a.variance, b.variance, 1e-9);
  }
}

TEST(Power, Examples) {
  const ProbVector a = power(ProbVector({0.9, 0.8}), 2);
  EXPECT_NEAR(a[0], 0.81, 1e-15);
  EXPECT_NEAR(a[1], 0.64, 1e-15);
  EXPECT_NEAR(power(ProbVector({0.25}), 0.5)[0], 0.5, 1e-15);
  const ProbVector c = power(ProbVector({0.2, 0.5, 0.8}), 3);
  EXPECT_NEAR(c[0], 0.008, 1e-15);
  EXPECT_NEAR(c[1], 0.125, 1e-15);
  EXPECT_NEAR(c[2], 0.512, 1e-15);
}

TEST(Power, IdentityIsExactAndNonPositiveRejected) {
  const ProbVector pv({0.123456789, 0.987654321, 0.0, 1.0});
  EXPECT_EQ(power(pv, 1.0), pv);
  EXPECT_THROW(power(pv, 0.0), InvalidPower);
  EXPECT_THROW(power(pv, -2.0), InvalidPower);
  EXPECT_THROW(power(pv, std::nan("")), InvalidPower);
}

TEST(Power, Composition) {
  std::mt19937_64 gen(8);
  const std::vector<double> exps{0.5, 1.0, 2.0, 3.7};
  for (int rep = 0; rep < 100; ++rep) {
    const ProbVector pv(random_probs(gen, 10));
    for (double a : exps) {
      for (double b : exps) {
        const ProbVector lhs = power(power(pv, a), b);
        const ProbVector rhs = power(pv, a * b);
        for (std::size_t i = 0; i < pv.order(); ++i) ASSERT_NEAR(lhs[i], rhs[i], 1e-12);
      }
    }
  }
}

TEST(Power, UnderflowClampsToZero) {
  EXPECT_EQ(pow_prob(0.5, 2000.0), 0.0);
  EXPECT_GT(pow_prob(0.5, 900.0), 0.0);
  EXPECT_EQ(pow_prob(1.0, 1e9), 1.0);
  EXPECT_NEAR(pow_one_minus(1e-12, 1e6), std::exp(-1e-6), 1e-18);
}

TEST(Sample, DegenerateVectors) {
  EXPECT_EQ(sample(ProbVector({0, 0, 0}), 99, 4), (std::vector<int>{0, 0, 0, 0}));
  EXPECT_EQ(sample(ProbVector({1, 1}), 99, 2), (std::vector<int>{2, 2}));
  EXPECT_THROW(sample(ProbVector({0.5}), 1, 0), PreconditionError);
}

TEST(Sample, DeterministicInSeed) {
  const ProbVector pv({0.1, 0.4, 0.7});
  EXPECT_EQ(sample(pv, 42, 1000), sample(pv, 42, 1000));
  EXPECT_NE(sample(pv, 42, 1000), sample(pv, 43, 1000));
}

TEST(Sample, PinnedMeanRegression) {
  const auto v = sample(ProbVector::constant(100, 0.5), 12345, 100000);
  double m = 0.0;
  for (int x : v) m += x;
  m /= static_cast<double>(v.size());
  EXPECT_GE(m, 49.9);
  EXPECT_LE(m, 50.1);
  EXPECT_DOUBLE_EQ(m, 50.00232);
}

TEST(Sample, MeanWithinFiveSigma) {
  for (std::size_t n : {10u, 200u}) {  // direct and inverse-CDF paths
    const ProbVector pv = ProbVector::constant(n, 0.3);
    const auto v = sample(pv, 7, 1000000);
    double m = 0.0;
    for (int x : v) m += x;
    m /= static_cast<double>(v.size());
    const Moments mv = mean_var(pv);
    EXPECT_LE(std::abs(m - mv.mean), 5.0 * std::sqrt(mv.variance) / 1000.0);
  }
}

TEST(Sample, GoodnessOfFit) {
  std::mt19937_64 gen(1234);
  std::uniform_int_distribution<std::size_t> order(1, 64);
  for (int rep = 0; rep < 20; ++rep) {
    // Every fifth vector is long enough to take the inverse-CDF path.
    const std::size_t n = rep % 5 == 4 ? 150 : order(gen);
    const ProbVector pv(random_probs(gen, n));
    const DiscretePMF f = pmf_of_pbd(pv);
    const std::vector<double> probs(f.mass().begin(), f.mass().end());
    auto p_value = [&](std::uint64_t seed) {
      std::vector<std::uint64_t> counts(n + 1, 0);
      for (int x : sample(pv, seed, 100000)) ++counts[static_cast<std::size_t>(x)];
      return oracle::chi_square_p_value(counts, probs);
    };
    const std::uint64_t seed = 1000 + rep;
    if (p_value(seed) < 1e-4) {
      EXPECT_GE(p_value(seed + 1000000), 1e-4) << "rep " << rep << " rejected twice";
    }
  }
}

TEST(SampleHistogram, MomentsAndVariance) {
  SampleHistogram h(3);
  h.add(0);
  h.add(2, 3);
  EXPECT_EQ(h.total(), 4u);
  EXPECT_DOUBLE_EQ(h.mean(), 1.5);
  EXPECT_DOUBLE_EQ(h.unbiased_variance(), 1.0);  // deviations 1.5,0.5,0.5,0.5 -> 3/3
  SampleHistogram one(2);
  one.add(1);
  EXPECT_EQ(one.unbiased_variance(), 0.0);
}

TEST(PmfSampler, MultinomialMatchesPmf) {
  const DiscretePMF f = pmf_of_pbd(ProbVector({0.9, 0.6, 0.3, 0.05}));
  const PmfSampler s(f);
  Xoshiro256 rng(3);
  const SampleHistogram h = s.multinomial(rng, 10'000'000);
  EXPECT_EQ(h.total(), 10'000'000u);
  std::vector<std::uint64_t> counts(h.counts().begin(), h.counts().end());
  EXPECT_GE(oracle::chi_square_p_value(counts, std::vector<double>(f.mass().begin(), f.mass().end())), 1e-4);
}
