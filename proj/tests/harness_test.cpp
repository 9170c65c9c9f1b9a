#include "lpdist/harness.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace {

using namespace lpdist;

const double kThird = 1.0 / 3.0;

TEST(CollisionMoments, ExactTwoPointEnumeration) {
  DiscreteDistribution u2 = make_uniform(2);
  EXPECT_NEAR(expected_collision_mean(u2, 2), 0.5, 1e-15);
  EXPECT_NEAR(expected_collision_variance(u2, 2), 0.25, 1e-15);
  EXPECT_THROW(expected_collision_mean(u2, 1), std::invalid_argument);
}

TEST(CollisionMoments, UniformVarianceCollapses) {
  // ||U||_3^3 = ||U||_2^4 = 1/n^2 kills the triple term
  for (std::uint64_t n : {5, 7, 50}) {
    for (std::uint64_t m : {2, 6, 12}) {
      double nd = static_cast<double>(n);
      double pairs = 0.5 * static_cast<double>(m) * static_cast<double>(m - 1);
      EXPECT_NEAR(expected_collision_variance(make_uniform(n), m),
                  pairs * (1.0 / nd - 1.0 / (nd * nd)), 1e-12);
    }
  }
}

TEST(CollisionMoments, PaninskiClosedForms) {
  DiscreteDistribution member({0.3, 0.1, 0.3, 0.1, 0.2});
  EXPECT_NEAR(expected_collision_mean(member, 6), 3.6, 1e-12);
  EXPECT_NEAR(expected_collision_variance(member, 6), 3.504, 1e-12);
  EXPECT_NEAR(expected_collision_mean(make_uniform(5), 6), 3.0, 1e-12);
  EXPECT_NEAR(expected_collision_variance(make_uniform(5), 6), 2.4, 1e-12);
}

TEST(CollisionMoments, MonteCarloMatchesClosedForms) {
  const std::uint64_t trials = 20000;
  CollisionMomentsReport r = verify_collision_moments(make_uniform(5), 6, trials, 77);
  double se = std::sqrt(r.expected_variance / static_cast<double>(trials));
  EXPECT_NEAR(r.empirical_mean, r.expected_mean, 4.0 * se);
  EXPECT_NEAR(r.empirical_variance, r.expected_variance, 0.03 * r.expected_variance);
  EXPECT_EQ(r.m, 6u);
  EXPECT_EQ(r.trials, trials);
}

TEST(EstimateFailureRate, UniformSideStaysBelowDelta) {
  ExperimentConfig config{Problem::TestUniformity,
                          Exponent::finite(2.0),
                          100,
                          0.2,
                          kThird,
                          Adversary::Uniform,
                          "",
                          200,
                          42,
                          std::nullopt};
  ExperimentReport report = estimate_failure_rate(config);
  EXPECT_EQ(report.m_used, 135u);
  EXPECT_LE(report.failure_rate, kThird + 3.0 * std::sqrt(kThird * (2.0 / 3.0) / 200.0));
  EXPECT_DOUBLE_EQ(report.failure_rate * 200.0, static_cast<double>(report.failures));
}

TEST(EstimateFailureRate, DeterministicForIdenticalConfig) {
  ExperimentConfig config{Problem::TestUniformity,
                          Exponent::finite(2.0),
                          24,
                          0.2,
                          kThird,
                          Adversary::Paninski,
                          "",
                          150,
                          9,
                          std::nullopt};
  ExperimentReport a = estimate_failure_rate(config);
  ExperimentReport b = estimate_failure_rate(config);
  EXPECT_EQ(a.failures, b.failures);
  EXPECT_EQ(a.m_used, b.m_used);
  EXPECT_DOUBLE_EQ(a.failure_rate, b.failure_rate);
  EXPECT_DOUBLE_EQ(a.ci_halfwidth, b.ci_halfwidth);
}

TEST(EstimateFailureRate, LearnOverrideWithOneSampleAlwaysFails) {
  ExperimentConfig config{Problem::Learn,
                          Exponent::finite(2.0),
                          100,
                          0.15,
                          kThird,
                          Adversary::Uniform,
                          "",
                          50,
                          3,
                          std::uint64_t{1}};
  ExperimentReport report = estimate_failure_rate(config);
  EXPECT_EQ(report.m_used, 1u);
  EXPECT_DOUBLE_EQ(report.failure_rate, 1.0);
  EXPECT_DOUBLE_EQ(report.ci_halfwidth, 0.0);
  EXPECT_EQ(report.failures, 50u);
}

TEST(EstimateFailureRate, RejectsIncompatibleConfigs) {
  ExperimentConfig moments{Problem::CollisionMoments,
                           Exponent::finite(2.0),
                           10,
                           0.1,
                           kThird,
                           Adversary::Uniform,
                           "",
                           10,
                           1,
                           std::nullopt};
  EXPECT_THROW(estimate_failure_rate(moments), std::invalid_argument);

  // an adversary strictly between uniform and eps-far has no wrong verdict
  std::string path = testing::TempDir() + "/between.txt";
  {
    std::ofstream out(path);
    out << "0.26\n0.24\n0.25\n0.25\n";
  }
  ExperimentConfig between{Problem::TestUniformity,
                           Exponent::finite(2.0),
                           4,
                           0.2,
                           kThird,
                           Adversary::FromFile,
                           path,
                           10,
                           1,
                           std::nullopt};
  EXPECT_THROW(estimate_failure_rate(between), std::invalid_argument);

  ExperimentConfig wrong_n = between;
  wrong_n.n = 5;
  EXPECT_THROW(estimate_failure_rate(wrong_n), std::invalid_argument);
}

TEST(EmitCsv, ExperimentReportFormat) {
  ExperimentConfig config{Problem::TestUniformity,
                          Exponent::finite(2.0),
                          24,
                          0.2,
                          kThird,
                          Adversary::Paninski,
                          "",
                          150,
                          9,
                          std::nullopt};
  ExperimentReport report = estimate_failure_rate(config);
  std::ostringstream a, b;
  emit_csv(report, a);
  emit_csv(report, b);
  EXPECT_EQ(a.str(), b.str());
  std::string text = a.str();
  EXPECT_EQ(text.find("problem,p,n,eps,delta,m,trials,seed,adversary,failure_rate,"
                      "ci_halfwidth\n"),
            0u);
  EXPECT_NE(text.find("test,2,24,0.2,0.3333333333,138,150,9,paninski,"), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

TEST(EmitCsv, CurveFormat) {
  std::vector<CurvePoint> empty;
  std::ostringstream header_only;
  emit_csv(Exponent::infinity(), 0.05, kThird, empty, header_only);
  EXPECT_EQ(header_only.str(), "p,n,eps,delta,m_sufficient,m_necessary,regime\n");

  auto curve = curve_points(Exponent::finite(2.0), 0.1, {4, 1000}, kThird);
  std::ostringstream out;
  emit_csv(Exponent::finite(2.0), 0.1, kThird, curve, out);
  EXPECT_NE(out.str().find("2,4,0.1,0.3333333333,1350,"), std::string::npos);
  EXPECT_NE(out.str().find("2,1000,0.1,0.3333333333,270,"), std::string::npos);
  EXPECT_NE(out.str().find(",large-n\n"), std::string::npos);

  auto linf_curve = curve_points(Exponent::infinity(), 0.05, {50}, kThird);
  std::ostringstream linf_out;
  emit_csv(Exponent::infinity(), 0.05, kThird, linf_curve, linf_out);
  EXPECT_NE(linf_out.str().find("inf,50,"), std::string::npos);
}

TEST(EmitCsv, FileVariantMatchesStream) {
  auto curve = curve_points(Exponent::finite(1.0), 0.1, {2, 3}, kThird);
  std::ostringstream expected;
  emit_csv(Exponent::finite(1.0), 0.1, kThird, curve, expected);
  std::string path = testing::TempDir() + "/curve.csv";
  emit_csv(Exponent::finite(1.0), 0.1, kThird, curve, path);
  std::ifstream in(path, std::ios::binary);
  std::stringstream actual;
  actual << in.rdbuf();
  EXPECT_EQ(actual.str(), expected.str());
  EXPECT_THROW(emit_csv(Exponent::finite(1.0), 0.1, kThird, curve, "/nonexistent/x.csv"),
               std::runtime_error);
}

TEST(BuildDistribution, CoversAllSpellings) {
  EXPECT_EQ(build_distribution("uniform", 10, 0.1, Exponent::finite(2.0), 1).size(), 10u);
  DiscreteDistribution heavy = build_distribution("heavy", 4, 0.1, Exponent::finite(2.0), 1);
  EXPECT_NEAR(heavy[0], 0.35, 1e-15);
  DiscreteDistribution pan =
      build_distribution("paninski", 24, 0.2, Exponent::finite(2.0), 7);
  EXPECT_NEAR(lp_distance(pan, make_uniform(24), Exponent::finite(2.0)), 0.2, 1e-12);
  DiscreteDistribution sparse =
      build_distribution("sparse", 64, 0.25, Exponent::finite(2.0), 7);
  EXPECT_EQ(sparse.size(), 64u);
  EXPECT_THROW(build_distribution("mystery", 10, 0.1, Exponent::finite(2.0), 1),
               std::invalid_argument);
}

}  // namespace
