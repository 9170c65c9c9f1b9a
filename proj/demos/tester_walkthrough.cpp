// End-to-end tour: size a test, run it against a far distribution, then
// learn the same distribution and report the achieved error.

#include <cstdio>

#include "lpdist/lpdist.hpp"

int main() {
  using namespace lpdist;

  // n is kept small enough that the Paninski family exists at this eps
  // (it needs eps * sqrt(n) <= 1 for p = 2)
  const Exponent p = Exponent::finite(2.0);
  const std::uint64_t n = 24;
  const double eps = 0.2;
  const double delta = 1.0 / 3.0;

  TestParams test_params{p, n, eps, delta};
  std::uint64_t m = test_sample_size(test_params);
  std::printf("collision tester: n=%llu eps=%.2f delta=%.4f -> m=%llu\n",
              (unsigned long long)n, eps, delta, (unsigned long long)m);

  DiscreteDistribution far = paninski_member(n, eps, p, random_coins(n / 2, mix_seed(42, 0)));
  SampleSource source(far);
  Verdict v = test_uniformity(test_params, source, mix_seed(42, 1));
  std::printf("far input  : statistic=%.4f threshold=%.4f verdict=%s\n", v.statistic,
              v.threshold, v.outcome == Outcome::Uniform ? "Uniform" : "NotUniform");

  SampleSource uniform_source(make_uniform(n));
  Verdict vu = test_uniformity(test_params, uniform_source, mix_seed(42, 2));
  std::printf("uniform in : statistic=%.4f threshold=%.4f verdict=%s\n", vu.statistic,
              vu.threshold, vu.outcome == Outcome::Uniform ? "Uniform" : "NotUniform");

  LearnParams learn_params{p, n, 0.1, delta};
  LearnResult learned = learn(learn_params, source, mix_seed(42, 3));
  std::printf("learner    : m=%llu achieved l2 error=%.4f (target 0.1)\n",
              (unsigned long long)learned.m_used, lp_distance(learned.estimate, far, p));
  return 0;
}
