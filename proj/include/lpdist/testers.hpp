#pragma once

// Uniformity testers: the collision tester, its majority-vote amplification,
// and the bucketing tester for the l-infinity metric, plus the p-dispatching
// front end.

#include <cstdint>
#include <utility>

#include "lpdist/core.hpp"

namespace lpdist {

// ---------------------------------------------------------------------------
// Parameters and verdicts

// delta < 0.5 is the testing regime; random guessing achieves 0.5.
struct TestParams {
  Exponent p;
  std::uint64_t n;
  double eps;
  double delta;

  void validate() const {
    detail::require(n >= 2, "support size must be >= 2");
    detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");
    detail::require(delta > 0.0 && delta < 0.5, "testing delta must lie in (0, 0.5)");
  }
};

enum class Outcome { Uniform, NotUniform };

// statistic/threshold are exposed for auditability. The collision tester and
// the per-coordinate l-infinity rule output Uniform iff statistic <=
// threshold; the grouped l-infinity rule outputs NotUniform iff statistic >=
// threshold.
struct Verdict {
  Outcome outcome;
  double statistic;
  double threshold;
  std::uint64_t m_used;
};

// ---------------------------------------------------------------------------
// Collision tester

// C = sum_i C(X_i, 2), the number of colliding sample pairs.
inline std::uint64_t collision_count(const SampleHistogram& hist) {
  std::uint64_t c = 0;
  for (std::uint64_t x : hist.counts) c += x * (x - (x > 0 ? 1 : 0)) / 2;
  return c;
}

// T = C(m,2)/n + sqrt((1/delta) * C(m,2)/n).
inline double collision_threshold(std::uint64_t m, std::uint64_t n, double delta) {
  detail::require(m >= 2, "collision threshold needs m >= 2 (no pairs otherwise)");
  detail::require(delta > 0.0 && delta < 0.5, "testing delta must lie in (0, 0.5)");
  double pairs_over_n = static_cast<double>(m) * static_cast<double>(m - 1) / 2.0 /
                        static_cast<double>(n);
  return pairs_over_n + std::sqrt(pairs_over_n / delta);
}

struct SampleSizeFormula {
  double m_real;          // pre-ceiling value
  bool small_regime;      // n <= 1/eps^q
};

// Sufficient sample size for the collision tester, p in [1,2]:
//   n <= 1/eps^q:  (9/delta) * sqrt(n) / (eps n^(1/q))^2
//   n >= 1/eps^q:  (9/delta) * (1/2) * sqrt((2/eps)^q)
// For p = 1 (q = inf) the first branch applies for every n.
inline SampleSizeFormula collision_test_m_real(double p, std::uint64_t n, double eps,
                                               double delta) {
  detail::require(p >= 1.0 && p <= 2.0, "collision budget is defined for p in [1,2]");
  TestParams{Exponent::finite(p), n, eps, delta}.validate();
  Exponent q = conjugate(Exponent::finite(p));
  double nd = static_cast<double>(n);
  bool small = q.is_inf() || nd <= std::pow(1.0 / eps, q.value());
  if (small) {
    double scale = eps * detail::pow_recip(nd, q);
    return {(9.0 / delta) * std::sqrt(nd) / (scale * scale), true};
  }
  return {(9.0 / delta) * 0.5 * std::sqrt(std::pow(2.0 / eps, q.value())), false};
}

inline std::uint64_t collision_test_m(double p, std::uint64_t n, double eps, double delta) {
  return std::max<std::uint64_t>(2, detail::ceil_count(collision_test_m_real(p, n, eps, delta).m_real));
}

// Uniform iff C <= T. The uniform-side guarantee holds for any m >= 2, so a
// caller-chosen histogram size is accepted; the threshold adapts to hist.m.
inline Verdict test_uniformity_collisions(const TestParams& params, const SampleHistogram& hist) {
  params.validate();
  detail::require(hist.counts.size() == params.n, "histogram length must equal n");
  detail::require(hist.m >= 2, "collision tester needs m >= 2");
  double c = static_cast<double>(collision_count(hist));
  double t = collision_threshold(hist.m, params.n, params.delta);
  return {c <= t ? Outcome::Uniform : Outcome::NotUniform, c, t, hist.m};
}

// ---------------------------------------------------------------------------
// Majority-vote amplification

// k = ceil(160 ln(1/delta) / 9) repetitions, each at inner failure
// probability 0.2.
inline std::uint64_t majority_vote_plan(double delta) {
  detail::require(delta > 0.0 && delta < 0.5, "testing delta must lie in (0, 0.5)");
  return std::max<std::uint64_t>(1, detail::ceil_count(160.0 * std::log(1.0 / delta) / 9.0));
}

inline constexpr double kMajorityInnerDelta = 0.2;

// Runs k independent collision tests at delta' = 0.2 with seeds
// mix_seed(seed, i) and returns the majority outcome; ties (k even) break
// toward NotUniform. statistic = NotUniform votes, threshold = k/2,
// m_used = total samples drawn.
inline Verdict test_uniformity_majority(const TestParams& params, const SampleSource& source,
                                        std::uint64_t seed) {
  params.validate();
  detail::require(!params.p.is_inf(), "majority vote amplifies the collision tester (finite p)");
  double p_eff = std::min(params.p.value(), 2.0);
  std::uint64_t k = majority_vote_plan(params.delta);
  std::uint64_t m_inner = collision_test_m(p_eff, params.n, params.eps, kMajorityInnerDelta);
  TestParams inner{params.p, params.n, params.eps, kMajorityInnerDelta};
  std::uint64_t votes_not_uniform = 0;
  for (std::uint64_t i = 0; i < k; ++i) {
    Verdict v = test_uniformity_collisions(inner, source.draw(m_inner, mix_seed(seed, i)));
    if (v.outcome == Outcome::NotUniform) ++votes_not_uniform;
  }
  bool not_uniform = 2 * votes_not_uniform >= k;
  return {not_uniform ? Outcome::NotUniform : Outcome::Uniform,
          static_cast<double>(votes_not_uniform), static_cast<double>(k) / 2.0, k * m_inner};
}

// ---------------------------------------------------------------------------
// l-infinity tester

// alpha(x) = (1/x)(1 + ln(2x)/ln(1/delta)); strictly decreasing for x >= 1
// whenever delta < 0.5.
inline double alpha(double x, double delta) {
  detail::require(x >= 2.0, "alpha is evaluated for x >= 2");
  detail::require(delta > 0.0 && delta < 0.5, "testing delta must lie in (0, 0.5)");
  return (1.0 / x) * (1.0 + std::log(2.0 * x) / std::log(1.0 / delta));
}

// Solves eps = 2*alpha(n_hat) by bisection over the decreasing alpha;
// |eps - 2 alpha(n_hat)| <= 1e-12 * eps at the returned point.
inline double solve_nhat(double eps, double delta) {
  detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");
  detail::require(eps < 2.0 * alpha(2.0, delta), "eps too large for any bucket count >= 2");
  double lo = 2.0, hi = 2.0;
  while (2.0 * alpha(hi, delta) >= eps) hi *= 2.0;
  for (int iter = 0; iter < 200; ++iter) {
    double mid = 0.5 * (lo + hi);
    double val = 2.0 * alpha(mid, delta);
    if (std::fabs(val - eps) <= 1e-12 * eps) return mid;
    (val > eps ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

enum class LinfRegime { SmallN, LargeN };

// SmallN thresholds every coordinate count around m/n; LargeN groups
// coordinates into contiguous blocks of floor(n/n_hat) (final block smaller)
// and looks for one overfull group. Groups always partition {1..n}; in
// LargeN there are at most 2*ceil(n_hat) of them.
struct LinfTestPlan {
  LinfRegime regime;
  double n_hat;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> group_boundaries;  // [begin, end)
  double t;
};

// Plan (regime, groups, threshold t) for a caller-chosen sample count m.
inline LinfTestPlan linf_test_plan(std::uint64_t n, double eps, double delta, std::uint64_t m) {
  TestParams{Exponent::infinity(), n, eps, delta}.validate();
  double nd = static_cast<double>(n);
  LinfTestPlan plan;
  if (eps <= 2.0 * alpha(nd, delta)) {
    plan.regime = LinfRegime::SmallN;
    plan.n_hat = nd;
    plan.t = std::sqrt(3.0 * (static_cast<double>(m) / nd) * std::log(2.0 * nd / delta));
    plan.group_boundaries.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) plan.group_boundaries.emplace_back(i, i + 1);
  } else {
    plan.regime = LinfRegime::LargeN;
    plan.n_hat = solve_nhat(eps, delta);
    plan.t = std::sqrt(3.0 * static_cast<double>(m) * eps * std::log(1.0 / delta));
    auto group_size = static_cast<std::uint64_t>(nd / plan.n_hat);
    for (std::uint64_t begin = 0; begin < n; begin += group_size) {
      plan.group_boundaries.emplace_back(begin, std::min(begin + group_size, n));
    }
  }
  return plan;
}

// Sufficient sample size for the l-infinity tester:
//   eps <= 2 alpha(n) (SmallN): m = ceil(23 ln(2n/delta) / (n eps^2))
//   otherwise (LargeN):         m = ceil(35 ln(1/delta) / eps)
inline std::pair<std::uint64_t, LinfTestPlan> linf_test_m(std::uint64_t n, double eps,
                                                          double delta) {
  TestParams{Exponent::infinity(), n, eps, delta}.validate();
  double nd = static_cast<double>(n);
  std::uint64_t m;
  if (eps <= 2.0 * alpha(nd, delta)) {
    m = detail::ceil_count(23.0 * std::log(2.0 * nd / delta) / (nd * eps * eps));
  } else {
    m = detail::ceil_count(35.0 * std::log(1.0 / delta) / eps);
  }
  m = std::max<std::uint64_t>(m, 1);
  return {m, linf_test_plan(n, eps, delta, m)};
}

// SmallN: Uniform iff every X_i lies in m/n +/- t (statistic = max |X_i -
// m/n|, Uniform iff statistic <= t). LargeN: NotUniform iff some group total
// reaches m*eps - t (statistic = max group total, threshold = m*eps - t).
inline Verdict test_uniformity_linf(const TestParams& params, const SampleHistogram& hist) {
  params.validate();
  detail::require(params.p.is_inf(), "this tester is the p = infinity branch");
  detail::require(hist.counts.size() == params.n, "histogram length must equal n");
  LinfTestPlan plan = linf_test_plan(params.n, params.eps, params.delta, hist.m);
  if (plan.regime == LinfRegime::SmallN) {
    double expected = static_cast<double>(hist.m) / static_cast<double>(params.n);
    double worst = 0.0;
    for (std::uint64_t x : hist.counts) {
      worst = std::max(worst, std::fabs(static_cast<double>(x) - expected));
    }
    return {worst <= plan.t ? Outcome::Uniform : Outcome::NotUniform, worst, plan.t, hist.m};
  }
  double max_group = 0.0;
  for (const auto& [begin, end] : plan.group_boundaries) {
    std::uint64_t total = 0;
    for (std::uint64_t i = begin; i < end; ++i) total += hist.counts[i];
    max_group = std::max(max_group, static_cast<double>(total));
  }
  double threshold = static_cast<double>(hist.m) * params.eps - plan.t;
  return {max_group >= threshold ? Outcome::NotUniform : Outcome::Uniform, max_group, threshold,
          hist.m};
}

// ---------------------------------------------------------------------------
// Dispatch

// Prescribed sample size for a single test at any p: the collision budget for
// p <= 2, the p = 2 collision budget for 2 < p < infinity (valid because
// being eps-far in lp implies being eps-far in l2 there), and the bucketing
// tester's budget at p = infinity.
inline std::uint64_t test_sample_size(const TestParams& params) {
  params.validate();
  if (params.p.is_inf()) return linf_test_m(params.n, params.eps, params.delta).first;
  return collision_test_m(std::min(params.p.value(), 2.0), params.n, params.eps, params.delta);
}

// One test drawing exactly m samples with the matching decision rule.
inline Verdict test_uniformity_at_m(const TestParams& params, const SampleSource& source,
                                    std::uint64_t seed, std::uint64_t m) {
  params.validate();
  if (params.p.is_inf()) {
    return test_uniformity_linf(params, source.draw(m, seed));
  }
  return test_uniformity_collisions(params, source.draw(std::max<std::uint64_t>(m, 2), seed));
}

inline Verdict test_uniformity(const TestParams& params, const SampleSource& source,
                               std::uint64_t seed) {
  return test_uniformity_at_m(params, source, seed, test_sample_size(params));
}

}  // namespace lpdist
