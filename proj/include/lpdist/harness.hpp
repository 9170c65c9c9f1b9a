#pragma once

// Monte-Carlo experiment runner, collision-moment validation, CSV reporting,
// and the command-line front end.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lpdist/bounds.hpp"
#include "lpdist/core.hpp"
#include "lpdist/learner.hpp"
#include "lpdist/testers.hpp"

namespace lpdist {

enum class Problem { TestUniformity, Learn, CollisionMoments };
enum class Adversary { Uniform, Paninski, HeavyCoordinate, SparseUniform, FromFile };

struct ExperimentConfig {
  Problem problem;
  Exponent p;
  std::uint64_t n;
  double eps;
  double delta;
  Adversary adversary;
  std::string file_path;  // FromFile only
  std::uint64_t trials;
  std::uint64_t master_seed;
  std::optional<std::uint64_t> m_override;
};

// failure_rate * trials is always an exact integer count; ci_halfwidth is
// 3 * sqrt(rate (1-rate) / trials). Wall time is informational and never
// serialized, so reports stay byte-deterministic.
struct ExperimentReport {
  ExperimentConfig config;
  std::uint64_t m_used;
  std::uint64_t failures;
  double failure_rate;
  double ci_halfwidth;
  double wall_seconds;
};

namespace detail {

inline std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

inline std::string fmt_p(const Exponent& p) {
  return p.is_inf() ? "inf" : fmt_g(p.value());
}

}  // namespace detail

inline std::string adversary_name(const ExperimentConfig& config) {
  switch (config.adversary) {
    case Adversary::Uniform: return "uniform";
    case Adversary::Paninski: return "paninski";
    case Adversary::HeavyCoordinate: return "heavy";
    case Adversary::SparseUniform: return "sparse";
    default: return "file:" + config.file_path;
  }
}

// Builds a distribution from its CLI spelling. Seeded constructions receive
// `seed` directly; pass an already-derived stream (mix_seed(master, 0)) so
// trial seeds never collide with construction seeds.
inline DiscreteDistribution build_distribution(const std::string& spec, std::uint64_t n,
                                               double eps, const Exponent& p,
                                               std::uint64_t seed) {
  if (spec == "uniform") return make_uniform(n);
  if (spec == "paninski") return paninski_member(n, eps, p, random_coins(n / 2, seed));
  if (spec == "heavy") return heavy_coordinate_dist(n, eps);
  if (spec == "sparse") return sparse_uniform_member(n, eps, p, seed);
  if (spec.rfind("file:", 0) == 0) {
    DiscreteDistribution dist = read_distribution_file(spec.substr(5));
    detail::require(dist.size() == n,
                    "distribution file size does not match --n");
    return dist;
  }
  throw std::invalid_argument(
      "unknown distribution spec (expected uniform|paninski|heavy|sparse|file:<path>)");
}

inline DiscreteDistribution build_adversary(const ExperimentConfig& config) {
  return build_distribution(adversary_name(config), config.n, config.eps, config.p,
                            mix_seed(config.master_seed, 0));
}

// Runs `trials` independent instances with per-trial seeds
// mix_seed(master_seed, t), t = 1..trials (index 0 is reserved for adversary
// construction). Failure means a wrong verdict (testing) or an estimate
// farther than eps (learning). Pure function of the config.
inline ExperimentReport estimate_failure_rate(const ExperimentConfig& config) {
  detail::require(config.trials >= 1, "need at least one trial");
  detail::require(config.problem != Problem::CollisionMoments,
                  "collision-moment experiments report moments, not failure rates; "
                  "use verify_collision_moments");
  auto start = std::chrono::steady_clock::now();

  DiscreteDistribution dist = build_adversary(config);
  SampleSource source(dist);
  std::uint64_t failures = 0;
  std::uint64_t m_used = 0;

  if (config.problem == Problem::TestUniformity) {
    TestParams params{config.p, config.n, config.eps, config.delta};
    params.validate();
    std::uint64_t m = config.m_override.value_or(test_sample_size(params));
    if (!params.p.is_inf()) m = std::max<std::uint64_t>(m, 2);
    m_used = m;
    // The tester's guarantees cover exactly-uniform and eps-far inputs; an
    // adversary between the two has no wrong verdict.
    double dist_to_uniform = lp_distance(dist, make_uniform(config.n), config.p);
    bool uniform_side = dist_to_uniform <= 1e-12;
    detail::require(uniform_side || dist_to_uniform >= config.eps * (1.0 - 1e-9),
                    "adversary is neither uniform nor eps-far; no verdict is wrong");
    for (std::uint64_t t = 1; t <= config.trials; ++t) {
      Verdict v = test_uniformity_at_m(params, source, mix_seed(config.master_seed, t), m);
      bool wrong = uniform_side ? v.outcome == Outcome::NotUniform
                                : v.outcome == Outcome::Uniform;
      if (wrong) ++failures;
    }
  } else {
    LearnParams params{config.p, config.n, config.eps, config.delta};
    params.validate();
    std::uint64_t m = config.m_override.value_or(learn_sample_size(params).m);
    m_used = m;
    for (std::uint64_t t = 1; t <= config.trials; ++t) {
      DiscreteDistribution estimate =
          empirical_distribution(source.draw(m, mix_seed(config.master_seed, t)));
      if (lp_distance(estimate, dist, config.p) > config.eps) ++failures;
    }
  }

  double rate = static_cast<double>(failures) / static_cast<double>(config.trials);
  double ci = 3.0 * std::sqrt(rate * (1.0 - rate) / static_cast<double>(config.trials));
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {config, m_used, failures, rate, ci, wall};
}

// ---------------------------------------------------------------------------
// Collision moments

// E[C] = C(m,2) ||A||_2^2.
inline double expected_collision_mean(const DiscreteDistribution& dist, std::uint64_t m) {
  detail::require(m >= 2, "collision moments need m >= 2");
  double sum2 = 0.0;
  for (double a : dist.probs()) sum2 += a * a;
  double pairs = 0.5 * static_cast<double>(m) * static_cast<double>(m - 1);
  return pairs * sum2;
}

// Var(C) = C(m,2)(||A||_2^2 - ||A||_2^4) + 6 C(m,3)(||A||_3^3 - ||A||_2^4).
inline double expected_collision_variance(const DiscreteDistribution& dist, std::uint64_t m) {
  detail::require(m >= 2, "collision moments need m >= 2");
  double sum2 = 0.0, sum3 = 0.0;
  for (double a : dist.probs()) {
    sum2 += a * a;
    sum3 += a * a * a;
  }
  double md = static_cast<double>(m);
  double pairs = 0.5 * md * (md - 1.0);
  double triples = pairs * (md - 2.0) / 3.0;
  return pairs * (sum2 - sum2 * sum2) + 6.0 * triples * (sum3 - sum2 * sum2);
}

struct CollisionMomentsReport {
  std::uint64_t m;
  std::uint64_t trials;
  double empirical_mean;
  double expected_mean;
  double empirical_variance;  // unbiased sample variance
  double expected_variance;
};

// Monte-Carlo mean/variance of the collision count next to the closed forms.
inline CollisionMomentsReport verify_collision_moments(const DiscreteDistribution& dist,
                                                       std::uint64_t m, std::uint64_t trials,
                                                       std::uint64_t seed) {
  detail::require(m >= 2, "collision moments need m >= 2");
  detail::require(trials >= 2, "sample variance needs at least two trials");
  SampleSource source(dist);
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t t = 1; t <= trials; ++t) {
    auto c = static_cast<double>(collision_count(source.draw(m, mix_seed(seed, t))));
    double delta = c - mean;
    mean += delta / static_cast<double>(t);
    m2 += delta * (c - mean);
  }
  return {m, trials, mean, expected_collision_mean(dist, m),
          m2 / static_cast<double>(trials - 1), expected_collision_variance(dist, m)};
}

// ---------------------------------------------------------------------------
// CSV emission (byte-deterministic for deterministic inputs)

inline void emit_csv(const ExperimentReport& report, std::ostream& out) {
  out << "problem,p,n,eps,delta,m,trials,seed,adversary,failure_rate,ci_halfwidth\n";
  const ExperimentConfig& c = report.config;
  out << (c.problem == Problem::Learn ? "learn" : "test") << ',' << detail::fmt_p(c.p) << ','
      << c.n << ',' << detail::fmt_g(c.eps) << ',' << detail::fmt_g(c.delta) << ','
      << report.m_used << ',' << c.trials << ',' << c.master_seed << ',' << adversary_name(c)
      << ',' << detail::fmt_g(report.failure_rate) << ',' << detail::fmt_g(report.ci_halfwidth)
      << '\n';
}

inline void emit_csv(const Exponent& p, double eps, double delta,
                     const std::vector<CurvePoint>& curve, std::ostream& out) {
  out << "p,n,eps,delta,m_sufficient,m_necessary,regime\n";
  for (const CurvePoint& point : curve) {
    out << detail::fmt_p(p) << ',' << point.n << ',' << detail::fmt_g(eps) << ','
        << detail::fmt_g(delta) << ',' << detail::fmt_g(point.m_sufficient) << ','
        << detail::fmt_g(point.m_necessary) << ',' << regime_name(point.regime) << '\n';
  }
}

namespace detail {

inline std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

}  // namespace detail

inline void emit_csv(const ExperimentReport& report, const std::string& path) {
  auto out = detail::open_csv(path);
  emit_csv(report, out);
}

inline void emit_csv(const Exponent& p, double eps, double delta,
                     const std::vector<CurvePoint>& curve, const std::string& path) {
  auto out = detail::open_csv(path);
  emit_csv(p, eps, delta, curve, out);
}

}  // namespace lpdist
