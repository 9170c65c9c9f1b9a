#pragma once

// Empirical-frequency learner and its sufficient sample sizes.

#include <cstdint>
#include <string>

#include "lpdist/core.hpp"

namespace lpdist {

// delta in (0,1) is the learning regime (unlike testing there is no
// guess-at-random baseline).
struct LearnParams {
  Exponent p;
  std::uint64_t n;
  double eps;
  double delta;

  void validate() const {
    detail::require(n >= 2, "support size must be >= 2");
    detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");
    detail::require(delta > 0.0 && delta < 1.0, "learning delta must lie in (0,1)");
  }
};

// A_hat_i = X_i / m.
inline DiscreteDistribution empirical_distribution(const SampleHistogram& hist) {
  detail::require(hist.m >= 1, "empirical distribution needs at least one sample");
  std::vector<double> probs(hist.counts.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    probs[i] = static_cast<double>(hist.counts[i]) / static_cast<double>(hist.m);
  }
  return DiscreteDistribution(std::move(probs));
}

struct LearnSampleSize {
  std::uint64_t m;
  std::string formula_id;  // which sufficient bound won
  double m_real;           // winner, pre-ceiling
};

// Minimum over all applicable sufficient bounds (each individually proven
// sufficient, so the minimum is), ceiled; ties keep the earlier formula.
//
//   p >= 2:    l2-markov      (1/delta)/eps^2
//              mcdiarmid      max{4 ln(1/delta)/eps^2, 4/eps^2}
//   1 <= p <= 2:
//              l2-markov-*    (1/delta) n/(n^(1/q) eps)^2   if n <= (2/eps)^q
//                             (1/delta)(1/4)(2/eps)^q        otherwise
//              mcdiarmid      max{2^(2/p+1) ln(1/delta)/eps^2, M},
//                             M = 4n/(n^(1/q) eps)^2 if n <= (4/eps)^q
//                                 else (1/4)(4/eps)^q
//              pth-moment     (3/delta)^(1/(p-1)) / eps^q    (p > 1 only)
inline LearnSampleSize learn_sample_size(const LearnParams& params) {
  params.validate();
  const double eps = params.eps, delta = params.delta;
  const double nd = static_cast<double>(params.n);

  std::vector<std::pair<std::string, double>> bounds;
  if (params.p.is_inf() || params.p.value() >= 2.0) {
    bounds.emplace_back("l2-markov", (1.0 / delta) / (eps * eps));
    bounds.emplace_back("mcdiarmid",
                        std::max(4.0 * std::log(1.0 / delta) / (eps * eps), 4.0 / (eps * eps)));
  } else {
    const double p = params.p.value();
    Exponent q = conjugate(params.p);
    const double npow = detail::pow_recip(nd, q);
    bool small2 = q.is_inf() || nd <= std::pow(2.0 / eps, q.value());
    if (small2) {
      bounds.emplace_back("l2-markov-small-n", (1.0 / delta) * nd / (npow * eps * npow * eps));
    } else {
      bounds.emplace_back("l2-markov-large-n",
                          (1.0 / delta) * 0.25 * std::pow(2.0 / eps, q.value()));
    }
    bool small4 = q.is_inf() || nd <= std::pow(4.0 / eps, q.value());
    double m_tail = small4 ? 4.0 * nd / (npow * eps * npow * eps)
                           : 0.25 * std::pow(4.0 / eps, q.value());
    bounds.emplace_back(
        "mcdiarmid",
        std::max(std::pow(2.0, 2.0 / p + 1.0) * std::log(1.0 / delta) / (eps * eps), m_tail));
    if (p > 1.0) {
      bounds.emplace_back("pth-moment",
                          std::pow(3.0 / delta, 1.0 / (p - 1.0)) / std::pow(eps, q.value()));
    }
  }

  LearnSampleSize best{0, "", 0.0};
  for (const auto& [id, value] : bounds) {
    std::uint64_t ceiled = std::max<std::uint64_t>(1, detail::ceil_count(value));
    if (best.formula_id.empty() || ceiled < best.m) best = {ceiled, id, value};
  }
  return best;
}

struct LearnResult {
  DiscreteDistribution estimate;
  std::uint64_t m_used;
};

// Draws the sufficient number of samples and returns the empirical
// distribution; P[ ||A_hat - A||_p > eps ] <= delta.
inline LearnResult learn(const LearnParams& params, const SampleSource& source,
                         std::uint64_t seed) {
  std::uint64_t m = learn_sample_size(params).m;
  return {empirical_distribution(source.draw(m, seed)), m};
}

}  // namespace lpdist
