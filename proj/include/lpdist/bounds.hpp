#pragma once

// Sample-complexity calculators: necessary-m formulas for testing and
// learning, the identification-game chain (packing size, entropy, Fano), and
// sufficient/necessary curve generation.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "lpdist/core.hpp"
#include "lpdist/learner.hpp"
#include "lpdist/testers.hpp"

namespace lpdist {

enum class Regime { SmallN, LargeN, AllN };
enum class BoundKind { Sufficient, Necessary };

struct BoundReport {
  double m_real;           // pre-ceiling value
  std::uint64_t m_ceiled;
  Regime regime;
  BoundKind kind;
  std::string formula_id;
};

namespace detail {

inline BoundReport make_report(double m_real, Regime regime, BoundKind kind, std::string id) {
  return {m_real, std::max<std::uint64_t>(1, ceil_count(m_real)), regime, kind, std::move(id)};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Sufficient bounds, reported pre-ceiling (shared with curve generation)

inline BoundReport test_sufficient_m(double p, std::uint64_t n, double eps, double delta) {
  SampleSizeFormula f = collision_test_m_real(p, n, eps, delta);
  return detail::make_report(f.m_real, f.small_regime ? Regime::SmallN : Regime::LargeN,
                             BoundKind::Sufficient,
                             f.small_regime ? "collision-small-n" : "collision-large-n");
}

inline BoundReport linf_test_sufficient_m(std::uint64_t n, double eps, double delta) {
  TestParams{Exponent::infinity(), n, eps, delta}.validate();
  double nd = static_cast<double>(n);
  if (eps <= 2.0 * alpha(nd, delta)) {
    return detail::make_report(23.0 * std::log(2.0 * nd / delta) / (nd * eps * eps),
                               Regime::SmallN, BoundKind::Sufficient, "linf-small-n");
  }
  return detail::make_report(35.0 * std::log(1.0 / delta) / eps, Regime::LargeN,
                             BoundKind::Sufficient, "linf-large-n");
}

// ---------------------------------------------------------------------------
// Necessary bounds for testing

// p in [1,2]:
//   n <= 1/eps^q:  sqrt(ln(1 + (1-2delta)^2)) * sqrt(n)/(eps n^(1/q))^2
//   n >= 1/eps^q:  sqrt(2 (1-2delta)) * sqrt((1/(2 eps))^q)
inline BoundReport test_necessary_m(double p, std::uint64_t n, double eps, double delta) {
  detail::require(p >= 1.0 && p <= 2.0, "testing lower bound is defined for p in [1,2]");
  TestParams{Exponent::finite(p), n, eps, delta}.validate();
  Exponent q = conjugate(Exponent::finite(p));
  double nd = static_cast<double>(n);
  double gap = 1.0 - 2.0 * delta;
  bool small = q.is_inf() || nd <= std::pow(1.0 / eps, q.value());
  if (small) {
    double scale = eps * detail::pow_recip(nd, q);
    return detail::make_report(std::sqrt(std::log1p(gap * gap)) * std::sqrt(nd) / (scale * scale),
                               Regime::SmallN, BoundKind::Necessary, "test-lower-small-n");
  }
  return detail::make_report(
      std::sqrt(2.0 * gap) * std::sqrt(std::pow(1.0 / (2.0 * eps), q.value())), Regime::LargeN,
      BoundKind::Necessary, "test-lower-large-n");
}

// Max of an information bound (1/2) ln(1 + n(1-2delta)^2)/(n eps^2), valid
// for every n, and a coverage bound ((1-2delta)/2)(1/eps) for n >= 1/eps.
inline BoundReport linf_test_necessary_m(std::uint64_t n, double eps, double delta) {
  TestParams{Exponent::infinity(), n, eps, delta}.validate();
  double nd = static_cast<double>(n);
  double gap = 1.0 - 2.0 * delta;
  double info = 0.5 * std::log1p(nd * gap * gap) / (nd * eps * eps);
  if (nd >= 1.0 / eps) {
    double coverage = 0.5 * gap / eps;
    if (coverage > info) {
      return detail::make_report(coverage, Regime::LargeN, BoundKind::Necessary,
                                 "linf-lower-coverage");
    }
  }
  return detail::make_report(info, Regime::AllN, BoundKind::Necessary, "linf-lower-information");
}

// ---------------------------------------------------------------------------
// Identification-game chain for learning lower bounds

// ln of the packing-size floor Gamma(1+(n_hat-1)/p) /
// ((n_hat-1)! (4 eps Gamma(1+1/p))^(n_hat-1)), evaluated in log space; both
// Gamma factors degenerate to Gamma(1) = 1 at p = infinity.
inline double packing_log_size(std::uint64_t n_hat, const Exponent& p, double eps) {
  detail::require(n_hat >= 2, "packing bound needs n_hat >= 2");
  detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");
  double k = static_cast<double>(n_hat - 1);
  double lg_top = 0.0, lg_unit = 0.0;
  if (!p.is_inf()) {
    lg_top = std::lgamma(1.0 + k / p.value());
    lg_unit = std::lgamma(1.0 + 1.0 / p.value());
  }
  return lg_top - std::lgamma(k + 1.0) - k * (std::log(4.0 * eps) + lg_unit);
}

// Stirling floor of the same quantity: p/12 - (1/2) ln p +
// (n_hat-1) ln(1/(4 (n_hat-1)^(1/q) eps)). Weaker than the exact Gamma form
// but closed-form; finite p only.
inline double packing_log_size_stirling(std::uint64_t n_hat, const Exponent& p, double eps) {
  detail::require(n_hat >= 2, "packing bound needs n_hat >= 2");
  detail::require(!p.is_inf(), "the Stirling floor is stated for finite p");
  detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");
  double k = static_cast<double>(n_hat - 1);
  Exponent q = conjugate(p);
  double pv = p.value();
  return pv / 12.0 - 0.5 * std::log(pv) - k * std::log(4.0 * detail::pow_recip(k, q) * eps);
}

// ((n_hat-1)/2) ln(2 pi e m / n_hat): Gaussian-maximum-entropy cap on the
// sample histogram; the O(n_hat/m) residual is dropped.
inline double samples_entropy_bound(std::uint64_t n_hat, std::uint64_t m) {
  detail::require(n_hat >= 2, "entropy bound needs n_hat >= 2");
  detail::require(m >= 1, "entropy bound needs m >= 1");
  double k = static_cast<double>(n_hat - 1);
  constexpr double two_pi_e = 17.079468445347134;
  return 0.5 * k * std::log(two_pi_e * static_cast<double>(m) / static_cast<double>(n_hat));
}

// Fano: failure probability of the identification game is at least
// 1 - (entropy + 1)/log_size, clamped to [0,1].
inline double fano_failure_lower_bound(double log_size, double entropy) {
  detail::require(log_size > 0.0, "Fano bound needs a positive log packing size");
  return std::min(1.0, std::max(0.0, 1.0 - (entropy + 1.0) / log_size));
}

// Necessary m to win the identification game with probability 1 - delta:
// n_hat = n if n <= 1/eps^q else ceil(1/eps^q), and
// m = (n_hat/(2 pi e)) exp(2 (1-delta) log|S| / (n_hat - 1)), the
// proof-constant instantiation of the entropy/Fano rearrangement.
inline BoundReport identification_lower_m(std::uint64_t n, const Exponent& p, double eps,
                                          double delta) {
  detail::require(!p.is_inf(), "identification game is played at finite p");
  detail::require(n >= 2, "support size must be >= 2");
  detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");
  detail::require(delta > 0.0 && delta < 1.0, "learning delta must lie in (0,1)");
  Exponent q = conjugate(p);
  double boundary = q.is_inf() ? std::numeric_limits<double>::infinity()
                               : std::pow(1.0 / eps, q.value());
  bool small = static_cast<double>(n) <= boundary;
  std::uint64_t n_hat = small ? n : detail::ceil_count(boundary);
  double log_size = packing_log_size(n_hat, p, eps);
  constexpr double two_pi_e = 17.079468445347134;
  double m = (static_cast<double>(n_hat) / two_pi_e) *
             std::exp(2.0 * (1.0 - delta) * log_size / static_cast<double>(n_hat - 1));
  return detail::make_report(m, small ? Regime::SmallN : Regime::LargeN, BoundKind::Necessary,
                             "identification-game:proof-constants");
}

// Max of the biased-coin bound (1/16) ln(1 + 2(1-2delta)^2)/eps^2 (every p)
// and, for finite p, the identification-game bound.
inline BoundReport learn_necessary_m(const Exponent& p, std::uint64_t n, double eps,
                                     double delta) {
  detail::require(n >= 2, "support size must be >= 2");
  detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");
  detail::require(delta > 0.0 && delta < 1.0, "learning delta must lie in (0,1)");
  double gap = 1.0 - 2.0 * delta;
  double coin = std::log1p(2.0 * gap * gap) / (16.0 * eps * eps);
  BoundReport best = detail::make_report(coin, Regime::AllN, BoundKind::Necessary,
                                         "learn-lower-coin");
  if (!p.is_inf()) {
    BoundReport game = identification_lower_m(n, p, eps, delta);
    if (game.m_real > best.m_real) best = game;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Curves

struct CurvePoint {
  std::uint64_t n;
  double m_sufficient;  // pre-ceiling
  double m_necessary;   // pre-ceiling
  Regime regime;        // of the sufficient formula
};

// Testing-problem curves over n: sufficient and necessary pre-ceiling sample
// sizes; p must lie in [1,2] or be infinity (no necessary formula exists for
// 2 < p < infinity).
inline std::vector<CurvePoint> curve_points(const Exponent& p, double eps,
                                            const std::vector<std::uint64_t>& n_values,
                                            double delta) {
  detail::require(p.is_inf() || p.value() <= 2.0,
                  "curves are defined for p in [1,2] and p = infinity");
  std::vector<CurvePoint> points;
  points.reserve(n_values.size());
  for (std::uint64_t n : n_values) {
    BoundReport suff = p.is_inf() ? linf_test_sufficient_m(n, eps, delta)
                                  : test_sufficient_m(p.value(), n, eps, delta);
    BoundReport nec = p.is_inf() ? linf_test_necessary_m(n, eps, delta)
                                 : test_necessary_m(p.value(), n, eps, delta);
    points.push_back({n, suff.m_real, nec.m_real, suff.regime});
  }
  return points;
}

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::SmallN: return "small-n";
    case Regime::LargeN: return "large-n";
    default: return "all-n";
  }
}

}  // namespace lpdist
