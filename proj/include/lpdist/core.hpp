#pragma once

// Discrete distributions, lp geometry, seeded sampling, and the constructive
// distribution families used by the testing and learning bounds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lpdist {

// Absolute tolerance for "probabilities sum to 1": tight enough to catch
// construction bugs, loose enough for n = 10^6 accumulations.
inline constexpr double kProbSumTol = 1e-9;

namespace detail {

inline void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Ceiling with 1e-12 relative slack. Sample-size formulas frequently evaluate
// to exact integers (9/delta etc.); plain std::ceil would overshoot them by
// one whenever fp rounding lands a hair above the true value.
inline std::uint64_t ceil_count(double x) {
  require(x >= 0.0 && std::isfinite(x), "sample count must be finite and non-negative");
  double adjusted = std::ceil(x - 1e-12 * std::max(1.0, x));
  return adjusted <= 0.0 ? 0 : static_cast<std::uint64_t>(adjusted);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Extended exponents

// An exponent in [1, inf]. Infinity is an explicit marker rather than an IEEE
// inf so that every formula special-cases it instead of trusting fp
// propagation through pow/exp chains.
class Exponent {
 public:
  static Exponent finite(double p) {
    detail::require(p >= 1.0 && std::isfinite(p), "exponent must be a finite real >= 1 (or infinity)");
    return Exponent(p, false);
  }
  static Exponent infinity() { return Exponent(0.0, true); }

  // Accepts a decimal literal or the string "inf".
  static Exponent parse(const std::string& text) {
    if (text == "inf") return infinity();
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("exponent must be a decimal number or \"inf\"");
    }
    detail::require(pos == text.size(), "exponent must be a decimal number or \"inf\"");
    return finite(v);
  }

  bool is_inf() const { return inf_; }
  double value() const {
    if (inf_) throw std::logic_error("finite value requested from an infinite exponent");
    return p_;
  }
  // 1/p under extended arithmetic (1/inf := 0).
  double reciprocal() const { return inf_ ? 0.0 : 1.0 / p_; }

  std::string str() const { return inf_ ? "inf" : std::to_string(p_); }

  friend bool operator==(const Exponent& a, const Exponent& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.p_ == b.p_);
  }
  friend bool operator!=(const Exponent& a, const Exponent& b) { return !(a == b); }

 private:
  Exponent(double p, bool inf) : p_(p), inf_(inf) {}
  double p_;
  bool inf_;
};

// Hölder conjugate: 1/p + 1/q = 1 with 1 and inf paired up.
inline Exponent conjugate(const Exponent& p) {
  if (p.is_inf()) return Exponent::finite(1.0);
  if (p.value() == 1.0) return Exponent::infinity();
  return Exponent::finite(p.value() / (p.value() - 1.0));
}

namespace detail {

// x^(1/e) under extended arithmetic: x^0 := 1 when e = inf.
inline double pow_recip(double x, const Exponent& e) {
  return e.is_inf() ? 1.0 : std::pow(x, 1.0 / e.value());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Distributions and histograms

// A probability vector over n >= 2 coordinates: entries >= 0, summing to 1
// within kProbSumTol. Validated at construction.
class DiscreteDistribution {
 public:
  explicit DiscreteDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    detail::require(probs_.size() >= 2, "distribution needs at least 2 coordinates");
    double sum = 0.0;
    for (double v : probs_) {
      detail::require(v >= 0.0 && std::isfinite(v), "probabilities must be finite and non-negative");
      sum += v;
    }
    detail::require(std::fabs(sum - 1.0) <= kProbSumTol, "probabilities must sum to 1 within 1e-9");
  }

  const std::vector<double>& probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::uint64_t size() const { return probs_.size(); }

 private:
  std::vector<double> probs_;
};

// Per-coordinate counts of m total draws; sum(counts) == m by construction.
struct SampleHistogram {
  std::vector<std::uint64_t> counts;
  std::uint64_t m = 0;
};

inline SampleHistogram histogram_from_counts(std::vector<std::uint64_t> counts) {
  SampleHistogram h;
  h.m = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  h.counts = std::move(counts);
  return h;
}

inline DiscreteDistribution make_uniform(std::uint64_t n) {
  detail::require(n >= 2, "uniform distribution needs n >= 2");
  return DiscreteDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

// ---------------------------------------------------------------------------
// lp norms

inline double lp_norm(const std::vector<double>& v, const Exponent& p) {
  detail::require(!v.empty(), "norm of an empty vector");
  if (p.is_inf()) {
    double mx = 0.0;
    for (double x : v) mx = std::max(mx, std::fabs(x));
    return mx;
  }
  double pp = p.value();
  if (pp == 1.0) {
    double s = 0.0;
    for (double x : v) s += std::fabs(x);
    return s;
  }
  double s = 0.0;
  for (double x : v) s += std::pow(std::fabs(x), pp);
  return std::pow(s, 1.0 / pp);
}

inline double lp_distance(const DiscreteDistribution& a, const DiscreteDistribution& b,
                          const Exponent& p) {
  detail::require(a.size() == b.size(), "lp_distance needs equal support sizes");
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = a[i] - b[i];
  return lp_norm(diff, p);
}

// ---------------------------------------------------------------------------
// Seeded randomness

// Splittable-counter seed derivation (splitmix-style avalanche). Bijective in
// master + odd*(index+1), so for a fixed master all derived seeds are
// pairwise distinct.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace detail {

// Uniform double in [0,1) from the top 53 bits; identical on every platform
// for a given engine state (std::uniform_real_distribution is not).
inline double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased-to-2^-64 bounded index draw without any fp arithmetic.
inline std::uint64_t next_index(std::mt19937_64& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

}  // namespace detail

// Alias-table sampler: O(n) build, O(1) per draw.
class AliasTable {
 public:
  explicit AliasTable(const DiscreteDistribution& dist) {
    const auto& probs = dist.probs();
    const std::size_t n = probs.size();
    accept_.resize(n);
    alias_.resize(n);
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = probs[i] * static_cast<double>(n);
    std::vector<std::uint32_t> small, large;
    small.reserve(n);
    large.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      std::uint32_t s = small.back();
      small.pop_back();
      std::uint32_t l = large.back();
      large.pop_back();
      accept_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] -= 1.0 - scaled[s];
      (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    // Leftovers are exactly-full cells up to fp residue.
    for (std::uint32_t i : large) {
      accept_[i] = 1.0;
      alias_[i] = i;
    }
    for (std::uint32_t i : small) {
      accept_[i] = 1.0;
      alias_[i] = i;
    }
  }

  std::size_t draw(std::mt19937_64& rng) const {
    std::uint64_t idx = detail::next_index(rng, accept_.size());
    return detail::next_unit(rng) < accept_[idx] ? idx : alias_[idx];
  }

 private:
  std::vector<double> accept_;
  std::vector<std::uint32_t> alias_;
};

// Seeded access to i.i.d. draws from a fixed distribution. Pure: the same
// (m, seed) always yields the same histogram.
class SampleSource {
 public:
  explicit SampleSource(DiscreteDistribution dist)
      : dist_(std::move(dist)), table_(dist_) {}

  SampleHistogram draw(std::uint64_t m, std::uint64_t seed) const {
    detail::require(m >= 1, "sample count must be >= 1");
    SampleHistogram h;
    h.counts.assign(dist_.size(), 0);
    h.m = m;
    std::mt19937_64 rng(seed);
    for (std::uint64_t i = 0; i < m; ++i) ++h.counts[table_.draw(rng)];
    return h;
  }

  const DiscreteDistribution& distribution() const { return dist_; }

 private:
  DiscreteDistribution dist_;
  AliasTable table_;
};

inline SampleHistogram sample(const DiscreteDistribution& dist, std::uint64_t m,
                              std::uint64_t seed) {
  return SampleSource(dist).draw(m, seed);
}

// ---------------------------------------------------------------------------
// Thinness and discretization

// True iff max_i A_i <= eps^q; a thin distribution has lp_norm <= eps.
inline bool is_thin(const DiscreteDistribution& dist, double eps, const Exponent& p) {
  detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");
  detail::require(p.is_inf() || p.value() > 1.0, "thinness is vacuous at p = 1");
  Exponent q = conjugate(p);
  double grid = std::pow(eps, q.value());
  double mx = *std::max_element(dist.probs().begin(), dist.probs().end());
  return mx <= grid;
}

// Round every probability to the grid g = eps^q by the largest-remainder
// method: floor everything, then hand the residual mass out one grid step at
// a time in decreasing order of fractional remainder (ties to the lower
// index). When 1/g is not an integer the final partial step (< g) goes to the
// next coordinate in that order, so the output sums to 1 exactly and at most
// one entry is off-grid. The lp distance moved is at most 2*eps.
inline DiscreteDistribution discretize(const DiscreteDistribution& dist, double eps,
                                       const Exponent& p) {
  detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");
  detail::require(p.is_inf() || p.value() > 1.0, "discretization grid needs p > 1");
  Exponent q = conjugate(p);
  double g = std::pow(eps, q.value());
  detail::require(g <= 1.0, "grid step exceeds total mass");

  const std::size_t n = dist.size();
  std::vector<std::uint64_t> base(n);
  std::vector<std::pair<double, std::size_t>> remainder(n);
  double floored_mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double x = dist[i] / g;
    double b = std::floor(x + 1e-12);  // exact multiples survive fp noise
    base[i] = static_cast<std::uint64_t>(b);
    remainder[i] = {x - b, i};
    floored_mass += b * g;
  }
  double residual = 1.0 - floored_mass;
  auto steps = static_cast<std::uint64_t>(std::max(0.0, std::floor(residual / g + 1e-9)));
  std::sort(remainder.begin(), remainder.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  for (std::uint64_t k = 0; k < steps && k < n; ++k) ++base[remainder[k].second];

  std::vector<double> out(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<double>(base[i]) * g;
    total += out[i];
  }
  double partial = 1.0 - total;
  if (partial > 0.0) out[remainder[std::min<std::uint64_t>(steps, n - 1)].second] += partial;
  return DiscreteDistribution(std::move(out));
}

// ---------------------------------------------------------------------------
// Constructive families

inline std::vector<bool> random_coins(std::uint64_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<bool> coins(count);
  for (std::uint64_t i = 0; i < count; ++i) coins[i] = (rng() >> 63) != 0;
  return coins;
}

// Paired-coordinate perturbation of the uniform distribution: pair k carries
// probabilities (1 +/- alpha)/n ordered by coins[k], alpha = eps * n^(1/q).
// For even n the lp distance to uniform is exactly eps; for odd n the
// construction covers the first n-1 coordinates, coordinate n keeps 1/n, and
// the achieved distance is eps * ((n-1)/n)^(1/p).
inline DiscreteDistribution paninski_member(std::uint64_t n, double eps, const Exponent& p,
                                            const std::vector<bool>& coins) {
  detail::require(n >= 2, "paninski member needs n >= 2");
  detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");
  detail::require(!p.is_inf() && p.value() <= 2.0, "paninski family is defined for p in [1,2]");
  Exponent q = conjugate(p);
  double alpha = eps * detail::pow_recip(static_cast<double>(n), q);
  detail::require(alpha <= 1.0, "alpha = eps * n^(1/q) must be <= 1 for valid probabilities");
  detail::require(coins.size() == n / 2, "need one coin per coordinate pair");

  std::vector<double> probs(n, 1.0 / static_cast<double>(n));
  double delta = alpha / static_cast<double>(n);
  for (std::uint64_t k = 0; k < n / 2; ++k) {
    double hi = probs[2 * k] + delta, lo = probs[2 * k] - delta;
    probs[2 * k] = coins[k] ? hi : lo;
    probs[2 * k + 1] = coins[k] ? lo : hi;
  }
  return DiscreteDistribution(std::move(probs));
}

inline double paninski_achieved_distance(std::uint64_t n, double eps, const Exponent& p) {
  if (n % 2 == 0) return eps;
  double frac = static_cast<double>(n - 1) / static_cast<double>(n);
  return eps * std::pow(frac, 1.0 / p.value());
}

// One heavy coordinate at 1/n + eps, the rest at 1/n - eps/(n-1); the
// l-infinity distance to uniform is exactly eps.
inline DiscreteDistribution heavy_coordinate_dist(std::uint64_t n, double eps) {
  detail::require(n >= 2, "heavy-coordinate distribution needs n >= 2");
  detail::require(eps > 0.0, "eps must be positive");
  double nd = static_cast<double>(n);
  detail::require(1.0 / nd + eps <= 1.0, "eps too large for valid probabilities");
  std::vector<double> probs(n, 1.0 / nd - eps / (nd - 1.0));
  probs[0] = 1.0 / nd + eps;
  return DiscreteDistribution(std::move(probs));
}

// Uniform over n_hat = ceil((1/(2 eps))^q) seeded coordinates, zero
// elsewhere; requires n_hat <= n/2 and sits at lp distance >= eps from
// uniform.
inline DiscreteDistribution sparse_uniform_member(std::uint64_t n, double eps,
                                                  const Exponent& p, std::uint64_t seed) {
  detail::require(n >= 2, "sparse member needs n >= 2");
  detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");
  detail::require(!p.is_inf() && p.value() > 1.0 && p.value() <= 2.0,
                  "sparse family is defined for p in (1,2]");
  Exponent q = conjugate(p);
  std::uint64_t n_hat = detail::ceil_count(std::pow(1.0 / (2.0 * eps), q.value()));
  n_hat = std::max<std::uint64_t>(n_hat, 1);
  detail::require(2 * n_hat <= n, "support parameter n_hat exceeds n/2 (regime violation)");

  // Partial Fisher-Yates: the first n_hat slots end up a uniform sample
  // without replacement.
  std::vector<std::uint64_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::uint64_t i = 0; i < n_hat; ++i) {
    std::uint64_t j = i + detail::next_index(rng, n - i);
    std::swap(idx[i], idx[j]);
  }
  std::vector<double> probs(n, 0.0);
  for (std::uint64_t i = 0; i < n_hat; ++i) probs[idx[i]] = 1.0 / static_cast<double>(n_hat);
  return DiscreteDistribution(std::move(probs));
}

// ---------------------------------------------------------------------------
// File formats

// Distribution file: UTF-8 text, one decimal probability per line in
// coordinate order; lines beginning '#' and blank lines are ignored.
inline DiscreteDistribution read_distribution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open distribution file: " + path);
  std::vector<double> probs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    try {
      probs.push_back(std::stod(line));
    } catch (const std::exception&) {
      throw std::runtime_error("bad probability line in " + path + ": " + line);
    }
  }
  return DiscreteDistribution(std::move(probs));
}

inline void write_distribution(std::ostream& out, const DiscreteDistribution& dist) {
  char buf[40];
  for (double v : dist.probs()) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", v);
    out << buf;
  }
}

inline void write_distribution_file(const std::string& path, const DiscreteDistribution& dist) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_distribution(out, dist);
}

// Histogram file: one non-negative integer count per line; '#' and blank
// lines are ignored.
inline SampleHistogram read_histogram_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open histogram file: " + path);
  std::vector<std::uint64_t> counts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    try {
      long long v = std::stoll(line);
      if (v < 0) throw std::runtime_error("negative count");
      counts.push_back(static_cast<std::uint64_t>(v));
    } catch (const std::exception&) {
      throw std::runtime_error("bad count line in " + path + ": " + line);
    }
  }
  return histogram_from_counts(std::move(counts));
}

}  // namespace lpdist
