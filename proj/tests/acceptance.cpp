// Acceptance gate: one [PASS]/[FAIL] line per criterion, exits 1 on the first
// violation. Kept free of any test framework so it can run anywhere.
#include "lpdist/lpdist.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace lpdist;

#define REQUIRE(cond, msg)                                                      \
  do {                                                                          \
    if (!(cond)) {                                                              \
      std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << msg       \
                << "\n";                                                        \
      std::exit(1);                                                             \
    }                                                                           \
  } while (0)

const double kThird = 1.0 / 3.0;

void pass(int index, const char* label) {
  std::printf("[PASS] criterion %d: %s\n", index, label);
  std::fflush(stdout);
}

// criterion-9 replays: every stochastic pipeline run is kept with its CSV
std::vector<std::pair<ExperimentConfig, std::string>> g_replays;

ExperimentReport run_and_record(const ExperimentConfig& config) {
  ExperimentReport report = estimate_failure_rate(config);
  std::ostringstream csv;
  emit_csv(report, csv);
  g_replays.emplace_back(config, csv.str());
  return report;
}

// --- 1: collision statistic matches its closed-form mean and variance ------

void criterion1() {
  DiscreteDistribution u2 = make_uniform(2);
  // exact enumeration over the four outcomes of two draws from u2
  double mean = 0.0, second = 0.0;
  for (std::uint64_t i = 0; i < 2; ++i) {
    for (std::uint64_t j = 0; j < 2; ++j) {
      SampleHistogram hist;
      hist.counts = {0, 0};
      hist.counts[i] += 1;
      hist.counts[j] += 1;
      hist.m = 2;
      double c = static_cast<double>(collision_count(hist));
      mean += 0.25 * c;
      second += 0.25 * c * c;
    }
  }
  double var = second - mean * mean;
  REQUIRE(std::abs(mean - 0.5) <= 1e-15, "criterion 1: enumeration mean");
  REQUIRE(std::abs(var - 0.25) <= 1e-15, "criterion 1: enumeration variance");
  REQUIRE(std::abs(expected_collision_mean(u2, 2) - 0.5) <= 1e-12,
          "criterion 1: closed-form mean at n=2, m=2");
  REQUIRE(std::abs(expected_collision_variance(u2, 2) - 0.25) <= 1e-12,
          "criterion 1: closed-form variance at n=2, m=2");

  // Monte Carlo check on two shapes at n=5, m=6
  const std::uint64_t trials = 200000;
  DiscreteDistribution shapes[] = {make_uniform(5),
                                   DiscreteDistribution({0.3, 0.1, 0.3, 0.1, 0.2})};
  std::uint64_t seeds[] = {9101, 9102};
  for (int s = 0; s < 2; ++s) {
    CollisionMomentsReport r = verify_collision_moments(shapes[s], 6, trials, seeds[s]);
    double se = std::sqrt(r.expected_variance / static_cast<double>(trials));
    REQUIRE(std::abs(r.empirical_mean - r.expected_mean) <= 4.0 * se,
            "criterion 1: MC mean off by more than 4 standard errors");
    REQUIRE(std::abs(r.empirical_variance - r.expected_variance) <=
                0.03 * r.expected_variance,
            "criterion 1: MC variance off by more than 3%");
  }
  pass(1, "collision statistic matches closed-form mean and variance");
}

// --- 2: uniform inputs pass at the prescribed m and at arbitrary m ---------

void criterion2() {
  // the acceptance threshold adapts to whatever m was drawn, so the
  // false-rejection guarantee must hold for every m, not just the sized one
  for (std::uint64_t m : {135ull, 5ull, 500ull}) {
    ExperimentConfig config{Problem::TestUniformity, Exponent::finite(2.0), 100, 0.2,
                            kThird, Adversary::Uniform, "", 2000, 501, m};
    ExperimentReport report = run_and_record(config);
    REQUIRE(report.m_used == m, "criterion 2: m override ignored");
    REQUIRE(report.failure_rate <= 0.365,
            "criterion 2: uniform input rejected too often at m=" + std::to_string(m));
  }
  pass(2, "uniform inputs pass at prescribed and arbitrary m");
}

// --- 3: eps-far inputs are rejected at the prescribed m ---------------------

void criterion3() {
  ExperimentConfig paninski{Problem::TestUniformity, Exponent::finite(2.0), 24, 0.2,
                            kThird, Adversary::Paninski, "", 2000, 502, std::nullopt};
  ExperimentReport pr = run_and_record(paninski);
  REQUIRE(pr.m_used == 138, "criterion 3: paninski m");
  REQUIRE(pr.failure_rate <= 0.365, "criterion 3: paninski member accepted too often");

  ExperimentConfig sparse{Problem::TestUniformity, Exponent::finite(2.0), 100, 0.2,
                          kThird, Adversary::SparseUniform, "", 2000, 503, std::nullopt};
  ExperimentReport sr = run_and_record(sparse);
  REQUIRE(sr.m_used == 135, "criterion 3: sparse m");
  REQUIRE(sr.failure_rate <= 0.365, "criterion 3: sparse member accepted too often");
  pass(3, "eps-far inputs are rejected at the prescribed m");
}

// --- 4: the linf tester meets its contract in both regimes -----------------

void criterion4() {
  struct Case {
    std::uint64_t n;
    std::uint64_t expected_m;
  };
  for (Case c : {Case{50, 1050}, Case{100000, 770}}) {
    for (Adversary adv : {Adversary::Uniform, Adversary::HeavyCoordinate}) {
      ExperimentConfig config{Problem::TestUniformity, Exponent::infinity(), c.n, 0.05,
                              kThird, adv, "", 2000, 504, std::nullopt};
      ExperimentReport report = run_and_record(config);
      REQUIRE(report.m_used == c.expected_m, "criterion 4: wrong sample size");
      REQUIRE(report.failure_rate <= 0.365,
              "criterion 4: error rate too high at n=" + std::to_string(c.n));
    }
  }
  pass(4, "linf tester meets its contract in both regimes");
}

// --- 5: learner meets its contract; large-regime size ignores support ------

void criterion5() {
  LearnParams sizing{Exponent::finite(2.0), 1000, 0.1, kThird};
  REQUIRE(learn_sample_size(sizing).m == 300, "criterion 5: sizing formula");

  ExperimentConfig uniform{Problem::Learn, Exponent::finite(2.0), 1000, 0.1,
                           kThird, Adversary::Uniform, "", 1000, 505, std::nullopt};
  ExperimentReport ur = run_and_record(uniform);
  REQUIRE(ur.m_used == 300, "criterion 5: m at the sized value");
  REQUIRE(ur.failure_rate <= 0.378, "criterion 5: uniform target missed too often");

  std::string path =
      (std::filesystem::temp_directory_path() / "lpdist_acceptance_skewed.txt").string();
  {
    std::ofstream out(path);
    out.precision(17);
    out << 0.5 << '\n';
    for (int i = 0; i < 999; ++i) out << 0.5 / 999.0 << '\n';
  }
  ExperimentConfig skewed{Problem::Learn, Exponent::finite(2.0), 1000, 0.1,
                          kThird, Adversary::FromFile, path, 1000, 506, std::nullopt};
  ExperimentReport sr = run_and_record(skewed);
  REQUIRE(sr.failure_rate <= 0.378, "criterion 5: skewed target missed too often");

  LearnParams a{Exponent::finite(1.5), 10000, 0.2, 0.5};
  LearnParams b{Exponent::finite(1.5), 1000000, 0.2, 0.5};
  REQUIRE(learn_sample_size(a).m == 500 && learn_sample_size(b).m == 500,
          "criterion 5: large-regime size must not depend on support size");
  pass(5, "learner meets its error/confidence contract");
}

// --- 6: sample-size curves have the prescribed shape ------------------------

void criterion6() {
  std::vector<std::uint64_t> grid;
  for (std::uint64_t n = 2; n <= 10000; ++n) grid.push_back(n);

  auto flat = curve_points(Exponent::finite(4.0 / 3.0), 0.1, grid, kThird);
  for (const CurvePoint& pt : flat) {
    REQUIRE(std::abs(pt.m_sufficient - 2700.0) <= 1e-9 * 2700.0,
            "criterion 6: conjugate-4 curve not flat at n=" + std::to_string(pt.n));
  }

  auto rising = curve_points(Exponent::finite(1.2), 0.1, grid, kThird);
  for (std::size_t i = 1; i < rising.size(); ++i) {
    REQUIRE(rising[i].m_sufficient > rising[i - 1].m_sufficient,
            "criterion 6: p=1.2 curve must increase");
  }

  auto falling = curve_points(Exponent::finite(2.0), 0.1, grid, kThird);
  for (std::size_t i = 1; i < falling.size(); ++i) {
    if (falling[i].n <= 100) {
      REQUIRE(falling[i].m_sufficient < falling[i - 1].m_sufficient,
              "criterion 6: p=2 curve must decrease before the boundary");
    } else {
      REQUIRE(std::abs(falling[i].m_sufficient - 270.0) <= 1e-9 * 270.0,
              "criterion 6: p=2 curve must level at 270 past the boundary");
    }
  }

  auto l1 = curve_points(Exponent::finite(1.0), 0.1, grid, kThird);
  for (std::size_t i = 1; i < l1.size(); ++i) {
    REQUIRE(l1[i].m_sufficient > l1[i - 1].m_sufficient,
            "criterion 6: p=1 curve must never flatten");
  }
  pass(6, "sample-size curves have the prescribed shape");
}

// --- 7: norm inequalities hold on random vectors ----------------------------

void criterion7() {
  std::mt19937_64 rng(601);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uint64_t violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::size_t n = 2 + static_cast<std::size_t>(unit(rng) * 49);
    std::vector<double> v(n);
    for (double& x : v) x = 2.0 * unit(rng) - 1.0;

    double pv = 1.0 + 9.0 * unit(rng);
    bool s_inf = unit(rng) < 0.2;
    double sv = s_inf ? 0.0 : pv + (20.0 - pv) * unit(rng);
    Exponent p = Exponent::finite(pv);
    Exponent s = s_inf ? Exponent::infinity() : Exponent::finite(sv);
    double np = lp_norm(v, p);
    double ns = lp_norm(v, s);
    double scale = std::exp((1.0 / pv - s.reciprocal()) * std::log(static_cast<double>(n)));
    if (ns > np * (1.0 + 1e-12)) ++violations;
    if (np / scale > ns * (1.0 + 1e-12)) ++violations;

    double l2 = lp_norm(v, Exponent::finite(2.0));
    if (l2 == 0.0) continue;
    double c = lp_norm(v, Exponent::finite(1.0)) * (1.0 + unit(rng));
    double p_small = 1.05 + 0.95 * unit(rng);
    double q_small = p_small / (p_small - 1.0);
    double lhs = q_small * std::log(lp_norm(v, Exponent::finite(p_small)));
    double rhs = (q_small - 2.0) * std::log(c) + 2.0 * std::log(l2);
    if (lhs > rhs + 1e-12 * std::abs(rhs) + 1e-12) ++violations;

    double p_big = 2.0 + 8.0 * unit(rng);
    double q_big = p_big / (p_big - 1.0);
    double lhs_big = q_big * std::log(lp_norm(v, Exponent::finite(p_big)));
    double rhs_big = (q_big - 2.0) * std::log(c) + 2.0 * std::log(l2);
    if (lhs_big < rhs_big - 1e-12 * std::abs(rhs_big) - 1e-12) ++violations;
  }
  REQUIRE(violations == 0, "criterion 7: " + std::to_string(violations) +
                               " norm inequality violations");
  pass(7, "norm inequalities hold on random vectors");
}

// --- 8: necessary bounds never exceed sufficient bounds ---------------------

void criterion8() {
  for (double p : {1.0, 1.5, 2.0}) {
    for (std::uint64_t n : {2ull, 10ull, 100ull, 1000ull, 10000ull}) {
      for (double eps : {0.01, 0.1, 0.5}) {
        double necessary = test_necessary_m(p, n, eps, kThird).m_real;
        double sufficient = test_sufficient_m(p, n, eps, kThird).m_real;
        REQUIRE(necessary <= sufficient * (1.0 + 1e-12),
                "criterion 8: necessary exceeds sufficient at p=" + std::to_string(p) +
                    " n=" + std::to_string(n) + " eps=" + std::to_string(eps));
      }
    }
  }
  for (std::uint64_t n : {2ull, 100ull, 1000000ull}) {
    for (double eps : {0.01, 0.1}) {
      double necessary = linf_test_necessary_m(n, eps, kThird).m_real;
      double sufficient = linf_test_sufficient_m(n, eps, kThird).m_real;
      REQUIRE(necessary <= sufficient * (1.0 + 1e-12),
              "criterion 8: linf necessary exceeds sufficient at n=" + std::to_string(n));
    }
  }
  pass(8, "necessary bounds never exceed sufficient bounds");
}

// --- 9: experiment pipeline is byte-reproducible -----------------------------

void criterion9() {
  REQUIRE(!g_replays.empty(), "criterion 9: nothing to replay");
  for (const auto& [config, csv] : g_replays) {
    ExperimentReport again = estimate_failure_rate(config);
    std::ostringstream repeat;
    emit_csv(again, repeat);
    REQUIRE(repeat.str() == csv, "criterion 9: replay diverged for seed " +
                                     std::to_string(config.master_seed));
  }
  std::vector<std::uint64_t> grid = {2, 10, 100, 1000, 10000};
  std::ostringstream a, b;
  emit_csv(Exponent::finite(2.0), 0.1, kThird, curve_points(Exponent::finite(2.0), 0.1, grid, kThird), a);
  emit_csv(Exponent::finite(2.0), 0.1, kThird, curve_points(Exponent::finite(2.0), 0.1, grid, kThird), b);
  REQUIRE(a.str() == b.str() && !a.str().empty(), "criterion 9: curve CSV diverged");
  pass(9, "experiment pipeline is byte-reproducible");
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  std::printf("[OK] all acceptance criteria hold\n");
  return 0;
}
