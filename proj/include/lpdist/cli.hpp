#pragma once

// Command-line front end. Exit codes: 0 success, 2 usage error,
// 3 NotUniform verdict (test subcommand only), 1 runtime failure.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lpdist/harness.hpp"

namespace lpdist {

namespace detail {

struct CliOptions {
  std::string problem = "test";
  std::string p_text = "2";
  std::uint64_t n = 0;
  double eps = 0.1;
  double delta = 0.0;
  std::string kind = "sufficient";
  std::string dist_spec = "uniform";
  std::string adversary = "uniform";
  std::uint64_t trials = 0;
  std::uint64_t m = 0;
  bool m_set = false;
  std::uint64_t seed = 0;
  std::string out_path;
  std::uint64_t n_min = 2;
  std::uint64_t n_max = 0;
};

inline int run_sample_size(const CliOptions& o) {
  Exponent p = Exponent::parse(o.p_text);
  bool learning = o.problem == "learn";
  if (o.kind == "sufficient") {
    std::uint64_t m;
    if (learning) {
      LearnParams params{p, o.n, o.eps, o.delta};
      m = learn_sample_size(params).m;
    } else {
      TestParams params{p, o.n, o.eps, o.delta};
      m = test_sample_size(params);
    }
    std::cout << m << '\n';
    return 0;
  }
  BoundReport report{};
  if (learning) {
    report = learn_necessary_m(p, o.n, o.eps, o.delta);
  } else if (p.is_inf()) {
    report = linf_test_necessary_m(o.n, o.eps, o.delta);
  } else {
    report = test_necessary_m(p.value(), o.n, o.eps, o.delta);
  }
  std::cout << fmt_g(report.m_real) << '\n';
  return 0;
}

inline int run_test(const CliOptions& o) {
  TestParams params{Exponent::parse(o.p_text), o.n, o.eps, o.delta};
  params.validate();
  DiscreteDistribution dist =
      build_distribution(o.dist_spec, o.n, o.eps, params.p, mix_seed(o.seed, 0));
  SampleSource source(dist);
  std::uint64_t m = o.m_set ? o.m : test_sample_size(params);
  Verdict v = test_uniformity_at_m(params, source, mix_seed(o.seed, 1), m);
  bool uniform = v.outcome == Outcome::Uniform;
  std::cout << "verdict=" << (uniform ? "Uniform" : "NotUniform")
            << " statistic=" << fmt_g(v.statistic) << " threshold=" << fmt_g(v.threshold)
            << " m=" << v.m_used << '\n';
  return uniform ? 0 : 3;
}

inline int run_learn(const CliOptions& o) {
  LearnParams params{Exponent::parse(o.p_text), o.n, o.eps, o.delta};
  params.validate();
  DiscreteDistribution dist =
      build_distribution(o.dist_spec, o.n, o.eps, params.p, mix_seed(o.seed, 0));
  SampleSource source(dist);
  std::uint64_t m = o.m;
  std::string formula = "m-override";
  if (!o.m_set) {
    LearnSampleSize size = learn_sample_size(params);
    m = size.m;
    formula = size.formula_id;
  }
  DiscreteDistribution estimate = empirical_distribution(source.draw(m, mix_seed(o.seed, 1)));
  if (o.out_path.empty()) {
    write_distribution(std::cout, estimate);
  } else {
    write_distribution_file(o.out_path, estimate);
  }
  std::cerr << "m=" << m << " formula=" << formula << '\n';
  return 0;
}

inline int run_experiment(const CliOptions& o) {
  ExperimentConfig config{o.problem == "learn" ? Problem::Learn : Problem::TestUniformity,
                          Exponent::parse(o.p_text),
                          o.n,
                          o.eps,
                          o.delta,
                          Adversary::Uniform,
                          "",
                          o.trials,
                          o.seed,
                          std::nullopt};
  if (o.adversary == "uniform") {
    config.adversary = Adversary::Uniform;
  } else if (o.adversary == "paninski") {
    config.adversary = Adversary::Paninski;
  } else if (o.adversary == "heavy") {
    config.adversary = Adversary::HeavyCoordinate;
  } else if (o.adversary == "sparse") {
    config.adversary = Adversary::SparseUniform;
  } else if (o.adversary.rfind("file:", 0) == 0) {
    config.adversary = Adversary::FromFile;
    config.file_path = o.adversary.substr(5);
  } else {
    throw std::invalid_argument(
        "unknown adversary (expected uniform|paninski|heavy|sparse|file:<path>)");
  }
  if (o.m_set) config.m_override = o.m;
  ExperimentReport report = estimate_failure_rate(config);
  if (o.out_path.empty()) {
    emit_csv(report, std::cout);
  } else {
    emit_csv(report, o.out_path);
  }
  return 0;
}

inline int run_curves(const CliOptions& o) {
  Exponent p = Exponent::parse(o.p_text);
  require(o.n_min >= 2, "--n-min must be >= 2");
  require(o.n_max >= o.n_min, "--n-max must be >= --n-min");
  std::vector<std::uint64_t> grid;
  grid.reserve(o.n_max - o.n_min + 1);
  for (std::uint64_t n = o.n_min; n <= o.n_max; ++n) grid.push_back(n);
  std::vector<CurvePoint> curve = curve_points(p, o.eps, grid, o.delta);
  if (o.out_path.empty()) {
    emit_csv(p, o.eps, o.delta, curve, std::cout);
  } else {
    emit_csv(p, o.eps, o.delta, curve, o.out_path);
  }
  return 0;
}

inline int run_verify_moments(const CliOptions& o) {
  Exponent p = Exponent::parse(o.p_text);
  DiscreteDistribution dist =
      build_distribution(o.dist_spec, o.n, o.eps, p, mix_seed(o.seed, 0));
  CollisionMomentsReport r = verify_collision_moments(dist, o.m, o.trials, o.seed);
  std::cout << "m=" << r.m << " trials=" << r.trials
            << " empirical_mean=" << fmt_g(r.empirical_mean)
            << " expected_mean=" << fmt_g(r.expected_mean)
            << " empirical_variance=" << fmt_g(r.empirical_variance)
            << " expected_variance=" << fmt_g(r.expected_variance) << '\n';
  return 0;
}

}  // namespace detail

// args excludes the program name and keeps the original order.
inline int run_cli(std::vector<std::string> args) {
  CLI::App app{"lp-distance uniformity testing and learning toolkit"};
  app.require_subcommand(1);
  detail::CliOptions o;

  auto add_shared = [&o](CLI::App* sub, bool with_seed) {
    sub->add_option("--p", o.p_text, "norm exponent, decimal or 'inf'")->required();
    sub->add_option("--n", o.n, "support size")->required();
    sub->add_option("--eps", o.eps, "distance parameter")->required();
    sub->add_option("--delta", o.delta, "failure probability (decimal; write 1/3 as 0.333333)")
        ->required();
    if (with_seed) sub->add_option("--seed", o.seed, "master seed")->capture_default_str();
  };

  CLI::App* size = app.add_subcommand("sample-size", "print a sufficient or necessary sample size");
  size->add_option("--problem", o.problem, "which problem")
      ->required()
      ->check(CLI::IsMember({"test", "learn"}));
  add_shared(size, false);
  size->add_option("--kind", o.kind, "sufficient (ceiled) or necessary (pre-ceiling)")
      ->capture_default_str()
      ->check(CLI::IsMember({"sufficient", "necessary"}));

  CLI::App* test = app.add_subcommand("test", "run the uniformity tester once");
  add_shared(test, true);
  test->add_option("--dist", o.dist_spec,
                   "input distribution: uniform|paninski|heavy|sparse|file:<path>")
      ->capture_default_str();
  CLI::Option* test_m = test->add_option("--m", o.m, "override the sample count");

  CLI::App* learn = app.add_subcommand("learn", "estimate a distribution from samples");
  add_shared(learn, true);
  learn->add_option("--dist", o.dist_spec,
                    "input distribution: uniform|paninski|heavy|sparse|file:<path>")
      ->capture_default_str();
  CLI::Option* learn_m = learn->add_option("--m", o.m, "override the sample count");
  learn->add_option("--out", o.out_path, "write the estimate to a file instead of stdout");

  CLI::App* experiment = app.add_subcommand("experiment", "Monte-Carlo failure-rate estimate");
  experiment->add_option("--problem", o.problem, "which problem")
      ->required()
      ->check(CLI::IsMember({"test", "learn"}));
  add_shared(experiment, true);
  experiment
      ->add_option("--adversary", o.adversary,
                   "input distribution: uniform|paninski|heavy|sparse|file:<path>")
      ->capture_default_str();
  experiment->add_option("--trials", o.trials, "number of independent trials")->required();
  CLI::Option* experiment_m = experiment->add_option("--m", o.m, "override the sample count");
  experiment->add_option("--out", o.out_path, "write the CSV to a file instead of stdout");

  CLI::App* curves = app.add_subcommand("curves", "sufficient/necessary sample-size curves");
  curves->add_option("--p", o.p_text, "norm exponent, decimal or 'inf'")->required();
  curves->add_option("--eps", o.eps, "distance parameter")->required();
  curves->add_option("--delta", o.delta, "failure probability")->required();
  curves->add_option("--n-min", o.n_min, "smallest support size")->capture_default_str();
  curves->add_option("--n-max", o.n_max, "largest support size")->required();
  curves->add_option("--out", o.out_path, "write the CSV to a file instead of stdout");

  CLI::App* moments = app.add_subcommand("verify-moments",
                                         "empirical vs closed-form collision moments");
  moments->add_option("--p", o.p_text, "norm exponent (used by seeded families)")
      ->capture_default_str();
  moments->add_option("--n", o.n, "support size")->required();
  moments->add_option("--eps", o.eps, "distance parameter (used by families)")
      ->capture_default_str();
  moments->add_option("--dist", o.dist_spec,
                      "input distribution: uniform|paninski|heavy|sparse|file:<path>")
      ->capture_default_str();
  moments->add_option("--m", o.m, "samples per trial")->required();
  moments->add_option("--trials", o.trials, "number of trials")->required();
  moments->add_option("--seed", o.seed, "master seed")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  o.m_set = test_m->count() > 0 || learn_m->count() > 0 || experiment_m->count() > 0;
  try {
    if (app.got_subcommand(size)) return detail::run_sample_size(o);
    if (app.got_subcommand(test)) return detail::run_test(o);
    if (app.got_subcommand(learn)) return detail::run_learn(o);
    if (app.got_subcommand(experiment)) return detail::run_experiment(o);
    if (app.got_subcommand(curves)) return detail::run_curves(o);
    return detail::run_verify_moments(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace lpdist
