#include <doctest.h>

#include <cmath>

#include "sgfield/analysis.hpp"

using namespace sgfield;

namespace {

std::vector<double> stable_sample(double alpha, double scale, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> xs(n);
  for (auto& x : xs) x = scale * standard_stable(rng, alpha);
  return xs;
}

}  // namespace

TEST_CASE("kolmogorov survival") {
  CHECK(kolmogorov_survival(0.0) == 1.0);
  // tabulated critical values of the Kolmogorov distribution
  CHECK(kolmogorov_survival(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(kolmogorov_survival(1.6276) == doctest::Approx(0.01).epsilon(1e-3));
}

TEST_CASE("two_sample") {
  const auto a = stable_sample(1.5, 1.0, 1000, 1);
  const KsResult same = two_sample(a, a);
  CHECK(same.statistic == 0.0);
  CHECK(same.passes());
  CHECK_THROWS_AS(two_sample(std::vector<double>(499, 0.0), a), ContractError);

  int passes = 0;
  for (std::uint64_t t = 0; t < 100; ++t)
    passes += two_sample(stable_sample(1.5, 1.0, 500, 2 * t + 10), stable_sample(1.5, 1.0, 500, 2 * t + 11)).passes();
  CHECK(passes >= 95);

  Rng rng(3);
  std::normal_distribution<double> normal(0.0, std::sqrt(2.0));
  std::vector<double> gauss(10000);
  for (auto& g : gauss) g = normal(rng);
  CHECK_FALSE(two_sample(stable_sample(1.5, 1.0, 10000, 4), gauss).passes());
}

TEST_CASE("cf_gof") {
  const std::vector<double> grid{0.5, 1.0, 2.0};
  const GasketMesh mesh = build_mesh(5);
  const Spectrum spec = solve_spectrum(assemble_form(mesh, BoundaryCondition::Neumann), 200);
  const Eigen::VectorXd phi = spec.eigenvectors.col(0);
  const double s = 0.9, alpha = 1.5;
  const double scale = std::pow(spec.eigenvalues(0), -s) * lp_norm(phi, mesh, alpha);
  Rng rng(12);
  std::vector<double> xs(5000);
  for (auto& x : xs) x = distributional_field(phi, s, alpha, spec, mesh, rng, 200);
  // grid in units of the reference scale, otherwise u * scale << 1 and the test has no power
  const std::vector<double> scaled{0.5 / scale, 1.0 / scale, 2.0 / scale};
  const CfGofResult ok = cf_gof(xs, alpha, scale, scaled);
  CHECK(ok.threshold == doctest::Approx(3.0 / std::sqrt(5000.0)));
  CHECK(ok.pass);
  CHECK_FALSE(cf_gof(xs, alpha, 1.5 * scale, scaled).pass);

  const auto gauss = stable_sample(2.0, 0.7, 5000, 13);
  CHECK(cf_gof(gauss, 2.0, 0.7, grid).pass);
  CHECK_THROWS_AS(cf_gof(std::vector<double>(999, 0.0), 2.0, 1.0, grid), ContractError);
}

TEST_CASE("holder targets") {
  CHECK(holder_target(1.0) == doctest::Approx(0.73697).epsilon(1e-4));
  CHECK(holder_target(0.8) == doctest::Approx(0.27258).epsilon(1e-4));
  CHECK(holder_target(1.3) == holder_target(1.0));
  CHECK(holder_log_power(0.9) == 0);
  CHECK(holder_log_power(1.0) == 1);
}

TEST_CASE("fit_increment_exponent") {
  const std::vector<int> levels{1, 2, 3, 4};
  std::vector<double> maxima;
  for (int j : levels) maxima.push_back(3.0 * std::pow(2.0, -0.6 * j));
  CHECK(fit_increment_exponent(levels, maxima) == doctest::Approx(0.6));
  CHECK_THROWS_AS(fit_increment_exponent(std::vector<int>{2}, std::vector<double>{1.0}), ContractError);
  CHECK_THROWS_AS(fit_increment_exponent(std::vector<int>{2, 2}, std::vector<double>{1.0, 2.0}), ContractError);
}

TEST_CASE("holder_exponent_estimate") {
  const GasketMesh mesh = build_mesh(6);
  const Spectrum spec = solve_spectrum(assemble_form(mesh, BoundaryCondition::Neumann));
  DrawOptions opts;
  const FieldSimulator sim(mesh, spec, 1.0, 2.0);
  const auto samples = simulate_replicates(sim, 5, 50, opts);
  const RegularityReport report = holder_exponent_estimate(mesh, samples);
  CHECK(report.target == doctest::Approx(holder_target(1.0)));
  CHECK(report.log_power == 1);
  CHECK(report.per_scale.size() == 5);
  CHECK(report.replicates == 50);
  CHECK(std::abs(report.estimate - report.target) <= 0.15);
  CHECK(report.pass);

  const FieldSimulator rough(mesh, spec, 0.5, 1.2);
  const auto rough_samples = simulate_replicates(rough, 5, 2, opts);
  CHECK_THROWS_AS(holder_exponent_estimate(mesh, rough_samples), ContractError);

  const GasketMesh coarse = build_mesh(4);
  const Spectrum coarse_spec = solve_spectrum(assemble_form(coarse, BoundaryCondition::Neumann));
  const auto coarse_samples = simulate_replicates(FieldSimulator(coarse, coarse_spec, 1.0, 2.0), 5, 2, opts);
  CHECK_THROWS_AS(holder_exponent_estimate(coarse, coarse_samples), ContractError);
}

TEST_CASE("divergence diagnostic") {
  CHECK_THROWS_AS(divergence_diagnostic(0.5, 1.2, BoundaryCondition::Neumann, {}), ContractError);
  DivergenceOptions opts;
  opts.replicates = 40;
  opts.n_terms = 4000;
  const DivergenceReport rough = divergence_diagnostic(0.5, 1.2, BoundaryCondition::Neumann, {3, 4, 5}, opts);
  REQUIRE(rough.rows.size() == 3);
  CHECK(rough.strictly_increasing);
  CHECK(rough.verdict == "consistent with unboundedness");
}

TEST_CASE("median") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
  CHECK_THROWS_AS(median({}), ContractError);
}
