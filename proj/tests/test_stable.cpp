#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sgfield/analysis.hpp"
#include "sgfield/riesz.hpp"
#include "sgfield/stable.hpp"

using namespace sgfield;

namespace {

struct CfEstimate {
  double value;
  double sigma;
};

CfEstimate empirical_cf(const std::vector<double>& xs, double u) {
  double sum = 0.0, sq = 0.0;
  for (double x : xs) {
    const double c = std::cos(u * x);
    sum += c;
    sq += c * c;
  }
  const auto n = static_cast<double>(xs.size());
  const double mean = sum / n;
  return {mean, std::sqrt((sq / n - mean * mean) / n)};
}

std::vector<double> stable_sample(double alpha, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> xs(n);
  for (auto& x : xs) x = standard_stable(rng, alpha);
  return xs;
}

}  // namespace

TEST_CASE("standard_stable") {
  const auto gauss = stable_sample(2.0, 100000, 1);
  double sq = 0.0;
  for (double x : gauss) sq += x * x;
  CHECK(std::abs(sq / 100000.0 - 2.0) < 0.05);

  for (auto [alpha, u] : {std::pair{1.5, 1.0}, {0.8, 0.5}, {1.0, 2.0}}) {
    const auto cf = empirical_cf(stable_sample(alpha, 100000, 7), u);
    CHECK(std::abs(cf.value - std::exp(-std::pow(u, alpha))) < 3 * cf.sigma);
  }
  Rng rng(0);
  CHECK_THROWS_AS(standard_stable(rng, 0.0), DomainError);
  CHECK_THROWS_AS(standard_stable(rng, 2.1), DomainError);
}

TEST_CASE("d_alpha closed form against quadrature") {
  CHECK(d_alpha(1.0) == doctest::Approx(1.0 / (std::sqrt(2 / std::numbers::pi) * std::numbers::pi / 2)).epsilon(1e-14));
  CHECK(d_alpha(1.0) == doctest::Approx(0.79788).epsilon(1e-5));
  for (double alpha : {0.5, 0.7, 1.0, 1.3, 1.5}) CHECK(std::abs(d_alpha(alpha) - oracle::d_alpha_oracle(alpha)) < 1e-8);
  CHECK(sine_power_integral(0.999999) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-5));
  // near 2 both routes stay finite and close
  for (double alpha : {1.9, 1.99}) {
    CHECK(std::isfinite(d_alpha(alpha)));
    CHECK(std::abs(d_alpha(alpha) - oracle::d_alpha_oracle(alpha)) < 1e-8);
  }
  CHECK(std::abs(d_alpha(1.99) - d_alpha(1.9)) < 0.2);
  CHECK_THROWS_AS(d_alpha(2.0), DomainError);
  CHECK_THROWS_AS(d_alpha(0.0), DomainError);
}

TEST_CASE("make_draw") {
  DrawOptions opts;
  opts.n_terms = 10000;
  const LePageDraw a = make_draw(42, 1.5, opts), b = make_draw(42, 1.5, opts);
  CHECK(a.arrivals == b.arrivals);
  CHECK(a.weights == b.weights);
  CHECK(a.tail_weights == b.tail_weights);
  for (std::size_t k = 0; k < a.sites.size(); ++k) CHECK(a.sites[k].code == b.sites[k].code);
  CHECK(a.arrivals(0) > 0.0);
  CHECK(a.arrivals(4) > a.arrivals(3));
  CHECK((a.arrivals.tail(9999).array() > a.arrivals.head(9999).array()).all());
  CHECK(a.tail_bound == doctest::Approx(std::pow(1e4, 1 - 2 / 1.5) / (2 / 1.5 - 1)));
  CHECK_THROWS_AS(make_draw(1, 1.5, DrawOptions{0}), ContractError);

  // T_n - n has mean zero; the per-seed average over n has variance sum_k ((N-k+1)/N)^2.
  const int seeds = 100;
  const double n = 10000;
  double total = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const LePageDraw d = make_draw(static_cast<std::uint64_t>(s), 1.5, DrawOptions{10000, 1, TailCompensation::None});
    total += (d.arrivals.array() - Eigen::ArrayXd::LinSpaced(10000, 1, n)).mean();
  }
  double var = 0.0;
  for (int k = 1; k <= 10000; ++k) var += std::pow((n - k + 1) / n, 2);
  CHECK(std::abs(total / seeds) < 3 * std::sqrt(var / seeds));
}

TEST_CASE("lepage_integral algebra") {
  const GasketMesh mesh = build_mesh(4);
  const LePageDraw draw = make_draw(3, 1.2);
  CHECK(lepage_integral([](const Point&) { return 0.0; }, draw) == 0.0);
  Eigen::VectorXd f(mesh.vertex_count()), g(mesh.vertex_count());
  for (Index v = 0; v < f.size(); ++v) {
    f(v) = mesh.vertex(v).x();
    g(v) = std::cos(5 * mesh.vertex(v).y());
  }
  const double sf = lepage_integral(MeshFunction(mesh, f), draw);
  const double sg = lepage_integral(MeshFunction(mesh, g), draw);
  const double sfg = lepage_integral(MeshFunction(mesh, f + g), draw);
  CHECK(sfg == doctest::Approx(sf + sg).epsilon(1e-12));
  CHECK(lepage_integral(MeshFunction(mesh, 2.5 * f), draw) == doctest::Approx(2.5 * sf).epsilon(1e-12));
  CHECK(f.dot(snapped_noise(mesh, draw)) == doctest::Approx(sf).epsilon(1e-12));
}

TEST_CASE("direct_integral scale") {
  const GasketMesh mesh = build_mesh(5);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(mesh.vertex_count());
  CHECK(lp_norm(one, mesh, 1.5) == doctest::Approx(1.0));
  CHECK(lp_norm(-3.0 * one, mesh, 0.7) == doctest::Approx(3.0));
  Rng r1(5), r2(5);
  CHECK(direct_integral(-3.0 * one, mesh, r1, 1.5) == doctest::Approx(3.0 * standard_stable(r2, 1.5)));

  const Spectrum spec = solve_spectrum(assemble_form(mesh, BoundaryCondition::Neumann));
  const KernelEvaluator ev(spec, 0.9);
  const double norm = lp_norm(ev.row(10), mesh, 1.5);
  CHECK(std::isfinite(norm));
  CHECK(norm > 0.0);
}

TEST_CASE("lepage series matches the direct route for f = 1") {
  const GasketMesh mesh = build_mesh(3);
  const std::size_t reps = 2000;
  std::vector<double> series(reps), direct(reps);
  Rng rng(77);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(mesh.vertex_count());
  for (std::size_t r = 0; r < reps; ++r) {
    series[r] = lepage_integral([](const MuSite&) { return 1.0; }, make_draw(derive_seed(9, r), 1.5));
    direct[r] = direct_integral(one, mesh, rng, 1.5);
  }
  CHECK(two_sample(series, direct).passes());
}

TEST_CASE("conditional Gaussian structure") {
  const GasketMesh mesh = build_mesh(4);
  Eigen::VectorXd f(mesh.vertex_count());
  for (Index v = 0; v < f.size(); ++v) f(v) = mesh.vertex(v).x() - 0.5;
  const MeshFunction fun(mesh, f);
  for (double alpha : {0.8, 1.5}) {
    const LePageDraw base = make_draw(11, alpha, DrawOptions{10000});
    const double target = conditional_variance(fun, base);
    double sq = 0.0;
    const int reps = 1000;
    for (int r = 0; r < reps; ++r) {
      const double v = lepage_integral(fun, resample_weights(base, derive_seed(500, static_cast<std::uint64_t>(r))));
      sq += v * v;
    }
    CHECK(std::abs(sq / reps / target - 1.0) < 0.15);
  }
}

TEST_CASE("truncation tail") {
  // Extending the arrivals of a draw, the discarded sum stays near the reported estimate.
  const double alpha = 1.5;
  const std::size_t n = 10000;
  double ratio = 0.0;
  const int seeds = 40;
  for (int s = 0; s < seeds; ++s) {
    const LePageDraw d = make_draw(static_cast<std::uint64_t>(s), alpha, DrawOptions{n, 1, TailCompensation::None});
    Rng rng(derive_seed(1000, static_cast<std::uint64_t>(s)));
    std::exponential_distribution<double> expo(1.0);
    double t = d.arrivals(d.arrivals.size() - 1), tail = 0.0;
    for (int k = 0; k < 2000000; ++k) {
      t += expo(rng);
      tail += std::pow(t, -2 / alpha);
    }
    tail += lepage_tail_variance(t, alpha);
    ratio += tail / d.tail_bound;
    CHECK(d.tail_variance == doctest::Approx(lepage_tail_variance(d.arrivals(d.arrivals.size() - 1), alpha)));
  }
  CHECK(std::abs(ratio / seeds - 1.0) < 0.05);
}
