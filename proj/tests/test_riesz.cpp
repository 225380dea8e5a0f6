#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "sgfield/riesz.hpp"

using namespace sgfield;

namespace {

struct Fixture {
  GasketMesh mesh = build_mesh(6);
  Spectrum neu = solve_spectrum(assemble_form(mesh, BoundaryCondition::Neumann), 200);
  Spectrum dir = solve_spectrum(assemble_form(mesh, BoundaryCondition::Dirichlet), 200);
};

const Fixture& fx() {
  static const Fixture f;
  return f;
}

}  // namespace

TEST_CASE("kernel symmetry and mean zero") {
  const auto& f = fx();
  const KernelEvaluator ev(f.neu, 0.9, 200);
  CHECK(ev.truncation() >= 200);
  CHECK(riesz_kernel(ev, 10, 500) == riesz_kernel(ev, 500, 10));
  for (Index x : {0, 77, 600, 1094}) CHECK(std::abs(quadrature(ev.row(x), f.mesh)) < 1e-7);

  const KernelEvaluator evd(f.dir, 0.9, 200);
  for (Index b : f.mesh.boundary()) CHECK(evd.row(b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("diagonal policy and domain errors") {
  const auto& f = fx();
  CHECK_THROWS_AS(KernelEvaluator(f.neu, 0.0), DomainError);
  const KernelEvaluator low(f.neu, 0.5, 200);
  CHECK_THROWS_AS(riesz_kernel(low, 4, 4), DomainError);
  CHECK_NOTHROW(riesz_kernel(low, 4, 5));
  const KernelEvaluator high(f.neu, 0.9, 200);
  CHECK(riesz_kernel(high, 4, 4) > 0.0);
}

TEST_CASE("kernel equals the heat-kernel time integral") {
  // Independent route: G_s(x,y) = Gamma(s)^{-1} int_0^inf t^{s-1} (p_t(x,y) - 1) dt.
  const GasketMesh mesh = build_mesh(3);
  const Spectrum spec = solve_spectrum(assemble_form(mesh, BoundaryCondition::Neumann));
  boost::math::quadrature::exp_sinh<double> integrator;
  for (double s : {0.5, 0.9, 1.4}) {
    const KernelEvaluator ev(spec, s);
    for (auto [x, y] : {std::pair<Index, Index>{0, 7}, {3, 20}, {11, 12}}) {
      auto integrand = [&](double t) { return std::pow(t, s - 1) * (heat_kernel(t, x, y, spec) - 1.0); };
      const double ref = integrator.integrate(integrand) / boost::math::tgamma(s);
      CHECK(ev.value(x, y) == doctest::Approx(ref).epsilon(1e-7));
    }
  }
}

TEST_CASE("fractional_laplacian_inv") {
  const auto& f = fx();
  const Eigen::VectorXd phi = f.neu.eigenvectors.col(0);
  const double lam = f.neu.eigenvalues(0);
  CHECK((fractional_laplacian_inv(0.7, phi, f.neu, 200) - std::pow(lam, -0.7) * phi).cwiseAbs().maxCoeff() < 1e-10);

  const Eigen::VectorXd band = (f.neu.eigenvectors.leftCols(40) * Eigen::VectorXd::LinSpaced(40, -1.0, 1.0)).array() + 2.0;
  CHECK((fractional_laplacian_inv(0.0, band, f.neu) - (band.array() - 2.0).matrix()).cwiseAbs().maxCoeff() < 1e-9);

  const Eigen::VectorXd g = Eigen::VectorXd::Random(f.mesh.vertex_count());

  const Eigen::VectorXd ab = fractional_laplacian_inv(0.4, fractional_laplacian_inv(0.6, g, f.neu, 200), f.neu, 200);
  const Eigen::VectorXd direct = fractional_laplacian_inv(1.0, g, f.neu, 200);
  CHECK((ab - direct).cwiseAbs().maxCoeff() < 1e-9 * direct.cwiseAbs().maxCoeff());
  CHECK_THROWS_AS(fractional_laplacian_inv(-0.1, g, f.neu), DomainError);
}

TEST_CASE("spectral and kernel routes agree") {
  const auto& f = fx();
  Eigen::VectorXd g(f.mesh.vertex_count());
  for (Index v = 0; v < g.size(); ++v) g(v) = std::sin(3 * f.mesh.vertex(v).x()) + f.mesh.vertex(v).y();
  for (const Spectrum* spec : {&f.neu, &f.dir}) {
    const KernelEvaluator ev(*spec, 0.8, 200);
    const Eigen::VectorXd a = fractional_laplacian_inv(0.8, g, *spec, ev.truncation());
    const Eigen::VectorXd b = kernel_apply(ev, g, f.mesh);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-6 * a.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("semigroup identity") {
  const auto& f = fx();
  Rng rng(99);
  const auto pairs = sample_pairs(f.mesh, 30, rng);
  for (auto [s, t] : {std::pair{0.5, 0.5}, {0.9, 0.9}, {0.7, 1.1}}) {
    const KernelEvaluator ev(f.neu, s + t, 200);
    for (auto [x, y] : pairs) {
      REQUIRE(x != y);
      const double res = kernel_semigroup_residual(s, t, x, y, f.neu, 200, f.mesh);
      CHECK(res <= 1e-3 * std::abs(ev.value(x, y)));
    }
  }
}

TEST_CASE("reflection invariance") {
  const auto& f = fx();
  for (const Spectrum* spec : {&f.neu, &f.dir}) {
    const KernelEvaluator ev(*spec, 0.9, 200);
    const Eigen::MatrixXd g = ev.matrix();
    for (int i = 0; i < 3; ++i) {
      const auto p = f.mesh.reflection_permutation(i);
      double worst = 0.0;
      for (Index x = 0; x < g.rows(); x += 7)
        for (Index y = 0; y < g.rows(); ++y)
          worst = std::max(worst, std::abs(g(p[static_cast<std::size_t>(x)], p[static_cast<std::size_t>(y)]) - g(x, y)));
      CHECK(worst < 1e-8);
    }
  }
}

TEST_CASE("subcell scaling identity") {
  const auto& f = fx();
  Rng rng(1);
  const auto pairs = sample_pairs(f.mesh, 20, rng);
  for (const Address& w : {Address{1}, Address{2, 0}, Address{0, 1, 2}}) {
    const SubcellSpectrum sub(f.neu, f.mesh, w);
    const auto n = static_cast<double>(w.size());
    for (double s : {0.6, 0.9, 1.3}) {
      const KernelEvaluator ev(f.neu, s, 200);
      for (auto [x, y] : pairs) {
        const double lhs = sub.kernel(s, apply_contraction(w, f.mesh.vertex(x)), apply_contraction(w, f.mesh.vertex(y)), 200);
        const double rhs = std::pow(3.0, n) * std::pow(5.0, -n * s) * ev.value(x, y);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
  CHECK_THROWS_AS(SubcellSpectrum(f.neu, f.mesh, Address{1}).pullback(Point(0.9, 0.9)), ContractError);
}

TEST_CASE("monotone truncation") {
  const auto& f = fx();
  const double phi_max = f.neu.eigenvectors.cwiseAbs2().maxCoeff();
  Rng rng(2);
  const auto pairs = sample_pairs(f.mesh, 50, rng);
  for (Index J : {20, 60, 120}) {
    const KernelEvaluator a(f.neu, 0.9, J);
    const KernelEvaluator b(f.neu, 0.9, a.truncation() + 1);
    const Index added = b.truncation() - a.truncation();
    const double bound = static_cast<double>(added) * std::pow(f.neu.eigenvalues(a.truncation()), -0.9) * phi_max;
    for (auto [x, y] : pairs) CHECK(std::abs(b.value(x, y) - a.value(x, y)) <= bound);
  }
}

TEST_CASE("kernel exponent and log fits") {
  const auto& f = fx();
  const Spectrum full = solve_spectrum(assemble_form(f.mesh, BoundaryCondition::Neumann));
  const auto pairs = all_pairs(f.mesh);
  for (double s : {0.4, 0.6}) {
    const ExponentFit fit = kernel_exponent_fit(KernelEvaluator(full, s), f.mesh, pairs);
    CHECK(std::abs(fit.slope - (s * kWalkDim - kHausdorffDim)) <= 0.1);
  }
  const ExponentFit log_fit = kernel_log_fit(KernelEvaluator(full, kCriticalOrder), f.mesh, pairs);
  CHECK(log_fit.slope > 0.0);
  CHECK(log_fit.r_squared >= 0.9);
  CHECK_THROWS_AS(kernel_exponent_fit(KernelEvaluator(full, 0.9), f.mesh, pairs), DomainError);

  const GasketMesh tiny = build_mesh(2);
  const Spectrum tiny_spec = solve_spectrum(assemble_form(tiny, BoundaryCondition::Neumann));
  CHECK_THROWS_AS(kernel_exponent_fit(KernelEvaluator(tiny_spec, 0.4), tiny, all_pairs(tiny)), ContractError);
}

TEST_CASE("holder modulus and ratio") {
  CHECK(holder_modulus(0.8, 0.0) == 0.0);
  CHECK(holder_modulus(0.8, 0.25) == doctest::Approx(std::pow(0.25, 0.8 * kWalkDim - kHausdorffDim)));
  CHECK(holder_modulus(1.3, 0.25) == doctest::Approx(std::pow(0.25, kWalkDim - kHausdorffDim) * std::log(4.0)));
  CHECK(holder_modulus(1.0, 0.9) == doctest::Approx(std::pow(0.9, kWalkDim - kHausdorffDim)));

  std::vector<double> ratios;
  for (int m : {3, 4, 5}) {
    const GasketMesh mesh = build_mesh(m);
    const Spectrum spec = solve_spectrum(assemble_form(mesh, BoundaryCondition::Neumann));
    const KernelEvaluator ev(spec, 1.0);
    ratios.push_back(kernel_holder_ratio_all(ev, mesh));
    const std::vector<VertexTriple> same{{1, 1, 2}};
    CHECK(kernel_holder_ratio(ev, mesh, same) == 0.0);
  }
  CHECK(ratios.back() <= 1.2 * ratios.front());
}
