#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "sgfield/geometry.hpp"

using namespace sgfield;

namespace {

// Brute-force oracle: images of V_0 under every word of length m, deduplicated with a tolerance.
std::vector<Point> enumerate_vertices(int m) {
  std::vector<Point> pts;
  const std::uint64_t words = static_cast<std::uint64_t>(std::pow(3, m));
  for (std::uint64_t code = 0; code < words; ++code) {
    std::vector<int> digits(static_cast<std::size_t>(m));
    std::uint64_t rest = code;
    for (int k = m - 1; k >= 0; --k) {
      digits[static_cast<std::size_t>(k)] = static_cast<int>(rest % 3);
      rest /= 3;
    }
    const Address w(digits);
    for (int i = 0; i < 3; ++i) {
      const Point p = apply_contraction(w, corner(i));
      const bool seen = std::any_of(pts.begin(), pts.end(), [&](const Point& q) { return (p - q).norm() < 1e-12; });
      if (!seen) pts.push_back(p);
    }
  }
  return pts;
}

Address random_address(Rng& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len), digit(0, 2);
  std::vector<int> d(static_cast<std::size_t>(len(rng)));
  for (auto& x : d) x = digit(rng);
  return Address(d);
}

Point random_point_in_triangle(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double a = u(rng), b = u(rng);
  if (a + b > 1) {
    a = 1 - a;
    b = 1 - b;
  }
  return a * corner(1) + b * corner(2);
}

}  // namespace

TEST_CASE("build_mesh sizes") {
  const GasketMesh m0 = build_mesh(0);
  CHECK(m0.vertex_count() == 3);
  CHECK(m0.cell_count() == 1);
  CHECK(m0.edges().size() == 3);

  const GasketMesh m1 = build_mesh(1);
  CHECK(m1.vertex_count() == static_cast<Index>(enumerate_vertices(1).size()));
  CHECK(m1.vertex_count() == 6);
  CHECK(m1.cell_count() == 3);

  const GasketMesh m6 = build_mesh(6);
  CHECK(m6.vertex_count() == 1095);
  CHECK(m6.vertex_count() == static_cast<Index>(enumerate_vertices(6).size()));

  for (int m = 0; m <= 8; ++m) CHECK(build_mesh(m).vertex_count() == expected_vertex_count(m));
}

TEST_CASE("build_mesh rejects levels beyond the budget") {
  CHECK_THROWS_AS(build_mesh(kMaxMeshLevel + 1), CapacityError);
  CHECK_THROWS_AS(build_mesh(-1), ContractError);
}

TEST_CASE("mesh invariants") {
  for (int m : {0, 1, 3, 5}) {
    const GasketMesh mesh = build_mesh(m);
    CHECK(mesh.cell_count() == static_cast<Index>(std::pow(3, m)));
    const std::set<std::array<Index, 2>> edges(mesh.edges().begin(), mesh.edges().end());
    for (const Cell& c : mesh.cells()) {
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
          CHECK(edges.count({std::min(c.vertices[a], c.vertices[b]), std::max(c.vertices[a], c.vertices[b])}) == 1);
      for (int i = 0; i < 3; ++i) CHECK((mesh.vertex(c.vertices[i]) - apply_contraction(c.address, corner(i))).norm() < 1e-14);
    }
    for (Index v = 0; v < mesh.vertex_count(); ++v) CHECK(mesh.incident_cells(v) == (mesh.is_boundary(v) ? 1 : 2));
    for (int i = 0; i < 3; ++i) CHECK((mesh.vertex(mesh.boundary()[i]) - corner(i)).norm() == 0.0);
    // canonical (y, x) ordering
    for (Index v = 1; v < mesh.vertex_count(); ++v) {
      const Point& p = mesh.vertex(v - 1);
      const Point& q = mesh.vertex(v);
      CHECK((p.y() < q.y() || (p.y() == q.y() && p.x() < q.x())));
    }
  }
}

TEST_CASE("apply_contraction examples") {
  CHECK((apply_contraction(Address{0}, corner(0)) - corner(0)).norm() == 0.0);
  CHECK((apply_contraction(Address{1}, corner(0)) - Point(0.5, 0.0)).norm() < 1e-15);
  const Point p(0.3, 0.2);
  CHECK((apply_contraction(Address{}, p) - p).norm() == 0.0);
  CHECK_THROWS_AS(Address({3}), ContractError);
}

TEST_CASE("contraction composition property") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Address w = random_address(rng, 6), v = random_address(rng, 6);
    const Point p = random_point_in_triangle(rng);
    const Point lhs = apply_contraction(w + v, p);
    const Point rhs = apply_contraction(w, apply_contraction(v, p));
    CHECK((lhs - rhs).norm() < 1e-12);
    CHECK((apply_inverse_contraction(w, apply_contraction(w, p)) - p).norm() < 1e-9);
  }
}

TEST_CASE("reflections") {
  // sigma_2 swaps q0 and q1 and fixes q2.
  CHECK((reflect(2, corner(0)) - corner(1)).norm() < 1e-14);
  CHECK((reflect(2, corner(2)) - corner(2)).norm() < 1e-14);
  CHECK((reflect(0, corner(1)) - corner(2)).norm() < 1e-14);
  // points on the axis are fixed
  const Point mid = 0.5 * (corner(0) + corner(1));
  CHECK((reflect(2, mid) - mid).norm() < 1e-14);

  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Point p = random_point_in_triangle(rng);
    for (int i = 0; i < 3; ++i) CHECK((reflect(i, reflect(i, p)) - p).norm() < 1e-14);
  }

  const GasketMesh mesh = build_mesh(5);
  for (int i = 0; i < 3; ++i) {
    auto perm = mesh.reflection_permutation(i);
    std::vector<Index> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    for (Index v = 0; v < mesh.vertex_count(); ++v) CHECK(sorted[static_cast<std::size_t>(v)] == v);
  }
}

TEST_CASE("sample_mu matches cell masses") {
  Rng rng(2024);
  const int n = 100000;
  int in_f0 = 0, in_f12 = 0;
  const GasketMesh mesh = build_mesh(2);
  for (int k = 0; k < n; ++k) {
    const MuSite site = sample_mu_site(rng, 40);
    const std::uint64_t first2 = site.code / static_cast<std::uint64_t>(std::pow(3.0, 38));
    if (first2 / 3 == 0) ++in_f0;
    if (first2 == 1 * 3 + 2) ++in_f12;
    // site lies in the cell named by its address
    const Cell& c = mesh.cell(static_cast<Index>(first2));
    const Point centre = (mesh.vertex(c.vertices[0]) + mesh.vertex(c.vertices[1]) + mesh.vertex(c.vertices[2])) / 3;
    CHECK((site.point - centre).norm() < 0.25 / std::sqrt(3.0) + 1e-12);
  }
  const double p1 = 1.0 / 3, p2 = 1.0 / 9;
  CHECK(std::abs(in_f0 / double(n) - p1) < 3 * std::sqrt(p1 * (1 - p1) / n));
  CHECK(std::abs(in_f12 / double(n) - p2) < 3 * std::sqrt(p2 * (1 - p2) / n));

  CHECK((sample_mu(rng, 0) - barycenter()).norm() == 0.0);
  CHECK_THROWS_AS(sample_mu(rng, 41), ContractError);
}

TEST_CASE("quadrature") {
  const GasketMesh mesh = build_mesh(6);
  CHECK(quadrature(Eigen::VectorXd::Ones(mesh.vertex_count()), mesh) == doctest::Approx(1.0).epsilon(1e-14));
  Eigen::VectorXd x(mesh.vertex_count());
  for (Index v = 0; v < mesh.vertex_count(); ++v) x(v) = mesh.vertex(v).x();
  CHECK(std::abs(quadrature(x, mesh) - 0.5) < 1e-3);
  CHECK(quadrature(x, mesh) == doctest::Approx(mesh.mass_weights().dot(x)).epsilon(1e-13));
  CHECK_THROWS_AS(quadrature(Eigen::VectorXd::Ones(5), mesh), ContractError);

  // measure invariance under the reflections
  Rng rng(5);
  Eigen::VectorXd f = Eigen::VectorXd::Random(mesh.vertex_count());
  for (int i = 0; i < 3; ++i) {
    const auto perm = mesh.reflection_permutation(i);
    Eigen::VectorXd g(f.size());
    for (Index v = 0; v < f.size(); ++v) g(v) = f(perm[static_cast<std::size_t>(v)]);
    CHECK(quadrature(g, mesh) == doctest::Approx(quadrature(f, mesh)).epsilon(1e-13));
  }
}

TEST_CASE("ball_measure_estimate") {
  const GasketMesh mesh = build_mesh(7);
  CHECK(ball_measure_estimate(Point(0.3, 0.2), 1.0, mesh) == doctest::Approx(1.0));
  for (int j = 1; j <= 4; ++j) {
    const double r = std::ldexp(1.0, -j);
    const double mu = ball_measure_estimate(corner(0), r, mesh);
    CHECK(mu >= std::pow(r, kHausdorffDim) / 3);
    CHECK(mu <= 18 * std::pow(r, kHausdorffDim));
  }
  const double half = ball_measure_estimate(barycenter(), 0.5, mesh);
  CHECK(half > 0.0);
  CHECK(half <= 1.0);
  CHECK(half <= ball_measure_estimate(barycenter(), 0.75, mesh));
  CHECK_THROWS_AS(ball_measure_estimate(corner(0), std::ldexp(1.0, -6), mesh), ResolutionError);
  CHECK_THROWS_AS(ball_measure_estimate(corner(0), 0.0, mesh), DomainError);
}

TEST_CASE("level_edges") {
  const GasketMesh mesh = build_mesh(4);
  CHECK(mesh.level_edges(0).size() == 3);
  for (int j = 1; j <= 4; ++j) {
    const auto edges = mesh.level_edges(j);
    CHECK(edges.size() == static_cast<std::size_t>(std::pow(3, j + 1)));
    for (const auto& [a, b] : edges)
      CHECK((mesh.vertex(a) - mesh.vertex(b)).norm() == doctest::Approx(std::ldexp(1.0, -j)));
  }
  CHECK(mesh.level_edges(4).size() == mesh.edges().size());
}
