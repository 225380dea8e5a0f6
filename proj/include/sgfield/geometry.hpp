#ifndef SGFIELD_GEOMETRY_HPP_
#define SGFIELD_GEOMETRY_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "sgfield/errors.hpp"
#include "sgfield/random.hpp"

namespace sgfield {

using Index = Eigen::Index;

/// Hausdorff dimension ln3/ln2 of the gasket.
inline const double kHausdorffDim = std::log(3.0) / std::log(2.0);
/// Walk dimension ln5/ln2.
inline const double kWalkDim = std::log(5.0) / std::log(2.0);

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;
using Point = Point2<double>;

/// Corner q_i of the base triangle: q0 = (0,0), q1 = (1,0), q2 = (1/2, sqrt(3)/2).
template <typename Scalar = double>
Point2<Scalar> corner(int i) {
  switch (i) {
    case 0: return Point2<Scalar>(Scalar(0), Scalar(0));
    case 1: return Point2<Scalar>(Scalar(1), Scalar(0));
    case 2: return Point2<Scalar>(Scalar(0.5), std::sqrt(Scalar(3)) / Scalar(2));
    default: throw ContractError("corner index must be 0, 1 or 2");
  }
}

template <typename Scalar = double>
Point2<Scalar> barycenter() {
  return (corner<Scalar>(0) + corner<Scalar>(1) + corner<Scalar>(2)) / Scalar(3);
}

/// Word in {0,1,2}^n naming the contraction F_w = F_{w1} o ... o F_{wn}.
class Address {
 public:
  Address() = default;
  Address(std::initializer_list<int> digits);
  explicit Address(const std::vector<int>& digits);

  static Address parse(const std::string& text);

  std::size_t size() const { return digits_.size(); }
  bool empty() const { return digits_.empty(); }
  int operator[](std::size_t k) const { return digits_[k]; }
  const std::vector<std::uint8_t>& digits() const { return digits_; }

  /// Concatenation w.w', so that F_{w.w'} = F_w o F_{w'}.
  Address operator+(const Address& other) const;
  bool operator==(const Address&) const = default;

  /// Base-3 rank among words of the same length (first digit most significant).
  std::uint64_t rank() const;
  std::string to_string() const;

 private:
  std::vector<std::uint8_t> digits_;
};

/// F_i(z) = (z - q_i)/2 + q_i.
template <typename Scalar>
Point2<Scalar> contract(int i, const Point2<Scalar>& p) {
  const Point2<Scalar> q = corner<Scalar>(i);
  return Scalar(0.5) * (p - q) + q;
}

/// F_i^{-1}(z) = 2 (z - q_i) + q_i.
template <typename Scalar>
Point2<Scalar> expand(int i, const Point2<Scalar>& p) {
  const Point2<Scalar> q = corner<Scalar>(i);
  return Scalar(2) * (p - q) + q;
}

/// F_w(p); the innermost map F_{wn} acts first.
template <typename Scalar>
Point2<Scalar> apply_contraction(const Address& w, Point2<Scalar> p) {
  for (std::size_t k = w.size(); k-- > 0;) p = contract(w[k], p);
  return p;
}

/// F_w^{-1}(p), defined on the subcell F_w(K).
template <typename Scalar>
Point2<Scalar> apply_inverse_contraction(const Address& w, Point2<Scalar> p) {
  for (std::size_t k = 0; k < w.size(); ++k) p = expand(w[k], p);
  return p;
}

/// Reflection sigma_i about the symmetry axis of the triangle through q_i.
/// sigma_i fixes q_i and swaps the two other corners.
template <typename Scalar>
Point2<Scalar> reflect(int i, const Point2<Scalar>& p) {
  const Point2<Scalar> c = barycenter<Scalar>();
  const Point2<Scalar> axis = (corner<Scalar>(i) - c).normalized();
  const Point2<Scalar> rel = p - c;
  return c + Scalar(2) * rel.dot(axis) * axis - rel;
}

struct Cell {
  Address address;
  std::array<Index, 3> vertices;  // vertices[i] = F_w(q_i)
};

/// Level-m approximation V_m of the gasket.
///
/// Vertices are stored on an integer lattice (point = (a + b/2, b sqrt(3)/2) / 2^m),
/// which makes deduplication exact. Canonical order is lexicographic in (y, x).
/// Cells are stored in address rank order.
class GasketMesh {
 public:
  int level() const { return level_; }
  Index vertex_count() const { return static_cast<Index>(vertices_.size()); }
  Index cell_count() const { return static_cast<Index>(cells_.size()); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& vertex(Index v) const { return vertices_[static_cast<std::size_t>(v)]; }
  const std::vector<Cell>& cells() const { return cells_; }
  const Cell& cell(Index c) const { return cells_[static_cast<std::size_t>(c)]; }
  const std::vector<std::array<Index, 2>>& edges() const { return edges_; }
  const std::array<Index, 3>& boundary() const { return boundary_; }
  bool is_boundary(Index v) const;
  int incident_cells(Index v) const { return incidence_[static_cast<std::size_t>(v)]; }

  /// Lumped mu-weights: incident-cell count * 3^{-m} / 3. They sum to 1.
  Eigen::VectorXd mass_weights() const;

  /// Index of the vertex at p, if p is a vertex of V_m (coordinate tolerance 1e-9).
  std::optional<Index> find_vertex(const Point& p) const;

  /// Edges of the level-j graph V_j (j <= level), expressed as V_m indices.
  std::vector<std::array<Index, 2>> level_edges(int j) const;

  /// Nearest V_m vertex to a point of K given by its base-3 address code of
  /// `depth` digits (depth >= level).
  Index nearest_vertex(std::uint64_t code, int depth, const Point& p) const;

  /// Vertex permutation induced by sigma_i: perm[v] is the index of sigma_i(v).
  std::vector<Index> reflection_permutation(int i) const;

  /// Euclidean distance matrix between all vertices.
  Eigen::MatrixXd distance_matrix() const;

 private:
  friend GasketMesh build_mesh(int m);

  int level_ = 0;
  std::vector<Point> vertices_;
  std::vector<std::array<std::int64_t, 2>> lattice_;
  std::vector<Cell> cells_;
  std::vector<std::array<Index, 2>> edges_;
  std::array<Index, 3> boundary_{};
  std::vector<int> incidence_;
  std::unordered_map<std::uint64_t, Index> lattice_index_;
};

/// Largest level accepted by build_mesh (|V_12| = 797163).
inline constexpr int kMaxMeshLevel = 12;

/// Expected |V_m| = (3^{m+1} + 3)/2.
std::int64_t expected_vertex_count(int m);

GasketMesh build_mesh(int m);

/// Point of K distributed according to mu: digits i.i.d. uniform, point =
/// F_{i1..i_depth}(barycenter).
Point sample_mu(Rng& rng, int depth = 40);

struct MuSite {
  Point point;
  std::uint64_t code = 0;  // base-3 digits, first digit most significant
  int depth = 0;
};

inline constexpr int kMaxMuDepth = 40;  // 3^40 < 2^64

MuSite sample_mu_site(Rng& rng, int depth = kMaxMuDepth);

/// Sum over cells of 3^{-m} * (mean of f over the cell's corners).
template <typename Derived>
double quadrature(const Eigen::MatrixBase<Derived>& f, const GasketMesh& mesh) {
  if (f.size() != mesh.vertex_count())
    throw ContractError("quadrature: expected " + std::to_string(mesh.vertex_count()) +
                        " values, got " + std::to_string(f.size()));
  const double cell_mass = std::pow(3.0, -mesh.level());
  double total = 0.0;
  for (const Cell& c : mesh.cells())
    total += (f(c.vertices[0]) + f(c.vertices[1]) + f(c.vertices[2])) / 3.0;
  return total * cell_mass;
}

/// Quadrature estimate of mu(B(x, r)). Requires r >= 2^{-(m-3)}.
double ball_measure_estimate(const Point& x, double r, const GasketMesh& mesh);

}  // namespace sgfield

#endif  // SGFIELD_GEOMETRY_HPP_
