#include "sgfield/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace sgfield {

namespace {

std::uint64_t pow3(int n) {
  std::uint64_t p = 1;
  for (int k = 0; k < n; ++k) p *= 3;
  return p;
}

std::uint64_t lattice_key(std::int64_t a, std::int64_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

using LatticePoint = std::array<std::int64_t, 2>;

}  // namespace

Address::Address(std::initializer_list<int> digits) : Address(std::vector<int>(digits)) {}

Address::Address(const std::vector<int>& digits) {
  digits_.reserve(digits.size());
  for (int d : digits) {
    if (d < 0 || d > 2) throw ContractError("address digit " + std::to_string(d) + " not in {0,1,2}");
    digits_.push_back(static_cast<std::uint8_t>(d));
  }
}

Address Address::parse(const std::string& text) {
  std::vector<int> digits;
  for (char ch : text) {
    if (ch < '0' || ch > '2') throw ContractError("invalid address '" + text + "'");
    digits.push_back(ch - '0');
  }
  return Address(digits);
}

Address Address::operator+(const Address& other) const {
  Address out = *this;
  out.digits_.insert(out.digits_.end(), other.digits_.begin(), other.digits_.end());
  return out;
}

std::uint64_t Address::rank() const {
  std::uint64_t r = 0;
  for (auto d : digits_) r = 3 * r + d;
  return r;
}

std::string Address::to_string() const {
  std::string s;
  s.reserve(digits_.size());
  for (auto d : digits_) s.push_back(static_cast<char>('0' + d));
  return s;
}

std::int64_t expected_vertex_count(int m) {
  return (static_cast<std::int64_t>(pow3(m + 1)) + 3) / 2;
}

bool GasketMesh::is_boundary(Index v) const {
  return std::find(boundary_.begin(), boundary_.end(), v) != boundary_.end();
}

Eigen::VectorXd GasketMesh::mass_weights() const {
  Eigen::VectorXd w(vertex_count());
  const double share = std::pow(3.0, -level_) / 3.0;
  for (Index v = 0; v < vertex_count(); ++v) w(v) = incident_cells(v) * share;
  return w;
}

std::optional<Index> GasketMesh::find_vertex(const Point& p) const {
  const double scale = std::ldexp(1.0, level_);
  const double bf = p.y() * scale * 2.0 / std::sqrt(3.0);
  const double af = p.x() * scale - 0.5 * bf;
  const auto a = static_cast<std::int64_t>(std::llround(af));
  const auto b = static_cast<std::int64_t>(std::llround(bf));
  if (a < 0 || b < 0) return std::nullopt;
  auto it = lattice_index_.find(lattice_key(a, b));
  if (it == lattice_index_.end()) return std::nullopt;
  if ((vertex(it->second) - p).cwiseAbs().maxCoeff() > 1e-9) return std::nullopt;
  return it->second;
}

std::vector<std::array<Index, 2>> GasketMesh::level_edges(int j) const {
  if (j < 0 || j > level_) throw ContractError("level_edges: level " + std::to_string(j) + " not in [0, m]");
  // Corner i of the level-j cell w is corner i of the level-m cell w.i...i.
  const std::uint64_t block = pow3(level_ - j);
  std::vector<std::uint64_t> corner_offset(3, 0);
  for (int i = 0; i < 3; ++i) {
    std::uint64_t off = 0;
    for (int k = 0; k < level_ - j; ++k) off = 3 * off + static_cast<std::uint64_t>(i);
    corner_offset[static_cast<std::size_t>(i)] = off;
  }
  std::set<std::array<Index, 2>> unique;
  for (std::uint64_t w = 0; w < pow3(j); ++w) {
    std::array<Index, 3> c{};
    for (int i = 0; i < 3; ++i)
      c[static_cast<std::size_t>(i)] =
          cell(static_cast<Index>(w * block + corner_offset[static_cast<std::size_t>(i)])).vertices[static_cast<std::size_t>(i)];
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        unique.insert({std::min(c[a], c[b]), std::max(c[a], c[b])});
  }
  return {unique.begin(), unique.end()};
}

Index GasketMesh::nearest_vertex(std::uint64_t code, int depth, const Point& p) const {
  if (depth < level_) throw ContractError("nearest_vertex: site depth below mesh level");
  const std::uint64_t idx = code / pow3(depth - level_);
  const Cell& c = cell(static_cast<Index>(idx));
  Index best = c.vertices[0];
  double best_d = (vertex(best) - p).squaredNorm();
  for (int i = 1; i < 3; ++i) {
    const double d = (vertex(c.vertices[static_cast<std::size_t>(i)]) - p).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = c.vertices[static_cast<std::size_t>(i)];
    }
  }
  return best;
}

std::vector<Index> GasketMesh::reflection_permutation(int i) const {
  std::vector<Index> perm(static_cast<std::size_t>(vertex_count()));
  for (Index v = 0; v < vertex_count(); ++v) {
    auto image = find_vertex(reflect(i, vertex(v)));
    if (!image) throw NumericError("reflection image of vertex " + std::to_string(v) + " is not a mesh vertex");
    perm[static_cast<std::size_t>(v)] = *image;
  }
  return perm;
}

Eigen::MatrixXd GasketMesh::distance_matrix() const {
  const Index n = vertex_count();
  Eigen::MatrixXd d(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) d(a, b) = (vertex(a) - vertex(b)).norm();
  return d;
}

GasketMesh build_mesh(int m) {
  if (m < 0) throw ContractError("mesh level must be >= 0");
  if (m > kMaxMeshLevel)
    throw CapacityError("mesh level " + std::to_string(m) + " exceeds the budget (max " +
                        std::to_string(kMaxMeshLevel) + ")");

  const std::int64_t side = std::int64_t{1} << m;
  struct Pending {
    std::vector<int> digits;
    std::array<LatticePoint, 3> corners;
  };
  std::vector<Pending> cells{{{}, {LatticePoint{0, 0}, LatticePoint{side, 0}, LatticePoint{0, side}}}};
  for (int level = 0; level < m; ++level) {
    std::vector<Pending> next;
    next.reserve(cells.size() * 3);
    for (const auto& c : cells) {
      for (int i = 0; i < 3; ++i) {
        Pending child{c.digits, {}};
        child.digits.push_back(i);
        for (int a = 0; a < 3; ++a)
          child.corners[a] = {(c.corners[a][0] + c.corners[i][0]) / 2, (c.corners[a][1] + c.corners[i][1]) / 2};
        next.push_back(std::move(child));
      }
    }
    cells = std::move(next);
  }

  // Unique lattice points, ordered by (y, x) = (b, 2a + b).
  std::vector<LatticePoint> lattice;
  lattice.reserve(cells.size() * 3);
  for (const auto& c : cells)
    for (const auto& p : c.corners) lattice.push_back(p);
  auto yx_less = [](const LatticePoint& p, const LatticePoint& q) {
    if (p[1] != q[1]) return p[1] < q[1];
    return 2 * p[0] + p[1] < 2 * q[0] + q[1];
  };
  std::sort(lattice.begin(), lattice.end(), yx_less);
  lattice.erase(std::unique(lattice.begin(), lattice.end()), lattice.end());

  GasketMesh mesh;
  mesh.level_ = m;
  mesh.lattice_ = lattice;
  const double inv_side = 1.0 / static_cast<double>(side);
  const double h = std::sqrt(3.0) / 2.0;
  mesh.vertices_.reserve(lattice.size());
  for (std::size_t v = 0; v < lattice.size(); ++v) {
    const auto a = static_cast<double>(lattice[v][0]);
    const auto b = static_cast<double>(lattice[v][1]);
    mesh.vertices_.emplace_back((a + 0.5 * b) * inv_side, b * h * inv_side);
    mesh.lattice_index_.emplace(lattice_key(lattice[v][0], lattice[v][1]), static_cast<Index>(v));
  }

  mesh.incidence_.assign(lattice.size(), 0);
  std::set<std::array<Index, 2>> edges;
  mesh.cells_.reserve(cells.size());
  for (const auto& c : cells) {
    Cell cell{Address(c.digits), {}};
    for (int a = 0; a < 3; ++a) {
      const Index v = mesh.lattice_index_.at(lattice_key(c.corners[a][0], c.corners[a][1]));
      cell.vertices[static_cast<std::size_t>(a)] = v;
      ++mesh.incidence_[static_cast<std::size_t>(v)];
    }
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        edges.insert({std::min(cell.vertices[a], cell.vertices[b]), std::max(cell.vertices[a], cell.vertices[b])});
    mesh.cells_.push_back(std::move(cell));
  }
  mesh.edges_.assign(edges.begin(), edges.end());
  mesh.boundary_ = {mesh.lattice_index_.at(lattice_key(0, 0)), mesh.lattice_index_.at(lattice_key(side, 0)),
                    mesh.lattice_index_.at(lattice_key(0, side))};
  return mesh;
}

MuSite sample_mu_site(Rng& rng, int depth) {
  if (depth < 0 || depth > kMaxMuDepth)
    throw ContractError("sample_mu: depth must be in [0, " + std::to_string(kMaxMuDepth) + "]");
  MuSite site;
  site.depth = depth;
  site.point = barycenter<double>();
  if (depth == 0) return site;
  std::uniform_int_distribution<std::uint64_t> uniform(0, pow3(depth) - 1);
  site.code = uniform(rng);
  // Innermost digit is the least significant one; F_i(p) = (p + q_i) / 2.
  // Four digits at a time: p -> p / 16 + table[chunk].
  struct Chunks {
    std::array<double, 81> x{}, y{};
    Chunks() {
      for (int c = 0; c < 81; ++c) {
        Point p(0.0, 0.0);
        for (int k = 0, rest = c; k < 4; ++k, rest /= 3) p = 0.5 * (p + corner<double>(rest % 3));
        x[static_cast<std::size_t>(c)] = p.x();
        y[static_cast<std::size_t>(c)] = p.y();
      }
    }
  };
  static const Chunks table;
  static const std::array<Point, 3> q{corner<double>(0), corner<double>(1), corner<double>(2)};
  std::uint64_t rest = site.code;
  double x = site.point.x(), y = site.point.y();
  int k = 0;
  for (; k + 4 <= depth; k += 4) {
    const auto c = static_cast<std::size_t>(rest % 81);
    x = 0.0625 * x + table.x[c];
    y = 0.0625 * y + table.y[c];
    rest /= 81;
  }
  for (; k < depth; ++k) {
    const Point& c = q[rest % 3];
    x = 0.5 * (x + c.x());
    y = 0.5 * (y + c.y());
    rest /= 3;
  }
  site.point = Point(x, y);
  return site;
}

Point sample_mu(Rng& rng, int depth) { return sample_mu_site(rng, depth).point; }

double ball_measure_estimate(const Point& x, double r, const GasketMesh& mesh) {
  if (!(r > 0.0) || r > 1.0) throw DomainError("ball radius must lie in (0, 1]");
  const double finest = std::min(1.0, std::ldexp(1.0, -(mesh.level() - 3)));
  if (r < finest)
    throw ResolutionError("radius " + std::to_string(r) + " too small for mesh level " +
                          std::to_string(mesh.level()) + " (need r >= " + std::to_string(finest) + ")");
  const Eigen::VectorXd w = mesh.mass_weights();
  double total = 0.0;
  const double limit = r + 1e-12;
  for (Index v = 0; v < mesh.vertex_count(); ++v)
    if ((mesh.vertex(v) - x).norm() <= limit) total += w(v);
  return total;
}

}  // namespace sgfield
