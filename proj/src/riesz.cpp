#include "sgfield/riesz.hpp"

#include <algorithm>
#include <cmath>

namespace sgfield {

namespace {

struct LineFit {
  double slope = 0.0, intercept = 0.0, r_squared = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace

KernelEvaluator::KernelEvaluator(const Spectrum& spec, double s, Index J) : spec_(&spec), s_(s) {
  if (!(s > 0.0)) throw DomainError("Riesz kernel order s must be > 0");
  J_ = spec.cluster_end(spec.resolve_truncation(J));
  if (J_ < 1) throw ContractError("kernel truncation must be >= 1");
  coeff_ = spec.eigenvalues.head(J_).array().pow(-s);
}

double KernelEvaluator::value(Index xi, Index yi) const {
  const auto& phi = spec_->eigenvectors;
  double sum = 0.0;
  for (Index j = 0; j < J_; ++j) sum += coeff_(j) * (phi(xi, j) * phi(yi, j));
  return sum;
}

Eigen::VectorXd KernelEvaluator::row(Index xi) const {
  const auto phi = spec_->eigenvectors.leftCols(J_);
  return phi * (coeff_.array() * phi.row(xi).transpose().array()).matrix();
}

Eigen::MatrixXd KernelEvaluator::matrix() const {
  const auto phi = spec_->eigenvectors.leftCols(J_);
  Eigen::MatrixXd scaled = phi * coeff_.asDiagonal();
  Eigen::MatrixXd g = scaled * phi.transpose();
  // Symmetrize against rounding in the product.
  return 0.5 * (g + g.transpose());
}

double riesz_kernel(const KernelEvaluator& ev, Index xi, Index yi) {
  if (xi == yi && !(ev.order() > kCriticalOrder))
    throw DomainError("G_s(x,x) is infinite for s <= d_h/d_w = " + std::to_string(kCriticalOrder));
  return ev.value(xi, yi);
}

Eigen::VectorXd fractional_laplacian_inv(double s, const Eigen::VectorXd& f, const Spectrum& spec, Index J) {
  if (s < 0.0) throw DomainError("fractional order s must be >= 0");
  if (f.size() != spec.vertex_count()) throw ContractError("fractional_laplacian_inv: length mismatch");
  J = spec.resolve_truncation(J);
  Eigen::VectorXd centered = f;
  if (spec.bc == BoundaryCondition::Neumann) centered.array() -= spec.mass.dot(f);
  const auto phi = spec.eigenvectors.leftCols(J);
  const Eigen::VectorXd coeffs = phi.transpose() * spec.mass.cwiseProduct(centered);
  const Eigen::VectorXd scaled = coeffs.array() * spec.eigenvalues.head(J).array().pow(-s);
  return phi * scaled;
}

Eigen::VectorXd kernel_apply(const KernelEvaluator& ev, const Eigen::VectorXd& f, const GasketMesh& mesh) {
  if (f.size() != mesh.vertex_count()) throw ContractError("kernel_apply: length mismatch");
  Eigen::VectorXd out(f.size());
  for (Index x = 0; x < f.size(); ++x) out(x) = quadrature(ev.row(x).cwiseProduct(f), mesh);
  return out;
}

double kernel_semigroup_residual(double s, double t, Index xi, Index yi, const Spectrum& spec, Index J,
                                 const GasketMesh& mesh) {
  if (!(s > 0.0) || !(t > 0.0)) throw DomainError("semigroup residual requires s, t > 0");
  const KernelEvaluator gs(spec, s, J), gt(spec, t, J), gst(spec, s + t, J);
  const double direct = xi == yi ? gst.value(xi, yi) : riesz_kernel(gst, xi, yi);
  const double composed = quadrature(gs.row(xi).cwiseProduct(gt.row(yi)), mesh);
  return std::abs(direct - composed);
}

std::vector<VertexPair> all_pairs(const GasketMesh& mesh) {
  std::vector<VertexPair> pairs;
  const Index n = mesh.vertex_count();
  pairs.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b) pairs.push_back({a, b});
  return pairs;
}

std::vector<VertexPair> sample_pairs(const GasketMesh& mesh, std::size_t count, Rng& rng) {
  std::uniform_int_distribution<Index> pick(0, mesh.vertex_count() - 1);
  std::vector<VertexPair> pairs;
  pairs.reserve(count);
  while (pairs.size() < count) {
    const Index a = pick(rng), b = pick(rng);
    if (a != b) pairs.push_back({a, b});
  }
  return pairs;
}

std::vector<DistanceBin> bin_kernel_by_distance(const KernelEvaluator& ev, const GasketMesh& mesh,
                                                const std::vector<VertexPair>& pairs) {
  const int m = mesh.level();
  std::vector<DistanceBin> bins;
  for (int j = 1; j <= m - 1; ++j) bins.push_back({j, std::ldexp(1.0, -j), 0.0, 0});
  for (const auto& [a, b] : pairs) {
    if (a == b) continue;
    const double d = (mesh.vertex(a) - mesh.vertex(b)).norm();
    // Lattice distances never equal 2^{k+1/2}, so rounding has no ties.
    const auto j = static_cast<int>(std::lround(-std::log2(d)));
    if (j < 1 || j > m - 1) continue;
    auto& bin = bins[static_cast<std::size_t>(j - 1)];
    bin.mean += ev.value(a, b);
    ++bin.count;
  }
  std::vector<DistanceBin> filled;
  for (auto& bin : bins) {
    if (bin.count == 0) continue;
    bin.mean /= static_cast<double>(bin.count);
    filled.push_back(bin);
  }
  return filled;
}

ExponentFit kernel_exponent_fit(const KernelEvaluator& ev, const GasketMesh& mesh,
                                const std::vector<VertexPair>& pairs) {
  if (!(ev.order() < kCriticalOrder)) throw DomainError("kernel_exponent_fit requires s < d_h/d_w");
  ExponentFit fit;
  fit.bins = bin_kernel_by_distance(ev, mesh, pairs);
  std::vector<double> x, y;
  for (std::size_t k = 0; k + 1 < fit.bins.size(); ++k) {
    if (fit.bins[k + 1].j != fit.bins[k].j + 1) continue;
    const double diff = fit.bins[k + 1].mean - fit.bins[k].mean;
    if (!(diff > 0.0)) continue;
    x.push_back(std::log(fit.bins[k].scale));
    y.push_back(std::log(diff));
  }
  if (x.size() < 2)
    throw ContractError("kernel_exponent_fit: pairs must span at least 3 consecutive dyadic distance scales");
  const LineFit line = least_squares(x, y);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  return fit;
}

ExponentFit kernel_log_fit(const KernelEvaluator& ev, const GasketMesh& mesh, const std::vector<VertexPair>& pairs) {
  ExponentFit fit;
  fit.bins = bin_kernel_by_distance(ev, mesh, pairs);
  if (fit.bins.size() < 3) throw ContractError("kernel_log_fit: pairs must span at least 3 dyadic distance scales");
  std::vector<double> x, y;
  for (const auto& bin : fit.bins) {
    x.push_back(-std::log(bin.scale));
    y.push_back(bin.mean);
  }
  const LineFit line = least_squares(x, y);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  return fit;
}

double holder_modulus(double s, double d) {
  if (d <= 0.0) return 0.0;
  const double eta = std::min(s, 1.0) * kWalkDim - kHausdorffDim;
  const double base = std::pow(d, eta);
  return s >= 1.0 ? base * std::max(std::abs(std::log(d)), 1.0) : base;
}

double kernel_holder_ratio(const KernelEvaluator& ev, const GasketMesh& mesh, const std::vector<VertexTriple>& triples) {
  if (!(ev.order() > kCriticalOrder)) throw DomainError("kernel_holder_ratio requires s > d_h/d_w");
  double best = 0.0;
  for (const auto& [x, y, z] : triples) {
    if (x == y) continue;
    const double d = (mesh.vertex(x) - mesh.vertex(y)).norm();
    best = std::max(best, std::abs(ev.value(x, z) - ev.value(y, z)) / holder_modulus(ev.order(), d));
  }
  return best;
}

double kernel_holder_ratio_all(const KernelEvaluator& ev, const GasketMesh& mesh) {
  if (!(ev.order() > kCriticalOrder)) throw DomainError("kernel_holder_ratio requires s > d_h/d_w");
  const Eigen::MatrixXd g = ev.matrix();
  const Index n = g.rows();
  double best = 0.0;
  for (Index x = 0; x < n; ++x) {
    const Eigen::VectorXd spread = (g.rowwise() - g.row(x)).cwiseAbs().rowwise().maxCoeff();
    for (Index y = 0; y < n; ++y) {
      if (y == x) continue;
      const double d = (mesh.vertex(x) - mesh.vertex(y)).norm();
      best = std::max(best, spread(y) / holder_modulus(ev.order(), d));
    }
  }
  return best;
}

SubcellSpectrum::SubcellSpectrum(const Spectrum& base, const GasketMesh& mesh, Address w)
    : base_(&base), mesh_(&mesh), w_(std::move(w)) {
  if (base.vertex_count() != mesh.vertex_count()) throw ContractError("subcell spectrum: mesh does not match spectrum");
  eigenvalues_ = base.eigenvalues * std::pow(5.0, static_cast<double>(w_.size()));
}

Index SubcellSpectrum::pullback(const Point& p) const {
  auto v = mesh_->find_vertex(apply_inverse_contraction(w_, p));
  if (!v) throw ContractError("point is not the image of a mesh vertex under F_w");
  return *v;
}

Eigen::RowVectorXd SubcellSpectrum::eigenfunctions_at(const Point& p) const {
  return std::pow(3.0, 0.5 * static_cast<double>(w_.size())) * base_->eigenvectors.row(pullback(p));
}

double SubcellSpectrum::kernel(double s, const Point& p, const Point& q, Index J) const {
  if (!(s > 0.0)) throw DomainError("Riesz kernel order s must be > 0");
  J = base_->cluster_end(base_->resolve_truncation(J));
  const Eigen::RowVectorXd a = eigenfunctions_at(p).head(J);
  const Eigen::RowVectorXd b = eigenfunctions_at(q).head(J);
  return (eigenvalues_.head(J).array().pow(-s) * a.transpose().array() * b.transpose().array()).sum();
}

}  // namespace sgfield
