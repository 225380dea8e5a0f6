#include "sgfield/fields.hpp"

#include <cmath>
#include <sstream>

#include "sgfield/parallel.hpp"

namespace sgfield {

double integrability_threshold(double alpha) {
  return std::max((alpha - 1.0) * kHausdorffDim / (alpha * kWalkDim), 0.0);
}

void check_field_order(double s, double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw DomainError("stability index alpha = " + std::to_string(alpha) + " outside (0, 2]");
  const double bound = integrability_threshold(alpha);
  if (!(s > bound)) {
    std::ostringstream msg;
    msg << "s = " << s << " <= max((alpha-1) d_h/(alpha d_w), 0) = " << bound
        << ": field undefined, see integrability threshold (G_s(x,.) not in L^alpha)";
    throw DomainError(msg.str());
  }
}

HurstIndex HurstIndex::of(double s, double alpha) {
  return {s, alpha, s * kWalkDim - (alpha - 1.0) * kHausdorffDim / alpha};
}

FieldSimulator::FieldSimulator(const GasketMesh& mesh, const Spectrum& spec, double s, double alpha, Index J)
    : mesh_(&mesh), bc_(spec.bc), s_(s), alpha_(alpha) {
  check_field_order(s, alpha);
  if (spec.vertex_count() != mesh.vertex_count()) throw ContractError("FieldSimulator: mesh does not match spectrum");
  const KernelEvaluator ev(spec, s, J);
  J_ = ev.truncation();
  kernel_ = ev.matrix();
}

FieldSimulator FieldSimulator::subcell(const GasketMesh& mesh, const Spectrum& spec, const Address& w, double s,
                                       double alpha, Index J) {
  check_field_order(s, alpha);
  if (w.empty()) throw ContractError("subcell construction needs |w| >= 1");
  const SubcellSpectrum sub(spec, mesh, w);
  FieldSimulator sim;
  sim.mesh_ = &mesh;
  sim.bc_ = spec.bc;
  sim.s_ = s;
  sim.alpha_ = alpha;
  sim.J_ = spec.cluster_end(spec.resolve_truncation(J));

  Eigen::MatrixXd phi_w(mesh.vertex_count(), sim.J_);
  for (Index v = 0; v < mesh.vertex_count(); ++v)
    phi_w.row(v) = sub.eigenfunctions_at(apply_contraction(w, mesh.vertex(v))).head(sim.J_);
  const Eigen::VectorXd coeff = sub.eigenvalues().head(sim.J_).array().pow(-s);
  Eigen::MatrixXd g = (phi_w * coeff.asDiagonal()) * phi_w.transpose();
  sim.kernel_ = 0.5 * (g + g.transpose());

  sim.subcell_ = w;
  sim.output_scale_ = std::pow(2.0, static_cast<double>(w.size()) * HurstIndex::of(s, alpha).value);
  sim.construction_ = "subcell:" + w.to_string();
  return sim;
}

Index FieldSimulator::snap(const MuSite& site) const {
  if (subcell_.empty()) return mesh_->nearest_vertex(site.code, site.depth, site.point);
  // Only sites inside F_w(K) drive the subcell field; they are pulled back to K.
  const auto n = static_cast<int>(subcell_.size());
  if (site.depth < n + mesh_->level()) throw ContractError("site depth too small for the subcell level");
  std::uint64_t below = 1;
  for (int k = 0; k < site.depth - n; ++k) below *= 3;
  if (site.code / below != subcell_.rank()) return -1;
  return mesh_->nearest_vertex(site.code % below, site.depth - n, apply_inverse_contraction(subcell_, site.point));
}

Eigen::VectorXd FieldSimulator::vertex_noise(const LePageDraw& draw) const {
  if (draw.alpha != alpha_) throw ContractError("draw alpha does not match the simulator");
  Eigen::VectorXd noise = Eigen::VectorXd::Zero(mesh_->vertex_count());
  for (std::size_t n = 0; n < draw.sites.size(); ++n) {
    const Index v = snap(draw.sites[n]);
    const auto k = static_cast<Index>(n);
    if (v >= 0) noise(v) += draw.coefficients(k) * draw.weights(k);
  }
  for (std::size_t n = 0; n < draw.tail_sites.size(); ++n) {
    const Index v = snap(draw.tail_sites[n]);
    if (v >= 0) noise(v) += draw.tail_scale * draw.tail_weights(static_cast<Index>(n));
  }
  return noise;
}

FieldSample FieldSimulator::simulate(const LePageDraw& draw) const {
  FieldSample sample;
  sample.values = output_scale_ * (kernel_ * vertex_noise(draw));
  auto& meta = sample.meta;
  meta.s = s_;
  meta.alpha = alpha_;
  meta.bc = bc_;
  meta.level = mesh_->level();
  meta.n_terms = draw.n_terms();
  meta.truncation = J_;
  meta.seed = draw.seed;
  meta.divergent_regime = !(s_ > kCriticalOrder);
  meta.snap_scale = std::ldexp(1.0, -mesh_->level());
  meta.tail_bound = draw.tail_bound;
  meta.tail_variance = draw.tail_variance;
  meta.construction = construction_;
  return sample;
}

double FieldSimulator::conditional_increment_scale(Index xi, Index yi, const LePageDraw& draw) const {
  if (xi == yi) return 0.0;
  const Eigen::VectorXd diff = kernel_.row(xi) - kernel_.row(yi);
  double head = 0.0;
  for (std::size_t n = 0; n < draw.sites.size(); ++n) {
    const Index v = snap(draw.sites[n]);
    if (v < 0) continue;
    const double c = draw.coefficients(static_cast<Index>(n)) * diff(v);
    head += c * c;
  }
  double tail = 0.0;
  for (const auto& site : draw.tail_sites) {
    const Index v = snap(site);
    if (v >= 0) tail += diff(v) * diff(v);
  }
  const double variance = head + draw.tail_scale * draw.tail_scale * tail;
  return output_scale_ * std::sqrt(variance);
}

FieldSample simulate_field(double s, double alpha, BoundaryCondition bc, const GasketMesh& mesh,
                           const Spectrum& spec, const LePageDraw& draw, Index J) {
  if (spec.bc != bc) throw ContractError("simulate_field: spectrum boundary condition mismatch");
  return FieldSimulator(mesh, spec, s, alpha, J).simulate(draw);
}

FieldSample scaled_subcell_field(const Address& w, double s, double alpha, const GasketMesh& mesh,
                                 const Spectrum& spec, const LePageDraw& draw, Index J) {
  return FieldSimulator::subcell(mesh, spec, w, s, alpha, J).simulate(draw);
}

double distributional_scale(const Eigen::VectorXd& f, double s, double alpha, const Spectrum& spec,
                            const GasketMesh& mesh, Index J) {
  return lp_norm(fractional_laplacian_inv(s, f, spec, J), mesh, alpha);
}

double distributional_field(const Eigen::VectorXd& f, double s, double alpha, const Spectrum& spec,
                            const GasketMesh& mesh, Rng& rng, Index J) {
  return direct_integral(fractional_laplacian_inv(s, f, spec, J), mesh, rng, alpha);
}

double conditional_increment_scale(Index xi, Index yi, double s, const LePageDraw& draw, const Spectrum& spec,
                                   const GasketMesh& mesh, Index J) {
  return FieldSimulator(mesh, spec, s, draw.alpha, J).conditional_increment_scale(xi, yi, draw);
}

std::vector<FieldSample> simulate_replicates(const FieldSimulator& sim, std::uint64_t seed, std::size_t count,
                                             const DrawOptions& options, unsigned threads) {
  std::vector<FieldSample> out(count);
  parallel_for(count, threads, [&](std::size_t r) {
    out[r] = sim.simulate(make_draw(derive_seed(seed, r), sim.alpha(), options));
  });
  return out;
}

}  // namespace sgfield
