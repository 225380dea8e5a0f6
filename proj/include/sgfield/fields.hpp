#ifndef SGFIELD_FIELDS_HPP_
#define SGFIELD_FIELDS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sgfield/geometry.hpp"
#include "sgfield/riesz.hpp"
#include "sgfield/spectral.hpp"
#include "sgfield/stable.hpp"

namespace sgfield {

/// max((alpha-1) d_h / (alpha d_w), 0): G_s(x,.) is in L^alpha iff s exceeds it.
double integrability_threshold(double alpha);

/// Throws DomainError naming the bound unless s > integrability_threshold(alpha).
void check_field_order(double s, double alpha);

/// Self-similarity index H = s d_w - (alpha-1) d_h / alpha.
struct HurstIndex {
  double s = 0.0;
  double alpha = 0.0;
  double value = 0.0;

  static HurstIndex of(double s, double alpha);
};

struct FieldMeta {
  double s = 0.0;
  double alpha = 0.0;
  BoundaryCondition bc = BoundaryCondition::Neumann;
  int level = 0;
  std::size_t n_terms = 0;
  Index truncation = 0;
  std::uint64_t seed = 0;
  bool divergent_regime = false;  // s <= d_h/d_w: paths unbounded as m grows
  double snap_scale = 0.0;        // 2^{-m}, the distance sites are moved when snapped
  double tail_bound = 0.0;
  double tail_variance = 0.0;
  std::string construction = "pointwise";
};

struct FieldSample {
  Eigen::VectorXd values;
  FieldMeta meta;
};

/// Joint simulation of the density field on V_m from one shared LePage draw.
///
/// Every site of the draw is snapped to its nearest vertex, so the field is
/// (kernel matrix) * (aggregated vertex noise). The kernel matrix is built once
/// and reused across draws.
class FieldSimulator {
 public:
  FieldSimulator(const GasketMesh& mesh, const Spectrum& spec, double s, double alpha, Index J = 0);

  /// Subcell construction 2^{nH} X^w(F_w x): kernel G_s^w, driven by the sites of
  /// the draw that fall in F_w(K).
  static FieldSimulator subcell(const GasketMesh& mesh, const Spectrum& spec, const Address& w, double s,
                                double alpha, Index J = 0);

  FieldSample simulate(const LePageDraw& draw) const;

  /// Aggregated noise per vertex: sum of the draw's terms snapped to each vertex
  /// (for subcells, the terms inside F_w(K) pulled back to K).
  Eigen::VectorXd vertex_noise(const LePageDraw& draw) const;

  /// s_alpha(x,y) for the frozen (T, xi) of the draw (compensation included).
  double conditional_increment_scale(Index xi, Index yi, const LePageDraw& draw) const;

  const Eigen::MatrixXd& kernel() const { return kernel_; }
  const GasketMesh& mesh() const { return *mesh_; }
  double order() const { return s_; }
  double alpha() const { return alpha_; }
  BoundaryCondition bc() const { return bc_; }
  Index truncation() const { return J_; }

 private:
  FieldSimulator() = default;
  Index snap(const MuSite& site) const;  // -1 outside the subcell

  const GasketMesh* mesh_ = nullptr;
  BoundaryCondition bc_ = BoundaryCondition::Neumann;
  double s_ = 0.0;
  double alpha_ = 0.0;
  Index J_ = 0;
  Eigen::MatrixXd kernel_;
  Address subcell_;
  double output_scale_ = 1.0;  // 2^{nH} for subcells
  std::string construction_ = "pointwise";
};

/// One joint realization from `draw` (builds a FieldSimulator).
FieldSample simulate_field(double s, double alpha, BoundaryCondition bc, const GasketMesh& mesh,
                           const Spectrum& spec, const LePageDraw& draw, Index J = 0);

/// Field built with the subcell kernel G_s^w, composed with F_w and multiplied by 2^{nH}.
FieldSample scaled_subcell_field(const Address& w, double s, double alpha, const GasketMesh& mesh,
                                 const Spectrum& spec, const LePageDraw& draw, Index J = 0);

/// X_{s,alpha}(f) = W_alpha((-Delta)^{-s} f), sampled by the direct route.
double distributional_field(const Eigen::VectorXd& f, double s, double alpha, const Spectrum& spec,
                            const GasketMesh& mesh, Rng& rng, Index J = 0);

/// Scale ||(-Delta)^{-s} f||_alpha of X_{s,alpha}(f).
double distributional_scale(const Eigen::VectorXd& f, double s, double alpha, const Spectrum& spec,
                            const GasketMesh& mesh, Index J = 0);

/// s_alpha(x, y) from a frozen draw.
double conditional_increment_scale(Index xi, Index yi, double s, const LePageDraw& draw, const Spectrum& spec,
                                   const GasketMesh& mesh, Index J = 0);

/// Seeds r = 0..count-1 each give draw make_draw(derive_seed(seed, r), ...).
std::vector<FieldSample> simulate_replicates(const FieldSimulator& sim, std::uint64_t seed, std::size_t count,
                                             const DrawOptions& options, unsigned threads = 1);

}  // namespace sgfield

#endif  // SGFIELD_FIELDS_HPP_
