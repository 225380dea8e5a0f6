#ifndef SGFIELD_RIESZ_HPP_
#define SGFIELD_RIESZ_HPP_

#include <array>
#include <vector>

#include <Eigen/Core>

#include "sgfield/geometry.hpp"
#include "sgfield/spectral.hpp"

namespace sgfield {

/// Critical order d_h / d_w: kernels are bounded on the diagonal above it.
inline const double kCriticalOrder = kHausdorffDim / kWalkDim;

/// Truncated spectral Riesz kernel G_s(x,y) = sum_j lambda_j^{-s} Phi_j(x) Phi_j(y).
///
/// The truncation is rounded up to the end of an eigenvalue cluster so that
/// every retained eigenspace is complete.
class KernelEvaluator {
 public:
  KernelEvaluator(const Spectrum& spec, double s, Index J = 0);

  double order() const { return s_; }
  Index truncation() const { return J_; }
  const Spectrum& spectrum() const { return *spec_; }
  const Eigen::VectorXd& coefficients() const { return coeff_; }

  /// Discrete kernel value; no diagonal policy (see riesz_kernel).
  double value(Index xi, Index yi) const;
  Eigen::VectorXd row(Index xi) const;
  /// Full |V| x |V| kernel matrix.
  Eigen::MatrixXd matrix() const;

 private:
  const Spectrum* spec_;
  double s_;
  Index J_;
  Eigen::VectorXd coeff_;
};

/// G_s(x, y) with the diagonal policy: x == y is a domain error unless s > d_h/d_w.
double riesz_kernel(const KernelEvaluator& ev, Index xi, Index yi);

/// (-Delta)^{-s} f through spectral coefficients. Neumann input is projected
/// to mean zero first.
Eigen::VectorXd fractional_laplacian_inv(double s, const Eigen::VectorXd& f, const Spectrum& spec, Index J = 0);

/// x -> quadrature_y G_s(x,y) f(y): the kernel route to (-Delta)^{-s} f.
Eigen::VectorXd kernel_apply(const KernelEvaluator& ev, const Eigen::VectorXd& f, const GasketMesh& mesh);

/// |G_{s+t}(x,y) - quadrature_u G_s(x,u) G_t(u,y)|.
double kernel_semigroup_residual(double s, double t, Index xi, Index yi, const Spectrum& spec, Index J,
                                 const GasketMesh& mesh);

using VertexPair = std::array<Index, 2>;
using VertexTriple = std::array<Index, 3>;

std::vector<VertexPair> all_pairs(const GasketMesh& mesh);
std::vector<VertexPair> sample_pairs(const GasketMesh& mesh, std::size_t count, Rng& rng);

struct DistanceBin {
  int j = 0;             // bin [2^{-(j+1/2)}, 2^{-(j-1/2)})
  double scale = 0.0;    // geometric midpoint 2^{-j}
  double mean = 0.0;     // mean kernel value in the bin
  std::size_t count = 0;
};

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<DistanceBin> bins;
};

/// Dyadic distance bins centred on 2^{-j}, j = 1..m-1, of kernel values over the given pairs.
std::vector<DistanceBin> bin_kernel_by_distance(const KernelEvaluator& ev, const GasketMesh& mesh,
                                                const std::vector<VertexPair>& pairs);

/// Power-law exponent of G_s in d(x,y) for s < d_h/d_w.
///
/// G_s ~ C d^{s d_w - d_h} - C' carries an unknown additive constant, so the
/// slope is fitted to log of successive bin differences (finer minus coarser)
/// against the log of the coarser bin scale, which cancels the constant.
ExponentFit kernel_exponent_fit(const KernelEvaluator& ev, const GasketMesh& mesh,
                                const std::vector<VertexPair>& pairs);

/// Linear fit of binned G_s against -ln d (critical order s = d_h/d_w).
ExponentFit kernel_log_fit(const KernelEvaluator& ev, const GasketMesh& mesh, const std::vector<VertexPair>& pairs);

/// Modulus d^{min(s,1) d_w - d_h} (times max(|ln d|, 1) when s >= 1); 0 at d = 0.
double holder_modulus(double s, double d);

/// max over triples of |G_s(x,z) - G_s(y,z)| / modulus(d(x,y)); x == y triples are skipped.
double kernel_holder_ratio(const KernelEvaluator& ev, const GasketMesh& mesh, const std::vector<VertexTriple>& triples);

/// Same statistic over every (x, y, z) of the mesh.
double kernel_holder_ratio_all(const KernelEvaluator& ev, const GasketMesh& mesh);

/// Spectrum of the subcell F_w(K): lambda_{j,w} = 5^n lambda_j and
/// Phi_j^w = 3^{n/2} Phi_j o F_w^{-1}.
class SubcellSpectrum {
 public:
  SubcellSpectrum(const Spectrum& base, const GasketMesh& mesh, Address w);

  const Address& address() const { return w_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  /// Vertex of the base mesh carrying F_w^{-1}(p); p must be an image F_w(v).
  Index pullback(const Point& p) const;
  /// (Phi_j^w(p))_j as a row vector.
  Eigen::RowVectorXd eigenfunctions_at(const Point& p) const;

  /// G_s^w(p, q) for points p, q of F_w(V_m).
  double kernel(double s, const Point& p, const Point& q, Index J = 0) const;

 private:
  const Spectrum* base_;
  const GasketMesh* mesh_;
  Address w_;
  Eigen::VectorXd eigenvalues_;
};

}  // namespace sgfield

#endif  // SGFIELD_RIESZ_HPP_
