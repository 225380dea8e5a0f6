#ifndef SGFIELD_STABLE_HPP_
#define SGFIELD_STABLE_HPP_

#include <cstdint>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "sgfield/geometry.hpp"
#include "sgfield/random.hpp"

namespace sgfield {

/// Symmetric alpha-stable variate with characteristic function exp(-|u|^alpha)
/// (Chambers-Mallows-Stuck). alpha = 2 gives N(0, 2); alpha = 1 is Cauchy.
double standard_stable(Rng& rng, double alpha);

/// E|g|^alpha for a standard normal g: 2^{alpha/2} Gamma((alpha+1)/2) / sqrt(pi).
double abs_gaussian_moment(double alpha);

/// int_0^inf x^{-alpha} sin(x) dx = Gamma(1-alpha) cos(pi alpha / 2), with value pi/2 at alpha = 1.
double sine_power_integral(double alpha);

/// LePage constant D_alpha = (E|g|^alpha * int_0^inf x^{-alpha} sin x dx)^{-1/alpha}, alpha in (0, 2).
double d_alpha(double alpha);

/// Expected sum_{n > N} T_n^{-2/alpha} given T_N: T_N^{1-2/alpha} / (2/alpha - 1).
double lepage_tail_variance(double arrival, double alpha);

/// N^{1-2/alpha} / (2/alpha - 1), the tail estimate reported with each draw.
double lepage_tail_bound(std::size_t n_terms, double alpha);

enum class TailCompensation { None, Gaussian };

/// Frozen randomness of a truncated LePage series, shared by every evaluation point.
///
/// For alpha < 2 the series is D_alpha sum_n T_n^{-1/alpha} f(xi_n) g_n. The
/// optional Gaussian compensation adds tail_scale * sum_k f(zeta_k) h_k, a
/// conditionally Gaussian stand-in for the discarded terms n > N with variance
/// D_alpha^2 T_N^{1-2/alpha}/(2/alpha-1) ||f||_2^2. For alpha = 2 the measure
/// is Gaussian and the draw holds the white-noise sum sqrt(2/N) sum_n f(xi_n) g_n.
struct LePageDraw {
  double alpha = 1.0;
  std::uint64_t seed = 0;
  int mu_depth = kMaxMuDepth;
  double d_alpha = 0.0;                // 0 when alpha = 2
  Eigen::VectorXd arrivals;            // T_1 < ... < T_N
  std::vector<MuSite> sites;           // xi_n ~ mu
  Eigen::VectorXd weights;             // g_n ~ N(0, 1)
  Eigen::VectorXd coefficients;        // D_alpha T_n^{-1/alpha}, or sqrt(2/N) when alpha = 2
  TailCompensation compensation = TailCompensation::Gaussian;
  double tail_variance = 0.0;          // estimate of sum_{n>N} T_n^{-2/alpha}
  double tail_bound = 0.0;             // N^{1-2/alpha}/(2/alpha-1)
  double tail_scale = 0.0;             // multiplier of the compensation sum
  std::vector<MuSite> tail_sites;      // zeta_k ~ mu
  Eigen::VectorXd tail_weights;        // h_k ~ N(0, 1)

  std::size_t n_terms() const { return sites.size(); }
  bool gaussian() const { return alpha == 2.0; }
};

struct DrawOptions {
  std::size_t n_terms = 10000;
  int mu_depth = kMaxMuDepth;
  TailCompensation compensation = TailCompensation::Gaussian;
  std::size_t tail_terms = 0;  // 0: same as n_terms
};

/// Builds a reproducible draw; arrivals, sites and weights use separate sub-streams of `seed`.
LePageDraw make_draw(std::uint64_t seed, double alpha, const DrawOptions& options = {});

/// Same arrivals and sites, fresh Gaussian weights (g and h) from `weight_seed`.
LePageDraw resample_weights(const LePageDraw& draw, std::uint64_t weight_seed);

/// Vertex values evaluated at points of K by snapping to the nearest V_m vertex.
class MeshFunction {
 public:
  MeshFunction(const GasketMesh& mesh, Eigen::VectorXd values);
  double operator()(const MuSite& site) const;
  const Eigen::VectorXd& values() const { return values_; }
  const GasketMesh& mesh() const { return *mesh_; }

 private:
  const GasketMesh* mesh_;
  Eigen::VectorXd values_;
};

namespace detail {
template <typename F>
double evaluate_at(const F& f, const MuSite& site) {
  if constexpr (std::is_invocable_r_v<double, const F&, const MuSite&>)
    return f(site);
  else
    return f(site.point);
}
}  // namespace detail

/// Truncated LePage sum S(f) (plus the tail compensation when enabled).
/// `f` is callable with a Point or with a MuSite.
template <typename F>
double lepage_integral(const F& f, const LePageDraw& draw) {
  double head = 0.0;
  for (std::size_t n = 0; n < draw.sites.size(); ++n)
    head += draw.coefficients(static_cast<Index>(n)) * detail::evaluate_at(f, draw.sites[n]) *
            draw.weights(static_cast<Index>(n));
  double tail = 0.0;
  for (std::size_t k = 0; k < draw.tail_sites.size(); ++k)
    tail += detail::evaluate_at(f, draw.tail_sites[k]) * draw.tail_weights(static_cast<Index>(k));
  return head + draw.tail_scale * tail;
}

/// Variance of S(f) conditional on (T_n, xi_n): D_alpha^2 E(g^2) sum T_n^{-2/alpha} f(xi_n)^2,
/// plus the compensation term when enabled.
template <typename F>
double conditional_variance(const F& f, const LePageDraw& draw) {
  double head = 0.0;
  for (std::size_t n = 0; n < draw.sites.size(); ++n) {
    const double c = draw.coefficients(static_cast<Index>(n)) * detail::evaluate_at(f, draw.sites[n]);
    head += c * c;
  }
  double tail = 0.0;
  for (const auto& site : draw.tail_sites) {
    const double v = detail::evaluate_at(f, site);
    tail += v * v;
  }
  return head + draw.tail_scale * draw.tail_scale * tail;
}

/// Series terms aggregated on their snapped vertices, so that
/// lepage_integral(MeshFunction(mesh, f), draw) = f . snapped_noise(mesh, draw).
Eigen::VectorXd snapped_noise(const GasketMesh& mesh, const LePageDraw& draw);

/// (quadrature of |f|^p)^{1/p}.
double lp_norm(const Eigen::VectorXd& f, const GasketMesh& mesh, double p);

/// W_alpha(f) sampled exactly in law: ||f||_alpha * standard_stable(alpha).
double direct_integral(const Eigen::VectorXd& f, const GasketMesh& mesh, Rng& rng, double alpha);

}  // namespace sgfield

#endif  // SGFIELD_STABLE_HPP_
