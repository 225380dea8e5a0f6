#include "sgfield/stable.hpp"

#include <cmath>
#include <numbers>

namespace sgfield {

namespace {

void check_alpha(double alpha, bool allow_two) {
  const bool ok = alpha > 0.0 && (allow_two ? alpha <= 2.0 : alpha < 2.0);
  if (!ok)
    throw DomainError("stability index alpha = " + std::to_string(alpha) + " outside " +
                      (allow_two ? "(0, 2]" : "(0, 2)"));
}

enum Stream : std::uint64_t { kArrivals = 1, kSites = 2, kWeights = 3, kTailSites = 4, kTailWeights = 5 };

Eigen::VectorXd gaussian_vector(Rng& rng, std::size_t n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(static_cast<Index>(n));
  for (Index k = 0; k < v.size(); ++k) v(k) = normal(rng);
  return v;
}

}  // namespace

double standard_stable(Rng& rng, double alpha) {
  check_alpha(alpha, true);
  std::uniform_real_distribution<double> angle(-std::numbers::pi / 2, std::numbers::pi / 2);
  std::exponential_distribution<double> expo(1.0);
  double v = angle(rng);
  while (std::abs(v) >= std::numbers::pi / 2) v = angle(rng);
  if (alpha == 1.0) return std::tan(v);
  const double w = expo(rng);
  return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

double abs_gaussian_moment(double alpha) {
  if (!(alpha > -1.0)) throw DomainError("E|g|^alpha requires alpha > -1");
  return std::pow(2.0, alpha / 2) * std::tgamma((alpha + 1) / 2) / std::sqrt(std::numbers::pi);
}

double sine_power_integral(double alpha) {
  check_alpha(alpha, false);
  if (alpha == 1.0) return std::numbers::pi / 2;
  // Gamma(1-a) cos(pi a/2) rewritten by the reflection formula; smooth through a = 1.
  return std::numbers::pi / (2.0 * std::tgamma(alpha) * std::sin(std::numbers::pi * alpha / 2));
}

double d_alpha(double alpha) {
  check_alpha(alpha, false);
  return std::pow(abs_gaussian_moment(alpha) * sine_power_integral(alpha), -1.0 / alpha);
}

double lepage_tail_variance(double arrival, double alpha) {
  check_alpha(alpha, false);
  return std::pow(arrival, 1.0 - 2.0 / alpha) / (2.0 / alpha - 1.0);
}

double lepage_tail_bound(std::size_t n_terms, double alpha) {
  return lepage_tail_variance(static_cast<double>(n_terms), alpha);
}

LePageDraw make_draw(std::uint64_t seed, double alpha, const DrawOptions& options) {
  check_alpha(alpha, true);
  if (options.n_terms < 1) throw ContractError("LePage draw needs at least one term");
  const std::size_t n = options.n_terms;

  LePageDraw draw;
  draw.alpha = alpha;
  draw.seed = seed;
  draw.mu_depth = options.mu_depth;
  draw.compensation = options.compensation;

  Rng arrivals_rng = make_rng(seed, kArrivals);
  std::exponential_distribution<double> expo(1.0);
  draw.arrivals.resize(static_cast<Index>(n));
  double t = 0.0;
  for (Index k = 0; k < draw.arrivals.size(); ++k) {
    double step = expo(arrivals_rng);
    while (!(step > 0.0)) step = expo(arrivals_rng);
    t += step;
    draw.arrivals(k) = t;
  }

  Rng sites_rng = make_rng(seed, kSites);
  draw.sites.reserve(n);
  for (std::size_t k = 0; k < n; ++k) draw.sites.push_back(sample_mu_site(sites_rng, options.mu_depth));

  Rng weights_rng = make_rng(seed, kWeights);
  draw.weights = gaussian_vector(weights_rng, n);

  if (draw.gaussian()) {
    draw.coefficients = Eigen::VectorXd::Constant(static_cast<Index>(n), std::sqrt(2.0 / static_cast<double>(n)));
    return draw;
  }

  draw.d_alpha = d_alpha(alpha);
  draw.coefficients = draw.d_alpha * draw.arrivals.array().pow(-1.0 / alpha);
  draw.tail_bound = lepage_tail_bound(n, alpha);
  draw.tail_variance = lepage_tail_variance(draw.arrivals(draw.arrivals.size() - 1), alpha);
  if (options.compensation == TailCompensation::Gaussian) {
    const std::size_t m = options.tail_terms == 0 ? n : options.tail_terms;
    Rng tail_rng = make_rng(seed, kTailSites);
    draw.tail_sites.reserve(m);
    for (std::size_t k = 0; k < m; ++k) draw.tail_sites.push_back(sample_mu_site(tail_rng, options.mu_depth));
    Rng tail_weights_rng = make_rng(seed, kTailWeights);
    draw.tail_weights = gaussian_vector(tail_weights_rng, m);
    draw.tail_scale = draw.d_alpha * std::sqrt(draw.tail_variance / static_cast<double>(m));
  }
  return draw;
}

LePageDraw resample_weights(const LePageDraw& draw, std::uint64_t weight_seed) {
  LePageDraw out = draw;
  Rng weights_rng = make_rng(weight_seed, kWeights);
  out.weights = gaussian_vector(weights_rng, draw.sites.size());
  if (!draw.tail_sites.empty()) {
    Rng tail_weights_rng = make_rng(weight_seed, kTailWeights);
    out.tail_weights = gaussian_vector(tail_weights_rng, draw.tail_sites.size());
  }
  return out;
}

MeshFunction::MeshFunction(const GasketMesh& mesh, Eigen::VectorXd values) : mesh_(&mesh), values_(std::move(values)) {
  if (values_.size() != mesh.vertex_count()) throw ContractError("MeshFunction: one value per vertex required");
}

double MeshFunction::operator()(const MuSite& site) const {
  return values_(mesh_->nearest_vertex(site.code, site.depth, site.point));
}

Eigen::VectorXd snapped_noise(const GasketMesh& mesh, const LePageDraw& draw) {
  Eigen::VectorXd noise = Eigen::VectorXd::Zero(mesh.vertex_count());
  for (std::size_t n = 0; n < draw.sites.size(); ++n) {
    const auto& site = draw.sites[n];
    const auto k = static_cast<Index>(n);
    noise(mesh.nearest_vertex(site.code, site.depth, site.point)) += draw.coefficients(k) * draw.weights(k);
  }
  for (std::size_t n = 0; n < draw.tail_sites.size(); ++n) {
    const auto& site = draw.tail_sites[n];
    noise(mesh.nearest_vertex(site.code, site.depth, site.point)) +=
        draw.tail_scale * draw.tail_weights(static_cast<Index>(n));
  }
  return noise;
}

double lp_norm(const Eigen::VectorXd& f, const GasketMesh& mesh, double p) {
  if (!(p > 0.0)) throw DomainError("L^p norm requires p > 0");
  return std::pow(quadrature(f.cwiseAbs().array().pow(p).matrix(), mesh), 1.0 / p);
}

double direct_integral(const Eigen::VectorXd& f, const GasketMesh& mesh, Rng& rng, double alpha) {
  check_alpha(alpha, true);
  return lp_norm(f, mesh, alpha) * standard_stable(rng, alpha);
}

}  // namespace sgfield
