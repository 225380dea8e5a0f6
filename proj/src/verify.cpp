#include "sgfield/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <tuple>

#include "sgfield/analysis.hpp"
#include "sgfield/fields.hpp"
#include "sgfield/io.hpp"
#include "sgfield/parallel.hpp"
#include "sgfield/riesz.hpp"
#include "sgfield/spectral.hpp"
#include "sgfield/stable.hpp"

namespace sgfield {

void SuiteReport::add(Check check) {
  if (check.asserted && !check.pass) pass = false;
  checks.push_back(std::move(check));
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json out;
  out["suite"] = suite;
  out["pass"] = pass;
  out["seconds"] = seconds;
  out["parameters"] = parameters;
  out["checks"] = nlohmann::json::array();
  for (const auto& c : checks)
    out["checks"].push_back(
        {{"name", c.name}, {"criterion", c.criterion}, {"pass", c.pass}, {"asserted", c.asserted}, {"detail", c.detail}});
  return out;
}

namespace {

class Context {
 public:
  explicit Context(const VerifyConfig& config) : config(config) {}

  const VerifyConfig config;

  const GasketMesh& mesh(int m) {
    auto& slot = meshes_[m];
    if (!slot) slot = std::make_unique<GasketMesh>(build_mesh(m));
    return *slot;
  }

  /// J = 0: every eigenpair.
  const Spectrum& spectrum(int m, BoundaryCondition bc, Index J) {
    auto& slot = spectra_[{m, bc, J}];
    if (!slot) slot = std::make_unique<Spectrum>(solve_spectrum(assemble_form(mesh(m), bc), J));
    return *slot;
  }

  std::size_t replicates(std::size_t fallback) const {
    return config.replicates > 0 ? config.replicates : fallback;
  }

  std::uint64_t seed(std::uint64_t stream) const { return derive_seed(config.seed, stream); }

  DrawOptions draws() const {
    DrawOptions o;
    o.n_terms = config.n_terms;
    return o;
  }

 private:
  std::map<int, std::unique_ptr<GasketMesh>> meshes_;
  std::map<std::tuple<int, BoundaryCondition, Index>, std::unique_ptr<Spectrum>> spectra_;
};

nlohmann::json ks_detail(const KsResult& r, std::size_t na, std::size_t nb) {
  return {{"statistic", r.statistic}, {"p_value", r.p_value}, {"significance", kSignificance}, {"n_a", na}, {"n_b", nb}};
}

Check ks_check(std::string name, int criterion, std::span<const double> a, std::span<const double> b) {
  const KsResult r = two_sample(a, b);
  return {std::move(name), criterion, r.passes(), true, ks_detail(r, a.size(), b.size())};
}

Index closest_vertex(const GasketMesh& mesh, const Point& p) {
  Index best = 0;
  for (Index v = 1; v < mesh.vertex_count(); ++v)
    if ((mesh.vertex(v) - p).squaredNorm() < (mesh.vertex(best) - p).squaredNorm()) best = v;
  return best;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> at_vertex(const std::vector<FieldSample>& samples, Index v) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.values(v));
  return out;
}

std::vector<double> pair_sum(const std::vector<FieldSample>& samples, Index a, Index b) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.values(a) + s.values(b));
  return out;
}

std::string tag(double alpha, double s) {
  return "alpha=" + format_double(alpha) + ",s=" + format_double(s);
}

// ---------------------------------------------------------------------------

void suite_ahlfors(Context& ctx, SuiteReport& rep) {
  const int m = ctx.config.level;
  if (m < 4) throw ContractError("ahlfors suite needs level >= 4");
  const GasketMesh& mesh = ctx.mesh(m + 1);
  std::vector<Point> centres{corner(0), corner(1), corner(2)};
  Rng rng(ctx.seed(1));
  std::uniform_int_distribution<Index> pick(0, mesh.vertex_count() - 1);
  for (int k = 0; k < 7; ++k) centres.push_back(mesh.vertex(pick(rng)));

  std::vector<double> log_r, mean_log_mu, corner_log_mu;
  bool within = true;
  double worst_low = INFINITY, worst_high = 0.0;
  for (int j = 1; j <= m - 2; ++j) {
    const double r = std::ldexp(1.0, -j);
    const double ref = std::pow(r, kHausdorffDim);
    double acc = 0.0, corner_acc = 0.0;
    for (std::size_t k = 0; k < centres.size(); ++k) {
      const double mu = ball_measure_estimate(centres[k], r, mesh);
      within = within && mu >= ref / 3.0 && mu <= 18.0 * ref;
      worst_low = std::min(worst_low, mu / ref);
      worst_high = std::max(worst_high, mu / ref);
      acc += std::log(mu);
      if (k < 3) corner_acc += std::log(mu);
    }
    log_r.push_back(std::log(r));
    mean_log_mu.push_back(acc / static_cast<double>(centres.size()));
    corner_log_mu.push_back(corner_acc / 3.0);
  }
  rep.add({"ball measure bounds", 1, within, true,
           {{"min_ratio", worst_low}, {"max_ratio", worst_high}, {"lower", 1.0 / 3.0}, {"upper", 18.0},
            {"centres", centres.size()}, {"radii", log_r.size()}}});
  std::vector<double> local;
  for (std::size_t k = 1; k < log_r.size(); ++k)
    local.push_back((mean_log_mu[k] - mean_log_mu[k - 1]) / (log_r[k] - log_r[k - 1]));
  const double fit = slope(log_r, mean_log_mu);
  rep.add({"Ahlfors slope", 1, std::abs(fit - kHausdorffDim) <= 0.05, true,
           {{"slope", fit}, {"target", kHausdorffDim}, {"tolerance", 0.05}, {"mean_log_mu", mean_log_mu},
            {"local_slopes", local}}});
  // corners carry exactly 3^{-j} in B(q_i, 2^{-j}); r = 1/2 balls are truncated by the edge of K
  const std::vector<double> fine_r(log_r.begin() + 1, log_r.end()), fine_mu(mean_log_mu.begin() + 1, mean_log_mu.end());
  rep.add({"Ahlfors slope at corners", 1, std::abs(slope(log_r, corner_log_mu) - kHausdorffDim) <= 0.05, false,
           {{"slope", slope(log_r, corner_log_mu)}}});
  if (fine_r.size() >= 2)
    rep.add({"Ahlfors slope without r=1/2", 1, std::abs(slope(fine_r, fine_mu) - kHausdorffDim) <= 0.05, false,
             {{"slope", slope(fine_r, fine_mu)}}});
  rep.parameters = {{"mesh_level", m + 1}, {"scales", "2^-j, j=1..m-2"}};
}

void suite_kernel_bounds(Context& ctx, SuiteReport& rep) {
  const int m = ctx.config.level;
  const Index J = ctx.config.jmax;
  const GasketMesh& mesh = ctx.mesh(m);
  const Spectrum& neu = ctx.spectrum(m, BoundaryCondition::Neumann, J);
  const Spectrum& dir = ctx.spectrum(m, BoundaryCondition::Dirichlet, J);
  Rng rng(ctx.seed(2));
  std::uniform_int_distribution<Index> pick(0, mesh.vertex_count() - 1);

  for (double t : {0.01, 0.1, 1.0}) {
    double worst = 0.0;
    for (int k = 0; k < 20; ++k)
      worst = std::max(worst, std::abs(quadrature(heat_kernel_row(t, pick(rng), neu, J), mesh) - 1.0));
    rep.add({"heat kernel mass t=" + format_double(t), 2, worst <= 1e-6, true, {{"max_error", worst}, {"tolerance", 1e-6}}});
  }
  double boundary = 0.0;
  for (Index b : mesh.boundary())
    for (double t : {0.01, 0.1, 1.0}) boundary = std::max(boundary, heat_kernel_row(t, b, dir, J).cwiseAbs().maxCoeff());
  rep.add({"Dirichlet heat kernel on V0", 2, boundary <= 1e-12, true, {{"max_abs", boundary}, {"tolerance", 1e-12}}});

  std::vector<double> lj, ll;
  const Index top = std::min<Index>(neu.size(), 200);
  for (Index j = 10; j <= top; ++j) {
    lj.push_back(std::log(static_cast<double>(j)));
    ll.push_back(std::log(neu.eigenvalues(j - 1)));
  }
  const double growth = slope(lj, ll);
  rep.add({"eigenvalue growth slope", 2, std::abs(growth - kWalkDim / kHausdorffDim) <= 0.08, true,
           {{"slope", growth}, {"target", kWalkDim / kHausdorffDim}, {"tolerance", 0.08}, {"j_range", {10, top}}}});

  // spectral tail of a truncated kernel, for the record
  const double phi_max = neu.eigenvectors.cwiseAbs2().maxCoeff();
  nlohmann::json tails = nlohmann::json::object();
  for (double s : {0.8, 0.9, 1.3})
    tails[format_double(s)] = std::pow(neu.eigenvalues(neu.size() - 1), -s) * static_cast<double>(neu.size()) * phi_max;
  rep.add({"truncation tail heuristic", 2, true, false, {{"lambda_J^-s * J * max|phi|^2", tails}}});

  const Spectrum& full = ctx.spectrum(m, BoundaryCondition::Neumann, 0);
  const auto pairs = all_pairs(mesh);
  for (double s : {0.4, 0.6}) {
    const double target = s * kWalkDim - kHausdorffDim;
    const ExponentFit fit = kernel_exponent_fit(KernelEvaluator(full, s), mesh, pairs);
    rep.add({"kernel exponent s=" + format_double(s), 4, std::abs(fit.slope - target) <= 0.1, true,
             {{"slope", fit.slope}, {"target", target}, {"tolerance", 0.1}, {"r_squared", fit.r_squared},
              {"truncation", full.size()}}});
    const ExponentFit cut = kernel_exponent_fit(KernelEvaluator(neu, s, J), mesh, pairs);
    rep.add({"kernel exponent s=" + format_double(s) + " truncated", 4, std::abs(cut.slope - target) <= 0.1, false,
             {{"slope", cut.slope}, {"target", target}, {"truncation", KernelEvaluator(neu, s, J).truncation()}}});
  }
  const ExponentFit log_fit = kernel_log_fit(KernelEvaluator(full, kCriticalOrder), mesh, pairs);
  rep.add({"log-linearity at critical order", 4, log_fit.r_squared >= 0.9, true,
           {{"r_squared", log_fit.r_squared}, {"slope", log_fit.slope}, {"threshold", 0.9}}});
  rep.parameters = {{"level", m}, {"jmax", J}};
}

void suite_kernel_holder(Context& ctx, SuiteReport& rep) {
  const int m = ctx.config.level;
  if (m < 4) throw ContractError("kernel-holder suite needs level >= 4");
  const std::vector<int> levels{m - 2, m - 1, m};
  for (double s : {0.8, 1.0, 1.3}) {
    std::vector<double> ratios;
    for (int l : levels) {
      const KernelEvaluator ev(ctx.spectrum(l, BoundaryCondition::Neumann, 0), s);
      ratios.push_back(kernel_holder_ratio_all(ev, ctx.mesh(l)));
    }
    const double growth = ratios.back() / ratios.front() - 1.0;
    rep.add({"Hoelder ratio growth s=" + format_double(s), 4, growth <= 0.2, true,
             {{"levels", levels}, {"ratios", ratios}, {"growth", growth}, {"tolerance", 0.2}}});
  }
  rep.parameters = {{"levels", levels}, {"truncation", "full"}};
}

void suite_semigroup(Context& ctx, SuiteReport& rep) {
  const int m = ctx.config.level;
  const Index J = ctx.config.jmax;
  const GasketMesh& mesh = ctx.mesh(m);
  const Spectrum& neu = ctx.spectrum(m, BoundaryCondition::Neumann, J);
  const Spectrum& dir = ctx.spectrum(m, BoundaryCondition::Dirichlet, J);
  Rng rng(ctx.seed(3));
  const auto pairs = sample_pairs(mesh, 100, rng);

  for (auto [s, t] : {std::pair{0.5, 0.5}, {0.9, 0.9}, {0.7, 1.1}}) {
    const KernelEvaluator ev(neu, s + t, J);
    double worst = 0.0;
    for (auto [x, y] : pairs)
      worst = std::max(worst, kernel_semigroup_residual(s, t, x, y, neu, J, mesh) / std::abs(ev.value(x, y)));
    rep.add({"semigroup s=" + format_double(s) + ",t=" + format_double(t), 3, worst <= 1e-3, true,
             {{"max_relative_residual", worst}, {"tolerance", 1e-3}, {"pairs", pairs.size()}}});
  }

  Eigen::VectorXd g(mesh.vertex_count());
  for (Index v = 0; v < g.size(); ++v) g(v) = std::sin(3 * mesh.vertex(v).x()) + mesh.vertex(v).y();
  for (const Spectrum* spec : {&neu, &dir}) {
    const KernelEvaluator ev(*spec, 0.8, J);
    const Eigen::VectorXd a = fractional_laplacian_inv(0.8, g, *spec, ev.truncation());
    const Eigen::VectorXd b = kernel_apply(ev, g, mesh);
    const double err = (a - b).cwiseAbs().maxCoeff() / a.cwiseAbs().maxCoeff();
    rep.add({"spectral vs kernel " + to_string(spec->bc), 3, err <= 1e-6, true,
             {{"max_relative_difference", err}, {"tolerance", 1e-6}}});
  }

  for (const Spectrum* spec : {&neu, &dir}) {
    const Eigen::MatrixXd k = KernelEvaluator(*spec, 0.9, J).matrix();
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      const auto p = mesh.reflection_permutation(i);
      for (Index x = 0; x < k.rows(); ++x)
        for (Index y = 0; y < k.rows(); ++y)
          worst = std::max(worst, std::abs(k(p[static_cast<std::size_t>(x)], p[static_cast<std::size_t>(y)]) - k(x, y)));
    }
    rep.add({"reflection invariance " + to_string(spec->bc), 3, worst <= 1e-8, true,
             {{"max_abs_difference", worst}, {"tolerance", 1e-8}}});
  }

  double scaling = 0.0;
  const auto few = std::vector<VertexPair>(pairs.begin(), pairs.begin() + 20);
  for (const Address& w : {Address{1}, Address{2, 0}, Address{0, 1, 2}}) {
    const SubcellSpectrum sub(neu, mesh, w);
    const auto n = static_cast<double>(w.size());
    for (double s : {0.6, 0.9, 1.3}) {
      const KernelEvaluator ev(neu, s, J);
      for (auto [x, y] : few) {
        const double lhs = sub.kernel(s, apply_contraction(w, mesh.vertex(x)), apply_contraction(w, mesh.vertex(y)), J);
        const double rhs = std::pow(3.0, n) * std::pow(5.0, -n * s) * ev.value(x, y);
        scaling = std::max(scaling, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
      }
    }
  }
  rep.add({"subcell scaling identity", 3, scaling <= 1e-9, true, {{"max_error", scaling}, {"tolerance", 1e-9}}});

  const Eigen::MatrixXd kn = KernelEvaluator(neu, 0.9, J).matrix();
  const double mean = (kn * neu.mass).cwiseAbs().maxCoeff();
  rep.add({"Neumann kernel mean zero", 3, mean <= 1e-7, true, {{"max_abs_row_mean", mean}, {"tolerance", 1e-7}}});
  const Eigen::MatrixXd kd = KernelEvaluator(dir, 0.9, J).matrix();
  double corner_max = 0.0;
  for (Index b : mesh.boundary()) corner_max = std::max(corner_max, kd.row(b).cwiseAbs().maxCoeff());
  rep.add({"Dirichlet kernel on V0", 3, corner_max == 0.0, true, {{"max_abs", corner_max}}});
  rep.parameters = {{"level", m}, {"jmax", J}};
}

void suite_stable_cf(Context& ctx, SuiteReport& rep) {
  const std::vector<double> grid{0.5, 1.0, 2.0};
  const std::size_t n = 100000;
  std::uint64_t stream = 10;
  for (double alpha : {0.7, 1.0, 1.5, 1.9}) {
    Rng rng(ctx.seed(stream++));
    std::vector<double> xs(n);
    for (auto& x : xs) x = standard_stable(rng, alpha);
    const CfGofResult r = cf_gof(xs, alpha, 1.0, grid);
    rep.add({"standard_stable CF alpha=" + format_double(alpha), 5, r.pass, true,
             {{"max_deviation", r.max_deviation}, {"threshold", r.threshold}, {"worst_u", r.worst_u}, {"n", n}}});
  }
  const double closed = 1.0 / (std::sqrt(2.0 / std::numbers::pi) * std::numbers::pi / 2.0);
  rep.add({"d_alpha at alpha=1", 5, std::abs(d_alpha(1.0) - closed) <= 1e-12, true,
           {{"value", d_alpha(1.0)}, {"closed_form", closed}}});
  nlohmann::json near_two = nlohmann::json::object();
  bool finite = true;
  for (double alpha : {1.9, 1.99, 1.999}) {
    near_two[format_double(alpha)] = d_alpha(alpha);
    finite = finite && std::isfinite(d_alpha(alpha));
  }
  rep.add({"d_alpha near 2", 5, finite, true, near_two});
  rep.parameters = {{"n", n}, {"u_grid", grid}};
}

void suite_lepage_vs_direct(Context& ctx, SuiteReport& rep) {
  const int m = ctx.config.level;
  const Index J = ctx.config.jmax;
  const GasketMesh& mesh = ctx.mesh(m);
  const Spectrum& neu = ctx.spectrum(m, BoundaryCondition::Neumann, J);
  const Index x0 = closest_vertex(mesh, Point(0.3, 0.15));
  const std::vector<std::pair<std::string, Eigen::VectorXd>> battery{
      {"phi_1", neu.eigenvectors.col(0)},
      {"phi_10", neu.eigenvectors.col(9)},
      {"G_0.9(x0,.)", KernelEvaluator(neu, 0.9, J).row(x0)}};
  const std::size_t reps = ctx.replicates(10000);
  const DrawOptions opts = ctx.draws();
  std::uint64_t stream = 20;
  for (double alpha : {0.7, 1.0, 1.5, 1.9}) {
    const std::uint64_t series_seed = ctx.seed(stream++);
    std::vector<std::vector<double>> series(battery.size(), std::vector<double>(reps));
    parallel_for(reps, ctx.config.threads, [&](std::size_t r) {
      const Eigen::VectorXd noise = snapped_noise(mesh, make_draw(derive_seed(series_seed, r), alpha, opts));
      for (std::size_t k = 0; k < battery.size(); ++k) series[k][r] = battery[k].second.dot(noise);
    });
    for (std::size_t k = 0; k < battery.size(); ++k) {
      Rng rng(ctx.seed(stream++));
      std::vector<double> direct(reps);
      for (auto& d : direct) d = direct_integral(battery[k].second, mesh, rng, alpha);
      rep.add(ks_check(battery[k].first + " alpha=" + format_double(alpha), 5, series[k], direct));
    }
  }
  rep.parameters = {{"level", m}, {"jmax", J}, {"n_terms", opts.n_terms}, {"replicates", reps},
                    {"bc", "neumann"}, {"x0", x0}, {"battery", {"phi_1", "phi_10", "G_0.9(x0,.)"}}};
}

void suite_field_marginals(Context& ctx, SuiteReport& rep) {
  const int m = ctx.config.level;
  const Index J = ctx.config.jmax;
  const GasketMesh& mesh = ctx.mesh(m);
  const Spectrum& neu = ctx.spectrum(m, BoundaryCondition::Neumann, J);
  const Spectrum& dir = ctx.spectrum(m, BoundaryCondition::Dirichlet, J);
  const DrawOptions opts = ctx.draws();
  const double s = 0.9;
  const std::size_t reps = ctx.replicates(1000);
  const Index x = closest_vertex(mesh, Point(0.3, 0.15));
  std::uint64_t stream = 40;

  Eigen::VectorXd g(mesh.vertex_count());
  for (Index v = 0; v < g.size(); ++v) g(v) = std::cos(4 * mesh.vertex(v).x());
  g.array() -= quadrature(g, mesh);

  for (double alpha : {1.2, 1.5}) {
    const FieldSimulator dsim(mesh, dir, s, alpha, J);
    double corner_max = 0.0;
    for (const auto& f : simulate_replicates(dsim, ctx.seed(stream++), 20, opts, ctx.config.threads))
      for (Index b : mesh.boundary()) corner_max = std::max(corner_max, std::abs(f.values(b)));
    rep.add({"Dirichlet field on V0 " + tag(alpha, s), 6, corner_max == 0.0, true, {{"max_abs", corner_max}}});

    const FieldSimulator sim(mesh, neu, s, alpha, J);
    const auto samples = simulate_replicates(sim, ctx.seed(stream++), reps, opts, ctx.config.threads);
    double worst_mean = 0.0;
    for (const auto& f : samples)
      worst_mean = std::max(worst_mean, std::abs(quadrature(f.values, mesh)) / f.values.cwiseAbs().maxCoeff());
    rep.add({"Neumann mean zero " + tag(alpha, s), 6, worst_mean <= 1e-4, true,
             {{"max_relative_mean", worst_mean}, {"tolerance", 1e-4}, {"realizations", samples.size()}}});

    const double scale = lp_norm(sim.kernel().row(x).transpose(), mesh, alpha);
    Rng rng(ctx.seed(stream++));
    std::vector<double> ref(10 * reps);
    for (auto& r : ref) r = scale * standard_stable(rng, alpha);
    Check marginal = ks_check("marginal at x " + tag(alpha, s), 6, at_vertex(samples, x), ref);
    marginal.detail["scale"] = scale;
    marginal.detail["vertex"] = x;
    rep.add(std::move(marginal));

    std::vector<double> paired, direct(reps);
    for (const auto& f : samples) paired.push_back(quadrature(Eigen::VectorXd(f.values.cwiseProduct(g)), mesh));
    Rng drng(ctx.seed(stream++));
    for (auto& d : direct) d = distributional_field(g, s, alpha, neu, mesh, drng, sim.truncation());
    const double gscale = distributional_scale(g, s, alpha, neu, mesh, sim.truncation());
    for (double u0 : {0.5, 1.0, 2.0}) {
      const double u = u0 / gscale;
      double a = 0, a2 = 0, b = 0, b2 = 0;
      for (std::size_t k = 0; k < reps; ++k) {
        const double ca = std::cos(u * paired[k]), cb = std::cos(u * direct[k]);
        a += ca, a2 += ca * ca, b += cb, b2 += cb * cb;
      }
      const auto n = static_cast<double>(reps);
      a /= n, a2 /= n, b /= n, b2 /= n;
      const double sigma = std::sqrt((a2 - a * a + b2 - b * b) / n);
      rep.add({"duality CF " + tag(alpha, s) + " u=" + format_double(u0) + "/scale", 6, std::abs(a - b) <= 3 * sigma, true,
               {{"cf_paired", a}, {"cf_direct", b}, {"mc_sigma", sigma}, {"scale", gscale}}});
    }
  }
  rep.parameters = {{"level", m}, {"jmax", J}, {"n_terms", opts.n_terms}, {"replicates", reps}, {"s", s},
                    {"test_function", "cos(4x) - mean"}};
}

void suite_symmetry(Context& ctx, SuiteReport& rep) {
  const int m = ctx.config.level;
  const Index J = ctx.config.jmax;
  const GasketMesh& mesh = ctx.mesh(m);
  const Spectrum& neu = ctx.spectrum(m, BoundaryCondition::Neumann, J);
  const DrawOptions opts = ctx.draws();
  const double s = 0.9;
  const std::size_t reps = ctx.replicates(1000);
  const Index x1 = closest_vertex(mesh, Point(0.3, 0.15)), x2 = closest_vertex(mesh, Point(0.62, 0.35));
  std::uint64_t stream = 60;
  for (double alpha : {1.5, 2.0}) {
    const FieldSimulator sim(mesh, neu, s, alpha, J);
    const auto a = simulate_replicates(sim, ctx.seed(stream++), reps, opts, ctx.config.threads);
    const auto b = simulate_replicates(sim, ctx.seed(stream++), reps, opts, ctx.config.threads);
    for (int i = 0; i < 3; ++i) {
      const auto p = mesh.reflection_permutation(i);
      const Index y1 = p[static_cast<std::size_t>(x1)], y2 = p[static_cast<std::size_t>(x2)];
      const std::string name = "sigma_" + std::to_string(i) + " " + tag(alpha, s);
      rep.add(ks_check(name + " marginal", 7, at_vertex(a, y1), at_vertex(b, x1)));
      rep.add(ks_check(name + " pair sum", 7, pair_sum(a, y1, y2), pair_sum(b, x1, x2)));
    }
  }
  rep.parameters = {{"level", m}, {"jmax", J}, {"n_terms", opts.n_terms}, {"replicates", reps}, {"s", s},
                    {"x1", x1}, {"x2", x2}};
}

void suite_scaling(Context& ctx, SuiteReport& rep) {
  const int m = ctx.config.level;
  const Index J = ctx.config.jmax;
  const GasketMesh& mesh = ctx.mesh(m);
  const Spectrum& neu = ctx.spectrum(m, BoundaryCondition::Neumann, J);
  const DrawOptions opts = ctx.draws();
  const double s = 0.9;
  const Address w{1};
  const std::size_t reps = ctx.replicates(1000);
  const Index x1 = closest_vertex(mesh, Point(0.3, 0.15)), x2 = closest_vertex(mesh, Point(0.62, 0.35));
  std::uint64_t stream = 80;
  for (double alpha : {1.5, 2.0}) {
    const FieldSimulator sub = FieldSimulator::subcell(mesh, neu, w, s, alpha, J);
    const FieldSimulator base(mesh, neu, s, alpha, J);
    const auto a = simulate_replicates(sub, ctx.seed(stream++), reps, opts, ctx.config.threads);
    const auto b = simulate_replicates(base, ctx.seed(stream++), reps, opts, ctx.config.threads);
    const std::string name = "w=" + w.to_string() + " " + tag(alpha, s);
    Check marginal = ks_check(name + " marginal", 7, at_vertex(a, x1), at_vertex(b, x1));
    marginal.detail["hurst"] = HurstIndex::of(s, alpha).value;
    rep.add(std::move(marginal));
    rep.add(ks_check(name + " pair sum", 7, pair_sum(a, x1, x2), pair_sum(b, x1, x2)));
  }
  rep.parameters = {{"level", m}, {"jmax", J}, {"n_terms", opts.n_terms}, {"replicates", reps}, {"s", s},
                    {"address", w.to_string()}, {"x1", x1}, {"x2", x2}};
}

void suite_holder_paths(Context& ctx, SuiteReport& rep) {
  const int m = ctx.config.level;
  const GasketMesh& mesh = ctx.mesh(m);
  const Spectrum& full = ctx.spectrum(m, BoundaryCondition::Neumann, 0);
  const DrawOptions opts = ctx.draws();
  const std::size_t reps = ctx.replicates(200);
  std::uint64_t stream = 100;
  auto estimate = [&](double alpha, double s) {
    const FieldSimulator sim(mesh, full, s, alpha);
    return holder_exponent_estimate(mesh, simulate_replicates(sim, ctx.seed(stream++), reps, opts, ctx.config.threads));
  };
  auto detail = [](const RegularityReport& r) {
    nlohmann::json scales = nlohmann::json::array();
    for (const auto& p : r.per_scale) scales.push_back({{"j", p.j}, {"mean_log_max", p.mean_log_max}});
    return nlohmann::json{{"estimate", r.estimate}, {"target", r.target}, {"tolerance", r.tolerance},
                          {"log_power", r.log_power}, {"replicates", r.replicates}, {"per_scale", scales}};
  };
  for (auto [alpha, s] : {std::pair{2.0, 1.0}, {1.5, 0.8}, {1.2, 1.3}}) {
    const RegularityReport r = estimate(alpha, s);
    rep.add({"path exponent " + tag(alpha, s), 8, r.pass, true, detail(r)});
  }
  // Gaussian calibration; at s < 1 the alpha = 2 field is smoother than eta_s
  for (double s : {0.8, 1.3}) {
    const RegularityReport r = estimate(2.0, s);
    nlohmann::json d = detail(r);
    if (s < 1.0) d["gaussian_exponent"] = std::min(s * kWalkDim - kHausdorffDim / 2, kWalkDim - kHausdorffDim);
    rep.add({"Gaussian calibration s=" + format_double(s), 0, r.pass, s >= 1.0, d});
  }
  rep.parameters = {{"level", m}, {"truncation", "full"}, {"n_terms", opts.n_terms}, {"replicates", reps},
                    {"bc", "neumann"}};
}

void suite_divergence(Context& ctx, SuiteReport& rep) {
  const int m = ctx.config.level;
  if (m < 4) throw ContractError("divergence suite needs level >= 4");
  const std::vector<int> levels{m - 2, m - 1, m};
  DivergenceOptions opts;
  opts.replicates = ctx.replicates(200);
  opts.n_terms = ctx.config.n_terms;
  opts.threads = ctx.config.threads;
  auto detail = [](const DivergenceReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) rows.push_back({{"level", row.level}, {"median_max", row.median_max}});
    return nlohmann::json{{"rows", rows}, {"strictly_increasing", r.strictly_increasing},
                          {"max_relative_change", r.max_relative_change}, {"verdict", r.verdict}};
  };
  opts.seed = ctx.seed(120);
  const DivergenceReport rough = divergence_diagnostic(0.5, 1.2, BoundaryCondition::Neumann, levels, opts);
  rep.add({"divergence " + tag(1.2, 0.5), 8, rough.strictly_increasing, true, detail(rough)});
  opts.seed = ctx.seed(121);
  const DivergenceReport control = divergence_diagnostic(1.2, 1.5, BoundaryCondition::Neumann, levels, opts);
  rep.add({"control " + tag(1.5, 1.2), 0, control.verdict == "stable", true, detail(control)});
  rep.parameters = {{"levels", levels}, {"truncation", "full"}, {"n_terms", opts.n_terms},
                    {"replicates", opts.replicates}, {"bc", "neumann"}};
}

using SuiteFn = void (*)(Context&, SuiteReport&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites{
      {"ahlfors", suite_ahlfors},
      {"kernel-bounds", suite_kernel_bounds},
      {"kernel-holder", suite_kernel_holder},
      {"semigroup", suite_semigroup},
      {"stable-cf", suite_stable_cf},
      {"lepage-vs-direct", suite_lepage_vs_direct},
      {"field-marginals", suite_field_marginals},
      {"symmetry", suite_symmetry},
      {"scaling", suite_scaling},
      {"holder-paths", suite_holder_paths},
      {"divergence", suite_divergence}};
  return suites;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

SuiteReport run_suite(const std::string& name, const VerifyConfig& config) {
  for (const auto& [suite, fn] : registry()) {
    if (suite != name) continue;
    Context ctx(config);
    SuiteReport rep;
    rep.suite = name;
    const auto start = std::chrono::steady_clock::now();
    fn(ctx, rep);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
  }
  throw ContractError("unknown suite '" + name + "'");
}

}  // namespace sgfield
