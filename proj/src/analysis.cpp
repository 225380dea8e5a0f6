#include "sgfield/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sgfield {

double kolmogorov_survival(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 500 || b.size() < 500)
    throw ContractError("two_sample: each sample needs at least 500 values");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const auto n = static_cast<double>(x.size());
  const auto m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  const double ne = std::sqrt(n * m / (n + m));
  KsResult result;
  result.statistic = d;
  result.p_value = kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d);
  return result;
}

CfGofResult cf_gof(std::span<const double> samples, double alpha, double scale, std::span<const double> u_grid) {
  if (samples.size() < 1000) throw ContractError("cf_gof: need at least 1000 replicates");
  if (u_grid.empty()) throw ContractError("cf_gof: empty u grid");
  const auto n = static_cast<double>(samples.size());
  CfGofResult out;
  out.threshold = 3.0 / std::sqrt(n);
  for (double u : u_grid) {
    double re = 0.0, im = 0.0;
    for (double x : samples) {
      re += std::cos(u * x);
      im += std::sin(u * x);
    }
    re /= n;
    im /= n;
    const double target = std::exp(-std::pow(std::abs(u * scale), alpha));
    const double dev = std::hypot(re - target, im);
    if (dev > out.max_deviation) {
      out.max_deviation = dev;
      out.worst_u = u;
    }
  }
  out.pass = out.max_deviation <= out.threshold;
  return out;
}

double holder_target(double s) { return std::min(s, 1.0) * kWalkDim - kHausdorffDim; }

int holder_log_power(double s) { return s >= 1.0 ? 1 : 0; }

IncrementScales::IncrementScales(const GasketMesh& mesh) : level_(mesh.level()) {
  for (int j = 1; j <= level_ - 1; ++j) edges_.push_back(mesh.level_edges(j));
}

std::vector<double> IncrementScales::max_increments(const Eigen::VectorXd& values) const {
  std::vector<double> out;
  out.reserve(edges_.size());
  for (const auto& edges : edges_) {
    double best = 0.0;
    for (const auto& [a, b] : edges) best = std::max(best, std::abs(values(a) - values(b)));
    out.push_back(best);
  }
  return out;
}

double fit_increment_exponent(std::span<const int> levels, std::span<const double> max_increments) {
  if (levels.size() != max_increments.size()) throw ContractError("fit_increment_exponent: length mismatch");
  if (levels.size() < 2) throw ContractError("fit_increment_exponent: regression needs at least 2 scales");
  std::vector<double> x, y;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (!(max_increments[k] > 0.0)) throw ContractError("fit_increment_exponent: non-positive increment");
    x.push_back(-static_cast<double>(levels[k]) * std::log(2.0));
    y.push_back(std::log(max_increments[k]));
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (!(sxx > 0.0)) throw ContractError("fit_increment_exponent: regression needs at least 2 distinct scales");
  return sxy / sxx;
}

RegularityReport holder_exponent_estimate(const GasketMesh& mesh, std::span<const FieldSample> samples,
                                          double tolerance) {
  if (samples.empty()) throw ContractError("holder_exponent_estimate: no samples");
  if (mesh.level() < 5) throw ContractError("holder_exponent_estimate: mesh level must be >= 5");
  const FieldMeta& meta = samples.front().meta;
  if (meta.divergent_regime || !(meta.s > kCriticalOrder))
    throw ContractError("holder_exponent_estimate: divergent-regime sample (s <= d_h/d_w), paths are unbounded");

  const IncrementScales scales(mesh);
  std::vector<int> levels;
  for (int j = 1; j <= mesh.level() - 1; ++j) levels.push_back(j);

  RegularityReport report;
  report.s = meta.s;
  report.alpha = meta.alpha;
  report.bc = meta.bc;
  report.target = holder_target(meta.s);
  report.log_power = holder_log_power(meta.s);
  report.tolerance = tolerance;
  report.replicates = samples.size();
  std::vector<double> mean_log(levels.size(), 0.0);
  double slope_sum = 0.0;
  for (const auto& sample : samples) {
    if (sample.values.size() != mesh.vertex_count()) throw ContractError("sample does not match mesh");
    const auto maxima = scales.max_increments(sample.values);
    slope_sum += fit_increment_exponent(levels, maxima);
    for (std::size_t k = 0; k < maxima.size(); ++k) mean_log[k] += std::log(maxima[k]);
  }
  const auto count = static_cast<double>(samples.size());
  for (std::size_t k = 0; k < levels.size(); ++k)
    report.per_scale.push_back({levels[k], std::ldexp(1.0, -levels[k]), mean_log[k] / count});
  report.estimate = slope_sum / count;
  report.pass = std::abs(report.estimate - report.target) <= tolerance;
  return report;
}

double median(std::vector<double> values) {
  if (values.empty()) throw ContractError("median of empty list");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  const double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

DivergenceReport divergence_diagnostic(double s, double alpha, BoundaryCondition bc, const std::vector<int>& levels,
                                       const DivergenceOptions& options) {
  if (levels.empty()) throw ContractError("divergence_diagnostic: empty level list");
  DivergenceReport report;
  report.s = s;
  report.alpha = alpha;
  report.bc = bc;
  DrawOptions draw_opts;
  draw_opts.n_terms = options.n_terms;
  for (int m : levels) {
    const GasketMesh mesh = build_mesh(m);
    const Spectrum spec = solve_spectrum(assemble_form(mesh, bc));
    const FieldSimulator sim(mesh, spec, s, alpha);
    const auto samples = simulate_replicates(sim, options.seed, options.replicates, draw_opts, options.threads);
    std::vector<double> maxima;
    maxima.reserve(samples.size());
    for (const auto& sample : samples) maxima.push_back(sample.values.cwiseAbs().maxCoeff());
    report.rows.push_back({m, median(maxima)});
  }
  report.strictly_increasing = true;
  for (std::size_t k = 1; k < report.rows.size(); ++k) {
    if (!(report.rows[k].median_max > report.rows[k - 1].median_max)) report.strictly_increasing = false;
    report.max_relative_change = std::max(report.max_relative_change,
                                          std::abs(report.rows[k].median_max / report.rows[0].median_max - 1.0));
  }
  if (report.rows.size() < 2)
    report.verdict = "single level";
  else if (report.strictly_increasing)
    report.verdict = "consistent with unboundedness";
  else if (report.max_relative_change <= 0.2)
    report.verdict = "stable";
  else
    report.verdict = "inconclusive";
  return report;
}

}  // namespace sgfield
