#ifndef SGFIELD_ANALYSIS_HPP_
#define SGFIELD_ANALYSIS_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sgfield/fields.hpp"
#include "sgfield/geometry.hpp"
#include "sgfield/spectral.hpp"

namespace sgfield {

inline constexpr double kSignificance = 0.01;

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool passes(double level = kSignificance) const { return p_value >= level; }
};

/// Asymptotic Kolmogorov survival function Q(l) = 2 sum_k (-1)^{k-1} exp(-2 k^2 l^2).
double kolmogorov_survival(double lambda);

/// Two-sample Kolmogorov-Smirnov test; both samples need at least 500 values.
KsResult two_sample(std::span<const double> a, std::span<const double> b);

struct CfGofResult {
  double max_deviation = 0.0;
  double threshold = 0.0;  // 3/sqrt(n)
  double worst_u = 0.0;
  bool pass = false;
};

/// max over u of |empirical CF(u) - exp(-|u scale|^alpha)| against 3/sqrt(n).
CfGofResult cf_gof(std::span<const double> samples, double alpha, double scale, std::span<const double> u_grid);

/// Hoelder exponent eta_s = min(s,1) d_w - d_h.
double holder_target(double s);
/// Logarithmic power beta_s: 0 for s < 1, 1 for s >= 1.
int holder_log_power(double s);

/// Level-j edge lists j = 1..m-1 of a mesh, reused for every sample.
class IncrementScales {
 public:
  explicit IncrementScales(const GasketMesh& mesh);
  int level() const { return level_; }
  /// max |X(a) - X(b)| over level-j edges, for j = 1..m-1.
  std::vector<double> max_increments(const Eigen::VectorXd& values) const;

 private:
  int level_;
  std::vector<std::vector<std::array<Index, 2>>> edges_;
};

/// Least-squares slope of log(max increment) against log(2^{-j}); needs >= 2 scales.
double fit_increment_exponent(std::span<const int> levels, std::span<const double> max_increments);

struct ScaleIncrement {
  int j = 0;
  double scale = 0.0;
  double mean_log_max = 0.0;  // average of log max increment over replicates
};

struct RegularityReport {
  double s = 0.0;
  double alpha = 0.0;
  BoundaryCondition bc = BoundaryCondition::Neumann;
  double estimate = 0.0;
  double target = 0.0;
  int log_power = 0;
  double tolerance = 0.15;
  std::size_t replicates = 0;
  std::vector<ScaleIncrement> per_scale;
  bool pass = false;
};

/// Mean over replicates of the per-replicate increment exponent (scales j = 1..m-1).
/// Refuses divergent-regime samples (s <= d_h/d_w) and meshes below level 5.
RegularityReport holder_exponent_estimate(const GasketMesh& mesh, std::span<const FieldSample> samples,
                                          double tolerance = 0.15);

struct DivergenceOptions {
  std::size_t replicates = 200;
  std::size_t n_terms = 10000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct DivergenceRow {
  int level = 0;
  double median_max = 0.0;
};

struct DivergenceReport {
  double s = 0.0;
  double alpha = 0.0;
  BoundaryCondition bc = BoundaryCondition::Neumann;
  std::vector<DivergenceRow> rows;
  bool strictly_increasing = false;
  double max_relative_change = 0.0;  // max |r_k / r_0 - 1|
  std::string verdict;
};

/// Median over seeds of max_{V_m} |field| for each level (full spectrum per level).
DivergenceReport divergence_diagnostic(double s, double alpha, BoundaryCondition bc, const std::vector<int>& levels,
                                       const DivergenceOptions& options = {});

double median(std::vector<double> values);

}  // namespace sgfield

#endif  // SGFIELD_ANALYSIS_HPP_
