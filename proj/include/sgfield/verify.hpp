#ifndef SGFIELD_VERIFY_HPP_
#define SGFIELD_VERIFY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgfield/geometry.hpp"

namespace sgfield {

struct VerifyConfig {
  int level = 6;
  Index jmax = 200;
  std::size_t n_terms = 10000;
  std::uint64_t seed = 1;
  std::size_t replicates = 0;  // 0: the suite's own default
  unsigned threads = 1;
};

/// One statistic of a suite. Informational checks are reported but do not
/// decide the verdict.
struct Check {
  std::string name;
  int criterion = 0;
  bool pass = false;
  bool asserted = true;
  nlohmann::json detail;
};

struct SuiteReport {
  std::string suite;
  bool pass = true;
  double seconds = 0.0;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<Check> checks;

  void add(Check check);
  nlohmann::json to_json() const;
};

/// ahlfors, kernel-bounds, kernel-holder, semigroup, stable-cf, lepage-vs-direct,
/// field-marginals, symmetry, scaling, holder-paths, divergence.
const std::vector<std::string>& suite_names();

/// Throws ContractError for an unknown suite name.
SuiteReport run_suite(const std::string& name, const VerifyConfig& config);

}  // namespace sgfield

#endif  // SGFIELD_VERIFY_HPP_
