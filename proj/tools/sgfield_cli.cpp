// sgfield: mesh, spectrum, kernel, stable, simulate and verify front end.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "sgfield/analysis.hpp"
#include "sgfield/fields.hpp"
#include "sgfield/io.hpp"
#include "sgfield/riesz.hpp"
#include "sgfield/spectral.hpp"
#include "sgfield/stable.hpp"
#include "sgfield/verify.hpp"

namespace fs = std::filesystem;
using namespace sgfield;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kNumeric = 3 };

struct RunConfig {
  std::string subcommand;
  int level = 6;
  std::string bc = "neumann";
  double s = 0.9;
  double alpha = 1.5;
  Index jmax = 200;
  std::size_t n_terms = 10000;
  std::uint64_t seed = 1;
  std::size_t replicates = 1;
  std::string out = ".";
  unsigned threads = 1;
  std::vector<std::string> suites{"all"};
  std::string config_file;

  nlohmann::json to_json() const {
    return {{"subcommand", subcommand}, {"level", level}, {"bc", bc}, {"s", s}, {"alpha", alpha},
            {"jmax", jmax}, {"n_terms", n_terms}, {"seed", seed}, {"replicates", replicates},
            {"out", out}, {"threads", threads}, {"suite", suites}, {"config", config_file}};
  }
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json provenance(const RunConfig& cfg) {
  return {{"version", library_version()}, {"run_config", cfg.to_json()}};
}

// one-line JSON header so that every CSV carries its own run configuration
std::string csv_header(const RunConfig& cfg) { return "# sgfield " + provenance(cfg).dump() + "\n"; }

void write_csv(const RunConfig& cfg, const std::string& name, const std::function<void(std::ostream&)>& body) {
  std::ostringstream out;
  out << csv_header(cfg);
  body(out);
  write_text_file(fs::path(cfg.out) / name, out.str());
}

void write_json(const RunConfig& cfg, const std::string& name, nlohmann::json doc) {
  doc["provenance"] = provenance(cfg);
  write_text_file(fs::path(cfg.out) / name, doc.dump(2) + "\n");
}

// Values from the config file fill options that were not given on the command line.
void apply_config_file(CLI::App& app, RunConfig& cfg) {
  if (cfg.config_file.empty()) return;
  std::ifstream in(cfg.config_file);
  if (!in) throw UsageError("cannot read config file " + cfg.config_file);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file " + cfg.config_file + ": " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config file must hold a JSON object");
  auto given = [&](const std::string& flag) { return app.count("--" + flag) > 0; };
  try {
    for (const auto& [key, value] : doc.items()) {
      if (given(key)) continue;
      if (key == "level") cfg.level = value.get<int>();
      else if (key == "bc") cfg.bc = value.get<std::string>();
      else if (key == "s") cfg.s = value.get<double>();
      else if (key == "alpha") cfg.alpha = value.get<double>();
      else if (key == "jmax") cfg.jmax = value.get<Index>();
      else if (key == "n-terms") cfg.n_terms = value.get<std::size_t>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "replicates") cfg.replicates = value.get<std::size_t>();
      else if (key == "out") cfg.out = value.get<std::string>();
      else if (key == "threads") cfg.threads = value.get<unsigned>();
      else if (key == "suite") cfg.suites = value.is_array() ? value.get<std::vector<std::string>>()
                                                             : std::vector<std::string>{value.get<std::string>()};
      else throw UsageError("config file: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file " + cfg.config_file + ": " + e.what());
  }
}

void validate(const RunConfig& cfg) {
  if (cfg.level < 0 || cfg.level > kMaxMeshLevel)
    throw UsageError("--level must be in [0, " + std::to_string(kMaxMeshLevel) + "]");
  parse_boundary_condition(cfg.bc);
  if (cfg.jmax < 0) throw UsageError("--jmax must be >= 0 (0 keeps every eigenpair)");
  if (cfg.n_terms == 0) throw UsageError("--n-terms must be >= 1");
  if (cfg.replicates == 0 && cfg.subcommand != "verify") throw UsageError("--replicates must be >= 1");
  const std::string& sub = cfg.subcommand;
  if (sub == "spectrum" || sub == "kernel" || sub == "simulate") {
    const std::int64_t dofs = expected_vertex_count(cfg.level);
    if (dofs > kMaxDenseDimension)
      throw UsageError("--level " + std::to_string(cfg.level) + " gives " + std::to_string(dofs) +
                       " vertices, above the dense eigensolver limit " + std::to_string(kMaxDenseDimension));
  }
  if (sub == "kernel" || sub == "simulate")
    if (!(cfg.s > 0.0)) throw UsageError("--s must be > 0");
  if (sub == "stable" || sub == "simulate")
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 2.0)) throw UsageError("--alpha must be in (0, 2]");
  if (sub == "simulate") check_field_order(cfg.s, cfg.alpha);
  if (sub == "verify") {
    for (const auto& name : cfg.suites) {
      if (name == "all") continue;
      const auto& known = suite_names();
      if (std::find(known.begin(), known.end(), name) == known.end())
        throw UsageError("unknown suite '" + name + "'");
    }
  }
}

Spectrum spectrum_for(const RunConfig& cfg, const GasketMesh& mesh) {
  return solve_spectrum(assemble_form(mesh, parse_boundary_condition(cfg.bc)), cfg.jmax);
}

int run_mesh(const RunConfig& cfg) {
  const GasketMesh mesh = build_mesh(cfg.level);
  write_csv(cfg, "vertices.csv", [&](std::ostream& o) { write_vertices_csv(o, mesh); });
  write_csv(cfg, "cells.csv", [&](std::ostream& o) { write_cells_csv(o, mesh); });
  std::cout << "mesh level " << cfg.level << ": " << mesh.vertex_count() << " vertices, " << mesh.cell_count()
            << " cells\n";
  return kOk;
}

int run_spectrum(const RunConfig& cfg) {
  const GasketMesh mesh = build_mesh(cfg.level);
  const Spectrum spec = spectrum_for(cfg, mesh);
  write_csv(cfg, "eigenvalues.csv", [&](std::ostream& o) { write_eigenvalues_csv(o, spec); });
  write_csv(cfg, "eigenvectors.csv", [&](std::ostream& o) { write_eigenvectors_csv(o, spec); });
  std::cout << "spectrum: " << spec.size() << " eigenpairs, lambda_1 = " << format_double(spec.eigenvalues(0)) << '\n';
  return kOk;
}

int run_kernel(const RunConfig& cfg) {
  const GasketMesh mesh = build_mesh(cfg.level);
  const Spectrum spec = spectrum_for(cfg, mesh);
  const KernelEvaluator ev(spec, cfg.s, cfg.jmax);
  const Eigen::MatrixXd g = ev.matrix();
  // the diagonal is written only where the kernel is bounded there
  const bool diagonal = cfg.s > kCriticalOrder;
  write_csv(cfg, "kernel.csv", [&](std::ostream& o) {
    o << "xi,yi,d,G\n";
    for (Index x = 0; x < g.rows(); ++x)
      for (Index y = diagonal ? x : x + 1; y < g.rows(); ++y)
        o << x << ',' << y << ',' << format_double((mesh.vertex(x) - mesh.vertex(y)).norm()) << ','
          << format_double(g(x, y)) << '\n';
  });
  std::cout << "kernel: s = " << format_double(cfg.s) << ", truncation " << ev.truncation() << '\n';
  return kOk;
}

int run_stable(const RunConfig& cfg) {
  Rng rng(derive_seed(cfg.seed, 0));
  write_csv(cfg, "stable.csv", [&](std::ostream& o) {
    o << "replicate_id,value\n";
    for (std::size_t r = 0; r < cfg.replicates; ++r) o << r << ',' << format_double(standard_stable(rng, cfg.alpha)) << '\n';
  });
  return kOk;
}

int run_simulate(const RunConfig& cfg) {
  const GasketMesh mesh = build_mesh(cfg.level);
  const Spectrum spec = spectrum_for(cfg, mesh);
  const FieldSimulator sim(mesh, spec, cfg.s, cfg.alpha, cfg.jmax);
  DrawOptions opts;
  opts.n_terms = cfg.n_terms;
  const auto samples = simulate_replicates(sim, cfg.seed, cfg.replicates, opts, cfg.threads);
  write_csv(cfg, "field.csv", [&](std::ostream& o) { write_field_csv(o, mesh, samples); });
  nlohmann::json meta = nlohmann::json::array();
  for (const auto& sample : samples) meta.push_back(to_json(sample.meta));
  write_json(cfg, "field.json",
             {{"hurst_index", HurstIndex::of(cfg.s, cfg.alpha).value},
              {"integrability_threshold", integrability_threshold(cfg.alpha)},
              {"vertices", mesh.vertex_count()},
              {"replicates", meta}});
  if (samples.front().meta.divergent_regime)
    std::cerr << "note: s <= d_h/d_w, paths are unbounded as the level grows\n";
  std::cout << "simulate: " << samples.size() << " replicate(s) on " << mesh.vertex_count() << " vertices\n";
  return kOk;
}

int run_verify(const RunConfig& cfg) {
  std::vector<std::string> suites;
  for (const auto& name : cfg.suites) {
    if (name == "all")
      suites.insert(suites.end(), suite_names().begin(), suite_names().end());
    else
      suites.push_back(name);
  }
  VerifyConfig vc;
  vc.level = cfg.level;
  vc.jmax = cfg.jmax;
  vc.n_terms = cfg.n_terms;
  vc.seed = cfg.seed;
  vc.replicates = cfg.replicates;
  vc.threads = cfg.threads;
  bool ok = true;
  for (const auto& name : suites) {
    const SuiteReport rep = run_suite(name, vc);
    write_json(cfg, "verify_" + name + ".json", rep.to_json());
    std::size_t failed = 0;
    for (const auto& c : rep.checks) failed += c.asserted && !c.pass;
    std::cout << (rep.pass ? "PASS " : "FAIL ") << name << "  (" << rep.checks.size() << " checks, " << failed
              << " failed, " << format_double(std::round(rep.seconds * 10) / 10) << " s)\n";
    ok = ok && rep.pass;
  }
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional alpha-stable fields on the Sierpinski gasket"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  RunConfig cfg;
  cfg.replicates = 0;  // resolved after parsing
  app.set_version_flag("--version", library_version());
  app.add_option("--config", cfg.config_file, "JSON file of flag values; command-line flags win");
  app.add_option("--level", cfg.level, "mesh level m");
  app.add_option("--bc", cfg.bc, "neumann or dirichlet");
  app.add_option("--s", cfg.s, "Riesz order s");
  app.add_option("--alpha", cfg.alpha, "stability index alpha in (0, 2]");
  app.add_option("--jmax", cfg.jmax, "spectral truncation J (0 = full)");
  app.add_option("--n-terms", cfg.n_terms, "LePage series terms N");
  app.add_option("--seed", cfg.seed, "master seed");
  app.add_option("--replicates", cfg.replicates, "replicate count (verify: override suite defaults)");
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--threads", cfg.threads, "worker cap (0 = hardware concurrency)");
  app.add_option("--suite", cfg.suites, "verification suites, or all")->delimiter(',');

  const std::vector<std::pair<std::string, std::string>> subs{
      {"mesh", "write vertices.csv and cells.csv"},
      {"spectrum", "write eigenvalues.csv and eigenvectors.csv"},
      {"kernel", "write kernel.csv (xi, yi, d, G)"},
      {"stable", "write stable.csv of standard SaS variates"},
      {"simulate", "write field.csv and field.json"},
      {"verify", "run verification suites, one JSON report each"}};
  for (const auto& [name, help] : subs) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    apply_config_file(app, cfg);
    if (app.count("--replicates") == 0 && cfg.replicates == 0 && cfg.subcommand != "verify") cfg.replicates = 1;
    validate(cfg);
    fs::create_directories(cfg.out);
    const std::string& sub = cfg.subcommand;
    if (sub == "mesh") return run_mesh(cfg);
    if (sub == "spectrum") return run_spectrum(cfg);
    if (sub == "kernel") return run_kernel(cfg);
    if (sub == "stable") return run_stable(cfg);
    if (sub == "simulate") return run_simulate(cfg);
    return run_verify(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ContractError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const CapacityError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ResolutionError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumeric;
  }
}
