#include "sgfield/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace sgfield {

std::string to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::Neumann ? "neumann" : "dirichlet";
}

BoundaryCondition parse_boundary_condition(const std::string& text) {
  if (text == "neumann" || text == "N") return BoundaryCondition::Neumann;
  if (text == "dirichlet" || text == "D") return BoundaryCondition::Dirichlet;
  throw ContractError("unknown boundary condition '" + text + "' (expected neumann|dirichlet)");
}

double EnergyForm::energy(const Eigen::VectorXd& f) const {
  Eigen::VectorXd local(static_cast<Index>(dofs.size()));
  if (f.size() == vertex_count) {
    for (std::size_t k = 0; k < dofs.size(); ++k) local(static_cast<Index>(k)) = f(dofs[k]);
  } else if (f.size() == local.size()) {
    local = f;
  } else {
    throw ContractError("energy: vector length does not match the form");
  }
  return local.dot(stiffness * local);
}

EnergyForm assemble_form(const GasketMesh& mesh, BoundaryCondition bc) {
  const Index n = mesh.vertex_count();
  const double renorm = std::pow(5.0 / 3.0, mesh.level());

  // E_m(f,f) = 1/2 (5/3)^m sum_cells sum_{x,y in cell} (f(x)-f(y))^2; each
  // unordered pair of a cell contributes one squared difference.
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n, n);
  for (const Cell& c : mesh.cells()) {
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (a != b) full(c.vertices[a], c.vertices[b]) -= renorm;
  }
  for (Index v = 0; v < n; ++v) full(v, v) = -full.row(v).sum();

  EnergyForm form;
  form.level = mesh.level();
  form.bc = bc;
  form.vertex_count = n;
  form.full_mass = mesh.mass_weights();
  for (Index v = 0; v < n; ++v)
    if (bc == BoundaryCondition::Neumann || !mesh.is_boundary(v)) form.dofs.push_back(v);

  const auto k = static_cast<Index>(form.dofs.size());
  if (k == n) {
    form.stiffness = std::move(full);
    form.mass = form.full_mass;
  } else {
    form.stiffness.resize(k, k);
    form.mass.resize(k);
    for (Index a = 0; a < k; ++a) {
      form.mass(a) = form.full_mass(form.dofs[a]);
      for (Index b = 0; b < k; ++b) form.stiffness(a, b) = full(form.dofs[a], form.dofs[b]);
    }
  }
  return form;
}

Index Spectrum::cluster_end(Index J) const {
  if (J <= 0) return 0;
  J = std::min(J, size());
  while (J < size()) {
    const double a = eigenvalues(J - 1);
    const double b = eigenvalues(J);
    if (b - a > 1e-8 * std::max(1.0, std::abs(b))) break;
    ++J;
  }
  return J;
}

Index Spectrum::resolve_truncation(Index J) const {
  if (J < 0) throw ContractError("truncation must be >= 0");
  if (J == 0) return size();
  if (J > size())
    throw ContractError("truncation " + std::to_string(J) + " exceeds the " + std::to_string(size()) +
                        " available eigenpairs");
  return J;
}

Spectrum solve_spectrum(const EnergyForm& form, Index j_max) {
  const Index k = form.stiffness.rows();
  const Index available = form.bc == BoundaryCondition::Neumann ? k - 1 : k;
  if (k > kMaxDenseDimension)
    throw CapacityError("dense eigenproblem of dimension " + std::to_string(k) + " exceeds the budget");
  if (j_max < 0 || j_max > available)
    throw ContractError("j_max " + std::to_string(j_max) + " exceeds the " + std::to_string(available) +
                        " admissible eigenpairs");
  if (j_max == 0) j_max = available;

  // Diagonal mass: S phi = lambda M phi  <=>  (M^-1/2 S M^-1/2) u = lambda u,  phi = M^-1/2 u.
  const Eigen::VectorXd inv_sqrt = form.mass.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd reduced = inv_sqrt.asDiagonal() * form.stiffness * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(reduced);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigensolver did not converge (dimension " + std::to_string(k) + ")");
  }

  const Index first = form.bc == BoundaryCondition::Neumann ? 1 : 0;
  if (form.bc == BoundaryCondition::Neumann && std::abs(solver.eigenvalues()(0)) > 1e-8 * solver.eigenvalues()(k - 1))
    throw NumericError("Neumann form has no numerically zero eigenvalue");

  Spectrum spec;
  spec.bc = form.bc;
  spec.level = form.level;
  spec.mass = form.full_mass;
  spec.eigenvalues = solver.eigenvalues().segment(first, j_max);
  const Eigen::MatrixXd local = inv_sqrt.asDiagonal() * solver.eigenvectors().middleCols(first, j_max);
  spec.eigenvectors = Eigen::MatrixXd::Zero(form.vertex_count, j_max);
  for (std::size_t d = 0; d < form.dofs.size(); ++d)
    spec.eigenvectors.row(form.dofs[d]) = local.row(static_cast<Index>(d));

  // Residual check ||S phi - lambda M phi|| relative to lambda.
  const Eigen::MatrixXd residual =
      form.stiffness * local - form.mass.asDiagonal() * local * spec.eigenvalues.asDiagonal();
  const double worst = (residual.colwise().norm().array() / spec.eigenvalues.array().abs().max(1.0)).maxCoeff();
  if (!(worst < 1e-6)) throw NumericError("eigenpair residual too large: " + std::to_string(worst));
  return spec;
}

Eigen::VectorXd heat_kernel_row(double t, Index xi, const Spectrum& spec, Index J) {
  if (!(t > 0.0)) throw DomainError("heat kernel requires t > 0");
  J = spec.resolve_truncation(J);
  const Eigen::VectorXd damp = (-t * spec.eigenvalues.head(J).array()).exp();
  Eigen::VectorXd row =
      spec.eigenvectors.leftCols(J) * (damp.array() * spec.eigenvectors.row(xi).head(J).transpose().array()).matrix();
  if (spec.bc == BoundaryCondition::Neumann) row.array() += 1.0;
  return row;
}

double heat_kernel(double t, Index xi, Index yi, const Spectrum& spec, Index J) {
  if (!(t > 0.0)) throw DomainError("heat kernel requires t > 0");
  J = spec.resolve_truncation(J);
  // Summed in a fixed order of symmetric terms, so p_t(x,y) == p_t(y,x) bitwise.
  double sum = spec.bc == BoundaryCondition::Neumann ? 1.0 : 0.0;
  for (Index j = 0; j < J; ++j)
    sum += std::exp(-spec.eigenvalues(j) * t) * (spec.eigenvectors(xi, j) * spec.eigenvectors(yi, j));
  return sum;
}

}  // namespace sgfield
