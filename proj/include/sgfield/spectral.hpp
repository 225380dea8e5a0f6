#ifndef SGFIELD_SPECTRAL_HPP_
#define SGFIELD_SPECTRAL_HPP_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "sgfield/geometry.hpp"

namespace sgfield {

enum class BoundaryCondition { Neumann, Dirichlet };

std::string to_string(BoundaryCondition bc);
BoundaryCondition parse_boundary_condition(const std::string& text);

/// Renormalized graph energy E_m and lumped mass on the degrees of freedom of
/// one boundary condition. For Dirichlet the corner vertices are removed.
struct EnergyForm {
  int level = 0;
  BoundaryCondition bc = BoundaryCondition::Neumann;
  Index vertex_count = 0;
  std::vector<Index> dofs;     // dof k lives on vertex dofs[k]
  Eigen::MatrixXd stiffness;   // dofs x dofs
  Eigen::VectorXd mass;        // lumped weights on the dofs
  Eigen::VectorXd full_mass;   // lumped weights on every vertex

  /// E_m(f, f) for f given on all vertices (Dirichlet: f is restricted to the dofs).
  double energy(const Eigen::VectorXd& f) const;
};

EnergyForm assemble_form(const GasketMesh& mesh, BoundaryCondition bc);

/// Ascending eigenpairs of -Delta_m, mass-orthonormal. Neumann excludes the
/// constant mode; Dirichlet eigenvectors are extended by zero on V_0.
struct Spectrum {
  BoundaryCondition bc = BoundaryCondition::Neumann;
  int level = 0;
  Eigen::VectorXd eigenvalues;   // J
  Eigen::MatrixXd eigenvectors;  // |V_m| x J
  Eigen::VectorXd mass;          // lumped weights on every vertex

  Index size() const { return eigenvalues.size(); }
  Index vertex_count() const { return eigenvectors.rows(); }

  /// Smallest J' >= J such that eigenvalue J' (1-based) closes a cluster of
  /// numerically equal eigenvalues. Truncating there keeps every retained
  /// eigenspace complete, so kernels do not depend on the basis choice.
  Index cluster_end(Index J) const;

  /// Resolves a truncation request: 0 means every eigenpair.
  Index resolve_truncation(Index J) const;
};

/// Largest dense eigenproblem accepted by solve_spectrum.
inline constexpr Index kMaxDenseDimension = 10000;

/// First j_max generalized eigenpairs of (stiffness, mass); j_max = 0 keeps all.
Spectrum solve_spectrum(const EnergyForm& form, Index j_max = 0);

/// Truncated spectral heat kernel p_t(x, y) (Neumann includes the constant term 1).
double heat_kernel(double t, Index xi, Index yi, const Spectrum& spec, Index J = 0);

/// Row p_t(x, .) over all vertices.
Eigen::VectorXd heat_kernel_row(double t, Index xi, const Spectrum& spec, Index J = 0);

}  // namespace sgfield

#endif  // SGFIELD_SPECTRAL_HPP_
