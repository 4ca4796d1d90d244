#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "gpde/mesh.hpp"

namespace gpde {

using SpMat = Eigen::SparseMatrix<double>;

/// Mass matrix: element contribution A/12 * [[2,1,1],[1,2,1],[1,1,2]].
SpMat assemble_mass(const Mesh& mesh);

/// eta * (gradient product matrix) + kappa * (mass matrix). With
/// kappa = 1 this is the operator pencil used by the Neumann problems;
/// with (eta, kappa) = (k1, k2) it realises the H1 scalar product of the
/// Dirichlet problem.
SpMat assemble_stiffness(const Mesh& mesh, double eta, double kappa);

/// Ascending eigenpairs of R v = lambda M v with M-orthonormal vectors
/// (columns). Sign convention: the first component of each vector whose
/// magnitude exceeds 1e-12 of the column norm is positive.
struct EigenBasis {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd vectors;
  int n_modes() const { return static_cast<int>(eigenvalues.size()); }
};

/// Dense symmetric-definite solve below dimension 2000, block inverse
/// iteration with Rayleigh-Ritz refinement above. M must be positive
/// definite and R positive definite for the iterative path.
EigenBasis solve_generalized_eig(const SpMat& R, const SpMat& M, int n_modes);

/// Modal coefficients of a nodal vector: c_k = v_k^T M u.
Eigen::VectorXd project(const Eigen::VectorXd& nodal, const EigenBasis& basis, const SpMat& M);
/// Nodal vector from modal coefficients.
Eigen::VectorXd reconstruct(const Eigen::VectorXd& coeffs, const EigenBasis& basis);

/// Integral of the P1 function over the domain, 1^T M u.
double spatial_integral(const SpMat& M, const Eigen::VectorXd& nodal);
/// The integral divided by the mesh area.
double spatial_mean(const Mesh& mesh, const SpMat& M, const Eigen::VectorXd& nodal);

/// Indices of nodes with boundary flag 0, for the Dirichlet variant.
std::vector<int> interior_indices(const Mesh& mesh);
/// Row/column restriction of a square matrix to the kept indices.
SpMat restrict_matrix(const SpMat& mat, const std::vector<int>& keep);
/// Scatter an interior vector back to full length with zeros elsewhere.
Eigen::VectorXd expand_with_zeros(const Eigen::VectorXd& reduced, const std::vector<int>& keep,
                                  int full_size);

}  // namespace gpde
