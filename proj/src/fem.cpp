#include "gpde/fem.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <stdexcept>

namespace gpde {

namespace {

constexpr int kDenseLimit = 2000;

void element_geometry(const Mesh& m, int t, double& area, double b[3], double c[3]) {
  const auto& tri = m.triangles[t];
  const auto& p0 = m.nodes[tri[0]];
  const auto& p1 = m.nodes[tri[1]];
  const auto& p2 = m.nodes[tri[2]];
  b[0] = p1[1] - p2[1];
  b[1] = p2[1] - p0[1];
  b[2] = p0[1] - p1[1];
  c[0] = p2[0] - p1[0];
  c[1] = p0[0] - p2[0];
  c[2] = p1[0] - p0[0];
  area = 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
  if (area < 1e-14)
    throw std::runtime_error("fem: degenerate triangle " + std::to_string(t + 1));
}

void apply_sign_convention(Eigen::MatrixXd& vectors) {
  for (int k = 0; k < vectors.cols(); ++k) {
    const double norm = vectors.col(k).norm();
    for (int i = 0; i < vectors.rows(); ++i) {
      if (std::abs(vectors(i, k)) > 1e-12 * norm) {
        if (vectors(i, k) < 0.0) vectors.col(k) *= -1.0;
        break;
      }
    }
  }
}

void check_basis(const SpMat& R, const SpMat& M, const EigenBasis& basis) {
  for (int k = 0; k < basis.n_modes(); ++k) {
    const Eigen::VectorXd rv = R * basis.vectors.col(k);
    const Eigen::VectorXd mv = M * basis.vectors.col(k);
    const double res = (rv - basis.eigenvalues[k] * mv).norm();
    if (res > 1e-8 * rv.norm())
      throw std::runtime_error("fem: eigenpair " + std::to_string(k + 1) +
                               " exceeds the residual tolerance");
  }
  const Eigen::MatrixXd gram =
      basis.vectors.transpose() * (M * basis.vectors) -
      Eigen::MatrixXd::Identity(basis.n_modes(), basis.n_modes());
  if (gram.cwiseAbs().maxCoeff() > 1e-10)
    throw std::runtime_error("fem: eigenbasis is not M-orthonormal");
}

EigenBasis dense_eig(const SpMat& R, const SpMat& M, int n_modes) {
  Eigen::MatrixXd Rd(R), Md(M);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(Rd, Md);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("fem: dense generalized eigensolve failed");
  EigenBasis basis;
  basis.eigenvalues = solver.eigenvalues().head(n_modes);
  basis.vectors = solver.eigenvectors().leftCols(n_modes);
  return basis;
}

// Block inverse iteration on R^{-1} M with Rayleigh-Ritz refinement in
// the M-inner product; targets the lowest modes of the pencil.
EigenBasis iterative_eig(const SpMat& R, const SpMat& M, int n_modes) {
  const int n = static_cast<int>(R.rows());
  const int block = std::min(n, n_modes + std::max(10, n_modes / 5));
  Eigen::SimplicialLDLT<SpMat> solver(R);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("fem: factorisation of R failed");

  Eigen::MatrixXd Q = Eigen::MatrixXd::Random(n, block);  // deterministic in Eigen
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(n_modes);
  EigenBasis basis;
  for (int iter = 0; iter < 200; ++iter) {
    Eigen::MatrixXd Z = solver.solve(M * Q);
    // Rayleigh-Ritz on the subspace
    Eigen::MatrixXd Rz = Z.transpose() * (R * Z).eval();
    Eigen::MatrixXd Mz = Z.transpose() * (M * Z).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> small(Rz, Mz);
    if (small.info() != Eigen::Success)
      throw std::runtime_error("fem: Rayleigh-Ritz solve failed");
    Q = Z * small.eigenvectors();
    const Eigen::VectorXd vals = small.eigenvalues().head(n_modes);
    if (iter > 0 && ((vals - prev).cwiseAbs().array() <=
                     1e-12 * vals.cwiseAbs().array().max(1.0))
                        .all()) {
      basis.eigenvalues = vals;
      basis.vectors = Q.leftCols(n_modes);
      return basis;
    }
    prev = vals;
  }
  throw std::runtime_error("fem: eigeniteration did not converge");
}

}  // namespace

SpMat assemble_mass(const Mesh& m) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * m.triangles.size());
  double b[3], c[3], area;
  for (int t = 0; t < m.num_triangles(); ++t) {
    element_geometry(m, t, area, b, c);
    const auto& tri = m.triangles[t];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        trip.emplace_back(tri[i], tri[j], area / 12.0 * (i == j ? 2.0 : 1.0));
  }
  SpMat M(m.num_nodes(), m.num_nodes());
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

SpMat assemble_stiffness(const Mesh& m, double eta, double kappa) {
  if (!(eta > 0.0)) throw std::invalid_argument("fem: eta must be positive");
  if (kappa < 0.0) throw std::invalid_argument("fem: kappa must be nonnegative");
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * m.triangles.size());
  double b[3], c[3], area;
  for (int t = 0; t < m.num_triangles(); ++t) {
    element_geometry(m, t, area, b, c);
    const auto& tri = m.triangles[t];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double k_ij = (b[i] * b[j] + c[i] * c[j]) / (4.0 * area);
        const double m_ij = area / 12.0 * (i == j ? 2.0 : 1.0);
        trip.emplace_back(tri[i], tri[j], eta * k_ij + kappa * m_ij);
      }
  }
  SpMat R(m.num_nodes(), m.num_nodes());
  R.setFromTriplets(trip.begin(), trip.end());
  return R;
}

EigenBasis solve_generalized_eig(const SpMat& R, const SpMat& M, int n_modes) {
  if (R.rows() != M.rows() || R.rows() != R.cols())
    throw std::invalid_argument("fem: pencil dimensions mismatch");
  if (n_modes < 1 || n_modes > R.rows())
    throw std::invalid_argument("fem: n_modes out of range");
  EigenBasis basis =
      R.rows() <= kDenseLimit ? dense_eig(R, M, n_modes) : iterative_eig(R, M, n_modes);
  apply_sign_convention(basis.vectors);
  check_basis(R, M, basis);
  return basis;
}

Eigen::VectorXd project(const Eigen::VectorXd& nodal, const EigenBasis& basis, const SpMat& M) {
  if (nodal.size() != basis.vectors.rows())
    throw std::invalid_argument("fem: projection dimension mismatch");
  return basis.vectors.transpose() * (M * nodal);
}

Eigen::VectorXd reconstruct(const Eigen::VectorXd& coeffs, const EigenBasis& basis) {
  if (coeffs.size() != basis.n_modes())
    throw std::invalid_argument("fem: coefficient count mismatch");
  return basis.vectors * coeffs;
}

double spatial_integral(const SpMat& M, const Eigen::VectorXd& nodal) {
  if (nodal.size() != M.rows()) throw std::invalid_argument("fem: dimension mismatch");
  return (M * nodal).sum();
}

double spatial_mean(const Mesh& mesh, const SpMat& M, const Eigen::VectorXd& nodal) {
  return spatial_integral(M, nodal) / mesh.area();
}

std::vector<int> interior_indices(const Mesh& mesh) {
  std::vector<int> keep;
  for (int i = 0; i < mesh.num_nodes(); ++i)
    if (mesh.boundary_flags[i] == 0) keep.push_back(i);
  return keep;
}

SpMat restrict_matrix(const SpMat& mat, const std::vector<int>& keep) {
  std::vector<int> where(mat.rows(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) where[keep[i]] = static_cast<int>(i);
  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < mat.outerSize(); ++k)
    for (SpMat::InnerIterator it(mat, k); it; ++it) {
      const int r = where[it.row()];
      const int c = where[it.col()];
      if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
    }
  SpMat out(static_cast<int>(keep.size()), static_cast<int>(keep.size()));
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

Eigen::VectorXd expand_with_zeros(const Eigen::VectorXd& reduced, const std::vector<int>& keep,
                                  int full_size) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(full_size);
  for (std::size_t i = 0; i < keep.size(); ++i) out[keep[i]] = reduced[static_cast<int>(i)];
  return out;
}

}  // namespace gpde
