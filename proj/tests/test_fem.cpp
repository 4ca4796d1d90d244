#include <doctest.h>

#include <Eigen/Dense>
#include <cstdio>
#include <fstream>
#include <random>

#include "gpde/fem.hpp"
#include "gpde/mesh.hpp"
#include "oracles.hpp"

using gpde::Mesh;

namespace {

Mesh unit_right_triangle() {
  Mesh m;
  m.nodes = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  m.triangles = {{0, 1, 2}};
  m.boundary_flags = {1, 1, 1};
  return m;
}

std::string write_temp(const std::string& text) {
  static int counter = 0;
  std::string path = "fem_test_mesh_" + std::to_string(counter++) + ".txt";
  std::ofstream out(path);
  out << text;
  return path;
}

}  // namespace

TEST_CASE("rect mesh generation") {
  const Mesh m1 = gpde::generate_rect_mesh(1, 1, 1.0, 1.0);
  CHECK(m1.num_nodes() == 4);
  CHECK(m1.num_triangles() == 2);
  const Mesh m2 = gpde::generate_rect_mesh(2, 2, 1.0, 1.0);
  CHECK(m2.num_nodes() == 9);
  CHECK(m2.num_triangles() == 8);
  const Mesh m10 = gpde::generate_rect_mesh(10, 10, 1.0, 1.0);
  CHECK(m10.area() == doctest::Approx(1.0).epsilon(1e-14));
  for (int t = 0; t < m10.num_triangles(); ++t) CHECK(m10.triangle_area(t) > 0.0);
  CHECK_THROWS_AS(gpde::generate_rect_mesh(0, 1, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("mesh file loading") {
  const std::string good = write_temp(
      "4 2\n0 0 1\n1 0 1\n1 1 1\n0 1 1\n1 2 3\n1 3 4\n");
  const Mesh m = gpde::load_mesh(good);
  CHECK(m.num_nodes() == 4);
  CHECK(m.num_triangles() == 2);
  CHECK(m.area() == doctest::Approx(1.0));
  std::remove(good.c_str());

  const std::string bad_index = write_temp("3 1\n0 0 1\n1 0 1\n0 1 1\n1 2 9\n");
  CHECK_THROWS_WITH_AS(gpde::load_mesh(bad_index),
                       doctest::Contains("triangle 1"), std::runtime_error);
  std::remove(bad_index.c_str());

  const std::string empty = write_temp("");
  CHECK_THROWS_WITH_AS(gpde::load_mesh(empty), doctest::Contains("no nodes"),
                       std::runtime_error);
  std::remove(empty.c_str());

  const std::string malformed = write_temp("2 0\n0 0 1\nnot a node\n");
  CHECK_THROWS_WITH_AS(gpde::load_mesh(malformed), doctest::Contains("line 3"),
                       std::runtime_error);
  std::remove(malformed.c_str());

  const std::string inverted = write_temp("3 1\n0 0 1\n1 0 1\n0 1 1\n1 3 2\n");
  CHECK_THROWS_AS(gpde::load_mesh(inverted), std::runtime_error);
  std::remove(inverted.c_str());
}

TEST_CASE("mesh save/load round trip") {
  const Mesh m = gpde::generate_rect_mesh(3, 2, 2.0, 1.0);
  gpde::save_mesh(m, "fem_roundtrip.txt");
  const Mesh back = gpde::load_mesh("fem_roundtrip.txt");
  REQUIRE(back.num_nodes() == m.num_nodes());
  REQUIRE(back.num_triangles() == m.num_triangles());
  for (int i = 0; i < m.num_nodes(); ++i) {
    CHECK(back.nodes[i][0] == m.nodes[i][0]);
    CHECK(back.nodes[i][1] == m.nodes[i][1]);
  }
  std::remove("fem_roundtrip.txt");
}

TEST_CASE("mass matrix on the reference triangle") {
  const Mesh tri = unit_right_triangle();
  const Eigen::MatrixXd M(gpde::assemble_mass(tri));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(M(i, j) == doctest::Approx(i == j ? 1.0 / 12.0 : 1.0 / 24.0).epsilon(1e-15));
  // row sums are the integrals of the hats; total is the area
  CHECK(M.sum() == doctest::Approx(0.5).epsilon(1e-15));
  for (int i = 0; i < 3; ++i)
    CHECK(M.row(i).sum() == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("stiffness matrix on the reference triangle") {
  const Mesh tri = unit_right_triangle();
  const Eigen::MatrixXd K(gpde::assemble_stiffness(tri, 1.0, 0.0));
  Eigen::Matrix3d expected;
  expected << 2, -1, -1, -1, 1, 0, -1, 0, 1;
  expected *= 0.5;
  CHECK((K - expected).cwiseAbs().maxCoeff() < 1e-15);
  const Eigen::Vector3d c = Eigen::Vector3d::Constant(3.7);
  CHECK((K * c).cwiseAbs().maxCoeff() < 1e-14);
  const Eigen::MatrixXd M(gpde::assemble_mass(tri));
  const Eigen::MatrixXd R(gpde::assemble_stiffness(tri, 1.0, 1.0));
  CHECK((R - K - M).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("partition of unity on the unit square") {
  const Mesh m = gpde::generate_rect_mesh(1, 1, 1.0, 1.0);
  const Eigen::MatrixXd M(gpde::assemble_mass(m));
  CHECK(M.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("element matrices match the first-principles oracle") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  int done = 0;
  while (done < 100) {
    std::array<std::array<double, 2>, 3> v;
    for (auto& p : v) p = {coord(rng), coord(rng)};
    const double area2 = (v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) -
                         (v[2][0] - v[0][0]) * (v[1][1] - v[0][1]);
    if (area2 < 0.05) continue;  // reject flipped/near-degenerate draws
    ++done;
    Mesh m;
    m.nodes = {v[0], v[1], v[2]};
    m.triangles = {{0, 1, 2}};
    m.boundary_flags = {1, 1, 1};
    Eigen::Matrix3d mass_ref, grad_ref;
    oracles::p1_element(v, mass_ref, grad_ref);
    const Eigen::MatrixXd M(gpde::assemble_mass(m));
    const Eigen::MatrixXd K(gpde::assemble_stiffness(m, 1.0, 0.0));
    CHECK((M - mass_ref).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((K - grad_ref).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("degenerate triangle is rejected") {
  Mesh m;
  m.nodes = {{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
  m.triangles = {{0, 1, 2}};
  m.boundary_flags = {1, 1, 1};
  CHECK_THROWS_AS(gpde::assemble_mass(m), std::runtime_error);
}

TEST_CASE("neumann eigenproblem basics") {
  const Mesh m = gpde::generate_rect_mesh(8, 8, 1.0, 1.0);
  const gpde::SpMat M = gpde::assemble_mass(m);
  const gpde::SpMat R = gpde::assemble_stiffness(m, 0.7, 1.0);
  const gpde::EigenBasis basis = gpde::solve_generalized_eig(R, M, 6);
  CHECK(basis.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  // the first eigenfunction is constant
  const Eigen::VectorXd v0 = basis.vectors.col(0);
  CHECK((v0.array() - v0[0]).abs().maxCoeff() < 1e-10);
  for (int k = 1; k < 6; ++k) CHECK(basis.eigenvalues[k] >= basis.eigenvalues[k - 1]);
}

TEST_CASE("square benchmark eigenvalues") {
  const double pi = std::acos(-1.0);
  const Mesh m = gpde::generate_rect_mesh(16, 16, 1.0, 1.0);
  const gpde::SpMat M = gpde::assemble_mass(m);
  const gpde::SpMat R = gpde::assemble_stiffness(m, 1.0, 1.0);
  const gpde::EigenBasis basis = gpde::solve_generalized_eig(R, M, 4);
  CHECK(basis.eigenvalues[1] == doctest::Approx(1.0 + pi * pi).epsilon(0.02));
  CHECK(basis.eigenvalues[2] == doctest::Approx(1.0 + pi * pi).epsilon(0.02));

  // monotone convergence under refinement
  const Mesh coarse = gpde::generate_rect_mesh(8, 8, 1.0, 1.0);
  const gpde::EigenBasis cb = gpde::solve_generalized_eig(
      gpde::assemble_stiffness(coarse, 1.0, 1.0), gpde::assemble_mass(coarse), 4);
  for (int k = 0; k < 4; ++k) CHECK(basis.eigenvalues[k] <= cb.eigenvalues[k] + 1e-12);
}

TEST_CASE("full eigensolve matches the congruence oracle") {
  const Mesh m = gpde::generate_rect_mesh(2, 2, 1.0, 1.0);
  const gpde::SpMat M = gpde::assemble_mass(m);
  const gpde::SpMat R = gpde::assemble_stiffness(m, 1.0, 1.0);
  const int n = m.num_nodes();
  const gpde::EigenBasis basis = gpde::solve_generalized_eig(R, M, n);
  const Eigen::VectorXd ref = oracles::dense_geig_values(Eigen::MatrixXd(R), Eigen::MatrixXd(M));
  for (int k = 0; k < n; ++k)
    CHECK(basis.eigenvalues[k] == doctest::Approx(ref[k]).epsilon(1e-10));
}

TEST_CASE("projection and reconstruction") {
  const Mesh m = gpde::generate_rect_mesh(6, 6, 1.0, 1.0);
  const gpde::SpMat M = gpde::assemble_mass(m);
  const gpde::SpMat R = gpde::assemble_stiffness(m, 1.0, 1.0);
  const int n = m.num_nodes();
  const gpde::EigenBasis basis = gpde::solve_generalized_eig(R, M, n);
  // projecting an eigenvector gives the matching unit vector
  const Eigen::VectorXd e3 = gpde::project(basis.vectors.col(3), basis, M);
  for (int k = 0; k < n; ++k)
    CHECK(e3[k] == doctest::Approx(k == 3 ? 1.0 : 0.0).margin(1e-10));
  CHECK(gpde::project(Eigen::VectorXd::Zero(n), basis, M).norm() == 0.0);
  // full-basis round trip in the M norm
  Eigen::VectorXd u(n);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < n; ++i) u[i] = dist(rng);
  const Eigen::VectorXd back = gpde::reconstruct(gpde::project(u, basis, M), basis);
  const Eigen::VectorXd diff = u - back;
  CHECK(std::sqrt(diff.dot(M * diff)) < 1e-10);
}

TEST_CASE("spatial integral and mean") {
  const Mesh m = gpde::generate_rect_mesh(5, 5, 1.0, 1.0);
  const gpde::SpMat M = gpde::assemble_mass(m);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.num_nodes());
  CHECK(gpde::spatial_integral(M, ones) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gpde::spatial_integral(M, 3.0 * ones) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(gpde::spatial_mean(m, M, 3.0 * ones) == doctest::Approx(3.0).epsilon(1e-14));

  const Mesh tri = unit_right_triangle();
  const gpde::SpMat Mt = gpde::assemble_mass(tri);
  Eigen::VectorXd hat = Eigen::VectorXd::Zero(3);
  hat[0] = 1.0;
  CHECK(gpde::spatial_integral(Mt, hat) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("dirichlet restriction") {
  const Mesh m = gpde::generate_rect_mesh(4, 4, 1.0, 1.0);
  const std::vector<int> keep = gpde::interior_indices(m);
  CHECK(keep.size() == 9);  // 3x3 interior grid
  const gpde::SpMat M = gpde::restrict_matrix(gpde::assemble_mass(m), keep);
  const gpde::SpMat K = gpde::restrict_matrix(gpde::assemble_stiffness(m, 1.0, 0.0), keep);
  CHECK(M.rows() == 9);
  const gpde::EigenBasis basis = gpde::solve_generalized_eig(K, M, 3);
  const double pi = std::acos(-1.0);
  // coarse-mesh Dirichlet ground state is near 2 pi^2 (from above)
  CHECK(basis.eigenvalues[0] == doctest::Approx(2.0 * pi * pi).epsilon(0.1));
  CHECK(basis.eigenvalues[0] >= 2.0 * pi * pi);
  const Eigen::VectorXd full = gpde::expand_with_zeros(basis.vectors.col(0), keep, m.num_nodes());
  for (int i = 0; i < m.num_nodes(); ++i)
    if (m.boundary_flags[i] != 0) CHECK(full[i] == 0.0);
}

TEST_CASE("iterative eigensolver path above the dense limit") {
  const Mesh m = gpde::generate_rect_mesh(46, 46, 1.0, 1.0);  // 2209 nodes
  const gpde::SpMat M = gpde::assemble_mass(m);
  const gpde::SpMat R = gpde::assemble_stiffness(m, 1.0, 1.0);
  const gpde::EigenBasis basis = gpde::solve_generalized_eig(R, M, 5);
  const double pi = std::acos(-1.0);
  CHECK(basis.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(basis.eigenvalues[1] == doctest::Approx(1.0 + pi * pi).epsilon(0.02));
}
