#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "pnptg/assembly.hpp"
#include "pnptg/manufactured.hpp"
#include "pnptg/mesh.hpp"
#include "pnptg/solvers.hpp"
#include "pnptg/sparse.hpp"

using pnptg::Mesh;
using pnptg::NodalField;
using pnptg::SolverConfig;
using pnptg::SparseMatrix;

namespace {

SparseMatrix identity(int dim) {
  SparseMatrix a;
  a.dim = dim;
  a.symmetric = true;
  a.row_offsets.resize(dim + 1);
  for (int i = 0; i <= dim; ++i) a.row_offsets[i] = i;
  a.col_indices.resize(dim);
  a.values.assign(dim, 1.0);
  for (int i = 0; i < dim; ++i) a.col_indices[i] = i;
  return a;
}

std::vector<double> random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = coef(rng);
  return v;
}

// Reduced n=4 test systems: symmetric stiffness and the asymmetric
// stiffness-plus-drift matrix for the interpolant of x.
SparseMatrix reduced_stiffness(const Mesh& mesh) {
  return pnptg::apply_dirichlet(pnptg::assemble_stiffness(mesh), mesh);
}

SparseMatrix reduced_np_matrix(const Mesh& mesh) {
  NodalField phi{mesh.resolution(), std::vector<double>(mesh.num_nodes())};
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    phi.values[i] = mesh.nodes()[i][0];
  }
  const SparseMatrix full = pnptg::assemble_stiffness(mesh);
  const SparseMatrix drift = pnptg::assemble_drift_matrix(mesh, phi, 1);
  return pnptg::apply_dirichlet(pnptg::add_scaled(full, 1.0, drift), mesh);
}

double relative_error(const std::vector<double>& got,
                      const std::vector<double>& want) {
  double diff = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    diff += (got[i] - want[i]) * (got[i] - want[i]);
    ref += want[i] * want[i];
  }
  return std::sqrt(diff / ref);
}

}  // namespace

TEST_CASE("cg solves the identity in one iteration") {
  const SparseMatrix a = identity(9);
  const std::vector<double> b = random_vector(9, 1);
  const auto result = pnptg::solve_cg(a, b);
  CHECK(result.report.converged);
  CHECK(result.report.iterations == 1);
  for (int i = 0; i < 9; ++i) {
    CHECK(result.x[i] == doctest::Approx(b[i]).epsilon(1e-14));
  }
}

TEST_CASE("cg on the 1x1 reduced stiffness") {
  const Mesh mesh = pnptg::build_unit_cube_mesh(2);
  const SparseMatrix a = reduced_stiffness(mesh);
  REQUIRE(a.dim == 1);
  const auto result = pnptg::solve_cg(a, {1.0});
  CHECK(result.report.converged);
  CHECK(result.x[0] == doctest::Approx(1.0 / a.values[0]).epsilon(1e-14));
}

TEST_CASE("cg matches the dense factorization oracle") {
  const Mesh mesh = pnptg::build_unit_cube_mesh(4);
  const SparseMatrix a = reduced_stiffness(mesh);
  REQUIRE(a.dim == 27);
  const std::vector<double> b = random_vector(a.dim, 2);
  const auto result = pnptg::solve_cg(a, b);
  CHECK(result.report.converged);
  CHECK(result.report.final_relative_residual <= 1e-10);
  const auto exact = oracles::dense_solve(oracles::densify(a), b);
  CHECK(relative_error(result.x, exact) < 1e-8);
}

TEST_CASE("cg rejects matrices without the symmetric flag") {
  SparseMatrix a = identity(4);
  a.symmetric = false;
  CHECK_THROWS_AS(pnptg::solve_cg(a, std::vector<double>(4, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(pnptg::solve_cg(identity(4), std::vector<double>(3, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("bicgstab agrees with cg on a symmetric system") {
  const Mesh mesh = pnptg::build_unit_cube_mesh(4);
  const SparseMatrix a = reduced_stiffness(mesh);
  const std::vector<double> b = random_vector(a.dim, 3);
  const auto cg = pnptg::solve_cg(a, b);
  const auto bi = pnptg::solve_bicgstab(a, b);
  CHECK(bi.report.converged);
  CHECK(relative_error(bi.x, cg.x) < 1e-8);
}

TEST_CASE("bicgstab matches the dense oracle on the drift system") {
  const Mesh mesh = pnptg::build_unit_cube_mesh(4);
  const SparseMatrix a = reduced_np_matrix(mesh);
  REQUIRE_FALSE(pnptg::exactly_symmetric(a));
  const std::vector<double> b = random_vector(a.dim, 4);
  const auto result = pnptg::solve_bicgstab(a, b);
  CHECK(result.report.converged);
  const auto exact = oracles::dense_solve(oracles::densify(a), b);
  CHECK(relative_error(result.x, exact) < 1e-8);
}

TEST_CASE("zero right-hand side returns zero in zero iterations") {
  const Mesh mesh = pnptg::build_unit_cube_mesh(4);
  const SparseMatrix a = reduced_stiffness(mesh);
  const std::vector<double> b(a.dim, 0.0);
  for (const auto& result : {pnptg::solve_cg(a, b), pnptg::solve_bicgstab(a, b)}) {
    CHECK(result.report.converged);
    CHECK(result.report.iterations == 0);
    for (double v : result.x) CHECK(v == 0.0);
  }
}

TEST_CASE("l2_vec basics") {
  CHECK(pnptg::l2_vec({}) == 0.0);
  CHECK(pnptg::l2_vec({0.0, 0.0, 0.0}) == 0.0);
  CHECK(pnptg::l2_vec({0.0, 1.0, 0.0}) == 1.0);
  CHECK(pnptg::l2_vec({3.0, 4.0}) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("cg residual history is monotone within slack") {
  const Mesh mesh = pnptg::build_unit_cube_mesh(4);
  const SparseMatrix a = reduced_stiffness(mesh);
  const std::vector<double> b = random_vector(a.dim, 5);
  SolverConfig cfg;
  cfg.record_history = true;
  const auto result = pnptg::solve_cg(a, b, cfg);
  REQUIRE(result.report.converged);
  REQUIRE(result.report.history.size() >= 2);
  for (std::size_t k = 1; k < result.report.history.size(); ++k) {
    CHECK(result.report.history[k] <= 1.10 * result.report.history[k - 1]);
  }
}

TEST_CASE("jacobi preconditioning leaves the solution unchanged") {
  const Mesh mesh = pnptg::build_unit_cube_mesh(4);
  const std::vector<double> b = random_vector(27, 6);
  SolverConfig plain;
  SolverConfig jacobi;
  jacobi.preconditioner = pnptg::Preconditioner::jacobi;

  const SparseMatrix s = reduced_stiffness(mesh);
  CHECK(relative_error(pnptg::solve_cg(s, b, jacobi).x,
                       pnptg::solve_cg(s, b, plain).x) < 1e-8);

  const SparseMatrix d = reduced_np_matrix(mesh);
  CHECK(relative_error(pnptg::solve_bicgstab(d, b, jacobi).x,
                       pnptg::solve_bicgstab(d, b, plain).x) < 1e-8);
}

TEST_CASE("converged flag mirrors the final true residual") {
  const Mesh mesh = pnptg::build_unit_cube_mesh(4);
  const SparseMatrix a = reduced_stiffness(mesh);
  const std::vector<double> b = random_vector(a.dim, 7);

  const auto good = pnptg::solve_cg(a, b);
  CHECK(good.report.converged);
  CHECK(good.report.final_relative_residual <= 1e-10);

  SolverConfig strangled;
  strangled.max_iterations = 2;
  const auto bad = pnptg::solve_cg(a, b, strangled);
  CHECK_FALSE(bad.report.converged);
  CHECK(bad.report.final_relative_residual > 1e-10);
  CHECK(bad.report.iterations == 2);
}

TEST_CASE("solves are bitwise repeatable") {
  const Mesh mesh = pnptg::build_unit_cube_mesh(4);
  const SparseMatrix s = reduced_stiffness(mesh);
  const SparseMatrix d = reduced_np_matrix(mesh);
  const std::vector<double> b = random_vector(27, 8);
  const auto cg1 = pnptg::solve_cg(s, b);
  const auto cg2 = pnptg::solve_cg(s, b);
  CHECK(cg1.report.iterations == cg2.report.iterations);
  for (int i = 0; i < 27; ++i) CHECK(cg1.x[i] == cg2.x[i]);
  const auto bi1 = pnptg::solve_bicgstab(d, b);
  const auto bi2 = pnptg::solve_bicgstab(d, b);
  CHECK(bi1.report.iterations == bi2.report.iterations);
  for (int i = 0; i < 27; ++i) CHECK(bi1.x[i] == bi2.x[i]);
}
