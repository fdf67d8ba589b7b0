// Times the serial reference kernels against the OpenMP ones and checks that
// both produce bitwise identical results while doing so.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "pnptg/assembly.hpp"
#include "pnptg/manufactured.hpp"
#include "pnptg/mesh.hpp"
#include "pnptg/norms.hpp"
#include "pnptg/parallel.hpp"
#include "pnptg/solvers.hpp"
#include "pnptg/sparse.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(const std::function<void()>& body, int repeats) {
  body();  // warm-up
  const auto start = Clock::now();
  for (int r = 0; r < repeats; ++r) body();
  const auto stop = Clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() /
         repeats;
}

struct Row {
  std::string name;
  double serial_ms = 0.0;
  double openmp_ms = 0.0;
  bool identical = false;
};

void print_rows(const std::vector<Row>& rows) {
  std::printf("%-24s %12s %12s %9s  %s\n", "kernel", "serial ms", "openmp ms",
              "speedup", "bitwise");
  for (const Row& row : rows) {
    std::printf("%-24s %12.3f %12.3f %8.2fx  %s\n", row.name.c_str(),
                row.serial_ms, row.openmp_ms, row.serial_ms / row.openmp_ms,
                row.identical ? "yes" : "NO");
  }
}

bool same_values(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  int n = 32;
  int repeats = 3;
  if (argc > 1) n = std::atoi(argv[1]);
  if (argc > 2) repeats = std::atoi(argv[2]);
  if (n < 2 || repeats < 1) {
    std::fprintf(stderr, "usage: pnptg_bench [resolution] [repeats]\n");
    return 2;
  }
  if (!pnptg::openmp_available()) {
    std::fprintf(stderr,
                 "built without OpenMP; nothing to compare against\n");
    return 1;
  }
#ifdef _OPENMP
  std::printf("resolution %d, repeats %d, %d OpenMP threads\n\n", n, repeats,
              omp_get_max_threads());
#endif

  const pnptg::Mesh mesh = pnptg::build_unit_cube_mesh(n);
  const pnptg::ManufacturedSolution sol = pnptg::manufactured_solution();
  const auto serial = pnptg::ExecPolicy::serial;
  const auto openmp = pnptg::ExecPolicy::openmp;

  std::vector<Row> rows;

  {
    Row row{"assemble_stiffness", 0, 0, false};
    pnptg::SparseMatrix as, ap;
    row.serial_ms =
        time_ms([&] { as = pnptg::assemble_stiffness(mesh, serial); }, repeats);
    row.openmp_ms =
        time_ms([&] { ap = pnptg::assemble_stiffness(mesh, openmp); }, repeats);
    row.identical = same_values(as.values, ap.values);
    rows.push_back(row);
  }

  pnptg::NodalField phi{mesh.resolution(), {}};
  phi.values.resize(mesh.num_nodes());
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    phi.values[i] = sol.phi(mesh.nodes()[i]);
  }

  {
    Row row{"assemble_drift", 0, 0, false};
    pnptg::SparseMatrix ds, dp;
    row.serial_ms = time_ms(
        [&] { ds = pnptg::assemble_drift_matrix(mesh, phi, 1, serial); },
        repeats);
    row.openmp_ms = time_ms(
        [&] { dp = pnptg::assemble_drift_matrix(mesh, phi, 1, openmp); },
        repeats);
    row.identical = same_values(ds.values, dp.values);
    rows.push_back(row);
  }

  {
    Row row{"assemble_load", 0, 0, false};
    std::vector<double> ls, lp;
    row.serial_ms = time_ms(
        [&] { ls = pnptg::assemble_load(mesh, sol.f3, serial); }, repeats);
    row.openmp_ms = time_ms(
        [&] { lp = pnptg::assemble_load(mesh, sol.f3, openmp); }, repeats);
    row.identical = same_values(ls, lp);
    rows.push_back(row);
  }

  const pnptg::SparseMatrix stiffness = pnptg::assemble_stiffness(mesh, serial);
  std::vector<double> x(stiffness.dim);
  for (int i = 0; i < stiffness.dim; ++i) {
    x[i] = std::sin(0.37 * i) + 0.25;
  }

  {
    Row row{"spmv", 0, 0, false};
    std::vector<double> ys(stiffness.dim), yp(stiffness.dim);
    row.serial_ms = time_ms(
        [&] { stiffness.multiply(x.data(), ys.data(), serial); }, repeats * 10);
    row.openmp_ms = time_ms(
        [&] { stiffness.multiply(x.data(), yp.data(), openmp); }, repeats * 10);
    row.identical = same_values(ys, yp);
    rows.push_back(row);
  }

  {
    Row row{"deterministic_dot", 0, 0, false};
    double ds = 0.0, dp = 0.0;
    row.serial_ms = time_ms(
        [&] {
          ds = pnptg::deterministic_dot(x.data(), x.data(), x.size(), serial);
        },
        repeats * 10);
    row.openmp_ms = time_ms(
        [&] {
          dp = pnptg::deterministic_dot(x.data(), x.data(), x.size(), openmp);
        },
        repeats * 10);
    row.identical = (ds == dp);
    rows.push_back(row);
  }

  {
    Row row{"error_h1", 0, 0, false};
    double es = 0.0, ep = 0.0;
    row.serial_ms = time_ms(
        [&] { es = pnptg::error_h1(mesh, phi, sol.phi, sol.grad_phi, serial); },
        repeats);
    row.openmp_ms = time_ms(
        [&] { ep = pnptg::error_h1(mesh, phi, sol.phi, sol.grad_phi, openmp); },
        repeats);
    row.identical = (es == ep);
    rows.push_back(row);
  }

  {
    Row row{"cg_poisson", 0, 0, false};
    const pnptg::SparseMatrix reduced =
        pnptg::apply_dirichlet(stiffness, mesh);
    std::vector<double> load = pnptg::assemble_load(mesh, sol.f3, serial);
    const std::vector<double> rhs = pnptg::apply_dirichlet(load, mesh);
    pnptg::SolverConfig cfg;
    cfg.rel_tolerance = 1e-8;
    pnptg::SolveResult rs, rp;
    row.serial_ms =
        time_ms([&] { rs = pnptg::solve_cg(reduced, rhs, cfg, serial); }, 1);
    row.openmp_ms =
        time_ms([&] { rp = pnptg::solve_cg(reduced, rhs, cfg, openmp); }, 1);
    row.identical = same_values(rs.x, rp.x);
    rows.push_back(row);
  }

  print_rows(rows);

  for (const Row& row : rows) {
    if (!row.identical) {
      std::fprintf(stderr, "\nserial and OpenMP results differ for %s\n",
                   row.name.c_str());
      return 1;
    }
  }
  std::printf("\nall kernels bitwise identical across policies\n");
  return 0;
}
