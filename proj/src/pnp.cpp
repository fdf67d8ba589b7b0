#include "pnptg/pnp.hpp"

#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include "pnptg/assembly.hpp"
#include "pnptg/manufactured.hpp"
#include "pnptg/norms.hpp"

namespace pnptg {

namespace {

SolverConfig effective_inner(const SolverConfig& inner, int resolution) {
  SolverConfig cfg = inner;
  if (resolution >= 16) cfg.preconditioner = Preconditioner::jacobi;
  return cfg;
}

void require_converged(const SolveReport& rep, const char* what) {
  if (!rep.converged) {
    throw std::runtime_error(
        std::string(what) + " solve failed: residual " +
        std::to_string(rep.final_relative_residual) + " after " +
        std::to_string(rep.iterations) + " iterations");
  }
}

// RHS of the Poisson equation: load(F3) + sum_i q_i (p_i, w), restricted to
// interior test functions.
std::vector<double> poisson_rhs(const Mesh& mesh, const SparseMatrix& mass,
                                const std::vector<double>& load3,
                                const std::vector<double>& p1,
                                const std::vector<double>& p2,
                                ExecPolicy policy) {
  std::vector<double> coupled(mesh.num_nodes());
  parallel_for(coupled.size(), policy,
               [&](std::size_t i) { coupled[i] = p1[i] - p2[i]; });
  std::vector<double> mp(mesh.num_nodes());
  mass.multiply(coupled.data(), mp.data(), policy);
  parallel_for(mp.size(), policy,
               [&](std::size_t i) { mp[i] += load3[i]; });
  return apply_dirichlet(mp, mesh);
}

}  // namespace

PnpState zero_state(const Mesh& mesh) {
  PnpState s;
  const int n = mesh.resolution();
  const std::size_t nn = mesh.num_nodes();
  s.p1 = {n, std::vector<double>(nn, 0.0)};
  s.p2 = {n, std::vector<double>(nn, 0.0)};
  s.phi = {n, std::vector<double>(nn, 0.0)};
  return s;
}

GummelResult gummel_solve(const Mesh& mesh, const SourceTerms& sources,
                          const GummelConfig& cfg) {
  if (cfg.stop_tolerance <= 0.0) {
    throw std::invalid_argument("gummel: stop_tolerance must be positive");
  }
  const ExecPolicy policy = default_exec_policy();
  const SparseMatrix stiffness = assemble_stiffness(mesh, policy);
  const SparseMatrix mass = assemble_mass(mesh, policy);
  const SparseMatrix stiffness_red = apply_dirichlet(stiffness, mesh);
  const std::vector<double> load3 = assemble_load(mesh, sources.f3, policy);
  const std::vector<double> rhs_p1 =
      apply_dirichlet(assemble_load(mesh, sources.f1, policy), mesh);
  const std::vector<double> rhs_p2 =
      apply_dirichlet(assemble_load(mesh, sources.f2, policy), mesh);
  const SolverConfig inner = effective_inner(cfg.inner, mesh.resolution());

  GummelResult result;
  result.state = cfg.initial_guess ? *cfg.initial_guess : zero_state(mesh);
  PnpState& state = result.state;
  if (state.phi.resolution != mesh.resolution()) {
    throw std::invalid_argument("gummel: initial guess on wrong mesh");
  }

  std::vector<double> delta(mesh.num_nodes());
  for (int it = 1; it <= cfg.max_outer_iterations; ++it) {
    const std::vector<double> rhs_phi =
        poisson_rhs(mesh, mass, load3, state.p1.values, state.p2.values, policy);
    SolveResult phi_sol = solve_cg(stiffness_red, rhs_phi, inner, policy);
    require_converged(phi_sol.report, "gummel poisson");
    result.inner_iterations += phi_sol.report.iterations;
    std::vector<double> phi_full = expand_with_boundary_zeros(phi_sol.x, mesh);
    parallel_for(delta.size(), policy, [&](std::size_t i) {
      delta[i] = phi_full[i] - state.phi.values[i];
    });
    const double change = nodal_l2_norm(mesh, delta, policy);
    state.phi.values = std::move(phi_full);

    const SparseMatrix drift =
        assemble_drift_matrix(mesh, state.phi, kChargeP1, policy);
    for (int species = 0; species < 2; ++species) {
      const int q = species == 0 ? kChargeP1 : kChargeP2;
      SparseMatrix np = add_scaled(stiffness, static_cast<double>(q), drift);
      const SparseMatrix np_red = apply_dirichlet(np, mesh);
      const std::vector<double>& rhs = species == 0 ? rhs_p1 : rhs_p2;
      SolveResult p_sol = solve_bicgstab(np_red, rhs, inner, policy);
      require_converged(p_sol.report, species == 0 ? "gummel np p1" : "gummel np p2");
      result.inner_iterations += p_sol.report.iterations;
      NodalField& target = species == 0 ? state.p1 : state.p2;
      target.values = expand_with_boundary_zeros(p_sol.x, mesh);
    }

    result.outer_iterations = it;
    if (change < cfg.stop_tolerance) return result;
  }
  throw std::runtime_error("gummel iteration did not converge within " +
                           std::to_string(cfg.max_outer_iterations) +
                           " outer iterations");
}

TwoGridResult two_grid_solve(const Mesh& coarse, const Mesh& fine,
                             const SourceTerms& sources, TwoGridVariant variant,
                             const TwoGridOptions& opt) {
  if (fine.resolution() % coarse.resolution() != 0) {
    throw std::invalid_argument("two_grid: meshes are not nested");
  }
  const ExecPolicy policy = default_exec_policy();

  TwoGridResult result;
  GummelResult coarse_run = gummel_solve(coarse, sources, opt.gummel);
  result.coarse = std::move(coarse_run.state);
  result.coarse_outer_iterations = coarse_run.outer_iterations;
  result.inner_iterations = coarse_run.inner_iterations;

  const NodalField p1_coarse = prolongate(coarse, result.coarse.p1, fine, policy);
  const NodalField p2_coarse = prolongate(coarse, result.coarse.p2, fine, policy);
  const bool uses_coarse_potential = variant == TwoGridVariant::decoupled ||
                                     variant == TwoGridVariant::symmetrized_decoupled;
  NodalField phi_coarse;
  if (uses_coarse_potential) {
    phi_coarse = prolongate(coarse, result.coarse.phi, fine, policy);
  }

  const SparseMatrix stiffness = assemble_stiffness(fine, policy);
  const SparseMatrix mass = assemble_mass(fine, policy);
  const SparseMatrix stiffness_red = apply_dirichlet(stiffness, fine);
  const std::vector<double> load3 = assemble_load(fine, sources.f3, policy);
  const SolverConfig inner = effective_inner(opt.gummel.inner, fine.resolution());

  result.fine = zero_state(fine);

  const std::vector<double> rhs_phi = poisson_rhs(
      fine, mass, load3, p1_coarse.values, p2_coarse.values, policy);

  const bool symmetrized = variant == TwoGridVariant::symmetrized ||
                           variant == TwoGridVariant::symmetrized_decoupled;
  if (symmetrized && !stiffness_red.symmetric) {
    throw std::logic_error("two_grid: fine NP matrix lost the symmetric flag");
  }

  // Fully decoupled variants: the Poisson solve and both NP solves are
  // mutually independent and may run concurrently.
  if (uses_coarse_potential && opt.concurrent_fine_solves) {
    SolveResult phi_sol, p_sol[2];
    std::vector<double> rhs_p[2];
    SparseMatrix np_red[2];
    for (int species = 0; species < 2; ++species) {
      const int q = species == 0 ? kChargeP1 : kChargeP2;
      const ScalarField3& f = species == 0 ? sources.f1 : sources.f2;
      std::vector<double> rhs_full = assemble_load(fine, f, policy);
      if (symmetrized) {
        const NodalField& pc = species == 0 ? p1_coarse : p2_coarse;
        const std::vector<double> dr =
            assemble_drift_rhs(fine, pc, phi_coarse, q, policy);
        for (std::size_t i = 0; i < rhs_full.size(); ++i) rhs_full[i] -= dr[i];
        np_red[species] = stiffness_red;
      } else {
        const SparseMatrix drift =
            assemble_drift_matrix(fine, phi_coarse, kChargeP1, policy);
        np_red[species] = apply_dirichlet(
            add_scaled(stiffness, static_cast<double>(q), drift), fine);
      }
      rhs_p[species] = apply_dirichlet(rhs_full, fine);
    }
    // Serial policy inside the threads; identical bits either way.
    std::thread tphi([&] {
      phi_sol = solve_cg(stiffness_red, rhs_phi, inner, ExecPolicy::serial);
    });
    std::thread tp1([&] {
      p_sol[0] = symmetrized
                     ? solve_cg(np_red[0], rhs_p[0], inner, ExecPolicy::serial)
                     : solve_bicgstab(np_red[0], rhs_p[0], inner,
                                      ExecPolicy::serial);
    });
    std::thread tp2([&] {
      p_sol[1] = symmetrized
                     ? solve_cg(np_red[1], rhs_p[1], inner, ExecPolicy::serial)
                     : solve_bicgstab(np_red[1], rhs_p[1], inner,
                                      ExecPolicy::serial);
    });
    tphi.join();
    tp1.join();
    tp2.join();
    require_converged(phi_sol.report, "two_grid poisson");
    require_converged(p_sol[0].report, "two_grid np p1");
    require_converged(p_sol[1].report, "two_grid np p2");
    result.inner_iterations += phi_sol.report.iterations +
                               p_sol[0].report.iterations +
                               p_sol[1].report.iterations;
    result.fine.phi.values = expand_with_boundary_zeros(phi_sol.x, fine);
    result.fine.p1.values = expand_with_boundary_zeros(p_sol[0].x, fine);
    result.fine.p2.values = expand_with_boundary_zeros(p_sol[1].x, fine);
    return result;
  }

  SolveResult phi_sol = solve_cg(stiffness_red, rhs_phi, inner, policy);
  require_converged(phi_sol.report, "two_grid poisson");
  result.inner_iterations += phi_sol.report.iterations;
  result.fine.phi.values = expand_with_boundary_zeros(phi_sol.x, fine);

  const NodalField& np_potential =
      uses_coarse_potential ? phi_coarse : result.fine.phi;
  SparseMatrix drift;
  if (!symmetrized) {
    drift = assemble_drift_matrix(fine, np_potential, kChargeP1, policy);
  }
  for (int species = 0; species < 2; ++species) {
    const int q = species == 0 ? kChargeP1 : kChargeP2;
    const ScalarField3& f = species == 0 ? sources.f1 : sources.f2;
    std::vector<double> rhs_full = assemble_load(fine, f, policy);
    SolveResult p_sol;
    if (symmetrized) {
      const NodalField& pc = species == 0 ? p1_coarse : p2_coarse;
      const std::vector<double> dr =
          assemble_drift_rhs(fine, pc, np_potential, q, policy);
      parallel_for(rhs_full.size(), policy,
                   [&](std::size_t i) { rhs_full[i] -= dr[i]; });
      p_sol = solve_cg(stiffness_red, apply_dirichlet(rhs_full, fine), inner,
                       policy);
    } else {
      const SparseMatrix np_red = apply_dirichlet(
          add_scaled(stiffness, static_cast<double>(q), drift), fine);
      p_sol = solve_bicgstab(np_red, apply_dirichlet(rhs_full, fine), inner,
                             policy);
    }
    require_converged(p_sol.report, species == 0 ? "two_grid np p1" : "two_grid np p2");
    result.inner_iterations += p_sol.report.iterations;
    NodalField& target = species == 0 ? result.fine.p1 : result.fine.p2;
    target.values = expand_with_boundary_zeros(p_sol.x, fine);
  }
  return result;
}

PnpState two_grid_I(const Mesh& coarse, const Mesh& fine,
                    const SourceTerms& sources, const TwoGridOptions& opt) {
  return two_grid_solve(coarse, fine, sources, TwoGridVariant::linearized, opt)
      .fine;
}

PnpState two_grid_II(const Mesh& coarse, const Mesh& fine,
                     const SourceTerms& sources, const TwoGridOptions& opt) {
  return two_grid_solve(coarse, fine, sources, TwoGridVariant::decoupled, opt)
      .fine;
}

PnpState two_grid_III(const Mesh& coarse, const Mesh& fine,
                      const SourceTerms& sources, const TwoGridOptions& opt) {
  return two_grid_solve(coarse, fine, sources, TwoGridVariant::symmetrized, opt)
      .fine;
}

PnpState two_grid_IV(const Mesh& coarse, const Mesh& fine,
                     const SourceTerms& sources, const TwoGridOptions& opt) {
  return two_grid_solve(coarse, fine, sources,
                        TwoGridVariant::symmetrized_decoupled, opt)
      .fine;
}

}  // namespace pnptg
