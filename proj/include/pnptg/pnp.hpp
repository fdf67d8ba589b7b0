#pragma once

#include <optional>

#include "pnptg/field.hpp"
#include "pnptg/mesh.hpp"
#include "pnptg/solvers.hpp"

namespace pnptg {

// Concentrations and potential on one mesh; boundary values exactly zero.
struct PnpState {
  NodalField p1, p2, phi;
};

PnpState zero_state(const Mesh& mesh);

struct GummelConfig {
  // Outer stop: L2 norm of the potential update falls below this.
  double stop_tolerance = 1e-5;
  int max_outer_iterations = 200;
  // Inner linear solves. The preconditioner is promoted to Jacobi on meshes
  // with resolution >= 16, where the stiffness conditioning needs it.
  SolverConfig inner;
  std::optional<PnpState> initial_guess;
};

struct GummelResult {
  PnpState state;
  int outer_iterations = 0;
  long inner_iterations = 0;
};

// Alternate the Poisson solve (CG) and the two Nernst-Planck solves
// (BiCGStab, drift matrix from the fresh potential; the species do not see
// each other's update within a sweep) until the potential stagnates.
// Throws std::runtime_error if the outer loop or an inner solve fails.
GummelResult gummel_solve(const Mesh& mesh, const SourceTerms& sources,
                          const GummelConfig& cfg = {});

// The four fine-grid strategies share Step 1 (full Gummel solve on the
// coarse mesh) and the fine Poisson solve; they differ in the fine
// Nernst-Planck step:
//   linearized             drift matrix from the fine potential, BiCGStab
//   decoupled              drift matrix from the coarse potential, BiCGStab
//   symmetrized            drift moved to the RHS with the coarse
//                          concentration and fine potential, CG
//   symmetrized_decoupled  drift RHS from coarse concentration and coarse
//                          potential, CG
// "decoupled" and "symmetrized_decoupled" make all three fine solves
// mutually independent.
enum class TwoGridVariant {
  linearized = 1,
  decoupled = 2,
  symmetrized = 3,
  symmetrized_decoupled = 4,
};

struct TwoGridOptions {
  GummelConfig gummel;
  // For the fully decoupled variants: run the three fine solves on three
  // threads. Results are identical to the sequential path.
  bool concurrent_fine_solves = false;
};

struct TwoGridResult {
  PnpState fine;
  PnpState coarse;
  int coarse_outer_iterations = 0;
  long inner_iterations = 0;
};

TwoGridResult two_grid_solve(const Mesh& coarse, const Mesh& fine,
                             const SourceTerms& sources, TwoGridVariant variant,
                             const TwoGridOptions& opt = {});

PnpState two_grid_I(const Mesh& coarse, const Mesh& fine,
                    const SourceTerms& sources, const TwoGridOptions& opt = {});
PnpState two_grid_II(const Mesh& coarse, const Mesh& fine,
                     const SourceTerms& sources, const TwoGridOptions& opt = {});
PnpState two_grid_III(const Mesh& coarse, const Mesh& fine,
                      const SourceTerms& sources, const TwoGridOptions& opt = {});
PnpState two_grid_IV(const Mesh& coarse, const Mesh& fine,
                     const SourceTerms& sources, const TwoGridOptions& opt = {});

}  // namespace pnptg
