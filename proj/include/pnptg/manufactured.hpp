#pragma once

#include "pnptg/field.hpp"

namespace pnptg {

// The benchmark problem: phi = sin(pi x) sin(pi y) sin(pi z),
// p1 = sin(2 pi x) sin(2 pi y) sin(2 pi z), p2 = the same with 3 pi.
// All vanish on the cube boundary. Source terms are the closed forms
// obtained by substituting into the strong equations with q1 = +1, q2 = -1:
//   F1 = 12 pi^2 p1 - grad p1 . grad phi + 3 pi^2 p1 phi
//   F2 = 27 pi^2 p2 + grad p2 . grad phi - 3 pi^2 p2 phi
//   F3 = 3 pi^2 phi - (p1 - p2)
struct ManufacturedSolution {
  ScalarField3 phi, p1, p2;
  VectorField3 grad_phi, grad_p1, grad_p2;
  ScalarField3 f1, f2, f3;
};

ManufacturedSolution manufactured_solution();

SourceTerms source_terms(const ManufacturedSolution& sol);

inline constexpr int kChargeP1 = 1;
inline constexpr int kChargeP2 = -1;

}  // namespace pnptg
