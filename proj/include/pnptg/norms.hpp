#pragma once

#include "pnptg/field.hpp"
#include "pnptg/mesh.hpp"
#include "pnptg/parallel.hpp"

namespace pnptg {

// L2 distance between a P1 field and a smooth function, degree-5 quadrature
// per element.
double error_l2(const Mesh& mesh, const NodalField& field,
                const ScalarField3& exact,
                ExecPolicy policy = default_exec_policy());

// Full H1 distance: sqrt of (L2 part squared + gradient part squared), with
// the element-constant P1 gradient against the exact gradient at quadrature
// points.
double error_h1(const Mesh& mesh, const NodalField& field,
                const ScalarField3& exact, const VectorField3& exact_grad,
                ExecPolicy policy = default_exec_policy());

// Exact L2(Omega) norm of the P1 function itself (closed-form element mass).
double nodal_l2_norm(const Mesh& mesh, const std::vector<double>& values,
                     ExecPolicy policy = default_exec_policy());

// Exact H1 seminorm ||grad u_h||_0 of the P1 function.
double nodal_h1_seminorm(const Mesh& mesh, const std::vector<double>& values,
                         ExecPolicy policy = default_exec_policy());

struct ErrorReport {
  // Order: phi, p1, p2.
  std::array<double, 3> l2{};
  std::array<double, 3> h1{};
};

}  // namespace pnptg
