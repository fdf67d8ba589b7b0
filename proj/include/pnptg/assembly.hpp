#pragma once

#include <vector>

#include "pnptg/field.hpp"
#include "pnptg/mesh.hpp"
#include "pnptg/parallel.hpp"
#include "pnptg/sparse.hpp"

namespace pnptg {

// All assemblies run over the full node set; apply_dirichlet reduces to the
// interior afterwards. Contributions accumulate per matrix entry in
// ascending element order under both execution policies (serial scatter,
// OpenMP row gather), so outputs are bitwise reproducible.

// Entries of (grad lambda_b, grad lambda_a). Symmetric flag set.
SparseMatrix assemble_stiffness(const Mesh& mesh,
                                ExecPolicy policy = default_exec_policy());

// Entries of (lambda_b, lambda_a): exact P1 mass, |K|/20 * (1 + delta_ab).
SparseMatrix assemble_mass(const Mesh& mesh,
                           ExecPolicy policy = default_exec_policy());

// Drift form (q p grad phi_h, grad v): trial p is the column, test v the
// row. Exact per element since grad phi_h and grad lambda_a are constant.
// Generically asymmetric; charge must be +1 or -1.
SparseMatrix assemble_drift_matrix(const Mesh& mesh, const NodalField& phi,
                                   int charge,
                                   ExecPolicy policy = default_exec_policy());

// Entries of (q p_known grad phi_known, grad lambda_a), exact per element.
// Equals assemble_drift_matrix(mesh, phi_known, charge) * p_known.values.
std::vector<double> assemble_drift_rhs(const Mesh& mesh,
                                       const NodalField& p_known,
                                       const NodalField& phi_known, int charge,
                                       ExecPolicy policy = default_exec_policy());

// Entries of (f, lambda_a) via the degree-2 rule.
std::vector<double> assemble_load(const Mesh& mesh, const ScalarField3& f,
                                  ExecPolicy policy = default_exec_policy());

// Remove boundary rows/columns (entries) to the interior-DOF system.
SparseMatrix apply_dirichlet(const SparseMatrix& a, const Mesh& mesh);
std::vector<double> apply_dirichlet(const std::vector<double>& v,
                                    const Mesh& mesh);

// Re-expand an interior solution with zeros at boundary nodes.
std::vector<double> expand_with_boundary_zeros(const std::vector<double>& interior,
                                               const Mesh& mesh);

}  // namespace pnptg
