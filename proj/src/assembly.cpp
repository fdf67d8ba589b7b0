#include "pnptg/assembly.hpp"

#include <algorithm>
#include <stdexcept>

#include "pnptg/quadrature.hpp"

namespace pnptg {

namespace {

void require_field_on_mesh(const NodalField& f, const Mesh& mesh,
                           const char* what) {
  if (f.resolution != mesh.resolution() ||
      static_cast<int>(f.values.size()) != mesh.num_nodes()) {
    throw std::invalid_argument(std::string(what) +
                                ": field does not live on this mesh");
  }
}

void require_charge(int charge) {
  if (charge != 1 && charge != -1) {
    throw std::invalid_argument("charge must be +1 or -1");
  }
}

struct Element4x4 {
  double v[4][4];
};

// The element kernels are noinline so the scatter and gather drivers call
// one shared instance and accumulate bitwise-identical addends.

[[gnu::noinline]] Element4x4 stiffness_element(const Mesh& mesh, int t) {
  const auto& g = mesh.tet_gradients(t);
  const double vol = mesh.tet_volume();
  Element4x4 e;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) e.v[a][b] = vol * dot3(g[a], g[b]);
  }
  return e;
}

[[gnu::noinline]] Element4x4 mass_element(const Mesh& mesh, int) {
  const double off = mesh.tet_volume() / 20.0;
  Element4x4 e;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) e.v[a][b] = (a == b) ? 2.0 * off : off;
  }
  return e;
}

[[gnu::noinline]] Element4x4 drift_element(const Mesh& mesh,
                                           const double* phi, int charge,
                                           int t) {
  const auto& g = mesh.tet_gradients(t);
  const auto& tet = mesh.tets()[t];
  Vec3 gphi = {0.0, 0.0, 0.0};
  for (int a = 0; a < 4; ++a) {
    for (int d = 0; d < 3; ++d) gphi[d] += phi[tet[a]] * g[a][d];
  }
  // Row a carries q (grad phi . grad lambda_a) |K|/4; the trial factor
  // integrates each lambda_b to |K|/4 regardless of b.
  const double scale = charge * mesh.tet_volume() / 4.0;
  Element4x4 e;
  for (int a = 0; a < 4; ++a) {
    const double row = scale * dot3(gphi, g[a]);
    for (int b = 0; b < 4; ++b) e.v[a][b] = row;
  }
  return e;
}

[[gnu::noinline]] std::array<double, 4> load_element(const Mesh& mesh,
                                                     const ScalarField3& f,
                                                     int t) {
  const auto& tet = mesh.tets()[t];
  const auto& nodes = mesh.nodes();
  std::array<double, 4> out = {0.0, 0.0, 0.0, 0.0};
  for (const TetQuadPoint& qp : kTetRuleDeg2) {
    Vec3 p = {0.0, 0.0, 0.0};
    for (int a = 0; a < 4; ++a) {
      for (int d = 0; d < 3; ++d) p[d] += qp.bary[a] * nodes[tet[a]][d];
    }
    const double fw = qp.weight * f(p);
    for (int a = 0; a < 4; ++a) out[a] += fw * qp.bary[a];
  }
  const double vol = mesh.tet_volume();
  for (double& v : out) v *= vol;
  return out;
}

[[gnu::noinline]] std::array<double, 4> drift_rhs_element(
    const Mesh& mesh, const double* p_known, const double* phi_known,
    int charge, int t) {
  const auto& g = mesh.tet_gradients(t);
  const auto& tet = mesh.tets()[t];
  Vec3 gphi = {0.0, 0.0, 0.0};
  double psum = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int d = 0; d < 3; ++d) gphi[d] += phi_known[tet[a]] * g[a][d];
    psum += p_known[tet[a]];
  }
  const double scale = charge * mesh.tet_volume() / 4.0 * psum;
  std::array<double, 4> out;
  for (int a = 0; a < 4; ++a) out[a] = scale * dot3(gphi, g[a]);
  return out;
}

SparseMatrix build_node_pattern(const Mesh& mesh, ExecPolicy policy) {
  const int nn = mesh.num_nodes();
  SparseMatrix a;
  a.dim = nn;
  a.row_offsets.assign(nn + 1, 0);
  std::vector<int> degree(nn, 0);
  const auto& tets = mesh.tets();

  auto row_neighbors = [&](int r, int* buf) {
    int cnt = 0;
    for (const int* pt = mesh.adjacent_tets_begin(r);
         pt != mesh.adjacent_tets_end(r); ++pt) {
      for (int a = 0; a < 4; ++a) {
        const int c = tets[*pt][a];
        bool seen = false;
        for (int i = 0; i < cnt; ++i) {
          if (buf[i] == c) {
            seen = true;
            break;
          }
        }
        if (!seen) buf[cnt++] = c;
      }
    }
    std::sort(buf, buf + cnt);
    return cnt;
  };

  parallel_for(static_cast<std::size_t>(nn), policy, [&](std::size_t r) {
    int buf[32];
    degree[r] = row_neighbors(static_cast<int>(r), buf);
  });
  for (int r = 0; r < nn; ++r) a.row_offsets[r + 1] = a.row_offsets[r] + degree[r];
  a.col_indices.resize(a.row_offsets[nn]);
  a.values.assign(a.row_offsets[nn], 0.0);
  parallel_for(static_cast<std::size_t>(nn), policy, [&](std::size_t r) {
    int buf[32];
    const int cnt = row_neighbors(static_cast<int>(r), buf);
    std::copy(buf, buf + cnt, a.col_indices.data() + a.row_offsets[r]);
  });
  return a;
}

// Serial driver: ascending elements, scatter all 16 entries.
template <class Kernel>
void scatter_matrix(const Mesh& mesh, const Kernel& kernel, SparseMatrix& a) {
  const auto& tets = mesh.tets();
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const Element4x4 e = kernel(t);
    for (int la = 0; la < 4; ++la) {
      const int r = tets[t][la];
      for (int lb = 0; lb < 4; ++lb) {
        a.values[a.find(r, tets[t][lb])] += e.v[la][lb];
      }
    }
  }
}

// Parallel driver: each row gathers from its adjacent elements, ascending.
// Per matrix entry the addends and their order match the scatter driver.
template <class Kernel>
void gather_matrix(const Mesh& mesh, const Kernel& kernel, SparseMatrix& a,
                   ExecPolicy policy) {
  const auto& tets = mesh.tets();
  parallel_for(static_cast<std::size_t>(mesh.num_nodes()), policy,
               [&](std::size_t row) {
                 const int r = static_cast<int>(row);
                 for (const int* pt = mesh.adjacent_tets_begin(r);
                      pt != mesh.adjacent_tets_end(r); ++pt) {
                   const int t = *pt;
                   const Element4x4 e = kernel(t);
                   int la = 0;
                   while (tets[t][la] != r) ++la;
                   for (int lb = 0; lb < 4; ++lb) {
                     a.values[a.find(r, tets[t][lb])] += e.v[la][lb];
                   }
                 }
               });
}

template <class Kernel>
SparseMatrix assemble_matrix(const Mesh& mesh, ExecPolicy policy,
                             bool symmetric, const Kernel& kernel) {
  SparseMatrix a = build_node_pattern(mesh, policy);
  a.symmetric = symmetric;
  if (policy == ExecPolicy::openmp) {
    gather_matrix(mesh, kernel, a, policy);
  } else {
    scatter_matrix(mesh, kernel, a);
  }
  return a;
}

template <class Kernel>
std::vector<double> assemble_vector(const Mesh& mesh, ExecPolicy policy,
                                    const Kernel& kernel) {
  std::vector<double> out(mesh.num_nodes(), 0.0);
  const auto& tets = mesh.tets();
  if (policy == ExecPolicy::openmp) {
    parallel_for(static_cast<std::size_t>(mesh.num_nodes()), policy,
                 [&](std::size_t row) {
                   const int r = static_cast<int>(row);
                   for (const int* pt = mesh.adjacent_tets_begin(r);
                        pt != mesh.adjacent_tets_end(r); ++pt) {
                     const std::array<double, 4> e = kernel(*pt);
                     int la = 0;
                     while (tets[*pt][la] != r) ++la;
                     out[r] += e[la];
                   }
                 });
  } else {
    for (int t = 0; t < mesh.num_tets(); ++t) {
      const std::array<double, 4> e = kernel(t);
      for (int la = 0; la < 4; ++la) out[tets[t][la]] += e[la];
    }
  }
  return out;
}

}  // namespace

SparseMatrix assemble_stiffness(const Mesh& mesh, ExecPolicy policy) {
  return assemble_matrix(mesh, policy, true,
                         [&](int t) { return stiffness_element(mesh, t); });
}

SparseMatrix assemble_mass(const Mesh& mesh, ExecPolicy policy) {
  return assemble_matrix(mesh, policy, true,
                         [&](int t) { return mass_element(mesh, t); });
}

SparseMatrix assemble_drift_matrix(const Mesh& mesh, const NodalField& phi,
                                   int charge, ExecPolicy policy) {
  require_field_on_mesh(phi, mesh, "assemble_drift_matrix");
  require_charge(charge);
  const double* pv = phi.values.data();
  return assemble_matrix(mesh, policy, false, [&, pv](int t) {
    return drift_element(mesh, pv, charge, t);
  });
}

std::vector<double> assemble_drift_rhs(const Mesh& mesh,
                                       const NodalField& p_known,
                                       const NodalField& phi_known, int charge,
                                       ExecPolicy policy) {
  require_field_on_mesh(p_known, mesh, "assemble_drift_rhs");
  require_field_on_mesh(phi_known, mesh, "assemble_drift_rhs");
  require_charge(charge);
  const double* pp = p_known.values.data();
  const double* pf = phi_known.values.data();
  return assemble_vector(mesh, policy, [&, pp, pf](int t) {
    return drift_rhs_element(mesh, pp, pf, charge, t);
  });
}

std::vector<double> assemble_load(const Mesh& mesh, const ScalarField3& f,
                                  ExecPolicy policy) {
  return assemble_vector(mesh, policy,
                         [&](int t) { return load_element(mesh, f, t); });
}

SparseMatrix apply_dirichlet(const SparseMatrix& a, const Mesh& mesh) {
  if (a.dim != mesh.num_nodes()) {
    throw std::invalid_argument("apply_dirichlet: matrix not on full node set");
  }
  SparseMatrix r;
  r.dim = mesh.num_interior();
  r.symmetric = a.symmetric;
  r.row_offsets.assign(r.dim + 1, 0);
  const auto& interior = mesh.interior_nodes();
  for (int ir = 0; ir < r.dim; ++ir) {
    const int row = interior[ir];
    int cnt = 0;
    for (int p = a.row_offsets[row]; p < a.row_offsets[row + 1]; ++p) {
      if (mesh.interior_index(a.col_indices[p]) >= 0) ++cnt;
    }
    r.row_offsets[ir + 1] = r.row_offsets[ir] + cnt;
  }
  r.col_indices.resize(r.row_offsets[r.dim]);
  r.values.resize(r.row_offsets[r.dim]);
  for (int ir = 0; ir < r.dim; ++ir) {
    const int row = interior[ir];
    int pos = r.row_offsets[ir];
    for (int p = a.row_offsets[row]; p < a.row_offsets[row + 1]; ++p) {
      const int ic = mesh.interior_index(a.col_indices[p]);
      if (ic >= 0) {
        r.col_indices[pos] = ic;
        r.values[pos] = a.values[p];
        ++pos;
      }
    }
  }
  return r;
}

std::vector<double> apply_dirichlet(const std::vector<double>& v,
                                    const Mesh& mesh) {
  if (static_cast<int>(v.size()) != mesh.num_nodes()) {
    throw std::invalid_argument("apply_dirichlet: vector not on full node set");
  }
  std::vector<double> r(mesh.num_interior());
  const auto& interior = mesh.interior_nodes();
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = v[interior[i]];
  return r;
}

std::vector<double> expand_with_boundary_zeros(const std::vector<double>& interior,
                                               const Mesh& mesh) {
  if (static_cast<int>(interior.size()) != mesh.num_interior()) {
    throw std::invalid_argument("expand: interior size mismatch");
  }
  std::vector<double> full(mesh.num_nodes(), 0.0);
  const auto& nodes = mesh.interior_nodes();
  for (std::size_t i = 0; i < interior.size(); ++i) full[nodes[i]] = interior[i];
  return full;
}

}  // namespace pnptg
