#include "pnptg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace pnptg {

namespace {

// Axis permutations in lexicographic order, with parity. Permutation p walks
// the cell from corner (0,0,0) to (1,1,1) one axis at a time; the visited
// corners are the tet vertices. Odd permutations get vertices 1 and 2
// swapped so every stored tet has positive signed volume.
constexpr int kPerm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                             {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
constexpr bool kPermOdd[6] = {false, true, true, false, false, true};

std::array<Vec3, 4> p1_gradients_from_vertices(const std::array<Vec3, 4>& v,
                                               double* signed_volume) {
  double J[3][3];
  for (int a = 1; a < 4; ++a) {
    for (int d = 0; d < 3; ++d) J[d][a - 1] = v[a][d] - v[0][d];
  }
  const double det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
                     J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                     J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
  if (signed_volume != nullptr) *signed_volume = det / 6.0;
  double inv[3][3];
  inv[0][0] = (J[1][1] * J[2][2] - J[1][2] * J[2][1]) / det;
  inv[0][1] = (J[0][2] * J[2][1] - J[0][1] * J[2][2]) / det;
  inv[0][2] = (J[0][1] * J[1][2] - J[0][2] * J[1][1]) / det;
  inv[1][0] = (J[1][2] * J[2][0] - J[1][0] * J[2][2]) / det;
  inv[1][1] = (J[0][0] * J[2][2] - J[0][2] * J[2][0]) / det;
  inv[1][2] = (J[0][2] * J[1][0] - J[0][0] * J[1][2]) / det;
  inv[2][0] = (J[1][0] * J[2][1] - J[1][1] * J[2][0]) / det;
  inv[2][1] = (J[0][1] * J[2][0] - J[0][0] * J[2][1]) / det;
  inv[2][2] = (J[0][0] * J[1][1] - J[0][1] * J[1][0]) / det;
  // lambda_a(x) = (J^{-1} (x - v0))_a for a = 1..3, so gradients are the
  // rows of J^{-1}; lambda_0 completes the partition of unity.
  std::array<Vec3, 4> g{};
  for (int a = 1; a < 4; ++a) {
    for (int d = 0; d < 3; ++d) g[a][d] = inv[a - 1][d];
  }
  for (int d = 0; d < 3; ++d) g[0][d] = -(g[1][d] + g[2][d] + g[3][d]);
  return g;
}

}  // namespace

Mesh::Mesh(int resolution) : n_(resolution) {
  if (resolution < 1) {
    throw std::invalid_argument("mesh resolution must be a positive integer");
  }
  const int n = n_;
  const int m = n + 1;
  nodes_.resize(static_cast<std::size_t>(m) * m * m);
  boundary_.assign(nodes_.size(), 0);
  interior_index_.assign(nodes_.size(), -1);
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < m; ++i) {
        const int id = i + m * (j + m * k);
        nodes_[id] = {static_cast<double>(i) / n, static_cast<double>(j) / n,
                      static_cast<double>(k) / n};
        const bool bnd = i == 0 || i == n || j == 0 || j == n || k == 0 || k == n;
        boundary_[id] = bnd ? 1 : 0;
        if (!bnd) {
          interior_index_[id] = static_cast<int>(interior_nodes_.size());
          interior_nodes_.push_back(id);
        }
      }
    }
  }

  volume_ = 1.0 / (6.0 * n * n * n);
  tets_.reserve(static_cast<std::size_t>(6) * n * n * n);
  for (int ck = 0; ck < n; ++ck) {
    for (int cj = 0; cj < n; ++cj) {
      for (int ci = 0; ci < n; ++ci) {
        const int base[3] = {ci, cj, ck};
        for (int p = 0; p < 6; ++p) {
          int corner[4][3];
          for (int d = 0; d < 3; ++d) corner[0][d] = base[d];
          for (int step = 0; step < 3; ++step) {
            for (int d = 0; d < 3; ++d) corner[step + 1][d] = corner[step][d];
            corner[step + 1][kPerm[p][step]] += 1;
          }
          std::array<int, 4> tet{};
          for (int a = 0; a < 4; ++a) {
            tet[a] = corner[a][0] + m * (corner[a][1] + m * corner[a][2]);
          }
          if (kPermOdd[p]) std::swap(tet[1], tet[2]);
          tets_.push_back(tet);
        }
      }
    }
  }

  // One gradient set per permutation class, computed on the unit-size cell
  // (integer coordinates, exact arithmetic) and scaled by n.
  for (int p = 0; p < 6; ++p) {
    std::array<Vec3, 4> v{};
    int corner[4][3] = {};
    for (int step = 0; step < 3; ++step) {
      for (int d = 0; d < 3; ++d) corner[step + 1][d] = corner[step][d];
      corner[step + 1][kPerm[p][step]] += 1;
    }
    for (int a = 0; a < 4; ++a) {
      for (int d = 0; d < 3; ++d) v[a][d] = corner[a][d];
    }
    if (kPermOdd[p]) std::swap(v[1], v[2]);
    double vol = 0.0;
    class_gradients_[p] = p1_gradients_from_vertices(v, &vol);
    if (vol <= 0.0) throw std::logic_error("negative tet volume in cell pattern");
    for (auto& grad : class_gradients_[p]) {
      for (double& c : grad) c *= n;
    }
  }

  adjacency_offsets_.assign(nodes_.size() + 1, 0);
  for (const auto& tet : tets_) {
    for (int a = 0; a < 4; ++a) adjacency_offsets_[tet[a] + 1] += 1;
  }
  for (std::size_t i = 1; i < adjacency_offsets_.size(); ++i) {
    adjacency_offsets_[i] += adjacency_offsets_[i - 1];
  }
  adjacency_.resize(adjacency_offsets_.back());
  std::vector<int> cursor(adjacency_offsets_.begin(),
                          adjacency_offsets_.end() - 1);
  for (int t = 0; t < num_tets(); ++t) {
    for (int a = 0; a < 4; ++a) adjacency_[cursor[tets_[t][a]]++] = t;
  }
}

Mesh build_unit_cube_mesh(int n) { return Mesh(n); }

PointLocation locate_point(const Mesh& mesh, const Vec3& x) {
  for (int d = 0; d < 3; ++d) {
    if (!(x[d] >= 0.0 && x[d] <= 1.0)) {
      throw std::domain_error("locate_point: point outside the unit cube");
    }
  }
  const int n = mesh.resolution();
  int cell[3];
  double u[3];
  for (int d = 0; d < 3; ++d) {
    const double s = x[d] * n;
    int c = static_cast<int>(std::floor(s));
    if (c > n - 1) c = n - 1;
    if (c < 0) c = 0;
    cell[d] = c;
    u[d] = s - c;
  }
  // Stable descending sort of the fractional coordinates picks the axis walk
  // order, which identifies the containing tet within the cell.
  int a0 = 0, a1 = 1, a2 = 2;
  if (u[a0] < u[a1]) std::swap(a0, a1);
  if (u[a1] < u[a2]) std::swap(a1, a2);
  if (u[a0] < u[a1]) std::swap(a0, a1);
  const int pid = 2 * a0 + (a1 > a2 ? 1 : 0);
  PointLocation loc;
  loc.tet = 6 * (cell[0] + n * (cell[1] + n * cell[2])) + pid;
  loc.barycentric = {1.0 - u[a0], u[a0] - u[a1], u[a1] - u[a2], u[a2]};
  if (kPermOdd[pid]) std::swap(loc.barycentric[1], loc.barycentric[2]);

  double lmin = loc.barycentric[0];
  for (double l : loc.barycentric) lmin = std::min(lmin, l);
  if (lmin < -1e-12) {
    // Defensive fallback for degenerate rounding: scan the 6 tets of the
    // cell and keep the best barycentric fit.
    const int cell_base = 6 * (cell[0] + n * (cell[1] + n * cell[2]));
    double best = -1.0;
    for (int p = 0; p < 6; ++p) {
      const int t = cell_base + p;
      const auto& g = mesh.tet_gradients(t);
      const Vec3& v0 = mesh.nodes()[mesh.tets()[t][0]];
      std::array<double, 4> lam{};
      double local_min = 1.0;
      for (int a = 0; a < 4; ++a) {
        const Vec3 dx = {x[0] - v0[0], x[1] - v0[1], x[2] - v0[2]};
        lam[a] = (a == 0 ? 1.0 : 0.0) + dot3(g[a], dx);
        local_min = std::min(local_min, lam[a]);
      }
      if (local_min > best) {
        best = local_min;
        loc.tet = t;
        loc.barycentric = lam;
      }
    }
  }
  return loc;
}

double eval_p1(const Mesh& mesh, const std::vector<double>& nodal,
               const Vec3& x) {
  const PointLocation loc = locate_point(mesh, x);
  const auto& tet = mesh.tets()[loc.tet];
  double s = 0.0;
  for (int a = 0; a < 4; ++a) s += loc.barycentric[a] * nodal[tet[a]];
  return s;
}

NodalField prolongate(const Mesh& coarse, const NodalField& coarse_field,
                      const Mesh& fine, ExecPolicy policy) {
  if (coarse_field.resolution != coarse.resolution() ||
      static_cast<int>(coarse_field.values.size()) != coarse.num_nodes()) {
    throw std::invalid_argument("prolongate: field does not live on the coarse mesh");
  }
  if (fine.resolution() % coarse.resolution() != 0) {
    throw std::invalid_argument(
        "prolongate: fine resolution must be an integer multiple of coarse");
  }
  NodalField out;
  out.resolution = fine.resolution();
  out.values.assign(fine.num_nodes(), 0.0);
  const auto& fine_nodes = fine.nodes();
  parallel_for(fine_nodes.size(), policy, [&](std::size_t i) {
    out.values[i] = eval_p1(coarse, coarse_field.values, fine_nodes[i]);
  });
  return out;
}

void write_mesh_text(const Mesh& mesh, std::ostream& out) {
  out << "mesh " << mesh.resolution() << ' ' << mesh.num_nodes() << ' '
      << mesh.num_tets() << '\n';
  for (const auto& v : mesh.nodes()) {
    out << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  }
  for (const auto& t : mesh.tets()) {
    out << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
  }
}

}  // namespace pnptg
