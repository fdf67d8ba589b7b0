#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "pnptg/field.hpp"
#include "pnptg/parallel.hpp"

namespace pnptg {

struct PointLocation {
  int tet = -1;
  std::array<double, 4> barycentric{};
};

// Uniform Kuhn triangulation of the unit cube: n cells per axis, each cell
// split into the 6 tetrahedra sharing the cell diagonal. The pattern is the
// same in every cell, so the meshes of resolutions n and k*n are nested.
// Node ids run x-fastest: id = i + (n+1)*(j + (n+1)*k). Tet ids run 6 per
// cell in a fixed axis-permutation order.
class Mesh {
 public:
  explicit Mesh(int resolution);

  int resolution() const { return n_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_tets() const { return static_cast<int>(tets_.size()); }
  int num_interior() const { return static_cast<int>(interior_nodes_.size()); }

  const std::vector<Vec3>& nodes() const { return nodes_; }
  const std::vector<std::array<int, 4>>& tets() const { return tets_; }

  bool on_boundary(int node) const { return boundary_[node] != 0; }
  const std::vector<char>& boundary_mask() const { return boundary_; }
  // Index into the Dirichlet-reduced system, -1 for boundary nodes.
  int interior_index(int node) const { return interior_index_[node]; }
  const std::vector<int>& interior_nodes() const { return interior_nodes_; }

  // All tets are congruent up to translation and axis relabeling.
  double tet_volume() const { return volume_; }
  const std::array<Vec3, 4>& tet_gradients(int t) const {
    return class_gradients_[t % 6];
  }

  // Tets incident to a node, ascending.
  const int* adjacent_tets_begin(int node) const {
    return adjacency_.data() + adjacency_offsets_[node];
  }
  const int* adjacent_tets_end(int node) const {
    return adjacency_.data() + adjacency_offsets_[node + 1];
  }

 private:
  int n_ = 0;
  double volume_ = 0.0;
  std::vector<Vec3> nodes_;
  std::vector<std::array<int, 4>> tets_;
  std::vector<char> boundary_;
  std::vector<int> interior_index_;
  std::vector<int> interior_nodes_;
  std::array<std::array<Vec3, 4>, 6> class_gradients_{};
  std::vector<int> adjacency_offsets_;
  std::vector<int> adjacency_;
};

Mesh build_unit_cube_mesh(int n);

// O(1) analytic location: cell from floor(n*x), tet within the cell from the
// descending order of the fractional coordinates. Throws std::domain_error
// for points outside the closed cube.
PointLocation locate_point(const Mesh& mesh, const Vec3& x);

// Evaluate the P1 function given by nodal values at an arbitrary point.
double eval_p1(const Mesh& mesh, const std::vector<double>& nodal,
               const Vec3& x);

// Transfer a coarse P1 function to fine nodal coefficients. Exact on nested
// meshes. Rejects resolutions that are not integer multiples.
NodalField prolongate(const Mesh& coarse, const NodalField& coarse_field,
                      const Mesh& fine,
                      ExecPolicy policy = default_exec_policy());

// Debug export: one entity per line ("v x y z" / "t a b c d").
void write_mesh_text(const Mesh& mesh, std::ostream& out);

}  // namespace pnptg
