#include "pnptg/norms.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pnptg/quadrature.hpp"

namespace pnptg {

namespace {

void require_field(const Mesh& mesh, const NodalField& f) {
  if (f.resolution != mesh.resolution() ||
      static_cast<int>(f.values.size()) != mesh.num_nodes()) {
    throw std::invalid_argument("error norm: field does not live on this mesh");
  }
}

[[gnu::noinline]] double l2_error_element(const Mesh& mesh, const double* vals,
                                          const ScalarField3& exact, int t) {
  const auto& tet = mesh.tets()[t];
  const auto& nodes = mesh.nodes();
  double acc = 0.0;
  for (const TetQuadPoint& qp : kTetRuleDeg5) {
    double uh = 0.0;
    Vec3 p = {0.0, 0.0, 0.0};
    for (int a = 0; a < 4; ++a) {
      uh += qp.bary[a] * vals[tet[a]];
      for (int d = 0; d < 3; ++d) p[d] += qp.bary[a] * nodes[tet[a]][d];
    }
    const double diff = uh - exact(p);
    acc += qp.weight * diff * diff;
  }
  return acc * mesh.tet_volume();
}

[[gnu::noinline]] double h1_error_element(const Mesh& mesh, const double* vals,
                                          const ScalarField3& exact,
                                          const VectorField3& exact_grad,
                                          int t) {
  const auto& tet = mesh.tets()[t];
  const auto& nodes = mesh.nodes();
  const auto& g = mesh.tet_gradients(t);
  Vec3 gh = {0.0, 0.0, 0.0};
  for (int a = 0; a < 4; ++a) {
    for (int d = 0; d < 3; ++d) gh[d] += vals[tet[a]] * g[a][d];
  }
  double acc = 0.0;
  for (const TetQuadPoint& qp : kTetRuleDeg5) {
    double uh = 0.0;
    Vec3 p = {0.0, 0.0, 0.0};
    for (int a = 0; a < 4; ++a) {
      uh += qp.bary[a] * vals[tet[a]];
      for (int d = 0; d < 3; ++d) p[d] += qp.bary[a] * nodes[tet[a]][d];
    }
    const double diff = uh - exact(p);
    const Vec3 ge = exact_grad(p);
    double gdiff = 0.0;
    for (int d = 0; d < 3; ++d) {
      gdiff += (gh[d] - ge[d]) * (gh[d] - ge[d]);
    }
    acc += qp.weight * (diff * diff + gdiff);
  }
  return acc * mesh.tet_volume();
}

[[gnu::noinline]] double l2_norm_element(const Mesh& mesh, const double* vals,
                                         int t) {
  const auto& tet = mesh.tets()[t];
  // d' M d with M = |K|/20 (1 + delta): |K|/20 ((sum d)^2 + sum d^2).
  double s = 0.0, s2 = 0.0;
  for (int a = 0; a < 4; ++a) {
    const double v = vals[tet[a]];
    s += v;
    s2 += v * v;
  }
  return mesh.tet_volume() / 20.0 * (s * s + s2);
}

[[gnu::noinline]] double h1_semi_element(const Mesh& mesh, const double* vals,
                                         int t) {
  const auto& tet = mesh.tets()[t];
  const auto& g = mesh.tet_gradients(t);
  Vec3 gh = {0.0, 0.0, 0.0};
  for (int a = 0; a < 4; ++a) {
    for (int d = 0; d < 3; ++d) gh[d] += vals[tet[a]] * g[a][d];
  }
  return mesh.tet_volume() * dot3(gh, gh);
}

template <class ElementFn>
double sum_over_elements(const Mesh& mesh, ExecPolicy policy,
                         const ElementFn& fn) {
  std::vector<double> partial(mesh.num_tets());
  parallel_for(partial.size(), policy,
               [&](std::size_t t) { partial[t] = fn(static_cast<int>(t)); });
  return deterministic_sum(partial.data(), partial.size(), policy);
}

}  // namespace

double error_l2(const Mesh& mesh, const NodalField& field,
                const ScalarField3& exact, ExecPolicy policy) {
  require_field(mesh, field);
  const double* vals = field.values.data();
  return std::sqrt(sum_over_elements(mesh, policy, [&](int t) {
    return l2_error_element(mesh, vals, exact, t);
  }));
}

double error_h1(const Mesh& mesh, const NodalField& field,
                const ScalarField3& exact, const VectorField3& exact_grad,
                ExecPolicy policy) {
  require_field(mesh, field);
  const double* vals = field.values.data();
  return std::sqrt(sum_over_elements(mesh, policy, [&](int t) {
    return h1_error_element(mesh, vals, exact, exact_grad, t);
  }));
}

double nodal_l2_norm(const Mesh& mesh, const std::vector<double>& values,
                     ExecPolicy policy) {
  if (static_cast<int>(values.size()) != mesh.num_nodes()) {
    throw std::invalid_argument("nodal_l2_norm: size mismatch");
  }
  const double* vals = values.data();
  return std::sqrt(sum_over_elements(
      mesh, policy, [&](int t) { return l2_norm_element(mesh, vals, t); }));
}

double nodal_h1_seminorm(const Mesh& mesh, const std::vector<double>& values,
                         ExecPolicy policy) {
  if (static_cast<int>(values.size()) != mesh.num_nodes()) {
    throw std::invalid_argument("nodal_h1_seminorm: size mismatch");
  }
  const double* vals = values.data();
  return std::sqrt(sum_over_elements(
      mesh, policy, [&](int t) { return h1_semi_element(mesh, vals, t); }));
}

}  // namespace pnptg
