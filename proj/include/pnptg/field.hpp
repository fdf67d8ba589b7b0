#pragma once

#include <array>
#include <functional>
#include <vector>

namespace pnptg {

using Vec3 = std::array<double, 3>;

inline double dot3(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

using ScalarField3 = std::function<double(const Vec3&)>;
using VectorField3 = std::function<Vec3(const Vec3&)>;

// Nodal coefficients of a piecewise linear function. All meshes are uniform
// unit-cube triangulations, so the owning mesh is identified by resolution.
struct NodalField {
  int resolution = 0;
  std::vector<double> values;
};

// Right-hand sides (F1, F2, F3) of the two Nernst-Planck equations and the
// Poisson equation, in that order.
struct SourceTerms {
  ScalarField3 f1, f2, f3;
};

}  // namespace pnptg
