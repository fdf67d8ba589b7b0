#include "pnptg/manufactured.hpp"

#include <cmath>
#include <numbers>

namespace pnptg {

namespace {

constexpr double kPi = std::numbers::pi;

double sin3(double k, const Vec3& x) {
  return std::sin(k * x[0]) * std::sin(k * x[1]) * std::sin(k * x[2]);
}

Vec3 grad_sin3(double k, const Vec3& x) {
  const double sx = std::sin(k * x[0]), sy = std::sin(k * x[1]),
               sz = std::sin(k * x[2]);
  const double cx = std::cos(k * x[0]), cy = std::cos(k * x[1]),
               cz = std::cos(k * x[2]);
  return {k * cx * sy * sz, k * sx * cy * sz, k * sx * sy * cz};
}

}  // namespace

ManufacturedSolution manufactured_solution() {
  ManufacturedSolution s;
  s.phi = [](const Vec3& x) { return sin3(kPi, x); };
  s.p1 = [](const Vec3& x) { return sin3(2.0 * kPi, x); };
  s.p2 = [](const Vec3& x) { return sin3(3.0 * kPi, x); };
  s.grad_phi = [](const Vec3& x) { return grad_sin3(kPi, x); };
  s.grad_p1 = [](const Vec3& x) { return grad_sin3(2.0 * kPi, x); };
  s.grad_p2 = [](const Vec3& x) { return grad_sin3(3.0 * kPi, x); };
  // F_i = -lap p_i - q_i (grad p_i . grad phi + p_i lap phi), with
  // lap p1 = -12 pi^2 p1, lap p2 = -27 pi^2 p2, lap phi = -3 pi^2 phi.
  s.f1 = [](const Vec3& x) {
    const double p1 = sin3(2.0 * kPi, x);
    const double phi = sin3(kPi, x);
    return 12.0 * kPi * kPi * p1 -
           dot3(grad_sin3(2.0 * kPi, x), grad_sin3(kPi, x)) +
           3.0 * kPi * kPi * p1 * phi;
  };
  s.f2 = [](const Vec3& x) {
    const double p2 = sin3(3.0 * kPi, x);
    const double phi = sin3(kPi, x);
    return 27.0 * kPi * kPi * p2 +
           dot3(grad_sin3(3.0 * kPi, x), grad_sin3(kPi, x)) -
           3.0 * kPi * kPi * p2 * phi;
  };
  s.f3 = [](const Vec3& x) {
    return 3.0 * kPi * kPi * sin3(kPi, x) - sin3(2.0 * kPi, x) +
           sin3(3.0 * kPi, x);
  };
  return s;
}

SourceTerms source_terms(const ManufacturedSolution& sol) {
  return {sol.f1, sol.f2, sol.f3};
}

}  // namespace pnptg
