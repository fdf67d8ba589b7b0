#pragma once

#include <array>

namespace pnptg {

// Quadrature points in barycentric coordinates; weights are fractions of the
// element volume and sum to 1 within each rule.
struct TetQuadPoint {
  std::array<double, 4> bary;
  double weight;
};

namespace detail {
constexpr double kA2 = 0.5854101966249685;   // (5 + 3*sqrt 5)/20
constexpr double kB2 = 0.1381966011250105;   // (5 - sqrt 5)/20
constexpr double kB51 = 0.31088591926330050;
constexpr double kA51 = 1.0 - 3.0 * kB51;
constexpr double kW51 = 0.11268792571801585;
constexpr double kB52 = 0.09273525031089123;
constexpr double kA52 = 1.0 - 3.0 * kB52;
constexpr double kW52 = 0.07349304311636196;
constexpr double kC5 = 0.04550370412564964;
constexpr double kD5 = 0.5 - kC5;
constexpr double kW53 = 0.04254602077708147;
}  // namespace detail

// 4 points, exact for polynomials of degree <= 2. Used by load assembly.
inline constexpr std::array<TetQuadPoint, 4> kTetRuleDeg2 = {{
    {{detail::kA2, detail::kB2, detail::kB2, detail::kB2}, 0.25},
    {{detail::kB2, detail::kA2, detail::kB2, detail::kB2}, 0.25},
    {{detail::kB2, detail::kB2, detail::kA2, detail::kB2}, 0.25},
    {{detail::kB2, detail::kB2, detail::kB2, detail::kA2}, 0.25},
}};

// 14 points, exact for degree <= 5. Used by the error norms, where the
// integrand (P1 minus a smooth function) squared is oscillatory.
inline constexpr std::array<TetQuadPoint, 14> kTetRuleDeg5 = {{
    {{detail::kA51, detail::kB51, detail::kB51, detail::kB51}, detail::kW51},
    {{detail::kB51, detail::kA51, detail::kB51, detail::kB51}, detail::kW51},
    {{detail::kB51, detail::kB51, detail::kA51, detail::kB51}, detail::kW51},
    {{detail::kB51, detail::kB51, detail::kB51, detail::kA51}, detail::kW51},
    {{detail::kA52, detail::kB52, detail::kB52, detail::kB52}, detail::kW52},
    {{detail::kB52, detail::kA52, detail::kB52, detail::kB52}, detail::kW52},
    {{detail::kB52, detail::kB52, detail::kA52, detail::kB52}, detail::kW52},
    {{detail::kB52, detail::kB52, detail::kB52, detail::kA52}, detail::kW52},
    {{detail::kC5, detail::kC5, detail::kD5, detail::kD5}, detail::kW53},
    {{detail::kC5, detail::kD5, detail::kC5, detail::kD5}, detail::kW53},
    {{detail::kC5, detail::kD5, detail::kD5, detail::kC5}, detail::kW53},
    {{detail::kD5, detail::kC5, detail::kC5, detail::kD5}, detail::kW53},
    {{detail::kD5, detail::kC5, detail::kD5, detail::kC5}, detail::kW53},
    {{detail::kD5, detail::kD5, detail::kC5, detail::kC5}, detail::kW53},
}};

}  // namespace pnptg
