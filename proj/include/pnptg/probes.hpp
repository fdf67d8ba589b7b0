#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pnptg/pnp.hpp"

namespace pnptg {

// One empirical inequality check. The reference solution (p_h, phi_h) is the
// full Gummel solve on the fine mesh; the starred quantities come from the
// two-grid run. lhs is an H1 seminorm of a fine-grid difference, rhs the
// coarse-approximation terms that are supposed to bound it:
//   quantity "phi":  lhs = |phi_h - phi_h*|_1
//                    rhs = sum_i ||p_h^i - p_H^i||_0
//   quantity "p1"/"p2", variants using the fine potential in the NP step:
//                    lhs = |p_h^i - p_h^{i,*}|_1, rhs as above
//   quantity "p1"/"p2", variants using the coarse potential:
//                    rhs = ||p_h^i - p_H^i||_0 + |phi_h - phi_H|_1
struct ProbeRow {
  TwoGridVariant variant;
  std::string quantity;
  int coarse_inverse = 0;
  int fine_inverse = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

// Runs the probe at each (coarse_inverse, fine_inverse) pair. Throws
// std::runtime_error if any ratio exceeds 100 or grows by more than 3x
// between consecutive pairs for the same quantity.
std::vector<ProbeRow> theorem_probe(TwoGridVariant variant,
                                    const std::vector<std::pair<int, int>>& pairs,
                                    const SourceTerms& sources,
                                    const TwoGridOptions& opt = {});

}  // namespace pnptg
