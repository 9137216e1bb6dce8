#pragma once

#include <vector>

#include "mlrr/weights.hpp"

namespace mlrr {

// Allocation matrix T = (T^1 ... T^R): column j defines the linear
// combination of (Y_h, Y_{h/n_2}, ..., Y_{h/n_R}) averaged at level j.
// Zero-sum columns guarantee consistency; the row sums reproduce the
// extrapolation weights for the weighted templates.
enum class AllocTemplate {
  crude,                 // (e_1, 0, ..., 0)
  multistep,             // (w, 0, ..., 0)
  mlmc,                  // T^j = e_j - e_{j-1}
  ml2r_telescopic,       // T^j = -W_j e_{j-1} + W_j e_j
  ml2r_first_column,     // T^j = -w_j e_1 + w_j e_j
  ml2r_lower_triangular  // T^j = Wt_j e_j - Wt_j e_{j+1}, Wt_j = sum_{k<=j} w_k
};

struct AllocationMatrix {
  int R = 1;
  AllocTemplate tmpl = AllocTemplate::crude;
  std::vector<std::vector<double>> col;  // col[j][i], 0-based

  double at(int row, int column) const { return col[column][row]; }
  // Telescopic templates only touch levels (j-1, j) in column j and run on
  // the coupled-pair fast path; the others need a full joint draw.
  bool telescopic() const {
    return tmpl == AllocTemplate::crude || tmpl == AllocTemplate::mlmc ||
           tmpl == AllocTemplate::ml2r_telescopic;
  }
};

// Build a template matrix.  The ml2r/multistep templates require a
// WeightVector of matching depth (dimension mismatch throws
// std::invalid_argument).
AllocationMatrix allocation_matrix(AllocTemplate t, int R,
                                   const WeightVector* w = nullptr);

}  // namespace mlrr
