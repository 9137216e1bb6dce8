#include "mlrr/alloc.hpp"

#include <stdexcept>

namespace mlrr {

AllocationMatrix allocation_matrix(AllocTemplate t, int R, const WeightVector* w) {
  if (R < 1) throw std::invalid_argument("allocation_matrix: R must be >= 1");
  const bool needs_w = (t == AllocTemplate::multistep ||
                        t == AllocTemplate::ml2r_telescopic ||
                        t == AllocTemplate::ml2r_first_column ||
                        t == AllocTemplate::ml2r_lower_triangular);
  if (needs_w) {
    if (!w) throw std::invalid_argument("allocation_matrix: template requires weights");
    if (w->R() != R) throw std::invalid_argument("allocation_matrix: weight depth mismatch");
  }

  AllocationMatrix m;
  m.R = R;
  m.tmpl = t;
  m.col.assign(R, std::vector<double>(R, 0.0));

  switch (t) {
    case AllocTemplate::crude:
      m.col[0][0] = 1.0;
      break;
    case AllocTemplate::multistep:
      for (int i = 0; i < R; ++i) m.col[0][i] = w->w[i];
      break;
    case AllocTemplate::mlmc:
      m.col[0][0] = 1.0;
      for (int j = 1; j < R; ++j) {
        m.col[j][j - 1] = -1.0;
        m.col[j][j] = 1.0;
      }
      break;
    case AllocTemplate::ml2r_telescopic: {
      const auto W = cumulative_weights(*w);
      m.col[0][0] = 1.0;
      for (int j = 1; j < R; ++j) {
        m.col[j][j - 1] = -W[j];
        m.col[j][j] = W[j];
      }
      break;
    }
    case AllocTemplate::ml2r_first_column:
      m.col[0][0] = 1.0;
      for (int j = 1; j < R; ++j) {
        m.col[j][0] = -w->w[j];
        m.col[j][j] = w->w[j];
      }
      break;
    case AllocTemplate::ml2r_lower_triangular: {
      // Partial sums from the left; the unit column is the last one, so this
      // template does not satisfy the usual T^1 = e_1 convention.
      double wt = 0.0;
      for (int j = 0; j < R - 1; ++j) {
        wt += w->w[j];
        m.col[j][j] = wt;
        m.col[j][j + 1] = -wt;
      }
      m.col[R - 1][R - 1] = 1.0;
      break;
    }
  }
  return m;
}

}  // namespace mlrr
