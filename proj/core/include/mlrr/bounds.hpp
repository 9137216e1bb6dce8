#pragma once

namespace mlrr {

// pi_{alpha,M} = prod_{k>=1} (1 - M^(-alpha k)), truncated at `truncation`
// terms.  Remainder below M^(-alpha(truncation+1)) — negligible at the
// default 64 terms for M >= 2.
double pi_alpha_m(double alpha, int M, int truncation = 64);

// W_alpha(M) = (M^-alpha / pi^2) * sum_{k>=0} M^(-alpha k(k+3)/2) + 1/pi:
// uniform upper bound on max_j |W_j(R,M)| over all depths R.
double w_alpha_bound(double alpha, int M, int truncation = 64);

}  // namespace mlrr
