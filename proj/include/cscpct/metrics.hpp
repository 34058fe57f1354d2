#pragma once

#include <cstddef>
#include <span>

#include "cscpct/types.hpp"

namespace cscpct {

struct RecoveryScore {
  double rho = 0.0;
  std::size_t best_shift = 0;   // phase of the periodized ground truth
  std::size_t best_offset = 0;  // start of the compared window in the atom
};

/// Phase- and repetition-invariant similarity between a generating pattern
/// (one period, length P) and a learned atom (length W).
///
/// With C = min(P, W), every length-C window of the periodized pattern
/// (shift t in [0, P)) is compared with every length-C window of the atom
/// (offset l in [0, W - C]) by the cosine of the raw inner product; rho is the
/// maximum. No absolute value is taken, so a sign-flipped atom scores low.
/// Throws std::invalid_argument if P < 2, W < 2 or either input is all zero.
RecoveryScore recovery_score(std::span<const double> pattern, std::span<const double> atom);

/// 1/2 ||D * Z + y - x||^2 + lambda ||Z||_1 + lambda_tv TV(y) for a decomposition.
double objective(const Signal& x, const Decomposition& dec, double lambda, double lambda_tv);

}  // namespace cscpct
