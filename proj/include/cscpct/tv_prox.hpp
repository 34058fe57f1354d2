#pragma once

#include <span>
#include <vector>

namespace cscpct {

/// Exact proximal operator of the 1-D total variation:
///
///   argmin_u  1/2 ||u - target||^2 + weight * sum_t |u[t+1] - u[t]|
///
/// Computed with Condat's direct (taut-string type) algorithm; no inner
/// tolerance. The penalty has no wraparound term. weight == 0 returns a copy.
/// Throws std::invalid_argument on empty or non-finite input, or weight < 0.
std::vector<double> prox_tv(std::span<const double> target, double weight);

/// Same, writing into `out` (same size as target). `out` may alias `target`
/// only if it is the same span.
void prox_tv(std::span<const double> target, double weight, std::span<double> out);

/// 1/2 ||u - target||^2 + weight * TV(u).
double tv_objective(std::span<const double> u, std::span<const double> target, double weight);

}  // namespace cscpct
