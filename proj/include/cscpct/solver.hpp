#pragma once

#include <cstddef>
#include <span>

#include "cscpct/types.hpp"

namespace cscpct {

/// 1/2 ||D * Z + y - x||^2 + lambda ||Z||_1 + lambda_tv * TV(y).
double cscpct_objective(std::span<const double> x, const Dictionary& d, const Activations& z,
                        const Trend& y, double lambda, double lambda_tv);

/// Learns K atoms of length W from x together with activations and, in Joint
/// mode, a piecewise-constant trend.
///
///  - Joint: y = prox_tv(x), then repeat {Z on x - y, y = prox_tv(x - D*Z), D on x - y}.
///  - Init:  y = prox_tv(x) once and frozen; plain CSC on x - y.
///  - None:  y = 0; plain CSC on x.
///
/// lambda = lambda_frac * lambda_max(x - y0, D0) is fixed once. The loop stops
/// when ||Z+ - Z||_inf < epsilon or after max_iter outer iterations.
/// objective_trace[0] is the objective at the initial point; one entry per
/// outer iteration follows. Throws std::invalid_argument for w > T, w < 2,
/// k < 1 or an invalid config.
Decomposition fit(const Signal& x, std::size_t k, std::size_t w, const SolverConfig& config);

}  // namespace cscpct
