#include "cscpct/tv_prox.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cscpct/types.hpp"

namespace cscpct {

namespace {

// Condat's direct method. Scans left to right keeping the admissible range
// [vmin, vmax] for the value of the current segment together with the dual
// residuals umin/umax; a segment is emitted once the range cannot be kept.
void condat_tv1d(std::span<const double> in, double lambda, std::span<double> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(in.size());
  std::ptrdiff_t k = 0, k0 = 0, kplus = 0, kminus = 0;
  double umin = lambda, umax = -lambda;
  double vmin = in[0] - lambda, vmax = in[0] + lambda;
  const double twolambda = 2.0 * lambda;
  const double minlambda = -lambda;

  for (;;) {
    while (k == n - 1) {
      if (umin < 0.0) {
        do out[k0++] = vmin; while (k0 <= kminus);
        k = kminus = k0;
        vmin = in[k];
        umin = lambda;
        umax = vmin + umin - vmax;
      } else if (umax > 0.0) {
        do out[k0++] = vmax; while (k0 <= kplus);
        k = kplus = k0;
        vmax = in[k];
        umax = minlambda;
        umin = vmax + umax - vmin;
      } else {
        vmin += umin / static_cast<double>(k - k0 + 1);
        do out[k0++] = vmin; while (k0 <= k);
        return;
      }
    }
    if ((umin += in[k + 1] - vmin) < minlambda) {
      do out[k0++] = vmin; while (k0 <= kminus);
      k = kplus = kminus = k0;
      vmin = in[k];
      vmax = vmin + twolambda;
      umin = lambda;
      umax = minlambda;
    } else if ((umax += in[k + 1] - vmax) > lambda) {
      do out[k0++] = vmax; while (k0 <= kplus);
      k = kplus = kminus = k0;
      vmax = in[k];
      vmin = vmax - twolambda;
      umin = lambda;
      umax = minlambda;
    } else {
      ++k;
      if (umin >= lambda) {
        kminus = k;
        vmin += (umin - lambda) / static_cast<double>(kminus - k0 + 1);
        umin = lambda;
      }
      if (umax <= minlambda) {
        kplus = k;
        vmax += (umax + lambda) / static_cast<double>(kplus - k0 + 1);
        umax = minlambda;
      }
    }
  }
}

}  // namespace

void prox_tv(std::span<const double> target, double weight, std::span<double> out) {
  if (target.empty()) throw std::invalid_argument("prox_tv: empty target");
  if (out.size() != target.size()) throw std::invalid_argument("prox_tv: output size mismatch");
  if (!(weight >= 0.0) || !std::isfinite(weight))
    throw std::invalid_argument("prox_tv: weight must be a finite value >= 0");
  require_finite(target, "prox_tv target");

  if (weight == 0.0 || target.size() == 1) {
    if (out.data() != target.data()) std::copy(target.begin(), target.end(), out.begin());
    return;
  }
  if (out.data() == target.data()) {
    std::vector<double> tmp(target.begin(), target.end());
    condat_tv1d(tmp, weight, out);
  } else {
    condat_tv1d(target, weight, out);
  }
}

std::vector<double> prox_tv(std::span<const double> target, double weight) {
  std::vector<double> out(target.size());
  prox_tv(target, weight, out);
  return out;
}

double tv_objective(std::span<const double> u, std::span<const double> target, double weight) {
  if (u.size() != target.size()) throw std::invalid_argument("tv_objective: size mismatch");
  double fit = 0.0;
  for (std::size_t t = 0; t < u.size(); ++t) fit += (u[t] - target[t]) * (u[t] - target[t]);
  return 0.5 * fit + weight * total_variation(u);
}

}  // namespace cscpct
