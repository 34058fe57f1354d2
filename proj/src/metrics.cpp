#include "cscpct/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cscpct/solver.hpp"

namespace cscpct {

RecoveryScore recovery_score(std::span<const double> pattern, std::span<const double> atom) {
  const std::size_t p = pattern.size();
  const std::size_t w = atom.size();
  if (p < 2) throw std::invalid_argument("recovery_score: pattern needs at least 2 samples");
  if (w < 2) throw std::invalid_argument("recovery_score: atom needs at least 2 samples");
  require_finite(pattern, "pattern");
  require_finite(atom, "atom");
  if (squared_norm(pattern) == 0.0) throw std::invalid_argument("recovery_score: zero pattern");
  if (squared_norm(atom) == 0.0) throw std::invalid_argument("recovery_score: zero atom");

  const std::size_t c = std::min(p, w);
  std::vector<double> tiled(w + p);
  for (std::size_t i = 0; i < tiled.size(); ++i) tiled[i] = pattern[i % p];

  // Window norms of the atom, one per offset.
  std::vector<double> atom_norm(w - c + 1);
  for (std::size_t l = 0; l + c <= w; ++l)
    atom_norm[l] = std::sqrt(squared_norm(atom.subspan(l, c)));

  RecoveryScore best{-std::numeric_limits<double>::infinity(), 0, 0};
  for (std::size_t t = 0; t < p; ++t) {
    const double pn = std::sqrt(squared_norm(std::span<const double>(tiled).subspan(t, c)));
    if (pn == 0.0) continue;
    for (std::size_t l = 0; l + c <= w; ++l) {
      if (atom_norm[l] == 0.0) continue;
      double dot = 0.0;
      for (std::size_t i = 0; i < c; ++i) dot += tiled[t + i] * atom[l + i];
      const double rho = dot / (pn * atom_norm[l]);
      if (rho > best.rho) best = {rho, t, l};
    }
  }
  if (!std::isfinite(best.rho))
    throw std::invalid_argument("recovery_score: every compared window has zero norm");
  return best;
}

double objective(const Signal& x, const Decomposition& dec, double lambda, double lambda_tv) {
  return cscpct_objective(x.samples(), dec.dictionary, dec.activations, dec.trend, lambda, lambda_tv);
}

}  // namespace cscpct
