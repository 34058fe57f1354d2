#include "cscpct/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cscpct/dict_update.hpp"
#include "cscpct/kernels.hpp"
#include "cscpct/sparse_coding.hpp"
#include "cscpct/tv_prox.hpp"

namespace cscpct {

namespace {

std::vector<double> minus(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size());
  for (std::size_t t = 0; t < a.size(); ++t) out[t] = a[t] - b[t];
  return out;
}

double max_abs_diff(const Activations& a, const Activations& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.flat().size(); ++i) m = std::max(m, std::abs(a.flat()[i] - b.flat()[i]));
  return m;
}

// Atoms with no activation do not enter the objective. Point each one at the
// highest-energy window of the current residual so the next Z-update can use it.
void reseed_dead_atoms(Dictionary& d, const Activations& z, std::span<const double> residual) {
  const std::size_t w = d.atom_length();
  const std::size_t len = z.length();
  std::vector<double> energy(len, 0.0);
  double run = 0.0;
  for (std::size_t t = 0; t < w; ++t) run += residual[t] * residual[t];
  energy[0] = run;
  for (std::size_t t = 1; t < len; ++t) {
    run += residual[t + w - 1] * residual[t + w - 1] - residual[t - 1] * residual[t - 1];
    energy[t] = run;
  }
  for (std::size_t k = 0; k < d.n_atoms(); ++k) {
    const auto zk = z.map(k);
    if (std::any_of(zk.begin(), zk.end(), [](double v) { return v != 0.0; })) continue;
    const auto best = static_cast<std::size_t>(std::max_element(energy.begin(), energy.end()) - energy.begin());
    if (!(energy[best] > 0.0)) return;
    auto atom = d.atom(k);
    std::copy(residual.begin() + static_cast<std::ptrdiff_t>(best),
              residual.begin() + static_cast<std::ptrdiff_t>(best + w), atom.begin());
    const double norm = std::sqrt(squared_norm(atom));
    for (double& v : atom) v /= norm;
    // Do not hand the same stretch to the next dead atom.
    const std::size_t lo = best + 1 > w ? best + 1 - w : 0;
    const std::size_t hi = std::min(len, best + w);
    for (std::size_t t = lo; t < hi; ++t) energy[t] = -std::numeric_limits<double>::infinity();
  }
}

}  // namespace

double cscpct_objective(std::span<const double> x, const Dictionary& d, const Activations& z,
                        const Trend& y, double lambda, double lambda_tv) {
  const auto rec = reconstruct(d, z, y);
  if (rec.size() != x.size()) throw std::invalid_argument("objective: shape mismatch");
  double fit = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) fit += (rec[t] - x[t]) * (rec[t] - x[t]);
  return 0.5 * fit + lambda * z.l1_norm() + lambda_tv * total_variation(y.values);
}

Decomposition fit(const Signal& x, std::size_t k, std::size_t w, const SolverConfig& config) {
  config.validate();
  const auto xs = x.samples();
  const std::size_t t_len = xs.size();
  if (k < 1) throw std::invalid_argument("need at least one atom");
  if (w < 2) throw std::invalid_argument("atom length must be >= 2");
  if (w > t_len)
    throw std::invalid_argument("atom length " + std::to_string(w) + " exceeds signal length " +
                                std::to_string(t_len));
  require_finite(xs, "signal");

  const bool joint = config.mode == Mode::Joint;
  const bool tv_used = config.mode != Mode::None;
  const double lambda_tv = tv_used ? config.lambda_tv : 0.0;

  Decomposition dec;
  dec.lambda_tv = lambda_tv;
  dec.trend.values = tv_used ? prox_tv(xs, lambda_tv) : std::vector<double>(t_len, 0.0);

  std::vector<double> detrended = minus(xs, dec.trend.values);
  dec.dictionary = init_dictionary_from_windows(detrended, k, w, config.seed);
  dec.lambda_max = lambda_max(detrended, dec.dictionary);
  // A lambda_max at rounding level means the trend already explains x; coding
  // that residual would only trade offsets between D*Z and y.
  if (dec.lambda_max <= 1e-12 * max_abs(xs)) dec.lambda_max = 0.0;
  dec.lambda = config.lambda_frac * dec.lambda_max;
  dec.epsilon = config.epsilon.value_or(std::max(1e-4 * max_abs(xs), 1e-12));
  dec.activations = Activations(k, t_len - w + 1);

  Dictionary& d = dec.dictionary;
  Activations& z = dec.activations;
  Trend& y = dec.trend;

  SparseCodingOptions sc;
  sc.nonnegative = config.nonnegative;
  sc.tol = dec.lambda_max > 0.0 ? config.sparse_tol * dec.lambda_max : 1e-12;
  DictUpdateOptions du;
  du.fista_iters = config.fista_iters;

  auto objective = [&] { return cscpct_objective(xs, d, z, y, dec.lambda, lambda_tv); };
  dec.objective_trace.push_back(objective());

  for (int q = 1; q <= config.max_iter; ++q) {
    const Activations z_prev = z;
    const std::vector<double> detrended_prev = config.literal_schedule ? detrended : std::vector<double>{};

    // With lambda_max == 0 the detrended signal is (numerically) orthogonal to
    // every atom shift and Z = 0 is kept.
    if (dec.lambda > 0.0) z = sparse_code(detrended, d, dec.lambda, z, sc).activations;

    if (joint) {
      const auto dz = reconstruct(d, z);
      prox_tv(minus(xs, dz), lambda_tv, y.values);
      detrended = minus(xs, y.values);
    }

    if (config.literal_schedule)
      d = update_dictionary(d, z_prev, detrended_prev, du).dictionary;
    else
      d = update_dictionary(d, z, detrended, du).dictionary;

    dec.objective_trace.push_back(objective());
    dec.iterations_run = q;
    if (max_abs_diff(z, z_prev) < dec.epsilon) {
      dec.converged = true;
      break;
    }
    if (q < config.max_iter) reseed_dead_atoms(d, z, minus(detrended, reconstruct(d, z)));
  }

  const auto rec = reconstruct(d, z, y);
  dec.residual = minus(xs, rec);
  return dec;
}

}  // namespace cscpct
