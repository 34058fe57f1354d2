#include "cscpct/sparse_coding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cscpct/kernels.hpp"

namespace cscpct {

namespace {

void check_shapes(std::span<const double> x, const Dictionary& d, const Activations& z) {
  if (d.atom_length() > x.size())
    throw std::invalid_argument("atom length W = " + std::to_string(d.atom_length()) +
                                " exceeds signal length T = " + std::to_string(x.size()));
  if (z.n_atoms() != d.n_atoms())
    throw std::invalid_argument("activations have " + std::to_string(z.n_atoms()) +
                                " maps for " + std::to_string(d.n_atoms()) + " atoms");
  if (z.length() != x.size() - d.atom_length() + 1)
    throw std::invalid_argument("activation length must equal T - W + 1");
}

// Value of the scalar lasso along one coordinate, up to a constant.
double coordinate_value(double v, double beta, double norm, double lambda) {
  return 0.5 * norm * v * v - beta * v + lambda * std::abs(v);
}

}  // namespace

double lambda_max(std::span<const double> x, const Dictionary& d) {
  const Table corr = omp::correlate_atoms(x, d);
  return max_abs(corr.flat());
}

double csc_objective(std::span<const double> x, const Dictionary& d, const Activations& z,
                     double lambda) {
  check_shapes(x, d, z);
  const auto rec = reconstruct(d, z);
  double fit = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) fit += (rec[t] - x[t]) * (rec[t] - x[t]);
  return 0.5 * fit + lambda * z.l1_norm();
}

CoordinateState::CoordinateState(std::span<const double> x, const Dictionary& d,
                                 const Activations& z, std::size_t segment_length)
    : n_atoms_(d.n_atoms()), w_(d.atom_length()), seg_len_(segment_length) {
  check_shapes(x, d, z);
  if (seg_len_ == 0) throw std::invalid_argument("segment length must be >= 1");

  norms_.resize(n_atoms_);
  for (std::size_t k = 0; k < n_atoms_; ++k) norms_[k] = squared_norm(d.atom(k));

  const std::size_t n_lags = 2 * w_ - 1;
  cross_.assign(n_atoms_ * n_atoms_ * n_lags, 0.0);
  for (std::size_t kr = 0; kr < n_atoms_; ++kr) {
    const auto a = d.atom(kr);
    for (std::size_t kc = 0; kc < n_atoms_; ++kc) {
      const auto b = d.atom(kc);
      double* dst = &cross_[(kr * n_atoms_ + kc) * n_lags];
      for (std::ptrdiff_t lag = -static_cast<std::ptrdiff_t>(w_) + 1;
           lag < static_cast<std::ptrdiff_t>(w_); ++lag) {
        double s = 0.0;
        for (std::size_t tau = 0; tau < w_; ++tau) {
          const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(tau) + lag;
          if (j >= 0 && j < static_cast<std::ptrdiff_t>(w_)) s += a[tau] * b[static_cast<std::size_t>(j)];
        }
        dst[lag + static_cast<std::ptrdiff_t>(w_) - 1] = s;
      }
    }
  }

  std::vector<double> residual(x.begin(), x.end());
  {
    std::vector<double> rec(x.size(), 0.0);
    const auto sparse = to_sparse(z);
    omp::accumulate_reconstruction(d, sparse, rec);
    for (std::size_t t = 0; t < x.size(); ++t) residual[t] -= rec[t];
  }
  beta_ = omp::correlate_atoms(residual, d);
  for (std::size_t k = 0; k < n_atoms_; ++k)
    for (std::size_t t = 0; t < z.length(); ++t) beta_(k, t) += norms_[k] * z(k, t);

  const std::size_t len = z.length();
  for (std::size_t b = 0; b < len; b += seg_len_) segments_.push_back({b, std::min(len, b + seg_len_)});
}

void CoordinateState::apply(Activations& z, std::size_t k, std::size_t t, double delta) {
  z(k, t) += delta;
  const std::size_t len = beta_.cols();
  const std::size_t lo = t + 1 > w_ ? t + 1 - w_ : 0;
  const std::size_t hi = std::min(len, t + w_);
  const std::size_t n_lags = 2 * w_ - 1;
  for (std::size_t kr = 0; kr < n_atoms_; ++kr) {
    double* row = beta_.row(kr).data();
    // c[tp] is the cross-correlation at lag tp - t
    const double* c = &cross_[(kr * n_atoms_ + k) * n_lags + (w_ - 1)] - static_cast<std::ptrdiff_t>(t);
    if (kr != k) {
      for (std::size_t tp = lo; tp < hi; ++tp) row[tp] -= c[tp] * delta;
    } else {
      // beta_k[t] does not depend on z_k[t]
      for (std::size_t tp = lo; tp < t; ++tp) row[tp] -= c[tp] * delta;
      for (std::size_t tp = t + 1; tp < hi; ++tp) row[tp] -= c[tp] * delta;
    }
  }
}

std::pair<std::size_t, std::size_t> CoordinateState::affected_segments(std::size_t t) const {
  const std::size_t lo = t + 1 > w_ ? t + 1 - w_ : 0;
  const std::size_t hi = std::min(beta_.cols() - 1, t + w_ - 1);
  return {lo / seg_len_, hi / seg_len_ + 1};
}

SparseCodingResult sparse_code(std::span<const double> x_detrended, const Dictionary& d,
                               double lambda, const Activations& z_init,
                               const SparseCodingOptions& options) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("sparse_code: lambda must be a finite value > 0");
  if (!(options.tol > 0.0)) throw std::invalid_argument("sparse_code: tol must be > 0");
  check_shapes(x_detrended, d, z_init);

  SparseCodingResult result{z_init, 0, false};
  Activations& z = result.activations;
  const std::size_t n_atoms = d.n_atoms();
  const std::size_t len = z.length();
  const std::size_t seg_len = options.segment_length ? options.segment_length : d.atom_length();
  const std::size_t max_updates = options.max_updates ? options.max_updates : 10 * n_atoms * len;

  CoordinateState state(x_detrended, d, z, seg_len);
  const auto& segments = state.segments();
  const auto norms = state.norms();
  std::vector<char> dirty(segments.size(), 1);
  std::size_t n_dirty = segments.size();

  while (n_dirty > 0) {
    for (std::size_t s = 0; s < segments.size(); ++s) {
      if (!dirty[s]) continue;

      double best_gain = -1.0, best_delta = 0.0, max_step = 0.0;
      std::size_t best_k = 0, best_t = 0;
      for (std::size_t k = 0; k < n_atoms; ++k) {
        const double nk = norms[k];
        if (nk <= 0.0) continue;
        const auto beta = state.beta().row(k);
        const auto zk = z.map(k);
        for (std::size_t t = segments[s].begin; t < segments[s].end; ++t) {
          const double target = options.nonnegative ? std::max(beta[t] - lambda, 0.0) / nk
                                                    : soft_threshold(beta[t], lambda) / nk;
          const double delta = target - zk[t];
          if (delta == 0.0) continue;
          max_step = std::max(max_step, std::abs(delta));
          const double gain = coordinate_value(zk[t], beta[t], nk, lambda) -
                              coordinate_value(target, beta[t], nk, lambda);
          if (gain > best_gain) {
            best_gain = gain;
            best_delta = delta;
            best_k = k;
            best_t = t;
          }
        }
      }

      if (max_step < options.tol) {
        dirty[s] = 0;
        --n_dirty;
        continue;
      }

      state.apply(z, best_k, best_t, best_delta);
      ++result.updates;
      const auto [first, last] = state.affected_segments(best_t);
      for (std::size_t j = first; j < last; ++j) {
        if (!dirty[j]) {
          dirty[j] = 1;
          ++n_dirty;
        }
      }
      if (result.updates >= max_updates) return result;
    }
  }
  result.converged = true;
  return result;
}

}  // namespace cscpct
