#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "cscpct/types.hpp"

namespace cscpct {

/// Smallest lambda for which Z = 0 solves the convolutional lasso:
/// max_{k,t} |<d_k, x[t : t + W]>|. Throws if W > T.
double lambda_max(std::span<const double> x, const Dictionary& d);

/// 1/2 ||D * Z - x||^2 + lambda ||Z||_1.
double csc_objective(std::span<const double> x, const Dictionary& d, const Activations& z,
                     double lambda);

/// Bookkeeping for locally greedy coordinate descent.
///
/// beta(k, t) = <d_k, r[t : t + W]> + ||d_k||^2 z_k[t] with r = x - D * Z, so the
/// exact minimiser along coordinate (k, t) is soft(beta, lambda) / ||d_k||^2.
/// After each single-coordinate change only the entries within W - 1 of the
/// touched offset need refreshing, via the atoms' cross-correlations.
class CoordinateState {
 public:
  struct Segment {
    std::size_t begin;
    std::size_t end;  // exclusive
  };

  CoordinateState(std::span<const double> x, const Dictionary& d, const Activations& z,
                  std::size_t segment_length);

  const Table& beta() const { return beta_; }
  std::span<const double> norms() const { return norms_; }
  const std::vector<Segment>& segments() const { return segments_; }

  /// z_k[t] += delta, refreshing beta.
  void apply(Activations& z, std::size_t k, std::size_t t, double delta);

  /// Indices of the segments whose beta entries an update at t touches.
  std::pair<std::size_t, std::size_t> affected_segments(std::size_t t) const;

 private:
  std::size_t n_atoms_;
  std::size_t w_;
  std::size_t seg_len_;
  Table beta_;
  std::vector<double> norms_;
  std::vector<Segment> segments_;
  // cross_[(k', k)][lag] = sum_tau d_k'[tau] * d_k[tau + lag], lag in (-W, W)
  std::vector<double> cross_;
};

struct SparseCodingOptions {
  /// Stop once every coordinate's exact update is smaller than this.
  double tol = 1e-8;
  /// Cap on single-coordinate updates; 0 means 10 * K * L.
  std::size_t max_updates = 0;
  bool nonnegative = false;
  /// Length of the greedy-selection segments; 0 means W.
  std::size_t segment_length = 0;
};

struct SparseCodingResult {
  Activations activations;
  std::size_t updates = 0;
  bool converged = false;
};

/// Convolutional lasso for a fixed dictionary by locally greedy coordinate
/// descent, warm-started from z_init. Atoms with zero norm keep zero
/// coefficients. Throws std::invalid_argument on shape mismatch or lambda <= 0.
SparseCodingResult sparse_code(std::span<const double> x_detrended, const Dictionary& d,
                               double lambda, const Activations& z_init,
                               const SparseCodingOptions& options = {});

/// Scalar soft threshold sign(v) * max(|v| - lambda, 0).
inline double soft_threshold(double v, double lambda) {
  if (v > lambda) return v - lambda;
  if (v < -lambda) return v + lambda;
  return 0.0;
}

}  // namespace cscpct
