#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cscpct/types.hpp"

namespace cscpct {

/// 1/2 ||D * Z - x||^2.
double data_fit(std::span<const double> x, const Dictionary& d, const Activations& z);

/// Gradient of data_fit with respect to D: entry (k, tau) is the correlation of
/// the residual D * Z - x with z_k at lag tau. Throws on shape mismatch.
Table dict_gradient(const Dictionary& d, const Activations& z, std::span<const double> x_detrended);

/// atom / max(1, ||atom||_2).
std::vector<double> project_unit_ball(std::span<const double> atom);
void project_unit_ball_inplace(std::span<double> atom);

/// sum_k ||z_k||_1^2, an upper bound on the Lipschitz constant of dict_gradient.
double lipschitz_l1_bound(const Activations& z);
/// Power-iteration estimate of the same constant (a lower bound in general).
double lipschitz_power_estimate(const Activations& z, std::size_t atom_length, int iterations = 30);

enum class StepRule { L1Bound, PowerMethod };

struct DictUpdateOptions {
  int fista_iters = 50;
  /// Initial Lipschitz guess. Backtracking doubles it whenever the
  /// sufficient-decrease test fails, so either choice is safe.
  StepRule step_rule = StepRule::PowerMethod;
};

struct DictUpdateResult {
  Dictionary dictionary;
  /// Set when every activation is zero: the dictionary is returned untouched.
  bool zero_activations = false;
  int iterations = 0;
  int restarts = 0;
  double lipschitz = 0.0;
  double initial_fit = 0.0;
  double final_fit = 0.0;
};

/// Projected FISTA on the data-fit term under ||d_k||_2 <= 1, with backtracking
/// and a momentum restart whenever an accelerated step would increase the
/// objective. Atoms whose activations are all zero are returned unchanged.
DictUpdateResult update_dictionary(const Dictionary& d_init, const Activations& z,
                                   std::span<const double> x_detrended,
                                   const DictUpdateOptions& options = {});

/// Draws K windows of length W from x at seeded random offsets, each projected
/// onto the unit ball.
Dictionary init_dictionary_from_windows(std::span<const double> x, std::size_t n_atoms,
                                        std::size_t atom_length, std::uint64_t seed);

}  // namespace cscpct
