#pragma once

// Convolution-family kernels. Every kernel exists twice: a plain serial
// reference in `serial::` and an OpenMP version in `omp::`. The OpenMP
// versions partition the *output* so each entry is accumulated by a single
// thread in the same order as the serial loop; results are bit-identical.

#include <cstddef>
#include <span>
#include <vector>

#include "cscpct/types.hpp"

namespace cscpct {

/// Nonzero entries of one activation map, offsets ascending.
struct SparseMap {
  std::vector<std::size_t> offsets;
  std::vector<double> values;
};

std::vector<SparseMap> to_sparse(const Activations& z);

/// Full linear convolution, length W + L - 1. Throws on empty input.
std::vector<double> convolve(std::span<const double> atom, std::span<const double> activation);

/// Valid cross-correlation: out[t] = sum_tau atom[tau] * x[t + tau], t in [0, T - W].
/// Throws if the atom is longer than the signal.
std::vector<double> correlate(std::span<const double> x, std::span<const double> atom);

/// sum_k d_k * z_k, length L + W - 1. Throws on shape mismatch.
std::vector<double> reconstruct(const Dictionary& d, const Activations& z);
/// sum_k d_k * z_k + y.
std::vector<double> reconstruct(const Dictionary& d, const Activations& z, const Trend& y);

namespace serial {

/// K x L table of correlate(x, d_k).
Table correlate_atoms(std::span<const double> x, const Dictionary& d);
/// Adds sum_k d_k * z_k into out (length T).
void accumulate_reconstruction(const Dictionary& d, std::span<const SparseMap> z,
                               std::span<double> out);
/// K x W table: entry (k, tau) = sum_s z_k[s] * r[s + tau].
Table correlate_activations(std::span<const SparseMap> z, std::span<const double> r,
                            std::size_t atom_length);

}  // namespace serial

namespace omp {

Table correlate_atoms(std::span<const double> x, const Dictionary& d);
void accumulate_reconstruction(const Dictionary& d, std::span<const SparseMap> z,
                               std::span<double> out);
Table correlate_activations(std::span<const SparseMap> z, std::span<const double> r,
                            std::size_t atom_length);

}  // namespace omp

}  // namespace cscpct
