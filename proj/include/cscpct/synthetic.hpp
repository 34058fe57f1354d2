#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "cscpct/types.hpp"

namespace cscpct {

enum class NystagmusKind { Pendular, Jerk };

std::string_view to_string(NystagmusKind kind);
NystagmusKind parse_nystagmus_kind(std::string_view name);

struct SyntheticParams {
  double duration_s = 10.0;
  double sample_rate = 1000.0;
  double saccade_rate = 1.0;       // events per second
  double saccade_amp_mean = 20.0;  // degrees
  NystagmusKind nystagmus_kind = NystagmusKind::Pendular;
  double nystagmus_freq_mean = 5.0;  // Hz
  double nystagmus_amp_mean = 3.0;   // degrees
  double noise_std = 0.5;            // degrees
  std::uint64_t seed = 0;
  /// Draw frequency and amplitude uniformly in [0.5, 1.5] x mean. When false the
  /// means are used as-is.
  bool randomize_nystagmus = true;

  std::size_t n_samples() const;
  void validate() const;
};

struct GroundTruth {
  Trend trend;
  std::vector<double> nystagmus;
  std::vector<double> noise;
  /// One period of the nystagmus waveform, round(sample_rate / frequency) samples.
  std::vector<double> pattern;
  std::vector<std::size_t> saccade_times;
  double frequency = 0.0;
  double amplitude = 0.0;
};

using Rng = std::mt19937_64;

/// Low-frequency gaze drift plus logistic saccade steps at Poisson instants.
std::pair<Trend, std::vector<std::size_t>> gen_trend(const SyntheticParams& params, Rng& rng);

struct NystagmusDraw {
  std::vector<double> waveform;
  std::vector<double> pattern;
  double frequency = 0.0;
  double amplitude = 0.0;
};

/// Pendular: a sin(2 pi f t). Jerk: a zero-mean quadratic slow phase over 80%
/// of each period followed by a linear return. Throws if a period would span
/// fewer than 4 samples.
NystagmusDraw gen_nystagmus(const SyntheticParams& params, Rng& rng);

/// trend + nystagmus + N(0, noise_std^2), seeded by params.seed.
std::pair<Signal, GroundTruth> gen_signal(const SyntheticParams& params);

}  // namespace cscpct
