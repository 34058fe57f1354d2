#include "cscpct/synthetic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cscpct {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Low-frequency gaze drift: three sinusoids.
constexpr int kDriftComponents = 3;
constexpr double kDriftFreqLo = 0.05;
constexpr double kDriftFreqHi = 0.4;
constexpr double kDriftAmpTotal = 10.0;

// 10%-90% rise time of a saccade step, seconds.
constexpr double kSaccadeRise = 0.020;

constexpr double kSlowPhaseShare = 0.8;

double draw_around(double mean, Rng& rng) {
  std::uniform_real_distribution<double> u(0.5 * mean, 1.5 * mean);
  return u(rng);
}

// Jerk cycle on phase in [0, 1): accelerating quadratic slow phase from -a to
// +a, then a linear return to -a. The constant makes the cycle zero-mean.
double jerk_cycle(double phase, double a) {
  constexpr double kOffset = 4.0 / 15.0;
  if (phase < kSlowPhaseShare) {
    const double u = phase / kSlowPhaseShare;
    return -a + 2.0 * a * u * u + kOffset * a;
  }
  const double u = (phase - kSlowPhaseShare) / (1.0 - kSlowPhaseShare);
  return a - 2.0 * a * u + kOffset * a;
}

}  // namespace

std::string_view to_string(NystagmusKind kind) {
  return kind == NystagmusKind::Pendular ? "pendular" : "jerk";
}

NystagmusKind parse_nystagmus_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "pendular") return NystagmusKind::Pendular;
  if (lower == "jerk") return NystagmusKind::Jerk;
  throw std::invalid_argument("unknown nystagmus kind '" + std::string(name) + "'");
}

std::size_t SyntheticParams::n_samples() const {
  return static_cast<std::size_t>(std::llround(duration_s * sample_rate));
}

void SyntheticParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be > 0");
  };
  positive(duration_s, "duration_s");
  positive(sample_rate, "sample_rate");
  positive(saccade_rate, "saccade_rate");
  positive(saccade_amp_mean, "saccade_amp_mean");
  positive(nystagmus_freq_mean, "nystagmus_freq_mean");
  positive(nystagmus_amp_mean, "nystagmus_amp_mean");
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std))
    throw std::invalid_argument("noise_std must be >= 0");
  if (n_samples() < 1) throw std::invalid_argument("duration_s * sample_rate must give at least one sample");
}

std::pair<Trend, std::vector<std::size_t>> gen_trend(const SyntheticParams& params, Rng& rng) {
  params.validate();
  const std::size_t n = params.n_samples();
  const double fs = params.sample_rate;
  Trend trend{std::vector<double>(n, 0.0)};

  std::uniform_real_distribution<double> freq(kDriftFreqLo, kDriftFreqHi);
  std::uniform_real_distribution<double> amp(0.0, kDriftAmpTotal / kDriftComponents);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  for (int c = 0; c < kDriftComponents; ++c) {
    const double f = freq(rng), a = amp(rng), p = phase(rng);
    for (std::size_t i = 0; i < n; ++i)
      trend.values[i] += a * std::sin(kTwoPi * f * static_cast<double>(i) / fs + p);
  }

  // Poisson arrivals: exponential gaps with mean 1 / rate.
  std::exponential_distribution<double> gap(params.saccade_rate);
  std::bernoulli_distribution sign(0.5);
  std::uniform_real_distribution<double> magnitude(0.5 * params.saccade_amp_mean,
                                                   1.5 * params.saccade_amp_mean);
  const double scale = kSaccadeRise / (2.0 * std::log(9.0));
  std::vector<std::size_t> times;
  for (double onset = gap(rng); onset < params.duration_s; onset += gap(rng)) {
    const double a = (sign(rng) ? 1.0 : -1.0) * magnitude(rng);
    const auto idx = static_cast<std::size_t>(std::llround(onset * fs));
    if (idx >= n) break;
    times.push_back(idx);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = (static_cast<double>(i) / fs - onset) / scale;
      trend.values[i] += a / (1.0 + std::exp(-s));
    }
  }
  return {std::move(trend), std::move(times)};
}

NystagmusDraw gen_nystagmus(const SyntheticParams& params, Rng& rng) {
  params.validate();
  NystagmusDraw out;
  out.frequency = params.randomize_nystagmus ? draw_around(params.nystagmus_freq_mean, rng)
                                             : params.nystagmus_freq_mean;
  out.amplitude = params.randomize_nystagmus ? draw_around(params.nystagmus_amp_mean, rng)
                                             : params.nystagmus_amp_mean;
  const double fs = params.sample_rate;
  const double period = fs / out.frequency;
  if (period < 4.0)
    throw std::invalid_argument("nystagmus period of " + std::to_string(period) +
                                " samples is shorter than 4 samples");

  const std::size_t n = params.n_samples();
  out.waveform.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double cycles = out.frequency * static_cast<double>(i) / fs;
    if (params.nystagmus_kind == NystagmusKind::Pendular) {
      out.waveform[i] = out.amplitude * std::sin(kTwoPi * cycles);
    } else {
      out.waveform[i] = jerk_cycle(cycles - std::floor(cycles), out.amplitude);
    }
  }

  const auto p_len = static_cast<std::size_t>(std::llround(period));
  out.pattern.resize(p_len);
  for (std::size_t j = 0; j < p_len; ++j) {
    const double cycles = out.frequency * static_cast<double>(j) / fs;
    out.pattern[j] = params.nystagmus_kind == NystagmusKind::Pendular
                         ? out.amplitude * std::sin(kTwoPi * cycles)
                         : jerk_cycle(cycles - std::floor(cycles), out.amplitude);
  }
  return out;
}

std::pair<Signal, GroundTruth> gen_signal(const SyntheticParams& params) {
  params.validate();
  Rng rng(params.seed);
  auto [trend, times] = gen_trend(params, rng);
  auto nyst = gen_nystagmus(params, rng);

  const std::size_t n = params.n_samples();
  GroundTruth truth;
  truth.noise.assign(n, 0.0);
  if (params.noise_std > 0.0) {
    std::normal_distribution<double> noise(0.0, params.noise_std);
    for (double& v : truth.noise) v = noise(rng);
  }

  std::vector<double> samples(n);
  for (std::size_t i = 0; i < n; ++i) samples[i] = trend.values[i] + nyst.waveform[i] + truth.noise[i];

  truth.trend = std::move(trend);
  truth.nystagmus = std::move(nyst.waveform);
  truth.pattern = std::move(nyst.pattern);
  truth.saccade_times = std::move(times);
  truth.frequency = nyst.frequency;
  truth.amplitude = nyst.amplitude;
  return {Signal(std::move(samples), params.sample_rate), std::move(truth)};
}

}  // namespace cscpct
