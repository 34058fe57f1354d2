#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cscpct/io.hpp"
#include "cscpct/synthetic.hpp"
#include "cscpct/types.hpp"

namespace cscpct {

/// Which nystagmus kinds the sweep draws: both (alternating by signal index)
/// or a single kind.
enum class KindMix { Mixed, Pendular, Jerk };

struct BenchmarkSpec {
  std::size_t n_signals = 20;
  double lambda_frac = 0.5;
  /// Grid values are multiplied by lambda_tv_scale to get the absolute TV
  /// weight handed to the solver.
  std::vector<double> lambda_tv_grid{0.1, 0.3, 0.5, 0.9};
  double lambda_tv_scale = 125.0;
  std::vector<Mode> modes{Mode::Joint, Mode::Init, Mode::None};
  std::size_t k = 1;
  std::size_t w = 150;
  std::uint64_t master_seed = 0;
  int max_iter = 60;
  int fista_iters = 50;
  /// Inner coordinate-descent tolerance, fraction of lambda_max. Looser than the
  /// solver default to keep a full sweep at desk scale.
  double sparse_tol = 1e-4;
  bool nonnegative = false;
  KindMix kinds = KindMix::Mixed;
  SyntheticParams signal;  // seed and kind are overridden per signal

  void validate() const;
};

/// Throws UsageError on unknown keys or bad values.
BenchmarkSpec parse_benchmark_spec(const KeyValues& kv);
KeyValues benchmark_keys(const BenchmarkSpec& spec);

struct BenchmarkRecord {
  Mode mode = Mode::None;
  double lambda_tv = 0.0;  // grid value, before scaling
  std::size_t signal_index = 0;
  std::uint64_t seed = 0;
  NystagmusKind kind = NystagmusKind::Pendular;
  double rho = 0.0;
  bool failed = false;
  std::string error;
};

struct CellSummary {
  Mode mode = Mode::None;
  double lambda_tv = 0.0;
  double lambda_tv_abs = 0.0;
  std::size_t n_ok = 0;
  std::size_t n_failed = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

struct BenchmarkResult {
  std::vector<BenchmarkRecord> records;  // ordered by (mode, lambda_tv, signal)
  std::vector<CellSummary> cells;        // ordered by (mode, lambda_tv)

  const CellSummary& cell(Mode mode, double lambda_tv) const;
};

/// Seed of the i-th benchmark signal.
std::uint64_t signal_seed(std::uint64_t master_seed, std::size_t index);

/// Quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

/// Runs every (mode, lambda_tv, signal) fit, in parallel across fits. Mode
/// None ignores lambda_tv, so it is fitted once per signal and the score is
/// reported in every grid cell. A failing fit is recorded, not rethrown.
BenchmarkResult run_benchmark(const BenchmarkSpec& spec);

std::string format_summary(const BenchmarkResult& result);
std::string format_scores(const BenchmarkResult& result);

}  // namespace cscpct
