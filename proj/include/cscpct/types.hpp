#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cscpct {

/// A uniformly sampled 1-D eye-angle trajectory, in degrees.
class Signal {
 public:
  Signal() = default;
  explicit Signal(std::vector<double> samples, double sample_rate = 1000.0);

  std::span<const double> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  double sample_rate() const { return sample_rate_; }
  double operator[](std::size_t i) const { return samples_[i]; }

 private:
  std::vector<double> samples_;
  double sample_rate_ = 1000.0;
};

/// Row-major K x N table of doubles. Base for dictionaries and activations.
class Table {
 public:
  Table() = default;
  Table(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<double> row(std::size_t k) { return {data_.data() + k * cols_, cols_}; }
  std::span<const double> row(std::size_t k) const {
    return {data_.data() + k * cols_, cols_};
  }
  double& operator()(std::size_t k, std::size_t j) { return data_[k * cols_ + j]; }
  double operator()(std::size_t k, std::size_t j) const { return data_[k * cols_ + j]; }

  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }

  bool operator==(const Table&) const = default;

 protected:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// K atoms of length W. Atoms are expected to lie in the unit l2 ball; use
/// satisfies_norm_constraint() to check.
class Dictionary : public Table {
 public:
  Dictionary() = default;
  Dictionary(std::size_t n_atoms, std::size_t atom_length);
  static Dictionary from_atoms(const std::vector<std::vector<double>>& atoms);

  std::size_t n_atoms() const { return rows_; }
  std::size_t atom_length() const { return cols_; }
  std::span<double> atom(std::size_t k) { return row(k); }
  std::span<const double> atom(std::size_t k) const { return row(k); }

  bool satisfies_norm_constraint(double slack = 1e-9) const;
};

/// K activation maps of length L = T - W + 1.
class Activations : public Table {
 public:
  Activations() = default;
  Activations(std::size_t n_atoms, std::size_t length);

  std::size_t n_atoms() const { return rows_; }
  std::size_t length() const { return cols_; }
  std::span<double> map(std::size_t k) { return row(k); }
  std::span<const double> map(std::size_t k) const { return row(k); }

  double l1_norm() const;
  bool is_zero() const;
};

/// Piecewise-constant baseline component, same length as the signal.
struct Trend {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  bool operator==(const Trend&) const = default;
};

enum class Mode { Joint, Init, None };

std::string_view to_string(Mode mode);
/// Throws std::invalid_argument on an unknown name. Case-insensitive.
Mode parse_mode(std::string_view name);

struct SolverConfig {
  double lambda_frac = 0.5;
  double lambda_tv = 0.1;
  /// Outer stopping tolerance on ||Z+ - Z||_inf. Unset means 1e-4 * max|x|.
  std::optional<double> epsilon;
  int max_iter = 60;
  Mode mode = Mode::Joint;
  std::uint64_t seed = 0;

  /// Clamp activations at zero.
  bool nonnegative = false;
  /// Use the one-step-stale (x - y^q, Z^q) pair for the dictionary update.
  bool literal_schedule = false;
  int fista_iters = 50;
  /// Inner coordinate-descent tolerance on |dz|, as a fraction of lambda_max.
  double sparse_tol = 1e-6;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

struct Decomposition {
  Dictionary dictionary;
  Activations activations;
  Trend trend;
  std::vector<double> residual;
  std::vector<double> objective_trace;
  int iterations_run = 0;
  bool converged = false;

  /// Absolute sparsity weight actually used, and the lambda_max it was scaled from.
  double lambda = 0.0;
  double lambda_max = 0.0;
  double lambda_tv = 0.0;
  double epsilon = 0.0;
};

/// Throws std::invalid_argument if any value is NaN or infinite.
void require_finite(std::span<const double> values, std::string_view what);

double max_abs(std::span<const double> values);
double squared_norm(std::span<const double> values);
double total_variation(std::span<const double> values);

}  // namespace cscpct
