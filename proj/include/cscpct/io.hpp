#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cscpct/synthetic.hpp"
#include "cscpct/types.hpp"

namespace cscpct {

/// Bad or unreadable input data (maps to exit code 2).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration or command usage (maps to exit code 1).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double v);
/// Parses the whole of `text` as a double; throws DataError mentioning `context`.
double parse_double(std::string_view text, std::string_view context);
long long parse_integer(std::string_view text, std::string_view context);

/// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Flat key = value files. '#' starts a comment; blank lines are ignored.

using KeyValues = std::vector<std::pair<std::string, std::string>>;

KeyValues parse_key_values(std::string_view text, std::string_view source = "config");
KeyValues read_key_values(const std::filesystem::path& path);
std::string format_key_values(const KeyValues& kv);

/// Applies recognised SolverConfig keys (lambda_frac, lambda_tv, epsilon,
/// max_iter, mode, seed, nonnegative, literal_schedule, fista_iters, sparse_tol) plus the
/// dictionary shape keys k and w. Keys under "result." are informational and
/// skipped. Throws UsageError on an unknown key or bad value.
void apply_solver_keys(const KeyValues& kv, SolverConfig& config, std::size_t& k, std::size_t& w);
void apply_synthetic_keys(const KeyValues& kv, SyntheticParams& params);
KeyValues solver_keys(const SolverConfig& config, std::size_t k, std::size_t w);
KeyValues synthetic_keys(const SyntheticParams& params);

// ---------------------------------------------------------------------------
// Recording CSV: header "time_ms,angle_deg,eye,axis", one channel, 1 kHz.

struct Recording {
  Signal signal;
  std::string eye = "left";
  std::string axis = "horizontal";
};

Recording parse_recording(std::string_view text, std::string_view source = "recording");
Recording read_recording(const std::filesystem::path& path);
std::string format_recording(const Recording& rec);

// ---------------------------------------------------------------------------
// Columnar CSV: one header line naming each column, then rows of numbers.

struct Columns {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;

  /// Throws DataError if no column has that name.
  const std::vector<double>& column(std::string_view name) const;
};

Columns parse_columns(std::string_view text, std::string_view source = "table");
Columns read_columns(const std::filesystem::path& path);
std::string format_columns(const Columns& cols);

/// Activations as "atom,offset,value" rows, zeros omitted.
std::string format_activation_triplets(const Activations& z);
Activations parse_activation_triplets(std::string_view text, std::size_t n_atoms, std::size_t length,
                                      std::string_view source = "activations");

}  // namespace cscpct
