#include "cscpct/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace cscpct {

Signal::Signal(std::vector<double> samples, double sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (samples_.empty()) throw std::invalid_argument("signal must have at least one sample");
  if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_))
    throw std::invalid_argument("sample rate must be positive");
  require_finite(samples_, "signal");
}

Dictionary::Dictionary(std::size_t n_atoms, std::size_t atom_length)
    : Table(n_atoms, atom_length) {
  if (n_atoms == 0 || atom_length == 0)
    throw std::invalid_argument("dictionary needs K >= 1 atoms of length W >= 1");
}

Dictionary Dictionary::from_atoms(const std::vector<std::vector<double>>& atoms) {
  if (atoms.empty()) throw std::invalid_argument("dictionary needs at least one atom");
  Dictionary d(atoms.size(), atoms.front().size());
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (atoms[k].size() != d.atom_length())
      throw std::invalid_argument("all atoms must share the same length");
    require_finite(atoms[k], "atom");
    std::copy(atoms[k].begin(), atoms[k].end(), d.atom(k).begin());
  }
  return d;
}

bool Dictionary::satisfies_norm_constraint(double slack) const {
  for (std::size_t k = 0; k < n_atoms(); ++k)
    if (squared_norm(atom(k)) > 1.0 + slack) return false;
  return true;
}

Activations::Activations(std::size_t n_atoms, std::size_t length) : Table(n_atoms, length) {
  if (n_atoms == 0 || length == 0)
    throw std::invalid_argument("activations need K >= 1 maps of length L >= 1");
}

double Activations::l1_norm() const {
  double s = 0.0;
  for (double v : data_) s += std::abs(v);
  return s;
}

bool Activations::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
}

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Joint: return "joint";
    case Mode::Init: return "init";
    case Mode::None: return "none";
  }
  return "unknown";
}

Mode parse_mode(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "joint") return Mode::Joint;
  if (lower == "init") return Mode::Init;
  if (lower == "none") return Mode::None;
  throw std::invalid_argument("unknown mode '" + std::string(name) + "' (expected joint, init or none)");
}

void SolverConfig::validate() const {
  if (!(lambda_frac > 0.0 && lambda_frac <= 1.0))
    throw std::invalid_argument("lambda_frac must lie in (0, 1]");
  if (!(lambda_tv >= 0.0) || !std::isfinite(lambda_tv))
    throw std::invalid_argument("lambda_tv must be a finite value >= 0");
  if (epsilon && !(*epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (fista_iters < 1) throw std::invalid_argument("fista_iters must be >= 1");
  if (!(sparse_tol > 0.0) || !std::isfinite(sparse_tol))
    throw std::invalid_argument("sparse_tol must be a finite value > 0");
}

void require_finite(std::span<const double> values, std::string_view what) {
  for (double v : values)
    if (!std::isfinite(v))
      throw std::invalid_argument(std::string(what) + " contains a non-finite value");
}

double max_abs(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double squared_norm(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v * v;
  return s;
}

double total_variation(std::span<const double> values) {
  double s = 0.0;
  for (std::size_t t = 1; t < values.size(); ++t) s += std::abs(values[t] - values[t - 1]);
  return s;
}

}  // namespace cscpct
