#include "cscpct/kernels.hpp"

#include <algorithm>
#include <stdexcept>

#include <omp.h>

namespace cscpct {

namespace {

// Below this many multiply-adds the thread fork costs more than it saves.
constexpr std::size_t kParallelWork = 1u << 15;

void check_shapes(const Dictionary& d, std::span<const SparseMap> z, std::size_t t_len) {
  if (z.size() != d.n_atoms()) throw std::invalid_argument("activation count does not match atom count");
  if (t_len + 1 < d.atom_length()) throw std::invalid_argument("output shorter than atom");
}

}  // namespace

std::vector<SparseMap> to_sparse(const Activations& z) {
  std::vector<SparseMap> out(z.n_atoms());
  for (std::size_t k = 0; k < z.n_atoms(); ++k) {
    auto m = z.map(k);
    for (std::size_t s = 0; s < m.size(); ++s) {
      if (m[s] != 0.0) {
        out[k].offsets.push_back(s);
        out[k].values.push_back(m[s]);
      }
    }
  }
  return out;
}

std::vector<double> convolve(std::span<const double> atom, std::span<const double> activation) {
  if (atom.empty() || activation.empty()) throw std::invalid_argument("convolve: empty input");
  std::vector<double> out(atom.size() + activation.size() - 1, 0.0);
  for (std::size_t s = 0; s < activation.size(); ++s) {
    const double a = activation[s];
    if (a == 0.0) continue;
    for (std::size_t tau = 0; tau < atom.size(); ++tau) out[s + tau] += atom[tau] * a;
  }
  return out;
}

std::vector<double> correlate(std::span<const double> x, std::span<const double> atom) {
  if (atom.empty() || x.empty()) throw std::invalid_argument("correlate: empty input");
  if (atom.size() > x.size()) throw std::invalid_argument("correlate: atom longer than signal");
  const std::size_t len = x.size() - atom.size() + 1;
  std::vector<double> out(len);
  for (std::size_t t = 0; t < len; ++t) {
    double s = 0.0;
    for (std::size_t tau = 0; tau < atom.size(); ++tau) s += atom[tau] * x[t + tau];
    out[t] = s;
  }
  return out;
}

std::vector<double> reconstruct(const Dictionary& d, const Activations& z) {
  if (d.n_atoms() != z.n_atoms())
    throw std::invalid_argument("reconstruct: dictionary has " + std::to_string(d.n_atoms()) +
                                " atoms but activations have " + std::to_string(z.n_atoms()));
  std::vector<double> out(z.length() + d.atom_length() - 1, 0.0);
  const auto sparse = to_sparse(z);
  omp::accumulate_reconstruction(d, sparse, out);
  return out;
}

std::vector<double> reconstruct(const Dictionary& d, const Activations& z, const Trend& y) {
  auto out = reconstruct(d, z);
  if (y.size() != out.size())
    throw std::invalid_argument("reconstruct: trend length " + std::to_string(y.size()) +
                                " does not match T = " + std::to_string(out.size()));
  for (std::size_t t = 0; t < out.size(); ++t) out[t] += y.values[t];
  return out;
}

namespace serial {

Table correlate_atoms(std::span<const double> x, const Dictionary& d) {
  const std::size_t w = d.atom_length();
  if (w > x.size()) throw std::invalid_argument("atom length W exceeds signal length T");
  const std::size_t len = x.size() - w + 1;
  Table out(d.n_atoms(), len);
  for (std::size_t k = 0; k < d.n_atoms(); ++k) {
    const auto atom = d.atom(k);
    for (std::size_t t = 0; t < len; ++t) {
      double s = 0.0;
      for (std::size_t tau = 0; tau < w; ++tau) s += atom[tau] * x[t + tau];
      out(k, t) = s;
    }
  }
  return out;
}

void accumulate_reconstruction(const Dictionary& d, std::span<const SparseMap> z,
                               std::span<double> out) {
  check_shapes(d, z, out.size());
  const std::size_t w = d.atom_length();
  for (std::size_t k = 0; k < d.n_atoms(); ++k) {
    const auto atom = d.atom(k);
    for (std::size_t i = 0; i < z[k].offsets.size(); ++i) {
      const std::size_t s = z[k].offsets[i];
      const double a = z[k].values[i];
      for (std::size_t tau = 0; tau < w; ++tau) out[s + tau] += atom[tau] * a;
    }
  }
}

Table correlate_activations(std::span<const SparseMap> z, std::span<const double> r,
                            std::size_t atom_length) {
  Table out(z.size(), atom_length);
  for (std::size_t k = 0; k < z.size(); ++k) {
    for (std::size_t i = 0; i < z[k].offsets.size(); ++i) {
      const std::size_t s = z[k].offsets[i];
      const double a = z[k].values[i];
      for (std::size_t tau = 0; tau < atom_length; ++tau) out(k, tau) += a * r[s + tau];
    }
  }
  return out;
}

}  // namespace serial

namespace omp {

Table correlate_atoms(std::span<const double> x, const Dictionary& d) {
  const std::size_t w = d.atom_length();
  if (w > x.size()) throw std::invalid_argument("atom length W exceeds signal length T");
  const std::size_t len = x.size() - w + 1;
  const std::size_t n_atoms = d.n_atoms();
  Table out(n_atoms, len);
  const auto total = static_cast<long long>(n_atoms * len);
  const bool par = n_atoms * len * w >= kParallelWork;
#pragma omp parallel for schedule(static) if (par)
  for (long long idx = 0; idx < total; ++idx) {
    const std::size_t k = static_cast<std::size_t>(idx) / len;
    const std::size_t t = static_cast<std::size_t>(idx) % len;
    const auto atom = d.atom(k);
    double s = 0.0;
    for (std::size_t tau = 0; tau < w; ++tau) s += atom[tau] * x[t + tau];
    out(k, t) = s;
  }
  return out;
}

void accumulate_reconstruction(const Dictionary& d, std::span<const SparseMap> z,
                               std::span<double> out) {
  check_shapes(d, z, out.size());
  const std::size_t w = d.atom_length();
  std::size_t nnz = 0;
  for (const auto& m : z) nnz += m.offsets.size();
  const bool par = nnz * w >= kParallelWork;

#pragma omp parallel if (par)
  {
    // Each thread owns one contiguous block of output samples.
    const std::size_t n_threads = static_cast<std::size_t>(omp_get_num_threads());
    const std::size_t tid = static_cast<std::size_t>(omp_get_thread_num());
    const std::size_t block = (out.size() + n_threads - 1) / n_threads;
    const std::size_t lo = std::min(out.size(), tid * block);
    const std::size_t hi = std::min(out.size(), lo + block);
    for (std::size_t k = 0; k < d.n_atoms() && lo < hi; ++k) {
      const auto atom = d.atom(k);
      const auto& offs = z[k].offsets;
      // First activation whose support [s, s + w) reaches lo.
      auto first = std::lower_bound(offs.begin(), offs.end(), lo + 1 > w ? lo + 1 - w : 0);
      for (auto it = first; it != offs.end() && *it < hi; ++it) {
        const std::size_t s = *it;
        const double a = z[k].values[static_cast<std::size_t>(it - offs.begin())];
        const std::size_t tau_lo = lo > s ? lo - s : 0;
        const std::size_t tau_hi = std::min(w, hi - s);
        for (std::size_t tau = tau_lo; tau < tau_hi; ++tau) out[s + tau] += atom[tau] * a;
      }
    }
  }
}

Table correlate_activations(std::span<const SparseMap> z, std::span<const double> r,
                            std::size_t atom_length) {
  Table out(z.size(), atom_length);
  std::size_t nnz = 0;
  for (const auto& m : z) nnz += m.offsets.size();
  const auto total = static_cast<long long>(z.size() * atom_length);
  const bool par = nnz * atom_length >= kParallelWork;
#pragma omp parallel for schedule(static) if (par)
  for (long long idx = 0; idx < total; ++idx) {
    const std::size_t k = static_cast<std::size_t>(idx) / atom_length;
    const std::size_t tau = static_cast<std::size_t>(idx) % atom_length;
    double s = 0.0;
    for (std::size_t i = 0; i < z[k].offsets.size(); ++i)
      s += z[k].values[i] * r[z[k].offsets[i] + tau];
    out(k, tau) = s;
  }
  return out;
}

}  // namespace omp

}  // namespace cscpct
