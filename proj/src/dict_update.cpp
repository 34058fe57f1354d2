#include "cscpct/dict_update.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "cscpct/kernels.hpp"

namespace cscpct {

namespace {

void check_shapes(const Dictionary& d, const Activations& z, std::span<const double> x) {
  if (d.n_atoms() != z.n_atoms())
    throw std::invalid_argument("dictionary and activations disagree on K");
  if (z.length() + d.atom_length() - 1 != x.size())
    throw std::invalid_argument("shape mismatch: expected T = L + W - 1");
}

// Residual D * Z - x and its half squared norm.
double residual(const Dictionary& d, std::span<const SparseMap> z, std::span<const double> x,
                std::vector<double>& r) {
  r.assign(x.size(), 0.0);
  omp::accumulate_reconstruction(d, z, r);
  double f = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    r[t] -= x[t];
    f += r[t] * r[t];
  }
  return 0.5 * f;
}

}  // namespace

double data_fit(std::span<const double> x, const Dictionary& d, const Activations& z) {
  check_shapes(d, z, x);
  std::vector<double> r;
  return residual(d, to_sparse(z), x, r);
}

Table dict_gradient(const Dictionary& d, const Activations& z, std::span<const double> x_detrended) {
  check_shapes(d, z, x_detrended);
  const auto sparse = to_sparse(z);
  std::vector<double> r;
  residual(d, sparse, x_detrended, r);
  return omp::correlate_activations(sparse, r, d.atom_length());
}

void project_unit_ball_inplace(std::span<double> atom) {
  const double norm = std::sqrt(squared_norm(atom));
  if (norm > 1.0)
    for (double& v : atom) v /= norm;
}

std::vector<double> project_unit_ball(std::span<const double> atom) {
  std::vector<double> out(atom.begin(), atom.end());
  project_unit_ball_inplace(out);
  return out;
}

double lipschitz_l1_bound(const Activations& z) {
  double s = 0.0;
  for (std::size_t k = 0; k < z.n_atoms(); ++k) {
    double l1 = 0.0;
    for (double v : z.map(k)) l1 += std::abs(v);
    s += l1 * l1;
  }
  return s;
}

double lipschitz_power_estimate(const Activations& z, std::size_t atom_length, int iterations) {
  const auto sparse = to_sparse(z);
  Dictionary v(z.n_atoms(), atom_length);
  std::fill(v.flat().begin(), v.flat().end(), 1.0 / std::sqrt(static_cast<double>(v.flat().size())));
  std::vector<double> rec(z.length() + atom_length - 1);
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    std::fill(rec.begin(), rec.end(), 0.0);
    omp::accumulate_reconstruction(v, sparse, rec);
    const Table av = omp::correlate_activations(sparse, rec, atom_length);
    const double norm = std::sqrt(squared_norm(av.flat()));
    estimate = norm;  // ||A^T A v|| with ||v|| = 1
    if (norm == 0.0) break;
    for (std::size_t i = 0; i < av.flat().size(); ++i) v.flat()[i] = av.flat()[i] / norm;
  }
  return estimate;
}

DictUpdateResult update_dictionary(const Dictionary& d_init, const Activations& z,
                                   std::span<const double> x_detrended,
                                   const DictUpdateOptions& options) {
  check_shapes(d_init, z, x_detrended);
  if (options.fista_iters < 1) throw std::invalid_argument("fista_iters must be >= 1");

  DictUpdateResult result;
  result.dictionary = d_init;
  const auto sparse = to_sparse(z);
  std::vector<double> r;
  result.initial_fit = result.final_fit = residual(d_init, sparse, x_detrended, r);
  if (z.is_zero()) {
    result.zero_activations = true;
    return result;
  }

  const std::size_t n_atoms = d_init.n_atoms();
  const std::size_t w = d_init.atom_length();
  std::vector<char> active(n_atoms);
  for (std::size_t k = 0; k < n_atoms; ++k) active[k] = sparse[k].offsets.empty() ? 0 : 1;

  double lip = options.step_rule == StepRule::L1Bound ? lipschitz_l1_bound(z)
                                                      : lipschitz_power_estimate(z, w);
  if (!(lip > 0.0)) lip = lipschitz_l1_bound(z);

  Dictionary x_cur = d_init;
  double f_cur = result.initial_fit;
  Dictionary y = x_cur;
  Dictionary cand(n_atoms, w);
  double momentum = 1.0;
  bool y_is_x = true;

  for (int it = 0; it < options.fista_iters; ++it) {
    ++result.iterations;
    const double f_y = residual(y, sparse, x_detrended, r);
    const Table grad = omp::correlate_activations(sparse, r, w);

    double f_cand = 0.0;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t k = 0; k < n_atoms; ++k) {
        auto c = cand.atom(k);
        const auto yk = y.atom(k);
        if (!active[k]) {
          std::copy(yk.begin(), yk.end(), c.begin());
          continue;
        }
        const auto gk = grad.row(k);
        for (std::size_t tau = 0; tau < w; ++tau) c[tau] = yk[tau] - gk[tau] / lip;
        project_unit_ball_inplace(c);
      }
      f_cand = residual(cand, sparse, x_detrended, r);
      double lin = 0.0, quad = 0.0;
      for (std::size_t i = 0; i < cand.flat().size(); ++i) {
        const double step = cand.flat()[i] - y.flat()[i];
        lin += grad.flat()[i] * step;
        quad += step * step;
      }
      if (f_cand <= f_y + lin + 0.5 * lip * quad + 1e-12 * std::abs(f_y)) break;
      lip *= 2.0;
    }

    if (f_cand > f_cur) {
      // Accelerated step went uphill: drop momentum and retry from x_cur.
      ++result.restarts;
      momentum = 1.0;
      if (y_is_x) break;
      y = x_cur;
      y_is_x = true;
      continue;
    }

    const double next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    const double beta = (momentum - 1.0) / next;
    for (std::size_t i = 0; i < y.flat().size(); ++i)
      y.flat()[i] = cand.flat()[i] + beta * (cand.flat()[i] - x_cur.flat()[i]);
    y_is_x = beta == 0.0;
    std::swap(x_cur, cand);
    f_cur = f_cand;
    momentum = next;
  }

  // y may sit outside the ball after extrapolation; x_cur never does.
  result.dictionary = std::move(x_cur);
  result.final_fit = f_cur;
  result.lipschitz = lip;
  return result;
}

Dictionary init_dictionary_from_windows(std::span<const double> x, std::size_t n_atoms,
                                        std::size_t atom_length, std::uint64_t seed) {
  if (atom_length > x.size()) throw std::invalid_argument("atom length exceeds signal length");
  Dictionary d(n_atoms, atom_length);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, x.size() - atom_length);
  for (std::size_t k = 0; k < n_atoms; ++k) {
    const std::size_t start = pick(rng);
    auto atom = d.atom(k);
    std::copy(x.begin() + static_cast<std::ptrdiff_t>(start),
              x.begin() + static_cast<std::ptrdiff_t>(start + atom_length), atom.begin());
    project_unit_ball_inplace(atom);
  }
  return d;
}

}  // namespace cscpct
