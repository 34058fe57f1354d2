#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library's kernels; each routine is the textbook formula.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;

inline Vec random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec v(n);
  for (double& x : v) x = u(rng);
  return v;
}

/// out[t] = sum_tau atom[tau] * act[t - tau] over valid tau, gathered per output sample.
inline Vec convolve(const Vec& atom, const Vec& act) {
  const std::size_t n = atom.size() + act.size() - 1;
  Vec out(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double s = 0.0;
    for (std::size_t tau = 0; tau < atom.size(); ++tau) {
      if (tau > t) break;
      const std::size_t j = t - tau;
      if (j < act.size()) s += atom[tau] * act[j];
    }
    out[t] = s;
  }
  return out;
}

/// sum_k atoms[k] * acts[k] + trend (trend may be empty).
inline Vec reconstruct(const std::vector<Vec>& atoms, const std::vector<Vec>& acts, const Vec& trend = {}) {
  Vec out = convolve(atoms[0], acts[0]);
  for (std::size_t k = 1; k < atoms.size(); ++k) {
    const Vec c = convolve(atoms[k], acts[k]);
    for (std::size_t t = 0; t < out.size(); ++t) out[t] += c[t];
  }
  if (!trend.empty())
    for (std::size_t t = 0; t < out.size(); ++t) out[t] += trend[t];
  return out;
}

/// max over atoms and windows of |<d_k, x[t : t + W]>|.
inline double max_window_dot(const Vec& x, const std::vector<Vec>& atoms) {
  double best = 0.0;
  for (const auto& d : atoms)
    for (std::size_t t = 0; t + d.size() <= x.size(); ++t) {
      double s = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) s += d[i] * x[t + i];
      best = std::max(best, std::abs(s));
    }
  return best;
}

inline double tv(const Vec& u) {
  double s = 0.0;
  for (std::size_t t = 1; t < u.size(); ++t) s += std::abs(u[t] - u[t - 1]);
  return s;
}

inline double tv_primal(const Vec& u, const Vec& v, double w) {
  double s = 0.0;
  for (std::size_t t = 0; t < u.size(); ++t) s += (u[t] - v[t]) * (u[t] - v[t]);
  return 0.5 * s + w * tv(u);
}

struct TvOracleResult {
  Vec u;
  double primal = 0.0;
  double dual = 0.0;  // certified lower bound on the optimum
};

/// TV denoising through its box-constrained dual
///   min_{|p_t| <= w} 1/2 ||v - D^T p||^2,  u = v - D^T p,
/// solved by accelerated projected gradient (step 1/4 >= 1/||D D^T||) until
/// the duality gap closes.
inline TvOracleResult tv_dual_qp(const Vec& v, double w, double gap_tol = 1e-12, int max_iter = 2000000) {
  const std::size_t n = v.size();
  TvOracleResult res;
  if (n < 2 || w == 0.0) {
    res.u = v;
    res.primal = res.dual = 0.0;
    return res;
  }
  const std::size_t m = n - 1;
  Vec p(m, 0.0), q(m, 0.0), p_prev(m, 0.0), u(n);
  double t_mom = 1.0;
  auto primal_of = [&](const Vec& pp, Vec& uu) {
    for (std::size_t t = 0; t < n; ++t) {
      const double left = t > 0 ? pp[t - 1] : 0.0;
      const double right = t < m ? pp[t] : 0.0;
      uu[t] = v[t] - (left - right);
    }
  };
  double vv = 0.0;
  for (double x : v) vv += x * x;
  for (int it = 0; it < max_iter; ++it) {
    primal_of(q, u);
    for (std::size_t t = 0; t < m; ++t) {
      // gradient of 1/2||v - D^T q||^2 wrt q_t is -(u_{t+1} - u_t)
      const double g = -(u[t + 1] - u[t]);
      p[t] = std::clamp(q[t] - 0.25 * g, -w, w);
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_mom * t_mom));
    for (std::size_t t = 0; t < m; ++t) q[t] = p[t] + ((t_mom - 1.0) / t_next) * (p[t] - p_prev[t]);
    p_prev = p;
    t_mom = t_next;
    if (it % 50 == 0) {
      primal_of(p, u);
      double uu = 0.0;
      for (double x : u) uu += x * x;
      const double dual = 0.5 * vv - 0.5 * uu;
      const double primal = tv_primal(u, v, w);
      if (primal - dual < gap_tol) break;
      // restart momentum when it stalls
      if (it % 5000 == 0) t_mom = 1.0;
    }
  }
  primal_of(p, u);
  double uu = 0.0;
  for (double x : u) uu += x * x;
  res.u = u;
  res.primal = tv_primal(u, v, w);
  res.dual = 0.5 * vv - 0.5 * uu;
  return res;
}

/// Dense ISTA on 1/2||A z - x||^2 + lambda ||z||_1 for a single atom, with A
/// the T x L convolution matrix. Returns z.
inline Vec ista_single_atom(const Vec& x, const Vec& d, double lambda, int iterations, bool nonneg = false) {
  const std::size_t w = d.size();
  const std::size_t len = x.size() - w + 1;
  // Lipschitz bound: ||A||^2 <= ||d||_1^2
  double l1 = 0.0;
  for (double v : d) l1 += std::abs(v);
  const double step = 1.0 / (l1 * l1);
  Vec z(len, 0.0), r(x.size());
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t t = 0; t < x.size(); ++t) r[t] = -x[t];
    for (std::size_t s = 0; s < len; ++s)
      for (std::size_t tau = 0; tau < w; ++tau) r[s + tau] += d[tau] * z[s];
    for (std::size_t s = 0; s < len; ++s) {
      double g = 0.0;
      for (std::size_t tau = 0; tau < w; ++tau) g += d[tau] * r[s + tau];
      const double v = z[s] - step * g;
      const double thr = step * lambda;
      double nz = v > thr ? v - thr : (v < -thr ? v + thr : 0.0);
      if (nonneg) nz = std::max(nz, 0.0);
      z[s] = nz;
    }
  }
  return z;
}

inline double lasso_objective(const Vec& x, const Vec& d, const Vec& z, double lambda) {
  const Vec rec = convolve(d, z);
  double s = 0.0, l1 = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) s += (rec[t] - x[t]) * (rec[t] - x[t]);
  for (double v : z) l1 += std::abs(v);
  return 0.5 * s + lambda * l1;
}

/// Brute-force recovery score: every phase t in [0, P), every atom offset,
/// indices taken modulo P directly.
inline double recovery_score(const Vec& pattern, const Vec& atom) {
  const std::size_t p = pattern.size(), w = atom.size(), c = std::min(p, w);
  double best = -1e300;
  for (std::size_t t = 0; t < p; ++t)
    for (std::size_t l = 0; l + c <= w; ++l) {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (std::size_t i = 0; i < c; ++i) {
        const double a = pattern[(t + i) % p];
        const double b = atom[l + i];
        dot += a * b;
        na += a * a;
        nb += b * b;
      }
      if (na == 0.0 || nb == 0.0) continue;
      best = std::max(best, dot / std::sqrt(na * nb));
    }
  return best;
}

}  // namespace oracle
