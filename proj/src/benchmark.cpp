#include "cscpct/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cscpct/metrics.hpp"
#include "cscpct/solver.hpp"

namespace cscpct {

namespace {

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = v.find(',', start);
    auto item = v.substr(start, pos == std::string_view::npos ? pos : pos - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.push_back(item);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view to_string(KindMix m) {
  switch (m) {
    case KindMix::Mixed: return "mixed";
    case KindMix::Pendular: return "pendular";
    case KindMix::Jerk: return "jerk";
  }
  return "mixed";
}

NystagmusKind kind_for(KindMix mix, std::size_t index) {
  switch (mix) {
    case KindMix::Pendular: return NystagmusKind::Pendular;
    case KindMix::Jerk: return NystagmusKind::Jerk;
    case KindMix::Mixed: break;
  }
  return index % 2 == 0 ? NystagmusKind::Pendular : NystagmusKind::Jerk;
}

}  // namespace

void BenchmarkSpec::validate() const {
  if (n_signals < 1) throw UsageError("n_signals must be >= 1");
  if (lambda_tv_grid.empty()) throw UsageError("lambda_tv_grid must not be empty");
  if (modes.empty()) throw UsageError("modes must not be empty");
  for (double v : lambda_tv_grid)
    if (!(v >= 0.0)) throw UsageError("lambda_tv_grid values must be >= 0");
  if (!(lambda_tv_scale > 0.0)) throw UsageError("lambda_tv_scale must be > 0");
  if (k < 1 || w < 2) throw UsageError("need k >= 1 and w >= 2");
  SolverConfig c;
  c.lambda_frac = lambda_frac;
  c.max_iter = max_iter;
  c.fista_iters = fista_iters;
  c.sparse_tol = sparse_tol;
  try {
    c.validate();
    signal.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

BenchmarkSpec parse_benchmark_spec(const KeyValues& kv) {
  BenchmarkSpec spec;
  KeyValues signal_kv;
  for (const auto& [key, value] : kv) {
    try {
      if (key == "n_signals") spec.n_signals = static_cast<std::size_t>(parse_integer(value, key));
      else if (key == "lambda_frac") spec.lambda_frac = parse_double(value, key);
      else if (key == "lambda_tv_grid") {
        spec.lambda_tv_grid.clear();
        for (auto item : split_list(value)) spec.lambda_tv_grid.push_back(parse_double(item, key));
      } else if (key == "lambda_tv_scale") spec.lambda_tv_scale = parse_double(value, key);
      else if (key == "modes") {
        spec.modes.clear();
        for (auto item : split_list(value)) spec.modes.push_back(parse_mode(item));
      } else if (key == "k") spec.k = static_cast<std::size_t>(parse_integer(value, key));
      else if (key == "w") spec.w = static_cast<std::size_t>(parse_integer(value, key));
      else if (key == "master_seed") spec.master_seed = static_cast<std::uint64_t>(parse_integer(value, key));
      else if (key == "max_iter") spec.max_iter = static_cast<int>(parse_integer(value, key));
      else if (key == "fista_iters") spec.fista_iters = static_cast<int>(parse_integer(value, key));
      else if (key == "sparse_tol") spec.sparse_tol = parse_double(value, key);
      else if (key == "nonnegative") spec.nonnegative = value == "true" || value == "1";
      else if (key == "kinds") {
        if (value == "mixed") spec.kinds = KindMix::Mixed;
        else if (value == "pendular") spec.kinds = KindMix::Pendular;
        else if (value == "jerk") spec.kinds = KindMix::Jerk;
        else throw UsageError("kinds must be mixed, pendular or jerk");
      } else if (key.starts_with("signal.")) signal_kv.emplace_back(key.substr(7), value);
      else throw UsageError("unknown benchmark key '" + key + "'");
    } catch (const DataError& e) {
      throw UsageError(e.what());
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  apply_synthetic_keys(signal_kv, spec.signal);
  spec.validate();
  return spec;
}

KeyValues benchmark_keys(const BenchmarkSpec& spec) {
  std::string grid, modes;
  for (double v : spec.lambda_tv_grid) grid += (grid.empty() ? "" : ",") + format_double(v);
  for (Mode m : spec.modes) modes += (modes.empty() ? "" : ",") + std::string(to_string(m));
  KeyValues kv{
      {"n_signals", std::to_string(spec.n_signals)},
      {"lambda_frac", format_double(spec.lambda_frac)},
      {"lambda_tv_grid", grid},
      {"lambda_tv_scale", format_double(spec.lambda_tv_scale)},
      {"modes", modes},
      {"k", std::to_string(spec.k)},
      {"w", std::to_string(spec.w)},
      {"master_seed", std::to_string(spec.master_seed)},
      {"max_iter", std::to_string(spec.max_iter)},
      {"fista_iters", std::to_string(spec.fista_iters)},
      {"sparse_tol", format_double(spec.sparse_tol)},
      {"nonnegative", spec.nonnegative ? "true" : "false"},
      {"kinds", std::string(to_string(spec.kinds))},
  };
  for (auto& [k, v] : synthetic_keys(spec.signal)) {
    if (k == "seed" || k == "nystagmus_kind") continue;
    kv.emplace_back("signal." + k, v);
  }
  return kv;
}

const CellSummary& BenchmarkResult::cell(Mode mode, double lambda_tv) const {
  for (const auto& c : cells)
    if (c.mode == mode && c.lambda_tv == lambda_tv) return c;
  throw std::out_of_range("no benchmark cell for that mode and lambda_tv");
}

std::uint64_t signal_seed(std::uint64_t master_seed, std::size_t index) {
  // splitmix64 finaliser
  std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(values.size() - 1, lo + 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

BenchmarkResult run_benchmark(const BenchmarkSpec& spec) {
  spec.validate();

  struct Task {
    Mode mode;
    double lambda_tv;
    std::size_t signal;
  };
  std::vector<Task> tasks;
  for (Mode m : spec.modes) {
    const std::size_t n_grid = m == Mode::None ? 1 : spec.lambda_tv_grid.size();
    for (std::size_t g = 0; g < n_grid; ++g)
      for (std::size_t i = 0; i < spec.n_signals; ++i) tasks.push_back({m, spec.lambda_tv_grid[g], i});
  }

  std::vector<BenchmarkRecord> done(tasks.size());
  const auto n_tasks = static_cast<long long>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long long ti = 0; ti < n_tasks; ++ti) {
    const Task& task = tasks[static_cast<std::size_t>(ti)];
    BenchmarkRecord& rec = done[static_cast<std::size_t>(ti)];
    rec.mode = task.mode;
    rec.lambda_tv = task.lambda_tv;
    rec.signal_index = task.signal;
    rec.seed = signal_seed(spec.master_seed, task.signal);
    rec.kind = kind_for(spec.kinds, task.signal);
    try {
      SyntheticParams params = spec.signal;
      params.seed = rec.seed;
      params.nystagmus_kind = rec.kind;
      const auto [x, truth] = gen_signal(params);

      SolverConfig config;
      config.mode = task.mode;
      config.lambda_frac = spec.lambda_frac;
      config.lambda_tv = task.lambda_tv * spec.lambda_tv_scale;
      config.max_iter = spec.max_iter;
      config.fista_iters = spec.fista_iters;
      config.sparse_tol = spec.sparse_tol;
      config.nonnegative = spec.nonnegative;
      config.seed = rec.seed;
      const Decomposition dec = fit(x, spec.k, spec.w, config);

      double best = -1.0;
      for (std::size_t k = 0; k < dec.dictionary.n_atoms(); ++k) {
        if (squared_norm(dec.dictionary.atom(k)) == 0.0) continue;
        best = std::max(best, recovery_score(truth.pattern, dec.dictionary.atom(k)).rho);
      }
      if (best < -0.5 && spec.k >= 1) throw std::runtime_error("every learned atom is zero");
      rec.rho = best;
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.error = e.what();
    }
  }

  BenchmarkResult result;
  for (Mode m : spec.modes) {
    for (double lt : spec.lambda_tv_grid) {
      CellSummary cell;
      cell.mode = m;
      cell.lambda_tv = lt;
      cell.lambda_tv_abs = m == Mode::None ? 0.0 : lt * spec.lambda_tv_scale;
      std::vector<double> scores;
      for (const auto& d : done) {
        if (d.mode != m || (m != Mode::None && d.lambda_tv != lt)) continue;
        BenchmarkRecord rec = d;
        rec.lambda_tv = lt;
        result.records.push_back(rec);
        if (rec.failed) ++cell.n_failed;
        else scores.push_back(rec.rho);
      }
      cell.n_ok = scores.size();
      cell.median = quantile(scores, 0.5);
      cell.q1 = quantile(scores, 0.25);
      cell.q3 = quantile(scores, 0.75);
      result.cells.push_back(cell);
    }
  }
  return result;
}

std::string format_summary(const BenchmarkResult& result) {
  std::string out = "mode,lambda_tv,lambda_tv_abs,n_ok,n_failed,median,q1,q3\n";
  for (const auto& c : result.cells) {
    out += std::string(to_string(c.mode)) + "," + format_double(c.lambda_tv) + "," +
           format_double(c.lambda_tv_abs) + "," + std::to_string(c.n_ok) + "," + std::to_string(c.n_failed) +
           "," + format_double(c.median) + "," + format_double(c.q1) + "," + format_double(c.q3) + "\n";
  }
  return out;
}

std::string format_scores(const BenchmarkResult& result) {
  std::string out = "mode,lambda_tv,seed,signal,kind,rho,status\n";
  for (const auto& r : result.records) {
    out += std::string(to_string(r.mode)) + "," + format_double(r.lambda_tv) + "," + std::to_string(r.seed) + "," +
           std::to_string(r.signal_index) + "," + std::string(to_string(r.kind)) + "," +
           (r.failed ? std::string("nan") : format_double(r.rho)) + "," + (r.failed ? "failed" : "ok") + "\n";
  }
  return out;
}

}  // namespace cscpct
