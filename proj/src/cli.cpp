#include "cscpct/cli.hpp"

#include <filesystem>
#include <optional>

#include <CLI11.hpp>

#include "cscpct/benchmark.hpp"
#include "cscpct/io.hpp"
#include "cscpct/metrics.hpp"
#include "cscpct/solver.hpp"
#include "cscpct/synthetic.hpp"

namespace cscpct {

namespace fs = std::filesystem;

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<double> lambda_frac;
  std::optional<double> lambda_tv;
};

void make_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw DataError("cannot create output directory " + dir.string());
}

int cmd_simulate(const std::string& params_file, const fs::path& out_dir, const Overrides& ov,
                 std::ostream& out) {
  SyntheticParams params;
  if (!params_file.empty()) apply_synthetic_keys(read_key_values(params_file), params);
  if (ov.seed) params.seed = *ov.seed;
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const auto [signal, truth] = [&] {
    try {
      return gen_signal(params);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  make_out_dir(out_dir);

  write_file_atomic(out_dir / "signal.csv", format_recording({signal, "left", "horizontal"}));

  std::vector<double> index(signal.size());
  for (std::size_t i = 0; i < index.size(); ++i) index[i] = static_cast<double>(i);
  write_file_atomic(out_dir / "components.csv",
                    format_columns({{"sample", "trend", "nystagmus", "noise", "signal"},
                                    {index, truth.trend.values, truth.nystagmus, truth.noise,
                                     std::vector<double>(signal.samples().begin(), signal.samples().end())}}));

  std::vector<double> tau(truth.pattern.size());
  for (std::size_t i = 0; i < tau.size(); ++i) tau[i] = static_cast<double>(i);
  write_file_atomic(out_dir / "pattern.csv", format_columns({{"tau", "pattern"}, {tau, truth.pattern}}));

  KeyValues kv = synthetic_keys(params);
  std::string times;
  for (auto t : truth.saccade_times) times += (times.empty() ? "" : ",") + std::to_string(t);
  kv.emplace_back("result.n_samples", std::to_string(signal.size()));
  kv.emplace_back("result.frequency", format_double(truth.frequency));
  kv.emplace_back("result.amplitude", format_double(truth.amplitude));
  kv.emplace_back("result.pattern_length", std::to_string(truth.pattern.size()));
  kv.emplace_back("result.saccade_times", times);
  write_file_atomic(out_dir / "truth.txt", format_key_values(kv));

  out << "wrote " << signal.size() << " samples to " << (out_dir / "signal.csv").string() << "\n";
  return kExitOk;
}

int cmd_fit(const std::string& signal_file, const std::string& config_file, const fs::path& out_dir,
            const Overrides& ov, bool strict, std::ostream& out) {
  SolverConfig config;
  std::size_t k = 1, w = 150;
  if (!config_file.empty()) apply_solver_keys(read_key_values(config_file), config, k, w);
  if (ov.seed) config.seed = *ov.seed;
  if (ov.mode) {
    try {
      config.mode = parse_mode(*ov.mode);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (ov.lambda_frac) config.lambda_frac = *ov.lambda_frac;
  if (ov.lambda_tv) config.lambda_tv = *ov.lambda_tv;
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const Recording rec = read_recording(signal_file);
  Decomposition dec;
  try {
    dec = fit(rec.signal, k, w, config);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  make_out_dir(out_dir);

  Columns atoms;
  atoms.names.push_back("tau");
  atoms.values.emplace_back(w);
  for (std::size_t i = 0; i < w; ++i) atoms.values[0][i] = static_cast<double>(i);
  for (std::size_t j = 0; j < k; ++j) {
    atoms.names.push_back("atom_" + std::to_string(j));
    const auto a = dec.dictionary.atom(j);
    atoms.values.emplace_back(a.begin(), a.end());
  }
  write_file_atomic(out_dir / "atoms.csv", format_columns(atoms));
  write_file_atomic(out_dir / "activations.csv", format_activation_triplets(dec.activations));

  std::vector<double> index(rec.signal.size());
  for (std::size_t i = 0; i < index.size(); ++i) index[i] = static_cast<double>(i);
  write_file_atomic(out_dir / "trend.csv", format_columns({{"sample", "trend"}, {index, dec.trend.values}}));
  write_file_atomic(out_dir / "residual.csv", format_columns({{"sample", "residual"}, {index, dec.residual}}));

  std::vector<double> iter(dec.objective_trace.size());
  for (std::size_t i = 0; i < iter.size(); ++i) iter[i] = static_cast<double>(i);
  write_file_atomic(out_dir / "objective.csv",
                    format_columns({{"iteration", "objective"}, {iter, dec.objective_trace}}));

  KeyValues manifest = solver_keys(config, k, w);
  manifest.emplace_back("result.signal_file", fs::path(signal_file).filename().string());
  manifest.emplace_back("result.n_samples", std::to_string(rec.signal.size()));
  manifest.emplace_back("result.eye", rec.eye);
  manifest.emplace_back("result.axis", rec.axis);
  manifest.emplace_back("result.lambda", format_double(dec.lambda));
  manifest.emplace_back("result.lambda_max", format_double(dec.lambda_max));
  manifest.emplace_back("result.lambda_frac", format_double(config.lambda_frac));
  manifest.emplace_back("result.lambda_tv", format_double(dec.lambda_tv));
  manifest.emplace_back("result.epsilon", format_double(dec.epsilon));
  manifest.emplace_back("result.iterations_run", std::to_string(dec.iterations_run));
  manifest.emplace_back("result.converged", dec.converged ? "true" : "false");
  manifest.emplace_back("result.final_objective", format_double(dec.objective_trace.back()));
  write_file_atomic(out_dir / "manifest.txt", format_key_values(manifest));

  out << "mode=" << to_string(config.mode) << " iterations=" << dec.iterations_run
      << " converged=" << (dec.converged ? "true" : "false") << " lambda=" << format_double(dec.lambda)
      << " objective=" << format_double(dec.objective_trace.back()) << "\n";
  if (strict && !dec.converged) return kExitNotConverged;
  return kExitOk;
}

int cmd_benchmark(const std::string& spec_file, const fs::path& out_dir, const Overrides& ov,
                  std::ostream& out) {
  KeyValues kv;
  if (!spec_file.empty()) kv = read_key_values(spec_file);
  BenchmarkSpec spec = parse_benchmark_spec(kv);
  if (ov.seed) spec.master_seed = *ov.seed;
  if (ov.lambda_frac) spec.lambda_frac = *ov.lambda_frac;
  if (ov.mode) {
    try {
      spec.modes = {parse_mode(*ov.mode)};
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (ov.lambda_tv) spec.lambda_tv_grid = {*ov.lambda_tv};
  spec.validate();
  make_out_dir(out_dir);

  const BenchmarkResult result = run_benchmark(spec);
  const std::string summary = format_summary(result);
  write_file_atomic(out_dir / "summary.csv", summary);
  write_file_atomic(out_dir / "scores.csv", format_scores(result));
  write_file_atomic(out_dir / "manifest.txt", format_key_values(benchmark_keys(spec)));
  out << summary;
  return kExitOk;
}

std::vector<double> pick_column(const Columns& cols, const std::string& name, const std::string& file) {
  if (!name.empty()) return cols.column(name);
  if (cols.names.size() < 2) throw DataError(file + ": expected an index column and a value column");
  return cols.values[1];
}

int cmd_score(const std::string& pattern_file, const std::string& atom_file, const std::string& pattern_col,
              const std::string& atom_col, std::ostream& out) {
  const auto pattern = pick_column(read_columns(pattern_file), pattern_col, pattern_file);
  const auto atom = pick_column(read_columns(atom_file), atom_col, atom_file);
  RecoveryScore s;
  try {
    s = recovery_score(pattern, atom);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  out << "rho=" << format_double(s.rho) << " shift=" << s.best_shift << " offset=" << s.best_offset << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Convolutional sparse coding with a piecewise-constant trend for eye-movement recordings",
               "cscpct"};
  app.require_subcommand(1);

  Overrides ov;
  std::string out_dir;
  bool strict = false;
  auto add_common = [&](CLI::App* sub, bool solver_flags) {
    sub->add_option("--out", out_dir, "Output directory")->required();
    sub->add_option("--seed", ov.seed, "Seed override");
    if (solver_flags) {
      sub->add_option("--mode", ov.mode, "joint, init or none");
      sub->add_option("--lambda-frac", ov.lambda_frac, "Sparsity weight as a fraction of lambda_max");
      sub->add_option("--lambda-tv", ov.lambda_tv, "TV weight (benchmark: single grid value)");
    }
  };

  std::string params_file;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic recording with ground truth");
  simulate->add_option("params", params_file, "Synthetic parameter file (key = value)");
  add_common(simulate, false);

  std::string signal_file, config_file;
  auto* fit_cmd = app.add_subcommand("fit", "Learn atoms, activations and trend from a recording");
  fit_cmd->add_option("signal", signal_file, "Recording CSV")->required();
  fit_cmd->add_option("config", config_file, "Solver config or a previous run manifest");
  fit_cmd->add_flag("--strict", strict, "Exit with code 3 when the outer loop does not converge");
  add_common(fit_cmd, true);

  std::string spec_file;
  auto* bench = app.add_subcommand("benchmark", "Pattern-recovery sweep on synthetic signals");
  bench->add_option("spec", spec_file, "Benchmark spec file (key = value)");
  add_common(bench, true);

  std::string pattern_file, atom_file, pattern_col, atom_col;
  auto* score = app.add_subcommand("score", "Recovery score between a generating pattern and an atom");
  score->add_option("pattern", pattern_file, "Columnar CSV holding the pattern")->required();
  score->add_option("atom", atom_file, "Columnar CSV holding the atom")->required();
  score->add_option("--pattern-column", pattern_col, "Column name (default: second column)");
  score->add_option("--atom-column", atom_col, "Column name (default: second column)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(params_file, out_dir, ov, out);
    if (*fit_cmd) return cmd_fit(signal_file, config_file, out_dir, ov, strict, out);
    if (*bench) return cmd_benchmark(spec_file, out_dir, ov, out);
    if (*score) return cmd_score(pattern_file, atom_file, pattern_col, atom_col, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace cscpct
