#include "cscpct/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace cscpct {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Calls fn(line_number, line) for every line, numbering from 1.
template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0, start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    fn(++line_no, text.substr(start, end - start));
    start = end + 1;
  }
}

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

bool parse_bool(std::string_view v, std::string_view key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw UsageError("config key '" + std::string(key) + "' expects true/false, got '" + std::string(v) + "'");
}

template <class Fn>
auto as_usage(Fn&& fn) {
  try {
    return fn();
  } catch (const DataError& e) {
    throw UsageError(e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::string_view context) {
  text = trim(text);
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (text.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
    throw DataError(std::string(context) + ": expected a finite number, got '" + std::string(text) + "'");
  return v;
}

long long parse_integer(std::string_view text, std::string_view context) {
  text = trim(text);
  long long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw DataError(std::string(context) + ": expected an integer, got '" + std::string(text) + "'");
  return v;
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << contents;
    if (!out) throw DataError("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw DataError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------

KeyValues parse_key_values(std::string_view text, std::string_view source) {
  KeyValues kv;
  for_each_line(text, [&](std::size_t n, std::string_view line) {
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) return;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw UsageError(where(source, n) + "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw UsageError(where(source, n) + "empty key");
    kv.emplace_back(std::string(key), std::string(trim(line.substr(eq + 1))));
  });
  return kv;
}

KeyValues read_key_values(const fs::path& path) {
  return parse_key_values(read_file(path), path.string());
}

std::string format_key_values(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

void apply_solver_keys(const KeyValues& kv, SolverConfig& config, std::size_t& k, std::size_t& w) {
  for (const auto& [key, value] : kv) {
    if (key.starts_with("result.")) continue;
    as_usage([&] {
      if (key == "lambda_frac") config.lambda_frac = parse_double(value, key);
      else if (key == "lambda_tv") config.lambda_tv = parse_double(value, key);
      else if (key == "epsilon") {
        if (value == "auto") config.epsilon.reset();
        else config.epsilon = parse_double(value, key);
      } else if (key == "max_iter") config.max_iter = static_cast<int>(parse_integer(value, key));
      else if (key == "mode") config.mode = parse_mode(value);
      else if (key == "seed") config.seed = static_cast<std::uint64_t>(parse_integer(value, key));
      else if (key == "nonnegative") config.nonnegative = parse_bool(value, key);
      else if (key == "literal_schedule") config.literal_schedule = parse_bool(value, key);
      else if (key == "fista_iters") config.fista_iters = static_cast<int>(parse_integer(value, key));
      else if (key == "sparse_tol") config.sparse_tol = parse_double(value, key);
      else if (key == "k") k = static_cast<std::size_t>(parse_integer(value, key));
      else if (key == "w") w = static_cast<std::size_t>(parse_integer(value, key));
      else throw UsageError("unknown solver config key '" + key + "'");
      return 0;
    });
  }
}

void apply_synthetic_keys(const KeyValues& kv, SyntheticParams& p) {
  for (const auto& [key, value] : kv) {
    as_usage([&] {
      if (key == "duration_s") p.duration_s = parse_double(value, key);
      else if (key == "sample_rate") p.sample_rate = parse_double(value, key);
      else if (key == "saccade_rate") p.saccade_rate = parse_double(value, key);
      else if (key == "saccade_amp_mean") p.saccade_amp_mean = parse_double(value, key);
      else if (key == "nystagmus_kind") p.nystagmus_kind = parse_nystagmus_kind(value);
      else if (key == "nystagmus_freq_mean") p.nystagmus_freq_mean = parse_double(value, key);
      else if (key == "nystagmus_amp_mean") p.nystagmus_amp_mean = parse_double(value, key);
      else if (key == "noise_std") p.noise_std = parse_double(value, key);
      else if (key == "seed") p.seed = static_cast<std::uint64_t>(parse_integer(value, key));
      else if (key == "randomize_nystagmus") p.randomize_nystagmus = parse_bool(value, key);
      else throw UsageError("unknown synthetic parameter '" + key + "'");
      return 0;
    });
  }
}

KeyValues solver_keys(const SolverConfig& c, std::size_t k, std::size_t w) {
  return {
      {"mode", std::string(to_string(c.mode))},
      {"k", std::to_string(k)},
      {"w", std::to_string(w)},
      {"lambda_frac", format_double(c.lambda_frac)},
      {"lambda_tv", format_double(c.lambda_tv)},
      {"epsilon", c.epsilon ? format_double(*c.epsilon) : "auto"},
      {"max_iter", std::to_string(c.max_iter)},
      {"fista_iters", std::to_string(c.fista_iters)},
      {"sparse_tol", format_double(c.sparse_tol)},
      {"seed", std::to_string(c.seed)},
      {"nonnegative", c.nonnegative ? "true" : "false"},
      {"literal_schedule", c.literal_schedule ? "true" : "false"},
  };
}

KeyValues synthetic_keys(const SyntheticParams& p) {
  return {
      {"duration_s", format_double(p.duration_s)},
      {"sample_rate", format_double(p.sample_rate)},
      {"saccade_rate", format_double(p.saccade_rate)},
      {"saccade_amp_mean", format_double(p.saccade_amp_mean)},
      {"nystagmus_kind", std::string(to_string(p.nystagmus_kind))},
      {"nystagmus_freq_mean", format_double(p.nystagmus_freq_mean)},
      {"nystagmus_amp_mean", format_double(p.nystagmus_amp_mean)},
      {"noise_std", format_double(p.noise_std)},
      {"seed", std::to_string(p.seed)},
      {"randomize_nystagmus", p.randomize_nystagmus ? "true" : "false"},
  };
}

// ---------------------------------------------------------------------------

Recording parse_recording(std::string_view text, std::string_view source) {
  Recording rec;
  std::vector<double> samples;
  bool header_seen = false;
  long long prev_time = 0;
  for_each_line(text, [&](std::size_t n, std::string_view line) {
    line = trim(line);
    if (line.empty()) return;
    const auto fields = split(line, ',');
    if (!header_seen) {
      if (fields.size() != 4 || fields[0] != "time_ms" || fields[1] != "angle_deg" ||
          fields[2] != "eye" || fields[3] != "axis")
        throw DataError(where(source, n) + "expected header 'time_ms,angle_deg,eye,axis'");
      header_seen = true;
      return;
    }
    if (fields.size() != 4)
      throw DataError(where(source, n) + "expected 4 fields, found " + std::to_string(fields.size()));
    const long long time = parse_integer(fields[0], where(source, n) + "time_ms");
    const double angle = parse_double(fields[1], where(source, n) + "angle_deg");
    if (fields[2] != "left" && fields[2] != "right")
      throw DataError(where(source, n) + "eye must be 'left' or 'right'");
    if (fields[3] != "horizontal" && fields[3] != "vertical")
      throw DataError(where(source, n) + "axis must be 'horizontal' or 'vertical'");
    if (samples.empty()) {
      rec.eye = fields[2];
      rec.axis = fields[3];
    } else {
      if (fields[2] != rec.eye || fields[3] != rec.axis)
        throw DataError(where(source, n) + "recording must hold a single channel");
      if (time <= prev_time) throw DataError(where(source, n) + "time_ms must be strictly increasing");
      if (time != prev_time + 1)
        throw DataError(where(source, n) + "non-uniform sampling: expected time_ms " +
                        std::to_string(prev_time + 1) + " (1 kHz)");
    }
    prev_time = time;
    samples.push_back(angle);
  });
  if (!header_seen) throw DataError(std::string(source) + ": empty recording");
  if (samples.empty()) throw DataError(std::string(source) + ": recording has no samples");
  rec.signal = Signal(std::move(samples), 1000.0);
  return rec;
}

Recording read_recording(const fs::path& path) { return parse_recording(read_file(path), path.string()); }

std::string format_recording(const Recording& rec) {
  if (rec.signal.sample_rate() != 1000.0)
    throw DataError("recording files are sampled at 1000 Hz, signal has " +
                    format_double(rec.signal.sample_rate()) + " Hz");
  std::string out = "time_ms,angle_deg,eye,axis\n";
  const std::string suffix = "," + rec.eye + "," + rec.axis + "\n";
  for (std::size_t i = 0; i < rec.signal.size(); ++i)
    out += std::to_string(i) + "," + format_double(rec.signal[i]) + suffix;
  return out;
}

// ---------------------------------------------------------------------------

const std::vector<double>& Columns::column(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return values[i];
  throw DataError("no column named '" + std::string(name) + "'");
}

Columns parse_columns(std::string_view text, std::string_view source) {
  Columns cols;
  bool header_seen = false;
  for_each_line(text, [&](std::size_t n, std::string_view line) {
    line = trim(line);
    if (line.empty()) return;
    const auto fields = split(line, ',');
    if (!header_seen) {
      for (auto f : fields) cols.names.emplace_back(f);
      cols.values.resize(fields.size());
      header_seen = true;
      return;
    }
    if (fields.size() != cols.names.size())
      throw DataError(where(source, n) + "expected " + std::to_string(cols.names.size()) + " fields, found " +
                      std::to_string(fields.size()));
    for (std::size_t i = 0; i < fields.size(); ++i)
      cols.values[i].push_back(parse_double(fields[i], where(source, n) + cols.names[i]));
  });
  if (!header_seen) throw DataError(std::string(source) + ": empty table");
  return cols;
}

Columns read_columns(const fs::path& path) { return parse_columns(read_file(path), path.string()); }

std::string format_columns(const Columns& cols) {
  std::string out;
  for (std::size_t i = 0; i < cols.names.size(); ++i) out += (i ? "," : "") + cols.names[i];
  out += "\n";
  const std::size_t rows = cols.values.empty() ? 0 : cols.values.front().size();
  for (const auto& c : cols.values)
    if (c.size() != rows) throw std::invalid_argument("format_columns: ragged columns");
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < cols.values.size(); ++i) out += (i ? "," : "") + format_double(cols.values[i][r]);
    out += "\n";
  }
  return out;
}

std::string format_activation_triplets(const Activations& z) {
  std::string out = "atom,offset,value\n";
  for (std::size_t k = 0; k < z.n_atoms(); ++k) {
    const auto m = z.map(k);
    for (std::size_t s = 0; s < m.size(); ++s)
      if (m[s] != 0.0) out += std::to_string(k) + "," + std::to_string(s) + "," + format_double(m[s]) + "\n";
  }
  return out;
}

Activations parse_activation_triplets(std::string_view text, std::size_t n_atoms, std::size_t length,
                                      std::string_view source) {
  Activations z(n_atoms, length);
  bool header_seen = false;
  for_each_line(text, [&](std::size_t n, std::string_view line) {
    line = trim(line);
    if (line.empty()) return;
    const auto fields = split(line, ',');
    if (!header_seen) {
      if (fields.size() != 3 || fields[0] != "atom" || fields[1] != "offset" || fields[2] != "value")
        throw DataError(where(source, n) + "expected header 'atom,offset,value'");
      header_seen = true;
      return;
    }
    if (fields.size() != 3) throw DataError(where(source, n) + "expected 3 fields");
    const long long k = parse_integer(fields[0], where(source, n) + "atom");
    const long long s = parse_integer(fields[1], where(source, n) + "offset");
    if (k < 0 || static_cast<std::size_t>(k) >= n_atoms || s < 0 || static_cast<std::size_t>(s) >= length)
      throw DataError(where(source, n) + "index out of range");
    z(static_cast<std::size_t>(k), static_cast<std::size_t>(s)) = parse_double(fields[2], where(source, n) + "value");
  });
  if (!header_seen) throw DataError(std::string(source) + ": empty activations file");
  return z;
}

}  // namespace cscpct
