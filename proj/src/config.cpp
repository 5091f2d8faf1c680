#include "macflow/config.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "macflow/initial.hpp"
#include "macflow/io.hpp"

namespace macflow {

const char* to_string(InitialKind k) noexcept {
  switch (k) {
    case InitialKind::random: return "random";
    case InitialKind::structured: return "structured";
    case InitialKind::rotation: return "rotation";
    case InitialKind::snapshot: return "snapshot";
  }
  return "?";
}

InitialKind parse_initial_kind(const std::string& s) {
  if (s == "random") return InitialKind::random;
  if (s == "structured") return InitialKind::structured;
  if (s == "rotation") return InitialKind::rotation;
  if (s == "snapshot") return InitialKind::snapshot;
  throw UsageError("unknown initial condition '" + s + "' (expected random, structured, rotation or snapshot)");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

template <class Int>
Int parse_integer(std::string_view key, std::string_view v) {
  Int out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw UsageError("config key '" + std::string(key) + "': expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

double parse_real(std::string_view key, std::string_view v) {
  try {
    return parse_double(v);
  } catch (const UsageError&) {
    throw UsageError("config key '" + std::string(key) + "': expected a number, got '" + std::string(v) + "'");
  }
}

void require(bool ok, const char* key, const char* what) {
  if (!ok) throw UsageError(std::string("config key '") + key + "': " + what);
}

}  // namespace

void RunConfig::validate() const {
  require(dim == 1 || dim == 2, "d", "must be 1 or 2");
  require(n >= 8 && (n & (n - 1)) == 0, "n", "must be a power of two >= 8");
  require(length > 0.0 && std::isfinite(length), "L", "must be positive and finite");
  require(m >= 1, "m", "must be >= 1");
  require(scheme.tau > 0.0 && std::isfinite(scheme.tau), "tau", "must be positive and finite");
  require(scheme.eps > 0.0 && std::isfinite(scheme.eps), "eps", "must be positive and finite");
  require(scheme.scheme != Scheme::threshold || scheme.mode == Mode::rescaled, "scheme",
          "threshold requires mode = rescaled");
  require(t_max >= 0.0 && std::isfinite(t_max), "t_max", "must be nonnegative and finite");
  require(record_every >= 1, "record_every", "must be >= 1");
  require(snapshot_every >= 0, "snapshot_every", "must be >= 0");
  require(initial != InitialKind::random || seed.has_value(), "seed", "required when ic = random");
  require(initial != InitialKind::snapshot || !initial_path.empty(), "ic_path", "required when ic = snapshot");
  require((initial != InitialKind::structured && initial != InitialKind::rotation) || (dim == 2 && m == 2), "ic",
          "structured and rotation data need d = 2 and m = 2");
  require(levels >= 2, "levels", "must be >= 2");
  require(reference_level >= levels, "reference_level", "must be >= levels");
  require(samples >= 1, "samples", "must be >= 1");
}

void RunConfig::set(std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "d") dim = parse_integer<int>(key, value);
  else if (key == "n") n = parse_integer<int>(key, value);
  else if (key == "L") length = parse_real(key, value);
  else if (key == "m") m = parse_integer<int>(key, value);
  else if (key == "tau") scheme.tau = parse_real(key, value);
  else if (key == "eps") scheme.eps = parse_real(key, value);
  else if (key == "mode") scheme.mode = parse_mode(std::string(value));
  else if (key == "scheme") scheme.scheme = parse_scheme(std::string(value));
  else if (key == "t_max") t_max = parse_real(key, value);
  else if (key == "record_every") record_every = parse_integer<int>(key, value);
  else if (key == "ic") initial = parse_initial_kind(std::string(value));
  else if (key == "seed") {
    if (value.empty() || value == "none") seed.reset();
    else seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "ic_path") initial_path = std::string(value);
  else if (key == "out") out_dir = std::string(value);
  else if (key == "snapshot_every") snapshot_every = parse_integer<int>(key, value);
  else if (key == "levels") levels = parse_integer<int>(key, value);
  else if (key == "reference_level") reference_level = parse_integer<int>(key, value);
  else if (key == "samples") samples = parse_integer<std::uint64_t>(key, value);
  else throw UsageError("unknown config key '" + std::string(key) + "'");
}

std::string RunConfig::serialize() const {
  std::string s;
  auto line = [&](const char* key, const std::string& v) { s += std::string(key) + " = " + v + "\n"; };
  line("d", std::to_string(dim));
  line("n", std::to_string(n));
  line("L", format_double(length));
  line("m", std::to_string(m));
  line("tau", format_double(scheme.tau));
  line("eps", format_double(scheme.eps));
  line("mode", to_string(scheme.mode));
  line("scheme", to_string(scheme.scheme));
  line("t_max", format_double(t_max));
  line("record_every", std::to_string(record_every));
  line("ic", to_string(initial));
  line("seed", seed ? std::to_string(*seed) : std::string("none"));
  line("ic_path", initial_path);
  line("out", out_dir);
  line("snapshot_every", std::to_string(snapshot_every));
  line("levels", std::to_string(levels));
  line("reference_level", std::to_string(reference_level));
  line("samples", std::to_string(samples));
  return s;
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const UsageError& e) {
      throw UsageError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  const std::string text = read_text_file(path);
  try {
    return parse_config(text, std::move(base));
  } catch (const UsageError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

RunConfig preset(std::string_view name) {
  RunConfig c;
  if (name == "ex-compare") {
    c.n = 256;
    c.scheme = {0.01, 0.05, Mode::rescaled, Scheme::strang};
    c.t_max = 2.0;
    c.record_every = 1;
    c.initial = InitialKind::structured;
  } else if (name == "ex-random") {
    c.n = 256;
    c.scheme = {0.1, 0.1, Mode::physical, Scheme::strang};
    c.t_max = 20.0;
    c.record_every = 1;
    c.initial = InitialKind::random;
    c.seed = 1;
  } else if (name == "converge-default") {
    c.n = 32;
    c.scheme = {0.1, 0.5, Mode::physical, Scheme::strang};
    c.t_max = 0.5;
    c.initial = InitialKind::rotation;
    c.levels = 4;
    c.reference_level = 5;
  } else {
    throw UsageError("unknown preset '" + std::string(name) + "' (expected ex-compare, ex-random or converge-default)");
  }
  return c;
}

std::vector<std::string> preset_names() { return {"ex-compare", "ex-random", "converge-default"}; }

MatrixField make_initial_field(const RunConfig& c) {
  c.validate();
  const Grid grid = c.grid();
  switch (c.initial) {
    case InitialKind::random: return ic_random(grid, c.m, *c.seed);
    case InitialKind::structured: return ic_structured(grid, c.m);
    case InitialKind::rotation: return ic_rotation(grid, c.m);
    case InitialKind::snapshot: {
      Snapshot s = read_snapshot(c.initial_path);
      if (!(s.field.grid() == grid) || s.field.matrix_size() != c.m) {
        throw UsageError("snapshot '" + c.initial_path + "' does not match the configured grid (d, n, L) and m");
      }
      if (!s.field.all_finite()) throw UsageError("snapshot '" + c.initial_path + "' contains non-finite values");
      return std::move(s.field);
    }
  }
  throw UsageError("unreachable initial condition selector");
}

}  // namespace macflow
