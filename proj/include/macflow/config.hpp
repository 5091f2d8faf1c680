#pragma once

// Run configuration: a flat "key = value" text format with '#' comments,
// named presets, and the initial-condition selector.
//
// Keys: d n L m tau eps mode scheme t_max record_every ic seed ic_path out
//       snapshot_every levels reference_level samples

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "macflow/field.hpp"
#include "macflow/sim.hpp"

namespace macflow {

enum class InitialKind { random, structured, rotation, snapshot };

const char* to_string(InitialKind k) noexcept;
InitialKind parse_initial_kind(const std::string& s);

struct RunConfig {
  int dim = 2;
  int n = 64;
  double length = 6.283185307179586;
  int m = 2;
  SchemeParams scheme;
  double t_max = 1.0;
  int record_every = 1;
  InitialKind initial = InitialKind::random;
  std::optional<std::uint64_t> seed;
  std::string initial_path;
  std::string out_dir;
  int snapshot_every = 0;  // 0 = no intermediate snapshots
  int levels = 4;
  int reference_level = 5;
  std::uint64_t samples = 100000;

  /// Throws UsageError naming the offending key.
  void validate() const;
  Grid grid() const { return Grid(dim, n, length); }

  /// Sets one key from its textual value.
  void set(std::string_view key, std::string_view value);
  /// Canonical text form; parse(serialize()) reproduces every field.
  std::string serialize() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Applies the lines of a config file on top of `base`.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// ex-compare, ex-random, converge-default.
RunConfig preset(std::string_view name);
std::vector<std::string> preset_names();

/// Builds U0 from the selector (reads the snapshot file when requested).
MatrixField make_initial_field(const RunConfig& c);

}  // namespace macflow
