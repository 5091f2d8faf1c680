// macflow: command-line front end over the C API.
//
// Exit codes: 0 success, 1 invariant violation, 2 usage or i/o error,
// 3 numerical failure.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "macflow/macflow.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct Failure {
  int code;
};

int exit_code_for(mac_status s) {
  switch (s) {
    case MAC_OK: return kExitOk;
    case MAC_ERR_USAGE:
    case MAC_ERR_IO: return kExitUsage;
    case MAC_ERR_NUMERICAL:
    case MAC_ERR_INTERNAL: return kExitNumerical;
  }
  return kExitNumerical;
}

void check(mac_status s) {
  if (s == MAC_OK) return;
  std::fprintf(stderr, "macflow: %s: %s\n", mac_status_name(s), mac_last_error());
  throw Failure{exit_code_for(s)};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const noexcept { Free(p); }
};
using ConfigPtr = std::unique_ptr<mac_config, Deleter<mac_config, mac_config_free>>;
using RunPtr = std::unique_ptr<mac_run_result, Deleter<mac_run_result, mac_run_result_free>>;
using ComparePtr = std::unique_ptr<mac_compare_result, Deleter<mac_compare_result, mac_compare_result_free>>;
using OrderPtr = std::unique_ptr<mac_order_table, Deleter<mac_order_table, mac_order_table_free>>;
using CheckPtr = std::unique_ptr<mac_check_report, Deleter<mac_check_report, mac_check_report_free>>;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Flags shared by run, compare and converge; unset flags leave the config alone.
struct ConfigFlags {
  std::string config_path;
  std::string preset;
  std::optional<int> n;
  std::optional<double> tau;
  std::optional<double> eps;
  std::optional<double> tmax;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> record_every;
  std::optional<int> snapshot_every;
  std::vector<std::string> sets;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "Config file (key = value lines)")->check(CLI::ExistingFile);
    app->add_option("--preset", preset, "Starting preset")
        ->check(CLI::IsMember({"ex-compare", "ex-random", "converge-default"}));
    app->add_option("--n", n, "Grid points per axis (power of two >= 8)");
    app->add_option("--tau", tau, "Time step");
    app->add_option("--eps", eps, "Interface parameter epsilon");
    app->add_option("--tmax", tmax, "Final time (T for converge)");
    app->add_option("--seed", seed, "Seed for random initial data");
    app->add_option("--out", out, "Output directory");
    app->add_option("--record-every", record_every, "Diagnostics cadence in steps");
    app->add_option("--snapshot-every", snapshot_every, "Snapshot cadence in steps (0 = final only)");
    app->add_option("--set", sets, "Any config key as key=value (repeatable)");
  }

  ConfigPtr resolve() const {
    mac_config* raw = nullptr;
    if (preset.empty()) check(mac_config_new(&raw));
    else check(mac_config_preset(preset.c_str(), &raw));
    ConfigPtr cfg(raw);
    if (!config_path.empty()) check(mac_config_load(cfg.get(), config_path.c_str()));
    auto set = [&](const char* key, const std::string& value) { check(mac_config_set(cfg.get(), key, value.c_str())); };
    if (n) set("n", std::to_string(*n));
    if (tau) set("tau", g17(*tau));
    if (eps) set("eps", g17(*eps));
    if (tmax) set("t_max", g17(*tmax));
    if (seed) set("seed", std::to_string(*seed));
    if (out) set("out", *out);
    if (record_every) set("record_every", std::to_string(*record_every));
    if (snapshot_every) set("snapshot_every", std::to_string(*snapshot_every));
    for (const std::string& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::fprintf(stderr, "macflow: --set expects key=value, got '%s'\n", kv.c_str());
        throw Failure{kExitUsage};
      }
      set(kv.substr(0, eq).c_str(), kv.substr(eq + 1));
    }
    check(mac_config_validate(cfg.get()));
    return cfg;
  }
};

void print_record(const char* label, const mac_record& r) {
  std::printf("%s t=%s energy=%s modified_energy=%s max_frobenius=%s max_abs_det=%s\n", label, g17(r.t).c_str(),
              g17(r.energy).c_str(), g17(r.modified_energy).c_str(), g17(r.max_frobenius).c_str(),
              g17(r.max_abs_det).c_str());
}

void print_timeline_ends(const char* label, const mac_timeline* tl) {
  size_t size = 0;
  size_t steps = 0;
  size_t near_singular = 0;
  check(mac_timeline_size(tl, &size));
  check(mac_timeline_steps(tl, &steps, &near_singular));
  mac_record first{};
  mac_record last{};
  check(mac_timeline_record(tl, 0, &first));
  check(mac_timeline_record(tl, size - 1, &last));
  std::printf("%s: %zu steps, %zu records, %zu near-singular projections\n", label, steps, size, near_singular);
  print_record("  initial", first);
  print_record("  final  ", last);
}

template <class R>
int report_issues_and_files(const R* r, mac_status (*issue_count)(const R*, size_t*),
                            mac_status (*issue)(const R*, size_t, const char**),
                            mac_status (*file_count)(const R*, size_t*),
                            mac_status (*file)(const R*, size_t, const char**)) {
  size_t nf = 0;
  check(file_count(r, &nf));
  for (size_t i = 0; i < nf; ++i) {
    const char* f = nullptr;
    check(file(r, i, &f));
    std::printf("wrote %s\n", f);
  }
  size_t ni = 0;
  check(issue_count(r, &ni));
  for (size_t i = 0; i < ni; ++i) {
    const char* s = nullptr;
    check(issue(r, i, &s));
    std::fprintf(stderr, "invariant violation: %s\n", s);
  }
  return ni == 0 ? kExitOk : kExitViolation;
}

int cmd_run(const ConfigFlags& flags) {
  ConfigPtr cfg = flags.resolve();
  mac_run_result* raw = nullptr;
  check(mac_run(cfg.get(), &raw));
  RunPtr r(raw);
  const mac_timeline* tl = nullptr;
  check(mac_run_result_timeline(r.get(), &tl));
  print_timeline_ends("run", tl);
  return report_issues_and_files(r.get(), mac_run_result_issue_count, mac_run_result_issue, mac_run_result_file_count,
                                 mac_run_result_file);
}

int cmd_compare(const ConfigFlags& flags) {
  ConfigPtr cfg = flags.resolve();
  mac_compare_result* raw = nullptr;
  check(mac_compare(cfg.get(), &raw));
  ComparePtr r(raw);
  for (int which = 0; which < 2; ++which) {
    const mac_timeline* tl = nullptr;
    check(mac_compare_result_timeline(r.get(), which, &tl));
    print_timeline_ends(which == 0 ? "strang" : "threshold", tl);
  }
  size_t size = 0;
  check(mac_compare_result_size(r.get(), &size));
  double peak = 0.0;
  double peak_t = 0.0;
  for (size_t i = 0; i < size; ++i) {
    double t = 0.0;
    double d = 0.0;
    check(mac_compare_result_difference(r.get(), i, &t, &d));
    if (d > peak) {
      peak = d;
      peak_t = t;
    }
  }
  std::printf("difference: peak %s at t=%s\n", g17(peak).c_str(), g17(peak_t).c_str());
  return report_issues_and_files(r.get(), mac_compare_result_issue_count, mac_compare_result_issue,
                                 mac_compare_result_file_count, mac_compare_result_file);
}

int cmd_converge(const ConfigFlags& flags, double order_min, double order_max) {
  ConfigPtr cfg = flags.resolve();
  mac_order_table* raw = nullptr;
  check(mac_converge(cfg.get(), &raw));
  OrderPtr table(raw);
  size_t rows = 0;
  check(mac_order_table_size(table.get(), &rows));
  std::printf("%-24s %-24s %s\n", "tau", "error", "order");
  bool in_band = true;
  for (size_t i = 0; i < rows; ++i) {
    double tau = 0.0;
    double err = 0.0;
    double order = 0.0;
    check(mac_order_table_row(table.get(), i, &tau, &err, &order));
    std::printf("%-24s %-24s %s\n", g17(tau).c_str(), g17(err).c_str(), std::isnan(order) ? "-" : g17(order).c_str());
    if (!std::isnan(order) && !(order >= order_min && order <= order_max)) in_band = false;
  }
  if (!in_band) {
    std::fprintf(stderr, "observed order outside [%s, %s]\n", g17(order_min).c_str(), g17(order_max).c_str());
    return kExitViolation;
  }
  return kExitOk;
}

int cmd_check(std::uint64_t samples, std::uint64_t seed) {
  mac_check_report* raw = nullptr;
  check(mac_check(samples, seed, &raw));
  CheckPtr report(raw);
  size_t n = 0;
  check(mac_check_report_size(report.get(), &n));
  bool ok = true;
  for (size_t i = 0; i < n; ++i) {
    mac_check_entry e{};
    check(mac_check_report_entry(report.get(), i, &e));
    if (e.violations == 0) {
      std::printf("PASS %-22s %" PRIu64 " samples, worst margin %s (slack %s)\n", e.name, e.samples,
                  g17(e.worst_margin).c_str(), g17(e.slack).c_str());
    } else {
      ok = false;
      std::printf("FAIL %-22s %" PRIu64 "/%" PRIu64 " violations of %s\n     first: %s\n", e.name, e.violations,
                  e.samples, e.statement, e.first_violation);
    }
  }
  return ok ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix-valued Allen-Cahn solver: Strang splitting with exact nonlinear flow"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mac_version()));

  ConfigFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Run one scheme and write its timeline");
  run_flags.attach(run);

  ConfigFlags compare_flags;
  CLI::App* compare = app.add_subcommand("compare", "Run Strang and thresholding side by side (rescaled mode)");
  compare_flags.attach(compare);

  ConfigFlags converge_flags;
  double order_min = 1.8;
  double order_max = 2.2;
  CLI::App* converge = app.add_subcommand("converge", "Temporal convergence study of the Strang scheme");
  converge_flags.attach(converge);
  converge->add_option("--order-min", order_min, "Lower bound of the accepted observed order")->capture_default_str();
  converge->add_option("--order-max", order_max, "Upper bound of the accepted observed order")->capture_default_str();

  std::uint64_t samples = 100000;
  std::uint64_t seed = 7;
  CLI::App* chk = app.add_subcommand("check", "Randomized inequality suites");
  chk->add_option("--samples", samples, "Samples per suite")->capture_default_str()->check(CLI::PositiveNumber);
  chk->add_option("--seed", seed, "Seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(run_flags);
    if (compare->parsed()) return cmd_compare(compare_flags);
    if (converge->parsed()) return cmd_converge(converge_flags, order_min, order_max);
    return cmd_check(samples, seed);
  } catch (const Failure& f) {
    return f.code;
  }
}
