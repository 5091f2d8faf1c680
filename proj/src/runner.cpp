#include "macflow/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "macflow/io.hpp"

namespace macflow {

namespace fs = std::filesystem;

namespace {

class OutputDir {
 public:
  explicit OutputDir(const std::string& dir) : dir_(dir) {
    if (dir_.empty()) return;
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  }

  bool enabled() const noexcept { return !dir_.empty(); }

  fs::path path(const std::string& name) {
    const fs::path p = dir_ / name;
    files_.push_back(p.string());
    return p;
  }

  std::vector<std::string> take_files() { return std::move(files_); }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

std::string step_tag(std::size_t step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu", step);
  return buf;
}

void write_field_outputs(OutputDir& out, const std::string& stem, const MatrixField& u, double t) {
  write_snapshot(u, t, out.path(stem + ".macfield"));
  if (u.grid().dim() == 2) write_pgm(det_sign_image(u), out.path("det_" + stem + ".pgm"));
}

bool wants_snapshot(const RunConfig& c, std::size_t step) {
  return c.snapshot_every > 0 && step % static_cast<std::size_t>(c.snapshot_every) == 0;
}

bool admissible(const MatrixField& u0) {
  return max_frobenius(u0) <= std::sqrt(static_cast<double>(u0.matrix_size())) + kBoundSlack;
}

void stamp(TimelineMetadata& meta, const RunConfig& c) { meta.seed = c.seed.value_or(0); }

}  // namespace

std::string describe_run(const RunConfig& c, const TimelineMetadata& meta) {
  std::string s = "# resolved configuration\n" + c.serialize();
  s += "# run facts\n";
  s += "scheme_run = " + std::string(to_string(meta.params.scheme)) + "\n";
  s += "steps = " + std::to_string(meta.steps) + "\n";
  s += "near_singular_nodes = " + std::to_string(meta.near_singular_nodes) + "\n";
  s += "wall_seconds = " + format_double(meta.wall_seconds) + "\n";
  if (meta.params.mode == Mode::rescaled) {
    s += "modified_energy_step = " + format_double(meta.params.flow_time()) + "  # tau / eps^2\n";
    s += "modified_energy_eps = " + format_double(meta.params.eps) + "  # run eps; value divided by eps^2\n";
  } else {
    s += "modified_energy_step = " + format_double(meta.params.tau) + "\n";
    s += "modified_energy_eps = " + format_double(meta.params.eps) + "\n";
  }
  return s;
}

RunReport execute_run(const RunConfig& c) {
  c.validate();
  const MatrixField u0 = make_initial_field(c);
  const SpectralPlan plan(u0.grid());
  OutputDir out(c.out_dir);

  StepObserver observer;
  if (out.enabled() && c.snapshot_every > 0) {
    observer = [&](std::size_t step, double t, const MatrixField& u) {
      if (wants_snapshot(c, step)) write_field_outputs(out, "snap_" + step_tag(step), u, t);
    };
  }
  RunReport report{run(u0, c.scheme, c.t_max, c.record_every, plan, observer), {}, {}};
  Timeline& tl = report.result.timeline;
  stamp(tl.meta, c);
  report.issues = audit_timeline(tl, admissible(u0), true);

  if (out.enabled()) {
    write_timeline_csv(tl.records, out.path("timeline.csv"));
    write_field_outputs(out, "final", report.result.final_field, tl.records.back().t);
    write_text_file(out.path("metadata.txt"), describe_run(c, tl.meta));
  }
  report.files = out.take_files();
  return report;
}

CompareReport execute_compare(const RunConfig& c) {
  RunConfig rc = c;
  rc.scheme.scheme = Scheme::strang;
  rc.validate();
  if (rc.scheme.mode != Mode::rescaled) throw UsageError("compare requires mode = rescaled");
  const MatrixField u0 = make_initial_field(rc);
  const SpectralPlan plan(u0.grid());
  OutputDir out(c.out_dir);

  PairObserver observer;
  if (out.enabled() && c.snapshot_every > 0) {
    observer = [&](std::size_t step, double t, const MatrixField& us, const MatrixField& ut) {
      if (!wants_snapshot(c, step)) return;
      write_field_outputs(out, "strang_" + step_tag(step), us, t);
      write_field_outputs(out, "threshold_" + step_tag(step), ut, t);
    };
  }
  CompareReport report{compare_methods(u0, rc.scheme, rc.t_max, rc.record_every, plan, observer), {}, {}};
  Comparison& cmp = report.comparison;
  stamp(cmp.strang.meta, rc);
  stamp(cmp.threshold.meta, rc);
  const bool adm = admissible(u0);
  for (const auto& [label, tl] : {std::pair<const char*, const Timeline*>{"strang", &cmp.strang},
                                  std::pair<const char*, const Timeline*>{"threshold", &cmp.threshold}}) {
    for (std::string& issue : audit_timeline(*tl, adm, true)) report.issues.push_back(std::string(label) + ": " + issue);
  }

  if (out.enabled()) {
    write_timeline_csv(cmp.strang.records, out.path("strang.csv"));
    write_timeline_csv(cmp.threshold.records, out.path("threshold.csv"));
    write_difference_csv(cmp.times, cmp.difference, out.path("difference.csv"));
    std::string meta = describe_run(rc, cmp.strang.meta);
    meta += "threshold_near_singular_nodes = " + std::to_string(cmp.threshold.meta.near_singular_nodes) + "\n";
    write_text_file(out.path("metadata.txt"), meta);
  }
  report.files = out.take_files();
  return report;
}

ConvergeReport execute_converge(const RunConfig& c) {
  RunConfig rc = c;
  rc.scheme.scheme = Scheme::strang;
  rc.validate();
  const MatrixField u0 = make_initial_field(rc);
  const SpectralPlan plan(u0.grid());
  OutputDir out(c.out_dir);
  ConvergeReport report{convergence_study(u0, rc.scheme, rc.t_max, rc.levels, plan, rc.reference_level), {}};
  if (out.enabled()) {
    write_order_table_csv(report.rows, out.path("convergence.csv"));
    TimelineMetadata meta;
    meta.params = rc.scheme;
    meta.seed = rc.seed.value_or(0);
    write_text_file(out.path("metadata.txt"), describe_run(rc, meta));
  }
  report.files = out.take_files();
  return report;
}

}  // namespace macflow
