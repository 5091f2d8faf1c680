#include "macflow/macflow.h"

#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "macflow/checks.hpp"
#include "macflow/config.hpp"
#include "macflow/io.hpp"
#include "macflow/runner.hpp"

using namespace macflow;

struct mac_config {
  RunConfig config;
};

struct mac_field {
  MatrixField field;
};

struct mac_timeline {
  Timeline timeline;
};

struct mac_run_result {
  mac_timeline timeline;
  MatrixField final_field;
  std::vector<std::string> issues;
  std::vector<std::string> files;
};

struct mac_compare_result {
  mac_timeline strang;
  mac_timeline threshold;
  std::vector<double> times;
  std::vector<double> difference;
  std::vector<std::string> issues;
  std::vector<std::string> files;
};

struct mac_order_table {
  std::vector<ConvergenceRow> rows;
};

struct mac_check_report {
  std::vector<CheckResult> results;
};

namespace {

thread_local std::string last_error;

mac_status fail(mac_status s, const char* what) {
  last_error = what;
  return s;
}

template <class F>
mac_status guarded(F&& f) noexcept {
  try {
    f();
    return MAC_OK;
  } catch (const UsageError& e) {
    return fail(MAC_ERR_USAGE, e.what());
  } catch (const NumericalError& e) {
    return fail(MAC_ERR_NUMERICAL, e.what());
  } catch (const IoError& e) {
    return fail(MAC_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MAC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MAC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MAC_ERR_INTERNAL, "unknown exception");
  }
}

template <class T>
const T& deref(const T* p, const char* what) {
  if (p == nullptr) throw UsageError(std::string(what) + " is NULL");
  return *p;
}

template <class T>
T& deref(T* p, const char* what) {
  if (p == nullptr) throw UsageError(std::string(what) + " is NULL");
  return *p;
}

template <class T>
void require_out(T* out) {
  if (out == nullptr) throw UsageError("output pointer is NULL");
}

const char* require_string(const char* s, const char* what) {
  if (s == nullptr) throw UsageError(std::string(what) + " is NULL");
  return s;
}

template <class V>
void require_index(const V& v, size_t i) {
  if (i >= v.size()) {
    throw UsageError("index " + std::to_string(i) + " out of range (size " + std::to_string(v.size()) + ")");
  }
}

mac_record to_c(const DiagnosticsRecord& r) {
  return {r.t, r.energy, r.modified_energy, r.max_frobenius, r.max_abs_det, r.h1_seminorm_sq};
}

}  // namespace

extern "C" {

const char* mac_last_error(void) { return last_error.c_str(); }

const char* mac_status_name(mac_status s) {
  switch (s) {
    case MAC_OK: return "ok";
    case MAC_ERR_USAGE: return "usage error";
    case MAC_ERR_NUMERICAL: return "numerical failure";
    case MAC_ERR_IO: return "i/o error";
    case MAC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* mac_version(void) { return "1.0.0"; }

mac_status mac_config_new(mac_config** out) {
  return guarded([&] {
    require_out(out);
    *out = new mac_config{};
  });
}

mac_status mac_config_preset(const char* name, mac_config** out) {
  return guarded([&] {
    require_out(out);
    *out = new mac_config{preset(require_string(name, "preset name"))};
  });
}

mac_status mac_config_load(mac_config* cfg, const char* path) {
  return guarded([&] {
    mac_config& c = deref(cfg, "config");
    c.config = load_config(require_string(path, "path"), c.config);
  });
}

mac_status mac_config_parse(mac_config* cfg, const char* text) {
  return guarded([&] {
    mac_config& c = deref(cfg, "config");
    c.config = parse_config(require_string(text, "text"), c.config);
  });
}

mac_status mac_config_set(mac_config* cfg, const char* key, const char* value) {
  return guarded([&] { deref(cfg, "config").config.set(require_string(key, "key"), require_string(value, "value")); });
}

mac_status mac_config_validate(const mac_config* cfg) {
  return guarded([&] { deref(cfg, "config").config.validate(); });
}

mac_status mac_config_serialize(const mac_config* cfg, char* buf, size_t cap, size_t* needed) {
  return guarded([&] {
    const std::string s = deref(cfg, "config").config.serialize();
    if (needed != nullptr) *needed = s.size() + 1;
    if (buf != nullptr && cap >= s.size() + 1) std::memcpy(buf, s.c_str(), s.size() + 1);
    else if (buf != nullptr) throw UsageError("buffer too small for serialized config");
  });
}

void mac_config_free(mac_config* cfg) { delete cfg; }

mac_status mac_field_initial(const mac_config* cfg, mac_field** out) {
  return guarded([&] {
    require_out(out);
    *out = new mac_field{make_initial_field(deref(cfg, "config").config)};
  });
}

mac_status mac_field_from_data(int d, int n, double length, int m, const double* data, size_t count,
                               mac_field** out) {
  return guarded([&] {
    require_out(out);
    if (data == nullptr) throw UsageError("data is NULL");
    if (m < 1) throw UsageError("m must be >= 1");
    const Grid grid(d, n, length);
    if (count != grid.node_count() * static_cast<size_t>(m) * static_cast<size_t>(m)) {
      throw UsageError("data length does not match n^d * m^2");
    }
    *out = new mac_field{MatrixField(grid, m, std::vector<double>(data, data + count))};
  });
}

mac_status mac_field_info(const mac_field* u, int* d, int* n, double* length, int* m, size_t* count) {
  return guarded([&] {
    const MatrixField& f = deref(u, "field").field;
    if (d) *d = f.grid().dim();
    if (n) *n = f.grid().n();
    if (length) *length = f.grid().length();
    if (m) *m = f.matrix_size();
    if (count) *count = f.data().size();
  });
}

mac_status mac_field_data(const mac_field* u, const double** data, size_t* count) {
  return guarded([&] {
    require_out(data);
    const MatrixField& f = deref(u, "field").field;
    *data = f.data().data();
    if (count) *count = f.data().size();
  });
}

mac_status mac_field_read_snapshot(const char* path, mac_field** out, double* t) {
  return guarded([&] {
    require_out(out);
    Snapshot s = read_snapshot(require_string(path, "path"));
    if (t) *t = s.t;
    *out = new mac_field{std::move(s.field)};
  });
}

mac_status mac_field_write_snapshot(const mac_field* u, double t, const char* path) {
  return guarded([&] { write_snapshot(deref(u, "field").field, t, require_string(path, "path")); });
}

mac_status mac_field_step(const mac_field* u, const mac_config* cfg, mac_field** out) {
  return guarded([&] {
    require_out(out);
    const MatrixField& f = deref(u, "field").field;
    const SchemeParams& p = deref(cfg, "config").config.scheme;
    p.validate();
    const SpectralPlan plan(f.grid());
    *out = new mac_field{advance(f, p, plan)};
  });
}

mac_status mac_field_diagnose(const mac_field* u, const mac_config* cfg, double t, mac_record* out) {
  return guarded([&] {
    require_out(out);
    const MatrixField& f = deref(u, "field").field;
    const SchemeParams& p = deref(cfg, "config").config.scheme;
    p.validate();
    const SpectralPlan plan(f.grid());
    *out = to_c(diagnose(f, t, p, plan));
  });
}

mac_status mac_field_l2_difference(const mac_field* a, const mac_field* b, double* out) {
  return guarded([&] {
    require_out(out);
    *out = l2_difference(deref(a, "field a").field, deref(b, "field b").field);
  });
}

void mac_field_free(mac_field* u) { delete u; }

mac_status mac_timeline_size(const mac_timeline* tl, size_t* out) {
  return guarded([&] {
    require_out(out);
    *out = deref(tl, "timeline").timeline.records.size();
  });
}

mac_status mac_timeline_record(const mac_timeline* tl, size_t i, mac_record* out) {
  return guarded([&] {
    require_out(out);
    const auto& rs = deref(tl, "timeline").timeline.records;
    require_index(rs, i);
    *out = to_c(rs[i]);
  });
}

mac_status mac_timeline_steps(const mac_timeline* tl, size_t* steps, size_t* near_singular_nodes) {
  return guarded([&] {
    const TimelineMetadata& m = deref(tl, "timeline").timeline.meta;
    if (steps) *steps = m.steps;
    if (near_singular_nodes) *near_singular_nodes = m.near_singular_nodes;
  });
}

mac_status mac_timeline_write_csv(const mac_timeline* tl, const char* path) {
  return guarded([&] { write_timeline_csv(deref(tl, "timeline").timeline.records, require_string(path, "path")); });
}

mac_status mac_run(const mac_config* cfg, mac_run_result** out) {
  return guarded([&] {
    require_out(out);
    RunReport r = execute_run(deref(cfg, "config").config);
    *out = new mac_run_result{mac_timeline{std::move(r.result.timeline)}, std::move(r.result.final_field),
                              std::move(r.issues), std::move(r.files)};
  });
}

mac_status mac_run_result_timeline(const mac_run_result* r, const mac_timeline** out) {
  return guarded([&] {
    require_out(out);
    *out = &deref(r, "run result").timeline;
  });
}

mac_status mac_run_result_final_field(const mac_run_result* r, mac_field** out) {
  return guarded([&] {
    require_out(out);
    *out = new mac_field{deref(r, "run result").final_field};
  });
}

mac_status mac_run_result_issue_count(const mac_run_result* r, size_t* out) {
  return guarded([&] {
    require_out(out);
    *out = deref(r, "run result").issues.size();
  });
}

mac_status mac_run_result_issue(const mac_run_result* r, size_t i, const char** out) {
  return guarded([&] {
    require_out(out);
    const auto& v = deref(r, "run result").issues;
    require_index(v, i);
    *out = v[i].c_str();
  });
}

mac_status mac_run_result_file_count(const mac_run_result* r, size_t* out) {
  return guarded([&] {
    require_out(out);
    *out = deref(r, "run result").files.size();
  });
}

mac_status mac_run_result_file(const mac_run_result* r, size_t i, const char** out) {
  return guarded([&] {
    require_out(out);
    const auto& v = deref(r, "run result").files;
    require_index(v, i);
    *out = v[i].c_str();
  });
}

void mac_run_result_free(mac_run_result* r) { delete r; }

mac_status mac_compare(const mac_config* cfg, mac_compare_result** out) {
  return guarded([&] {
    require_out(out);
    CompareReport r = execute_compare(deref(cfg, "config").config);
    Comparison& c = r.comparison;
    *out = new mac_compare_result{mac_timeline{std::move(c.strang)},
                                  mac_timeline{std::move(c.threshold)},
                                  std::move(c.times),
                                  std::move(c.difference),
                                  std::move(r.issues),
                                  std::move(r.files)};
  });
}

mac_status mac_compare_result_timeline(const mac_compare_result* r, int which, const mac_timeline** out) {
  return guarded([&] {
    require_out(out);
    const mac_compare_result& c = deref(r, "compare result");
    if (which != 0 && which != 1) throw UsageError("which must be 0 (strang) or 1 (threshold)");
    *out = which == 0 ? &c.strang : &c.threshold;
  });
}

mac_status mac_compare_result_size(const mac_compare_result* r, size_t* out) {
  return guarded([&] {
    require_out(out);
    *out = deref(r, "compare result").times.size();
  });
}

mac_status mac_compare_result_difference(const mac_compare_result* r, size_t i, double* t, double* diff) {
  return guarded([&] {
    const mac_compare_result& c = deref(r, "compare result");
    require_index(c.times, i);
    if (t) *t = c.times[i];
    if (diff) *diff = c.difference[i];
  });
}

mac_status mac_compare_result_issue_count(const mac_compare_result* r, size_t* out) {
  return guarded([&] {
    require_out(out);
    *out = deref(r, "compare result").issues.size();
  });
}

mac_status mac_compare_result_issue(const mac_compare_result* r, size_t i, const char** out) {
  return guarded([&] {
    require_out(out);
    const auto& v = deref(r, "compare result").issues;
    require_index(v, i);
    *out = v[i].c_str();
  });
}

mac_status mac_compare_result_file_count(const mac_compare_result* r, size_t* out) {
  return guarded([&] {
    require_out(out);
    *out = deref(r, "compare result").files.size();
  });
}

mac_status mac_compare_result_file(const mac_compare_result* r, size_t i, const char** out) {
  return guarded([&] {
    require_out(out);
    const auto& v = deref(r, "compare result").files;
    require_index(v, i);
    *out = v[i].c_str();
  });
}

void mac_compare_result_free(mac_compare_result* r) { delete r; }

mac_status mac_converge(const mac_config* cfg, mac_order_table** out) {
  return guarded([&] {
    require_out(out);
    *out = new mac_order_table{execute_converge(deref(cfg, "config").config).rows};
  });
}

mac_status mac_order_table_size(const mac_order_table* t, size_t* out) {
  return guarded([&] {
    require_out(out);
    *out = deref(t, "order table").rows.size();
  });
}

mac_status mac_order_table_row(const mac_order_table* t, size_t i, double* tau, double* error, double* order) {
  return guarded([&] {
    const auto& rows = deref(t, "order table").rows;
    require_index(rows, i);
    if (tau) *tau = rows[i].tau;
    if (error) *error = rows[i].error;
    if (order) *order = rows[i].order;
  });
}

void mac_order_table_free(mac_order_table* t) { delete t; }

mac_status mac_check(uint64_t samples, uint64_t seed, mac_check_report** out) {
  return guarded([&] {
    require_out(out);
    if (samples == 0) throw UsageError("samples must be >= 1");
    *out = new mac_check_report{run_all_checks(samples, seed)};
  });
}

mac_status mac_check_report_size(const mac_check_report* r, size_t* out) {
  return guarded([&] {
    require_out(out);
    *out = deref(r, "check report").results.size();
  });
}

mac_status mac_check_report_entry(const mac_check_report* r, size_t i, mac_check_entry* out) {
  return guarded([&] {
    require_out(out);
    const auto& v = deref(r, "check report").results;
    require_index(v, i);
    const CheckResult& c = v[i];
    *out = {c.name.c_str(), c.statement.c_str(), c.samples, c.violations, c.slack, c.worst_margin,
            c.first_violation.c_str()};
  });
}

void mac_check_report_free(mac_check_report* r) { delete r; }

}  // extern "C"
