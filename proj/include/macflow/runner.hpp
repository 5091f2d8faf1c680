#pragma once

// Config-driven experiments with their on-disk outputs. Nothing is written
// when RunConfig::out_dir is empty.
//
// run      timeline.csv, metadata.txt, final.macfield, det_final.pgm (d = 2),
//          and snap_<step>.macfield / det_<step>.pgm every snapshot_every steps
// compare  strang.csv, threshold.csv, difference.csv, metadata.txt, and
//          {strang,threshold}_<step>.macfield / .pgm every snapshot_every steps
// converge convergence.csv, metadata.txt

#include <string>
#include <vector>

#include "macflow/config.hpp"
#include "macflow/sim.hpp"

namespace macflow {

struct RunReport {
  RunResult result;
  /// audit_timeline findings; nonempty means an invariant was violated.
  std::vector<std::string> issues;
  std::vector<std::string> files;
};

struct CompareReport {
  Comparison comparison;
  std::vector<std::string> issues;
  std::vector<std::string> files;
};

struct ConvergeReport {
  std::vector<ConvergenceRow> rows;
  std::vector<std::string> files;
};

RunReport execute_run(const RunConfig& c);
/// Runs both schemes; c.scheme.scheme is ignored, c.scheme.mode must be rescaled.
CompareReport execute_compare(const RunConfig& c);
/// Strang ladder tau * 2^-j, j < levels, against reference_level.
ConvergeReport execute_converge(const RunConfig& c);

/// The resolved config followed by run facts, as written to metadata.txt.
std::string describe_run(const RunConfig& c, const TimelineMetadata& meta);

}  // namespace macflow
