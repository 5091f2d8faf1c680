#pragma once

// File formats: timeline CSV, MACFIELD v1 snapshots, PGM P5 images, and a
// few auxiliary CSV tables. Every failure is an IoError naming the path.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "macflow/field.hpp"
#include "macflow/sim.hpp"

namespace macflow {

inline constexpr std::string_view kTimelineHeader =
    "t,energy,modified_energy,max_frobenius,max_abs_det,h1_seminorm_sq\n";

/// Shortest-safe round-trip text for a double ("%.17g").
std::string format_double(double v);
/// Strict parse of a whole token; throws UsageError on junk.
double parse_double(std::string_view s);

std::string format_timeline_csv(const std::vector<DiagnosticsRecord>& records);
std::vector<DiagnosticsRecord> parse_timeline_csv(std::string_view text);
void write_timeline_csv(const std::vector<DiagnosticsRecord>& records, const std::filesystem::path& path);
std::vector<DiagnosticsRecord> read_timeline_csv(const std::filesystem::path& path);

/// "t,l2_difference" series of compare_methods.
void write_difference_csv(const std::vector<double>& times, const std::vector<double>& difference,
                          const std::filesystem::path& path);
/// "tau,error,order"; the NaN order of the last row is written as "nan".
void write_order_table_csv(const std::vector<ConvergenceRow>& rows, const std::filesystem::path& path);

struct Snapshot {
  MatrixField field;
  double t = 0.0;
};

/// "MACFIELD v1 d=<d> n=<n> m=<m> L=<L> t=<t>\n" then little-endian doubles,
/// node-major, row-major within each block.
std::string encode_snapshot(const MatrixField& u, double t);
Snapshot decode_snapshot(std::string_view bytes);
void write_snapshot(const MatrixField& u, double t, const std::filesystem::path& path);
Snapshot read_snapshot(const std::filesystem::path& path);

std::string encode_pgm(const GrayImage& image);
GrayImage decode_pgm(std::string_view bytes);
void write_pgm(const GrayImage& image, const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, std::string_view contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace macflow
