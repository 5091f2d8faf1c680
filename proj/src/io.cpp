#include "macflow/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace macflow {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    throw UsageError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
  return s;
}

std::string format_timeline_csv(const std::vector<DiagnosticsRecord>& records) {
  std::string out(kTimelineHeader);
  for (const DiagnosticsRecord& r : records) {
    for (double v : {r.t, r.energy, r.modified_energy, r.max_frobenius, r.max_abs_det}) {
      out += format_double(v);
      out += ',';
    }
    out += format_double(r.h1_seminorm_sq);
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

}  // namespace

std::vector<DiagnosticsRecord> parse_timeline_csv(std::string_view text) {
  if (!text.starts_with(kTimelineHeader)) throw UsageError("timeline CSV: missing or wrong header");
  text.remove_prefix(kTimelineHeader.size());
  std::vector<DiagnosticsRecord> records;
  std::size_t line_no = 1;
  while (!text.empty()) {
    ++line_no;
    const std::size_t eol = text.find('\n');
    if (eol == std::string_view::npos) throw UsageError("timeline CSV: line " + std::to_string(line_no) + " lacks LF");
    const auto fields = split(text.substr(0, eol), ',');
    text.remove_prefix(eol + 1);
    if (fields.size() != 6) {
      throw UsageError("timeline CSV: line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                       " fields, expected 6");
    }
    records.push_back({parse_double(fields[0]), parse_double(fields[1]), parse_double(fields[2]),
                       parse_double(fields[3]), parse_double(fields[4]), parse_double(fields[5])});
  }
  return records;
}

void write_timeline_csv(const std::vector<DiagnosticsRecord>& records, const std::filesystem::path& path) {
  write_text_file(path, format_timeline_csv(records));
}

std::vector<DiagnosticsRecord> read_timeline_csv(const std::filesystem::path& path) {
  try {
    return parse_timeline_csv(read_text_file(path));
  } catch (const UsageError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_difference_csv(const std::vector<double>& times, const std::vector<double>& difference,
                          const std::filesystem::path& path) {
  if (times.size() != difference.size()) throw UsageError("write_difference_csv: length mismatch");
  std::string out = "t,l2_difference\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    out += format_double(times[i]) + ',' + format_double(difference[i]) + '\n';
  }
  write_text_file(path, out);
}

void write_order_table_csv(const std::vector<ConvergenceRow>& rows, const std::filesystem::path& path) {
  std::string out = "tau,error,order\n";
  for (const ConvergenceRow& r : rows) {
    out += format_double(r.tau) + ',' + format_double(r.error) + ',' + format_double(r.order) + '\n';
  }
  write_text_file(path, out);
}

namespace {

void put_le(std::string& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>(bits & 0xFFu));
    bits >>= 8;
  }
}

double get_le(const char* p) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | static_cast<unsigned char>(p[i]);
  return std::bit_cast<double>(bits);
}

/// Value of "key=" inside a space-separated header.
std::string_view header_value(const std::vector<std::string_view>& tokens, std::string_view key) {
  for (std::string_view tok : tokens) {
    if (tok.size() > key.size() && tok.starts_with(key) && tok[key.size()] == '=') {
      return tok.substr(key.size() + 1);
    }
  }
  throw UsageError("MACFIELD header lacks '" + std::string(key) + "'");
}

int parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw UsageError("not an integer: '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::string encode_snapshot(const MatrixField& u, double t) {
  const Grid& g = u.grid();
  std::string out = "MACFIELD v1 d=" + std::to_string(g.dim()) + " n=" + std::to_string(g.n()) +
                    " m=" + std::to_string(u.matrix_size()) + " L=" + format_double(g.length()) +
                    " t=" + format_double(t) + "\n";
  const auto data = u.data();
  out.reserve(out.size() + data.size() * 8);
  for (double v : data) put_le(out, v);
  return out;
}

Snapshot decode_snapshot(std::string_view bytes) {
  const std::size_t eol = bytes.find('\n');
  if (eol == std::string_view::npos) throw UsageError("MACFIELD: missing header line");
  const auto tokens = split(bytes.substr(0, eol), ' ');
  if (tokens.size() < 2 || tokens[0] != "MACFIELD" || tokens[1] != "v1") {
    throw UsageError("MACFIELD: not a MACFIELD v1 file");
  }
  const Grid grid(parse_int(header_value(tokens, "d")), parse_int(header_value(tokens, "n")),
                  parse_double(header_value(tokens, "L")));
  const int m = parse_int(header_value(tokens, "m"));
  if (m < 1) throw UsageError("MACFIELD: m must be >= 1");
  const double t = parse_double(header_value(tokens, "t"));
  const std::size_t count = grid.node_count() * static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
  const std::string_view payload = bytes.substr(eol + 1);
  if (payload.size() != count * 8) {
    throw UsageError("MACFIELD: payload has " + std::to_string(payload.size()) + " bytes, expected " +
                     std::to_string(count * 8));
  }
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = get_le(payload.data() + 8 * i);
  return {MatrixField(grid, m, std::move(values)), t};
}

void write_snapshot(const MatrixField& u, double t, const std::filesystem::path& path) {
  write_text_file(path, encode_snapshot(u, t));
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  try {
    return decode_snapshot(read_text_file(path));
  } catch (const UsageError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::string encode_pgm(const GrayImage& image) {
  std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.pixels.data()), image.pixels.size());
  return out;
}

GrayImage decode_pgm(std::string_view bytes) {
  std::size_t pos = 0;
  auto next_token = [&]() {
    while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    return bytes.substr(start, pos - start);
  };
  if (next_token() != "P5") throw UsageError("PGM: not a P5 file");
  GrayImage img;
  img.width = parse_int(next_token());
  img.height = parse_int(next_token());
  if (parse_int(next_token()) != 255) throw UsageError("PGM: maxval must be 255");
  ++pos;
  const auto count = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  if (img.width < 0 || img.height < 0 || bytes.size() - std::min(pos, bytes.size()) != count) {
    throw UsageError("PGM: pixel payload size mismatch");
  }
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end());
  return img;
}

void write_pgm(const GrayImage& image, const std::filesystem::path& path) { write_text_file(path, encode_pgm(image)); }

}  // namespace macflow
