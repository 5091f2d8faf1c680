#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <limits>

#include "macflow/config.hpp"
#include "macflow/initial.hpp"
#include "macflow/io.hpp"
#include "macflow/runner.hpp"
#include "oracles.hpp"

using namespace macflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "macflow_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(TimelineCsv, EmptyAndSingle) {
  EXPECT_EQ(format_timeline_csv({}), std::string(kTimelineHeader));
  const std::string one = format_timeline_csv({{0.0, 1.5, -2.25, 1.0, 0.5, 3.0}});
  EXPECT_EQ(one, std::string(kTimelineHeader) + "0,1.5,-2.25,1,0.5,3\n");
  EXPECT_EQ(std::count(one.begin(), one.end(), '\n'), 2);
  EXPECT_EQ(one.find('\r'), std::string::npos);
}

TEST(TimelineCsv, RoundTripIsBitwise) {
  CounterRng rng(5);
  std::vector<DiagnosticsRecord> rs;
  for (int i = 0; i < 200; ++i) {
    rs.push_back({i * 0.1, rng.uniform(-1e3, 1e3), std::ldexp(rng.uniform(), -40), rng.uniform(), 1.0 / 3.0,
                  std::numeric_limits<double>::denorm_min() * i});
  }
  const fs::path p = scratch("timeline.csv");
  write_timeline_csv(rs, p);
  EXPECT_EQ(read_timeline_csv(p), rs);
}

TEST(TimelineCsv, RejectsMalformed) {
  EXPECT_THROW(parse_timeline_csv("t,energy\n"), UsageError);
  EXPECT_THROW(parse_timeline_csv(std::string(kTimelineHeader) + "1,2,3\n"), UsageError);
  EXPECT_THROW(parse_timeline_csv(std::string(kTimelineHeader) + "1,2,3,4,5,x\n"), UsageError);
  EXPECT_THROW(parse_timeline_csv(std::string(kTimelineHeader) + "1,2,3,4,5,6"), UsageError);
  EXPECT_THROW(read_timeline_csv("/nonexistent/dir/file.csv"), IoError);
  EXPECT_THROW(write_timeline_csv({}, "/nonexistent/dir/file.csv"), IoError);
}

TEST(Snapshot, FormatAndRoundTrip) {
  const Grid g(2, 8);
  const MatrixField u = oracle::random_field(g, 2, 3, -1.0, 1.0);
  const std::string bytes = encode_snapshot(u, 0.25);
  const std::string header = "MACFIELD v1 d=2 n=8 m=2 L=6.2831853071795862 t=0.25\n";
  ASSERT_EQ(bytes.substr(0, header.size()), header);
  EXPECT_EQ(bytes.size(), header.size() + 64 * 4 * 8);
  // Little-endian: the low byte of the first double comes first.
  std::uint64_t bits = 0;
  std::memcpy(&bits, &u.data()[0], 8);
  EXPECT_EQ(static_cast<unsigned char>(bytes[header.size()]), bits & 0xFF);
  const fs::path p = scratch("u.macfield");
  write_snapshot(u, 0.25, p);
  const Snapshot s = read_snapshot(p);
  EXPECT_EQ(s.field, u);
  EXPECT_EQ(s.t, 0.25);
  EXPECT_THROW(decode_snapshot("MACFIELD v2 d=2 n=8 m=2 L=1 t=0\n"), UsageError);
  EXPECT_THROW(decode_snapshot(header + "short"), UsageError);
  EXPECT_THROW(read_snapshot("/nonexistent.macfield"), IoError);
}

TEST(Pgm, Format) {
  GrayImage img{3, 2, {0, 128, 255, 1, 2, 3}};
  const std::string bytes = encode_pgm(img);
  EXPECT_EQ(bytes.substr(0, 11), "P5\n3 2\n255\n");
  const GrayImage back = decode_pgm(bytes);
  EXPECT_EQ(back.width, 3);
  EXPECT_EQ(back.height, 2);
  EXPECT_EQ(back.pixels, img.pixels);
}

TEST(Config, ParseSetAndRoundTrip) {
  const RunConfig c = parse_config(
      "# comment\n"
      "n = 32   # trailing comment\n"
      "tau=0.05\n"
      "eps = 0.2\n"
      "mode = rescaled\n"
      "scheme = threshold\n"
      "ic = structured\n"
      "t_max = 1.5\n"
      "out = results dir\n"
      "\n");
  EXPECT_EQ(c.n, 32);
  EXPECT_EQ(c.scheme.tau, 0.05);
  EXPECT_EQ(c.scheme.mode, Mode::rescaled);
  EXPECT_EQ(c.scheme.scheme, Scheme::threshold);
  EXPECT_EQ(c.initial, InitialKind::structured);
  EXPECT_EQ(c.out_dir, "results dir");
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(parse_config(c.serialize()), c);
  for (const std::string& name : preset_names()) {
    const RunConfig p = preset(name);
    EXPECT_EQ(parse_config(p.serialize()), p) << name;
    EXPECT_EQ(parse_config(parse_config(p.serialize()).serialize()).serialize(), p.serialize());
  }
  RunConfig weird;
  weird.length = 0.1 + 0.2;
  weird.scheme.eps = 1.0 / 3.0;
  weird.seed = std::numeric_limits<std::uint64_t>::max();
  EXPECT_EQ(parse_config(weird.serialize()), weird);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("bogus = 1\n"), UsageError);
  EXPECT_THROW(parse_config("n 32\n"), UsageError);
  EXPECT_THROW(parse_config("n = 3x\n"), UsageError);
  EXPECT_THROW(parse_config("tau = fast\n"), UsageError);
  EXPECT_THROW(parse_config("mode = fast\n"), UsageError);
  RunConfig c;
  EXPECT_THROW(c.validate(), UsageError);  // random ic without a seed
  c.seed = 1;
  EXPECT_NO_THROW(c.validate());
  c.n = 24;
  EXPECT_THROW(c.validate(), UsageError);
  c.n = 32;
  c.scheme.scheme = Scheme::threshold;
  EXPECT_THROW(c.validate(), UsageError);
  c.scheme.mode = Mode::rescaled;
  EXPECT_NO_THROW(c.validate());
  c.initial = InitialKind::snapshot;
  EXPECT_THROW(c.validate(), UsageError);
  c.initial = InitialKind::rotation;
  c.m = 3;
  EXPECT_THROW(c.validate(), UsageError);
  EXPECT_THROW(preset("nope"), UsageError);
  EXPECT_THROW(load_config("/nonexistent.cfg"), IoError);
}

TEST(Config, Presets) {
  const RunConfig cmp = preset("ex-compare");
  EXPECT_EQ(cmp.n, 256);
  EXPECT_EQ(cmp.scheme.tau, 0.01);
  EXPECT_EQ(cmp.scheme.eps, 0.05);
  EXPECT_EQ(cmp.t_max, 2.0);
  EXPECT_EQ(cmp.scheme.mode, Mode::rescaled);
  EXPECT_EQ(cmp.initial, InitialKind::structured);
  const RunConfig rnd = preset("ex-random");
  EXPECT_EQ(rnd.scheme.tau, 0.1);
  EXPECT_EQ(rnd.scheme.eps, 0.1);
  EXPECT_EQ(rnd.t_max, 20.0);
  EXPECT_EQ(rnd.scheme.mode, Mode::physical);
  EXPECT_TRUE(rnd.seed.has_value());
  const RunConfig conv = preset("converge-default");
  EXPECT_EQ(conv.n, 32);
  EXPECT_EQ(conv.scheme.eps, 0.5);
  EXPECT_EQ(conv.t_max, 0.5);
  EXPECT_EQ(conv.levels, 4);
  EXPECT_EQ(conv.initial, InitialKind::rotation);
  for (const std::string& name : preset_names()) EXPECT_NO_THROW(preset(name).validate());
}

TEST(Config, SnapshotInitialData) {
  const Grid g(2, 16);
  const MatrixField u = ic_structured(g);
  const fs::path p = scratch("ic.macfield");
  write_snapshot(u, 0.0, p);
  RunConfig c;
  c.n = 16;
  c.initial = InitialKind::snapshot;
  c.initial_path = p.string();
  EXPECT_EQ(make_initial_field(c), u);
  c.n = 32;
  EXPECT_THROW(make_initial_field(c), UsageError);
}

TEST(Runner, RunWritesOutputsDeterministically) {
  const fs::path dir = scratch("run_out");
  fs::remove_all(dir);
  RunConfig c;
  c.n = 16;
  c.seed = 4;
  c.t_max = 0.5;
  c.scheme = {0.1, 0.1, Mode::physical, Scheme::strang};
  c.snapshot_every = 2;
  c.out_dir = dir.string();
  const RunReport r = execute_run(c);
  EXPECT_TRUE(r.issues.empty());
  for (const char* f : {"timeline.csv", "metadata.txt", "final.macfield", "det_final.pgm", "snap_000000.macfield",
                        "snap_000004.macfield", "det_snap_000002.pgm"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const std::string first = read_text_file(dir / "timeline.csv");
  execute_run(c);
  EXPECT_EQ(read_text_file(dir / "timeline.csv"), first);
  EXPECT_EQ(read_timeline_csv(dir / "timeline.csv"), r.result.timeline.records);
  const std::string meta = read_text_file(dir / "metadata.txt");
  EXPECT_NE(meta.find("seed = 4"), std::string::npos);
  EXPECT_EQ(read_snapshot(dir / "final.macfield").field, r.result.final_field);
}

TEST(Runner, ZeroHorizonWritesInitialDiagnosticsOnly) {
  const fs::path dir = scratch("run_zero");
  fs::remove_all(dir);
  RunConfig c;
  c.n = 16;
  c.seed = 4;
  c.t_max = 0.0;
  c.out_dir = dir.string();
  execute_run(c);
  EXPECT_EQ(read_timeline_csv(dir / "timeline.csv").size(), 1u);
}

TEST(Runner, CompareAndConverge) {
  const fs::path dir = scratch("cmp_out");
  fs::remove_all(dir);
  RunConfig c = preset("ex-compare");
  c.n = 128;
  c.t_max = 0.03;
  c.out_dir = dir.string();
  const CompareReport r = execute_compare(c);
  EXPECT_TRUE(r.issues.empty());
  EXPECT_TRUE(fs::exists(dir / "difference.csv"));
  EXPECT_TRUE(fs::exists(dir / "threshold.csv"));
  const std::string meta = read_text_file(dir / "metadata.txt");
  EXPECT_NE(meta.find("modified_energy_eps = 0.050000000000000003"), std::string::npos);

  RunConfig v = preset("converge-default");
  v.n = 8;
  v.levels = 2;
  v.reference_level = 3;
  const ConvergeReport cv = execute_converge(v);
  EXPECT_EQ(cv.rows.size(), 2u);
  EXPECT_TRUE(cv.files.empty());
}
