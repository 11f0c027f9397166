#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "fbmlab/errors.hpp"
#include "fbmlab/report.hpp"

namespace fbmlab::report {
namespace {

namespace fs = std::filesystem;

Table sample_table() {
  Table t({"x", "y", "label", "flag"});
  t.add_row({cell(1.0), cell(0.1), "a,b", cell(true)});
  t.add_row({cell(2.0), cell(1.0 / 3.0), "plain", cell(false)});
  t.add_row({cell(4.0), cell(std::nan("")), "quote\"d", cell(false)});
  return t;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fbmlab_report_" + name);
  fs::remove_all(p);
  return p;
}

TEST(Table, CsvRoundTrip) {
  const Table t = sample_table();
  std::stringstream ss;
  t.write_csv(ss);
  const std::string text = ss.str();
  EXPECT_EQ(text.substr(0, 15), "x,y,label,flag\n");
  const Table back = Table::read_csv(ss);
  EXPECT_EQ(back.columns(), t.columns());
  EXPECT_EQ(back.rows(), t.rows());
}

TEST(Table, JsonRoundTrip) {
  const Table t = sample_table();
  std::stringstream ss;
  t.write_json(ss);
  const Table back = Table::read_json(ss);
  EXPECT_EQ(back.rows()[1][1], cell(1.0 / 3.0));
  EXPECT_EQ(back.rows()[2][1], "nan");
  EXPECT_EQ(back.rows()[0][2], "a,b");
  EXPECT_EQ(back.rows()[0][3], "true");
}

TEST(Table, RejectsRaggedRows) {
  Table t({"a", "b"});
  EXPECT_THROW(t.add_row({"1"}), DomainError);
  EXPECT_THROW(t.column("c"), DomainError);
}

TEST(Cells, SeventeenDigits) {
  EXPECT_EQ(cell(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(cell(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Svg, RendersSeriesAndSkipsInvalidPoints) {
  const std::vector<Series> s{{"curve", {1, 2, 4}, {1, 0, 16}}};
  const std::string svg = render_svg("t", "x", "y", s, true, true);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  // The y = 0 point is dropped on a log axis, leaving two circles.
  std::size_t circles = 0;
  for (std::size_t pos = 0; (pos = svg.find("<circle", pos)) != std::string::npos; ++pos) ++circles;
  EXPECT_EQ(circles, 2u);
}

TEST(Svg, SeriesGrouping) {
  Table t({"n", "r", "p"});
  t.add_row({"8", "0", "0.5"});
  t.add_row({"8", "1", "0.1"});
  t.add_row({"16", "0", "0.5"});
  const auto s = series_from(t, PlotSpec{"t", "f", "title", "r", {"p"}, "n", false, false});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].x.size(), 2u);
  EXPECT_EQ(s[1].name, "p [n=16]");
}

TEST(RunDirectory, RegenerateRebuildsPlotsAndSummary) {
  for (auto fmt : {Format::Csv, Format::Json}) {
    const fs::path dir = fresh_dir(fmt == Format::Csv ? "csv" : "json");
    RunDirectory run(dir, fmt);
    run.write_table("data", sample_table());
    run.add_plot({"data", "data_plot", "data", "x", {"y"}, "", false, false});
    run.manifest()["seed"] = 42;
    run.finish();
    EXPECT_TRUE(fs::exists(dir / ("data" + extension(fmt))));
    EXPECT_TRUE(fs::exists(dir / "manifest.json"));
    ASSERT_TRUE(fs::exists(dir / "plots" / "data_plot.svg"));
    fs::remove(dir / "plots" / "data_plot.svg");
    fs::remove(dir / "summary.md");
    regenerate(dir);
    EXPECT_TRUE(fs::exists(dir / "plots" / "data_plot.svg"));
    std::ifstream md(dir / "summary.md");
    std::stringstream ss;
    ss << md.rdbuf();
    EXPECT_NE(ss.str().find("## data"), std::string::npos);
    fs::remove_all(dir);
  }
}

TEST(RunDirectory, RegenerateWithoutManifestFails) {
  const fs::path dir = fresh_dir("empty");
  fs::create_directories(dir);
  EXPECT_THROW(regenerate(dir), ConfigError);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace fbmlab::report
