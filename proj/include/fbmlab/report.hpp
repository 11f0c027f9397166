#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace fbmlab::report {

enum class Format { Csv, Json };

Format parse_format(const std::string& s);
std::string extension(Format f);

/// Column-named table of already formatted cells. Numbers go through
/// `cell(double)` so every writer emits the same 17-digit text.
class Table {
 public:
  Table() = default;
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }

  /// Throws DomainError when the row width does not match the header.
  void add_row(std::vector<std::string> row);
  /// Index of a column; throws DomainError if absent.
  std::size_t column(const std::string& name) const;

  void write_csv(std::ostream& os) const;
  /// Array of objects; numeric-looking cells become JSON numbers.
  void write_json(std::ostream& os) const;
  static Table read_csv(std::istream& is);
  static Table read_json(std::istream& is);

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

std::string cell(double x);
std::string cell(std::size_t x);
std::string cell(bool b);

/// Line plot recipe stored in the manifest so `report` can redraw it from the tables alone.
struct PlotSpec {
  std::string table;
  std::string file;  ///< written as plots/<file>.svg
  std::string title;
  std::string x;
  std::vector<std::string> y;
  std::string group;  ///< optional column splitting rows into series
  bool log_x = false;
  bool log_y = false;
};

nlohmann::json to_json(const PlotSpec& p);
PlotSpec plot_from_json(const nlohmann::json& j);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Standalone SVG line chart. Non-finite points, and non-positive ones on log axes, are skipped.
std::string render_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series, bool log_x, bool log_y);

std::vector<Series> series_from(const Table& t, const PlotSpec& p);

/// Output directory of one CLI run: tables, plots/ and manifest.json.
class RunDirectory {
 public:
  RunDirectory(std::filesystem::path root, Format format);

  const std::filesystem::path& root() const noexcept { return root_; }
  Format format() const noexcept { return format_; }

  /// Writes <name>.csv or <name>.json and records it in the manifest.
  void write_table(const std::string& name, const Table& t);
  void add_plot(PlotSpec p);
  nlohmann::json& manifest() noexcept { return manifest_; }
  /// Writes manifest.json, then draws the plots and summary.md from the written tables.
  void finish();

 private:
  std::filesystem::path root_;
  Format format_;
  nlohmann::json manifest_;
};

Table load_table(const std::filesystem::path& dir, const std::string& name, Format format);

/// Redraws plots/*.svg and summary.md from manifest.json and the stored tables.
void regenerate(const std::filesystem::path& run_dir);

}  // namespace fbmlab::report
