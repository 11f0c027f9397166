#include "fbmlab/report.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "fbmlab/errors.hpp"
#include "fbmlab/sample_path.hpp"

namespace fbmlab::report {

namespace fs = std::filesystem;
using nlohmann::json;

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw ConfigError("unknown format '" + s + "' (expected csv or json)");
}

std::string extension(Format f) { return f == Format::Csv ? ".csv" : ".json"; }

std::string cell(double x) { return format_double(x); }
std::string cell(std::size_t x) { return std::to_string(x); }
std::string cell(bool b) { return b ? "true" : "false"; }

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns_.size())
    throw DomainError("table row has " + std::to_string(row.size()) + " cells, header has " +
                      std::to_string(columns_.size()));
  rows_.push_back(std::move(row));
}

std::size_t Table::column(const std::string& name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw DomainError("table has no column '" + name + "'");
  return static_cast<std::size_t>(it - columns_.begin());
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

bool parse_number(const std::string& s, double& v) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

void write_row(std::ostream& os, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(row[i]);
  os << '\n';
}

}  // namespace

void Table::write_csv(std::ostream& os) const {
  write_row(os, columns_);
  for (const auto& r : rows_) write_row(os, r);
}

void Table::write_json(std::ostream& os) const {
  json arr = json::array();
  for (const auto& r : rows_) {
    json obj = json::object();
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      double v = 0.0;
      if (r[i] == "true" || r[i] == "false")
        obj[columns_[i]] = r[i] == "true";
      else if (parse_number(r[i], v))
        obj[columns_[i]] = std::isfinite(v) ? json(v) : json(nullptr);
      else
        obj[columns_[i]] = r[i];
    }
    arr.push_back(std::move(obj));
  }
  json doc = {{"columns", columns_}, {"rows", arr}};
  os << doc.dump(2) << '\n';
}

Table Table::read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("empty CSV table");
  Table t(csv_split(line));
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    t.add_row(csv_split(line));
  }
  return t;
}

Table Table::read_json(std::istream& is) {
  const json doc = json::parse(is);
  Table t(doc.at("columns").get<std::vector<std::string>>());
  for (const auto& obj : doc.at("rows")) {
    std::vector<std::string> row;
    for (const auto& c : t.columns_) {
      const auto& v = obj.at(c);
      if (v.is_null())
        row.push_back("nan");
      else if (v.is_boolean())
        row.push_back(cell(v.get<bool>()));
      else if (v.is_number())
        row.push_back(cell(v.get<double>()));
      else
        row.push_back(v.get<std::string>());
    }
    t.add_row(std::move(row));
  }
  return t;
}

json to_json(const PlotSpec& p) {
  return {{"table", p.table}, {"file", p.file}, {"title", p.title}, {"x", p.x},
          {"y", p.y},         {"group", p.group}, {"log_x", p.log_x}, {"log_y", p.log_y}};
}

PlotSpec plot_from_json(const json& j) {
  PlotSpec p;
  p.table = j.at("table").get<std::string>();
  p.file = j.at("file").get<std::string>();
  p.title = j.value("title", p.file);
  p.x = j.at("x").get<std::string>();
  p.y = j.at("y").get<std::vector<std::string>>();
  p.group = j.value("group", std::string{});
  p.log_x = j.value("log_x", false);
  p.log_y = j.value("log_y", false);
  return p;
}

std::vector<Series> series_from(const Table& t, const PlotSpec& p) {
  const std::size_t xi = t.column(p.x);
  const bool grouped = !p.group.empty();
  const std::size_t gi = grouped ? t.column(p.group) : 0;
  std::vector<Series> out;
  std::map<std::string, std::size_t> index;
  for (const auto& y : p.y) {
    const std::size_t yi = t.column(y);
    for (const auto& row : t.rows()) {
      const std::string name = grouped ? y + " [" + p.group + "=" + row[gi] + "]" : y;
      auto [it, fresh] = index.try_emplace(name, out.size());
      if (fresh) out.push_back({name, {}, {}});
      double xv = 0.0, yv = 0.0;
      if (!parse_number(row[xi], xv) || !parse_number(row[yi], yv)) continue;
      out[it->second].x.push_back(xv);
      out[it->second].y.push_back(yv);
    }
  }
  return out;
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

std::string render_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series, bool log_x, bool log_y) {
  constexpr double W = 760, H = 440, L = 80, R = 230, T = 40, B = 60;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!log_x || x > 0) && (!log_y || y > 0);
  };
  auto tx = [&](double x) { return log_x ? std::log10(x) : x; };
  auto ty = [&](double y) { return log_y ? std::log10(y) : y; };

  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (usable(s.x[i], s.y[i])) {
        x0 = std::min(x0, tx(s.x[i]));
        x1 = std::max(x1, tx(s.x[i]));
        y0 = std::min(y0, ty(s.y[i]));
        y1 = std::max(y1, ty(s.y[i]));
      }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.04 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double v) { return H - B - (v - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(title)
     << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double vx = x0 + (x1 - x0) * k / 4.0, vy = y0 + (y1 - y0) * k / 4.0;
    const double lx = log_x ? std::pow(10.0, vx) : vx, ly = log_y ? std::pow(10.0, vy) : vy;
    os << "<line x1=\"" << px(vx) << "\" y1=\"" << H - B << "\" x2=\"" << px(vx) << "\" y2=\"" << H - B + 5
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << px(vx) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << fmt("%.3g", lx)
       << "</text>\n";
    os << "<line x1=\"" << L - 5 << "\" y1=\"" << py(vy) << "\" x2=\"" << L << "\" y2=\"" << py(vy)
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << L - 8 << "\" y=\"" << py(vy) + 4 << "\" text-anchor=\"end\">" << fmt("%.3g", ly)
       << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
     << xml_escape(x_label + (log_x ? " (log)" : "")) << "</text>\n";
  os << "<text transform=\"translate(18," << (T + H - B) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << xml_escape(y_label + (log_y ? " (log)" : "")) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = palette[s % 10];
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < series[s].x.size(); ++i)
      if (usable(series[s].x[i], series[s].y[i])) pts.emplace_back(px(tx(series[s].x[i])), py(ty(series[s].y[i])));
    if (pts.size() > 1) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [a, b] : pts) os << fmt("%.2f", a) << ',' << fmt("%.2f", b) << ' ';
      os << "\"/>\n";
    }
    if (pts.size() <= 64)
      for (const auto& [a, b] : pts)
        os << "<circle cx=\"" << fmt("%.2f", a) << "\" cy=\"" << fmt("%.2f", b) << "\" r=\"2.5\" fill=\"" << color
           << "\"/>\n";
    const double ly = T + 14 + 16 * static_cast<double>(s);
    os << "<line x1=\"" << W - R + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << W - R + 32 << "\" y2=\"" << ly - 4
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << W - R + 38 << "\" y=\"" << ly << "\">" << xml_escape(series[s].name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

RunDirectory::RunDirectory(fs::path root, Format format) : root_(std::move(root)), format_(format) {
  fs::create_directories(root_ / "plots");
  manifest_ = {{"format", format == Format::Csv ? "csv" : "json"}, {"tables", json::array()}, {"plots", json::array()}};
}

void RunDirectory::write_table(const std::string& name, const Table& t) {
  const fs::path path = root_ / (name + extension(format_));
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path.string());
  if (format_ == Format::Csv)
    t.write_csv(os);
  else
    t.write_json(os);
  manifest_["tables"].push_back(name);
}

void RunDirectory::add_plot(PlotSpec p) { manifest_["plots"].push_back(to_json(p)); }

void RunDirectory::finish() {
  {
    std::ofstream os(root_ / "manifest.json", std::ios::binary);
    if (!os) throw ConfigError("cannot write manifest.json in " + root_.string());
    os << manifest_.dump(2) << '\n';
  }
  regenerate(root_);
}

Table load_table(const fs::path& dir, const std::string& name, Format format) {
  const fs::path path = dir / (name + extension(format));
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("missing table " + path.string());
  return format == Format::Csv ? Table::read_csv(is) : Table::read_json(is);
}

namespace {

void markdown_table(std::ostream& os, const Table& t, std::size_t max_rows) {
  os << '|';
  for (const auto& c : t.columns()) os << ' ' << c << " |";
  os << "\n|";
  for (std::size_t i = 0; i < t.columns().size(); ++i) os << "---|";
  os << '\n';
  const std::size_t shown = std::min(max_rows, t.size());
  for (std::size_t r = 0; r < shown; ++r) {
    os << '|';
    for (const auto& c : t.rows()[r]) os << ' ' << c << " |";
    os << '\n';
  }
  if (shown < t.size()) os << "\n(" << t.size() - shown << " more rows in the table file)\n";
}

}  // namespace

void regenerate(const fs::path& run_dir) {
  std::ifstream is(run_dir / "manifest.json");
  if (!is) throw ConfigError("no manifest.json in " + run_dir.string());
  json manifest;
  try {
    manifest = json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("unreadable manifest.json: ") + e.what());
  }
  const Format format = parse_format(manifest.value("format", std::string("csv")));
  fs::create_directories(run_dir / "plots");

  std::map<std::string, Table> tables;
  for (const auto& name : manifest.at("tables")) tables.emplace(name.get<std::string>(), load_table(run_dir, name, format));

  for (const auto& pj : manifest.at("plots")) {
    const PlotSpec p = plot_from_json(pj);
    const auto it = tables.find(p.table);
    if (it == tables.end()) throw ConfigError("plot '" + p.file + "' refers to unknown table " + p.table);
    std::string y_label;
    for (const auto& y : p.y) y_label += (y_label.empty() ? "" : ", ") + y;
    std::ofstream svg(run_dir / "plots" / (p.file + ".svg"), std::ios::binary);
    svg << render_svg(p.title, p.x, y_label, series_from(it->second, p), p.log_x, p.log_y);
  }

  std::ofstream md(run_dir / "summary.md", std::ios::binary);
  md << "# Run summary\n\n";
  if (manifest.contains("command")) md << "- command: `" << manifest["command"].get<std::string>() << "`\n";
  if (manifest.contains("seed")) md << "- seed: " << manifest["seed"].dump() << '\n';
  if (manifest.contains("threads")) md << "- threads: " << manifest["threads"].dump() << '\n';
  if (manifest.contains("wall_time_s")) md << "- wall time (s): " << manifest["wall_time_s"].dump() << '\n';
  for (const auto& name : manifest.at("tables")) {
    const auto& t = tables.at(name.get<std::string>());
    md << "\n## " << name.get<std::string>() << "\n\n";
    markdown_table(md, t, 40);
  }
  if (!manifest.at("plots").empty()) {
    md << "\n## Plots\n\n";
    for (const auto& pj : manifest.at("plots")) {
      const auto file = pj.at("file").get<std::string>();
      md << "![" << file << "](plots/" << file << ".svg)\n";
    }
  }
}

}  // namespace fbmlab::report
