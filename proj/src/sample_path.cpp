#include "fbmlab/sample_path.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace fbmlab {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool SamplePath::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

void SamplePath::write_csv(std::ostream& os) const {
  os << 't';
  for (std::size_t c = 0; c < dim_; ++c) os << ",comp_" << c;
  os << '\n';
  for (std::size_t k = 0; k < size(); ++k) {
    os << format_double(grid_.at(k));
    for (std::size_t c = 0; c < dim_; ++c) os << ',' << format_double((*this)(k, c));
    os << '\n';
  }
}

SamplePath SamplePath::read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("t,comp_0", 0) != 0)
    throw ConfigError("path CSV must start with header t,comp_0,...");
  std::size_t dim = 0;
  for (char ch : line) dim += ch == ',';

  std::vector<double> times;
  std::vector<double> vals;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(ss, cell, ',')) {
      const double v = std::stod(cell);
      (col == 0 ? times : vals).push_back(v);
      ++col;
    }
    if (col != dim + 1) throw ConfigError("path CSV row has wrong number of columns");
  }
  if (times.size() < 2) throw ConfigError("path CSV needs at least two rows");
  SamplePath p(TimeGrid(times.back(), times.size() - 1), dim);
  for (std::size_t k = 0; k < times.size(); ++k)
    for (std::size_t c = 0; c < dim; ++c) p(k, c) = vals[k * dim + c];
  return p;
}

}  // namespace fbmlab
