#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fbmlab/errors.hpp"

namespace fbmlab {

/// Uniform grid k * dt, k = 0..n_steps, on [0, t_max].
class TimeGrid {
 public:
  TimeGrid(double t_max, std::size_t n_steps) : t_max_(t_max), n_steps_(n_steps) {
    if (!(t_max > 0.0)) throw DomainError("time grid requires t_max > 0");
    if (n_steps == 0) throw DomainError("time grid requires n_steps >= 1");
    dt_ = t_max / static_cast<double>(n_steps);
  }

  double t_max() const noexcept { return t_max_; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  std::size_t n_points() const noexcept { return n_steps_ + 1; }
  double dt() const noexcept { return dt_; }
  double at(std::size_t k) const noexcept {
    return k == n_steps_ ? t_max_ : static_cast<double>(k) * dt_;
  }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double t_max_;
  std::size_t n_steps_;
  double dt_;
};

/// d-dimensional path sampled on a TimeGrid; row k holds the state at grid point k.
class SamplePath {
 public:
  SamplePath(TimeGrid grid, std::size_t dim)
      : grid_(grid), dim_(dim), values_(grid.n_points() * dim, 0.0) {
    if (dim == 0) throw DomainError("sample path dimension must be >= 1");
  }

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return grid_.n_points(); }

  double& operator()(std::size_t k, std::size_t c) { return values_[k * dim_ + c]; }
  double operator()(std::size_t k, std::size_t c) const { return values_[k * dim_ + c]; }
  std::span<double> row(std::size_t k) { return {values_.data() + k * dim_, dim_}; }
  std::span<const double> row(std::size_t k) const { return {values_.data() + k * dim_, dim_}; }
  std::span<const double> data() const noexcept { return values_; }

  bool all_finite() const;

  /// CSV with header t,comp_0,...,comp_{d-1}; 17 significant digits.
  void write_csv(std::ostream& os) const;
  static SamplePath read_csv(std::istream& is);

  friend bool operator==(const SamplePath&, const SamplePath&) = default;

 private:
  TimeGrid grid_;
  std::size_t dim_;
  std::vector<double> values_;
};

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double x);

}  // namespace fbmlab
