#pragma once

#include <string_view>

#include "fbmlab/errors.hpp"

namespace fbmlab {

enum class Regime { Rough, Brownian, Smooth };

std::string_view to_string(Regime r);

/// Hurst index H in (0,1) tagged with its regime relative to 1/2.
class HurstParameter {
 public:
  explicit HurstParameter(double h) : h_(h) {
    if (!(h > 0.0 && h < 1.0)) throw DomainError("Hurst parameter must lie in (0,1)");
    regime_ = h < 0.5 ? Regime::Rough : (h > 0.5 ? Regime::Smooth : Regime::Brownian);
  }

  double value() const noexcept { return h_; }
  Regime regime() const noexcept { return regime_; }

  /// max(2H, 1): the growth exponent appearing in the concentration bounds.
  double growth_exponent() const noexcept { return h_ > 0.5 ? 2.0 * h_ : 1.0; }

  friend bool operator==(const HurstParameter& a, const HurstParameter& b) { return a.h_ == b.h_; }

 private:
  double h_;
  Regime regime_;
};

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Rough: return "rough";
    case Regime::Brownian: return "brownian";
    case Regime::Smooth: return "smooth";
  }
  return "unknown";
}

}  // namespace fbmlab
