#include "fbmlab/quadrature.hpp"

// Header-only templates; this translation unit keeps the rule tables instantiated once.
namespace fbmlab::quad {
template struct GaussLegendre01<8>;
template struct GaussLegendre01<16>;
}  // namespace fbmlab::quad
