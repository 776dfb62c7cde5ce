#pragma once

#include "pvi/types.hpp"

namespace pvi {

/// Forward-mode dual number over complex values: value + eps * slope.
struct Dual {
  cplx v{0};
  cplx d{0};

  Dual() = default;
  Dual(cplx value, cplx slope = 0) : v(value), d(slope) {}
  Dual(double value) : v(value) {}
};

inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator-(Dual a) { return {-a.v, -a.d}; }
inline Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
inline Dual operator/(Dual a, Dual b) { return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)}; }

}  // namespace pvi
