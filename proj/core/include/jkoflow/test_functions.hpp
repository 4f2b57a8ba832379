#pragma once

#include <vector>

namespace jkoflow {

/// phi(x) = (1 - r^2)^4 (1 + tilt r) for |r| < 1, r = (x - center) / width; C^3.
struct BumpFunction {
  double center = 0.0;
  double width = 1.0;
  double tilt = 0.0;

  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;
};

/// psi(t, x) = (1 + rate t) phi(x).
struct SpaceTimeProbe {
  BumpFunction space;
  double rate = 0.0;

  double value(double t, double x) const { return (1.0 + rate * t) * space.value(x); }
};

inline constexpr const char* kBatteryVersion = "bumps-v1";

/// Fixed battery of 8 bumps for weak-form and optimality residuals.
std::vector<BumpFunction> phi_battery();
/// Fixed battery of 8 nonnegative space-time probes for the constraint residual.
std::vector<SpaceTimeProbe> psi_battery();

}  // namespace jkoflow
