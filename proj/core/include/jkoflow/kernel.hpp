#pragma once

#include <utility>
#include <vector>

#include "jkoflow/grid.hpp"

namespace jkoflow {

/// K(x) = scale * exp(-|x|) / 2. scale != 1 is only used for fault injection.
struct BesselKernel1D {
  double scale = 1.0;

  double value(double x) const;
  /// Odd derivative, taken as 0 at the origin.
  double derivative(double x) const;
  /// Integral of K over [a, b].
  double integral(double a, double b) const;
  double sup() const { return 0.5 * scale; }
};

double bessel_1d(double x);

/// Two-dimensional Bessel potential
///   (1/4pi) int_0^inf t^{-1} exp(-pi r^2 / t - t / (4 pi)) dt,
/// by adaptive quadrature in u = log t. Requires r > 0.
double bessel_2d(double r, double rel_tol = 1e-10);

/// Cell-averaged kernel values K(lag) = (1/dx) int_{cell at lag} K, and the
/// same average of K'. Convolving a piecewise-constant density with these
/// gives the exact continuous convolution at cell centres.
class KernelTable {
 public:
  explicit KernelTable(GridPtr grid, BesselKernel1D kernel = {});

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const BesselKernel1D& kernel() const { return kernel_; }
  double value(int lag) const { return values_[lag < 0 ? -lag : lag]; }
  double derivative(int lag) const { return lag < 0 ? -slopes_[-lag] : slopes_[lag]; }
  /// dx * sum over all lags; tends to the kernel mass as the domain grows.
  double discrete_mass() const;

 private:
  GridPtr grid_;
  BesselKernel1D kernel_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

/// (K * v)(x_i) for cell values v.
ScalarField convolve(std::span<const double> v, const KernelTable& tab);
ScalarField convolve(const GridDensity& rho, const KernelTable& tab);
/// O(n^2) summation against the table; reference for the O(n) recursion above.
ScalarField convolve_direct(std::span<const double> v, const KernelTable& tab);
/// (K' * v)(x_i).
ScalarField convolve_gradient(std::span<const double> v, const KernelTable& tab);
ScalarField convolve_indicator(const SupportIndicator& beta, const KernelTable& tab);

/// Exact (K * 1_S)(x) and its derivative for S a finite union of intervals.
class IndicatorPotential {
 public:
  IndicatorPotential(std::vector<std::pair<double, double>> intervals, BesselKernel1D kernel);
  IndicatorPotential(const SupportIndicator& beta, BesselKernel1D kernel);

  double value(double x) const;
  double derivative(double x) const;
  const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }

 private:
  std::vector<std::pair<double, double>> intervals_;
  BesselKernel1D kernel_;
};

}  // namespace jkoflow
