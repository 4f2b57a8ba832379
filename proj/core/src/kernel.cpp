#include "jkoflow/kernel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "jkoflow/errors.hpp"

namespace jkoflow {

double BesselKernel1D::value(double x) const { return 0.5 * scale * std::exp(-std::abs(x)); }

double BesselKernel1D::derivative(double x) const {
  if (x == 0.0) return 0.0;
  const double v = 0.5 * scale * std::exp(-std::abs(x));
  return x > 0.0 ? -v : v;
}

double BesselKernel1D::integral(double a, double b) const {
  if (b <= a) return 0.0;
  // Antiderivative G(x) = sign(x) (1 - e^{-|x|}) / 2.
  auto G = [](double x) {
    const double t = -std::expm1(-std::abs(x));
    return x < 0.0 ? -0.5 * t : 0.5 * t;
  };
  return scale * (G(b) - G(a));
}

double bessel_1d(double x) { return BesselKernel1D{}.value(x); }

double bessel_2d(double r, double rel_tol) {
  if (!(r > 0.0)) throw InvalidArgument("bessel_2d: r must be > 0");
  using std::numbers::pi;
  const double a = pi * r * r;
  const double b = 1.0 / (4.0 * pi);
  // t = e^u turns dt / t into du.
  auto f = [a, b](double u) { return std::exp(-a * std::exp(-u) - b * std::exp(u)); };
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, -40.0, 40.0, 20, rel_tol, &err);
  return v / (4.0 * pi);
}

KernelTable::KernelTable(GridPtr grid, BesselKernel1D kernel)
    : grid_(std::move(grid)), kernel_(kernel) {
  if (!grid_) throw InvalidArgument("kernel table needs a grid");
  const int n = grid_->size();
  const double h = grid_->dx();
  values_.resize(n);
  slopes_.resize(n);
  for (int lag = 0; lag < n; ++lag) {
    const double lo = lag * h - 0.5 * h;
    const double hi = lag * h + 0.5 * h;
    values_[lag] = kernel_.integral(lo, hi) / h;
    slopes_[lag] = lag == 0 ? 0.0 : (kernel_.value(hi) - kernel_.value(lo)) / h;
  }
}

double KernelTable::discrete_mass() const {
  double s = values_[0];
  for (std::size_t k = 1; k < values_.size(); ++k) s += 2.0 * values_[k];
  return s * grid_->dx();
}

namespace {

// Both tables are geometric beyond lag 0 with ratio e^{-dx}, so the sums over
// j < i and j > i follow first-order recursions.
void one_sided_sums(std::span<const double> v, double h, std::vector<double>& left,
                    std::vector<double>& right) {
  const int n = static_cast<int>(v.size());
  const double q = std::exp(-h);
  left.assign(n, 0.0);
  right.assign(n, 0.0);
  for (int i = 1; i < n; ++i) left[i] = q * left[i - 1] + v[i - 1] * h;
  for (int i = n - 2; i >= 0; --i) right[i] = q * right[i + 1] + v[i + 1] * h;
}

}  // namespace

ScalarField convolve(std::span<const double> v, const KernelTable& tab) {
  const int n = tab.grid().size();
  if (static_cast<int>(v.size()) != n) throw InvalidArgument("convolve: size mismatch");
  const double h = tab.grid().dx();
  std::vector<double> left, right;
  one_sided_sums(v, h, left, right);
  std::vector<double> out(n);
  const double v0 = tab.value(0), v1 = n > 1 ? tab.value(1) : 0.0;
  for (int i = 0; i < n; ++i) out[i] = v0 * v[i] * h + v1 * (left[i] + right[i]);
  return {tab.grid_ptr(), std::move(out)};
}

ScalarField convolve(const GridDensity& rho, const KernelTable& tab) {
  require_same_grid(rho.grid(), tab.grid(), "convolve");
  return convolve(rho.values(), tab);
}

ScalarField convolve_direct(std::span<const double> v, const KernelTable& tab) {
  const int n = tab.grid().size();
  if (static_cast<int>(v.size()) != n) throw InvalidArgument("convolve: size mismatch");
  const double h = tab.grid().dx();
  std::vector<double> out(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const double w = v[j] * h;
    if (w == 0.0) continue;
    for (int i = 0; i < n; ++i) out[i] += tab.value(i - j) * w;
  }
  return {tab.grid_ptr(), std::move(out)};
}

ScalarField convolve_gradient(std::span<const double> v, const KernelTable& tab) {
  const int n = tab.grid().size();
  if (static_cast<int>(v.size()) != n) throw InvalidArgument("convolve_gradient: size mismatch");
  const double h = tab.grid().dx();
  std::vector<double> left, right;
  one_sided_sums(v, h, left, right);
  std::vector<double> out(n);
  const double s1 = n > 1 ? tab.derivative(1) : 0.0;
  for (int i = 0; i < n; ++i) out[i] = s1 * (left[i] - right[i]);
  return {tab.grid_ptr(), std::move(out)};
}

ScalarField convolve_indicator(const SupportIndicator& beta, const KernelTable& tab) {
  require_same_grid(*beta.grid, tab.grid(), "convolve_indicator");
  std::vector<double> v(beta.cells.begin(), beta.cells.end());
  return convolve(v, tab);
}

IndicatorPotential::IndicatorPotential(std::vector<std::pair<double, double>> intervals,
                                       BesselKernel1D kernel)
    : intervals_(std::move(intervals)), kernel_(kernel) {}

IndicatorPotential::IndicatorPotential(const SupportIndicator& beta, BesselKernel1D kernel)
    : IndicatorPotential(beta.intervals(), kernel) {}

double IndicatorPotential::value(double x) const {
  double s = 0.0;
  for (const auto& [a, b] : intervals_) {
    if (x <= a) {
      s += 0.5 * (std::exp(x - a) - std::exp(x - b));
    } else if (x >= b) {
      s += 0.5 * (std::exp(b - x) - std::exp(a - x));
    } else {
      s += 1.0 - 0.5 * std::exp(a - x) - 0.5 * std::exp(x - b);
    }
  }
  return kernel_.scale * s;
}

double IndicatorPotential::derivative(double x) const {
  double s = 0.0;
  for (const auto& [a, b] : intervals_) {
    if (x <= a) {
      s += 0.5 * (std::exp(x - a) - std::exp(x - b));
    } else if (x >= b) {
      s -= 0.5 * (std::exp(b - x) - std::exp(a - x));
    } else {
      s += 0.5 * std::exp(a - x) - 0.5 * std::exp(x - b);
    }
  }
  return kernel_.scale * s;
}

}  // namespace jkoflow
