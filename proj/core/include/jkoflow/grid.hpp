#pragma once

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace jkoflow {

/// Uniform cell-centred grid on [-L, L].
class Grid {
 public:
  Grid(double half_width, int cells);

  double half_width() const { return half_width_; }
  int size() const { return cells_; }
  double dx() const { return dx_; }
  double center(int i) const { return -half_width_ + (i + 0.5) * dx_; }
  double edge(int i) const { return -half_width_ + i * dx_; }
  std::span<const double> centers() const { return centers_; }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.half_width_ == b.half_width_ && a.cells_ == b.cells_;
  }

 private:
  double half_width_;
  int cells_;
  double dx_;
  std::vector<double> centers_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(double half_width, int cells);

/// Nonnegative cell values on a shared grid.
class GridDensity {
 public:
  GridDensity(GridPtr grid, std::vector<double> values);

  static GridDensity zero(GridPtr grid);
  /// Point values at cell centres.
  static GridDensity sample(GridPtr grid, const std::function<double(double)>& f);
  /// Cell averages by Gauss-Legendre quadrature in every cell.
  static GridDensity cell_average(GridPtr grid, const std::function<double(double)>& f);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](int i) const { return values_[i]; }
  int size() const { return static_cast<int>(values_.size()); }

  GridDensity scaled(double factor) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Arbitrary-sign field on a grid (potentials, convolutions).
struct ScalarField {
  GridPtr grid;
  std::vector<double> values;
};

/// 0/1 per cell; marks the set S of a density.
struct SupportIndicator {
  GridPtr grid;
  std::vector<unsigned char> cells;

  int count() const;
  /// Maximal runs of marked cells as closed intervals [a, b].
  std::vector<std::pair<double, double>> intervals() const;
};

void require_same_grid(const Grid& a, const Grid& b, const char* where);

double mass(const GridDensity& rho);
double first_moment(const GridDensity& rho);
double second_moment(const GridDensity& rho);
/// Integral of rho log rho - rho with 0 log 0 = 0.
double entropy(const GridDensity& rho);
/// Integral of rho^p.
double lp_norm_pow(const GridDensity& rho, double p);
/// Integral of |d/dx rho^{gamma/2}|^2 with centred differences, one-sided at the ends.
double h1_seminorm_pow(const GridDensity& rho, double gamma);
double l1_distance(const GridDensity& a, const GridDensity& b);
double max_value(const GridDensity& rho);

/// Equal-mass particle ladder, strictly increasing positions.
class ParticleDensity {
 public:
  ParticleDensity(std::vector<double> positions, double particle_mass);

  std::span<const double> positions() const { return positions_; }
  double particle_mass() const { return particle_mass_; }
  int size() const { return static_cast<int>(positions_.size()); }
  double total_mass() const { return particle_mass_ * size(); }

 private:
  std::vector<double> positions_;
  double particle_mass_;
};

/// Piecewise-constant density on a nonuniform partition of the line.
/// density[j] lives on [edges[j], edges[j+1]].
struct Partition {
  std::vector<double> edges;
  std::vector<double> density;

  double mass() const;
};

Partition partition_of(const GridDensity& rho);

/// Interval reconstruction of a particle ladder: mass m_p on every
/// inter-particle gap, plus half-mass caps of half-gap width at both ends.
/// Caps that would cross +-L are squeezed against the wall.
Partition reconstruct(const ParticleDensity& particles, double half_width);

/// Exact cell deposit of a partition onto a grid.
GridDensity deposit(const Partition& part, GridPtr grid);

/// Quantile of the piecewise-linear CDF of a partition at mass level s.
double quantile(const Partition& part, double level);

/// Quantiles at increasing mass levels in one sweep over the partition.
std::vector<double> quantile_sweep(const Partition& part, std::span<const double> levels);

/// Ladder X_k = F^{-1}((k - 1/2) m / n_p), then gaps floored at min_gap.
ParticleDensity quantile_particles(const Partition& part, int n_particles, double min_gap);

void enforce_min_gap(std::span<double> x, double min_gap);

double default_min_gap(const Grid& grid);

ParticleDensity to_particles(const GridDensity& rho, int n_particles);
GridDensity to_grid(const ParticleDensity& particles, GridPtr grid);

}  // namespace jkoflow
