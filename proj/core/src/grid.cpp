#include "jkoflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "jkoflow/errors.hpp"

namespace jkoflow {

Grid::Grid(double half_width, int cells) : half_width_(half_width), cells_(cells) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw InvalidArgument("grid half-width must be positive and finite");
  }
  if (cells < 2) throw InvalidArgument("grid needs at least 2 cells");
  dx_ = 2.0 * half_width / cells;
  centers_.resize(cells);
  for (int i = 0; i < cells; ++i) centers_[i] = center(i);
}

GridPtr make_grid(double half_width, int cells) {
  return std::make_shared<const Grid>(half_width, cells);
}

GridDensity::GridDensity(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw InvalidArgument("density needs a grid");
  if (static_cast<int>(values_.size()) != grid_->size()) {
    throw InvalidArgument("density has " + std::to_string(values_.size()) +
                          " values for a grid of " + std::to_string(grid_->size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidArgument("density values must be finite and nonnegative");
    }
  }
}

GridDensity GridDensity::zero(GridPtr grid) {
  std::vector<double> v(grid->size(), 0.0);
  return GridDensity(std::move(grid), std::move(v));
}

GridDensity GridDensity::sample(GridPtr grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid->size());
  for (int i = 0; i < grid->size(); ++i) v[i] = f(grid->center(i));
  return GridDensity(std::move(grid), std::move(v));
}

GridDensity GridDensity::cell_average(GridPtr grid, const std::function<double(double)>& f) {
  using boost::math::quadrature::gauss;
  std::vector<double> v(grid->size());
  const double h = grid->dx();
  for (int i = 0; i < grid->size(); ++i) {
    v[i] = gauss<double, 7>::integrate(f, grid->edge(i), grid->edge(i + 1)) / h;
  }
  return GridDensity(std::move(grid), std::move(v));
}

GridDensity GridDensity::scaled(double factor) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return GridDensity(grid_, std::move(v));
}

int SupportIndicator::count() const {
  int c = 0;
  for (unsigned char b : cells) c += b ? 1 : 0;
  return c;
}

std::vector<std::pair<double, double>> SupportIndicator::intervals() const {
  std::vector<std::pair<double, double>> out;
  const int n = static_cast<int>(cells.size());
  int i = 0;
  while (i < n) {
    if (!cells[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j < n && cells[j]) ++j;
    out.emplace_back(grid->edge(i), grid->edge(j));
    i = j;
  }
  return out;
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!(a == b)) throw InvalidArgument(std::string(where) + ": densities live on different grids");
}

double mass(const GridDensity& rho) {
  double s = 0.0;
  for (double v : rho.values()) s += v;
  return s * rho.grid().dx();
}

double first_moment(const GridDensity& rho) {
  const auto& g = rho.grid();
  double s = 0.0;
  for (int i = 0; i < g.size(); ++i) s += g.center(i) * rho[i];
  return s * g.dx();
}

double second_moment(const GridDensity& rho) {
  const auto& g = rho.grid();
  double s = 0.0;
  for (int i = 0; i < g.size(); ++i) s += g.center(i) * g.center(i) * rho[i];
  return s * g.dx();
}

double entropy(const GridDensity& rho) {
  double s = 0.0;
  for (double v : rho.values()) {
    if (v > 0.0) s += v * std::log(v) - v;
  }
  return s * rho.grid().dx();
}

double lp_norm_pow(const GridDensity& rho, double p) {
  double s = 0.0;
  for (double v : rho.values()) s += std::pow(v, p);
  return s * rho.grid().dx();
}

double h1_seminorm_pow(const GridDensity& rho, double gamma) {
  const int n = rho.size();
  const double h = rho.grid().dx();
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) u[i] = std::pow(rho[i], 0.5 * gamma);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    double d;
    if (i == 0) {
      d = (u[1] - u[0]) / h;
    } else if (i == n - 1) {
      d = (u[n - 1] - u[n - 2]) / h;
    } else {
      d = (u[i + 1] - u[i - 1]) / (2.0 * h);
    }
    s += d * d;
  }
  return s * h;
}

namespace {

// Exact L1 distance between two piecewise-constant functions.
double l1_partitions(const Partition& a, const Partition& b) {
  std::vector<double> cuts(a.edges);
  cuts.insert(cuts.end(), b.edges.begin(), b.edges.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto value_at = [](const Partition& p, double x, std::size_t& j) {
    while (j + 1 < p.edges.size() && p.edges[j + 1] <= x) ++j;
    if (x < p.edges.front() || x >= p.edges.back()) return 0.0;
    return p.density[j];
  };
  double s = 0.0;
  std::size_t ja = 0, jb = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
    s += std::abs(value_at(a, mid, ja) - value_at(b, mid, jb)) * (cuts[k + 1] - cuts[k]);
  }
  return s;
}

}  // namespace

double l1_distance(const GridDensity& a, const GridDensity& b) {
  if (a.grid() == b.grid()) {
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s * a.grid().dx();
  }
  return l1_partitions(partition_of(a), partition_of(b));
}

double max_value(const GridDensity& rho) {
  double m = 0.0;
  for (double v : rho.values()) m = std::max(m, v);
  return m;
}

ParticleDensity::ParticleDensity(std::vector<double> positions, double particle_mass)
    : positions_(std::move(positions)), particle_mass_(particle_mass) {
  if (positions_.size() < 2) throw InvalidArgument("a particle ladder needs at least 2 particles");
  if (!(particle_mass > 0.0) || !std::isfinite(particle_mass)) {
    throw InvalidArgument("particle mass must be positive");
  }
  for (std::size_t k = 0; k < positions_.size(); ++k) {
    if (!std::isfinite(positions_[k])) throw InvalidArgument("particle position is not finite");
    if (k > 0 && !(positions_[k] > positions_[k - 1])) {
      throw InvalidArgument("particle positions must be strictly increasing");
    }
  }
}

double Partition::mass() const {
  double s = 0.0;
  for (std::size_t j = 0; j < density.size(); ++j) s += density[j] * (edges[j + 1] - edges[j]);
  return s;
}

Partition partition_of(const GridDensity& rho) {
  const auto& g = rho.grid();
  Partition p;
  p.edges.resize(g.size() + 1);
  for (int i = 0; i <= g.size(); ++i) p.edges[i] = g.edge(i);
  p.density.assign(rho.values().begin(), rho.values().end());
  return p;
}

Partition reconstruct(const ParticleDensity& particles, double half_width) {
  const auto x = particles.positions();
  const int n = particles.size();
  const double mp = particles.particle_mass();
  if (x.front() <= -half_width || x.back() >= half_width) {
    throw DomainOverflowError("particle reached the domain boundary");
  }
  Partition p;
  p.edges.reserve(n + 2);
  p.density.reserve(n + 1);

  const double g_first = x[1] - x[0];
  const double left = std::max(x[0] - 0.5 * g_first, -half_width);
  p.edges.push_back(left);
  p.density.push_back(0.5 * mp / (x[0] - left));
  for (int k = 0; k + 1 < n; ++k) {
    p.edges.push_back(x[k]);
    p.density.push_back(mp / (x[k + 1] - x[k]));
  }
  const double g_last = x[n - 1] - x[n - 2];
  const double right = std::min(x[n - 1] + 0.5 * g_last, half_width);
  p.edges.push_back(x[n - 1]);
  p.density.push_back(0.5 * mp / (right - x[n - 1]));
  p.edges.push_back(right);
  return p;
}

GridDensity deposit(const Partition& part, GridPtr grid) {
  const auto& g = *grid;
  const double h = g.dx();
  std::vector<double> cell_mass(g.size(), 0.0);
  for (std::size_t j = 0; j < part.density.size(); ++j) {
    const double a = part.edges[j], b = part.edges[j + 1];
    const double d = part.density[j];
    if (d == 0.0 || b <= a) continue;
    if (a < -g.half_width() || b > g.half_width()) {
      throw DomainOverflowError("partition extends beyond the grid");
    }
    int i = std::clamp(static_cast<int>(std::floor((a - g.edge(0)) / h)), 0, g.size() - 1);
    for (; i < g.size() && g.edge(i) < b; ++i) {
      const double lo = std::max(a, g.edge(i));
      const double hi = std::min(b, g.edge(i + 1));
      if (hi > lo) cell_mass[i] += d * (hi - lo);
    }
  }
  for (double& m : cell_mass) m /= h;
  return GridDensity(std::move(grid), std::move(cell_mass));
}

double quantile(const Partition& part, double level) {
  double cum = 0.0;
  const std::size_t m = part.density.size();
  std::size_t last_positive = m;
  for (std::size_t j = 0; j < m; ++j) {
    const double w = part.edges[j + 1] - part.edges[j];
    const double piece = part.density[j] * w;
    if (piece <= 0.0) continue;
    last_positive = j;
    if (cum + piece >= level) {
      return part.edges[j] + (level - cum) / part.density[j];
    }
    cum += piece;
  }
  if (last_positive == m) throw EmptyDensityError("quantile of an empty density");
  return part.edges[last_positive + 1];
}

void enforce_min_gap(std::span<double> x, double min_gap) {
  for (std::size_t k = 1; k < x.size(); ++k) {
    if (x[k] < x[k - 1] + min_gap) x[k] = x[k - 1] + min_gap;
  }
}

double default_min_gap(const Grid& grid) { return 1e-10 * grid.half_width(); }

std::vector<double> quantile_sweep(const Partition& part, std::span<const double> levels) {
  std::vector<double> x(levels.size());
  double cum = 0.0;
  std::size_t j = 0;
  const std::size_t pieces = part.density.size();
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const double level = levels[k];
    while (j < pieces) {
      const double piece = part.density[j] * (part.edges[j + 1] - part.edges[j]);
      if (piece > 0.0 && cum + piece >= level) break;
      cum += piece;
      ++j;
    }
    if (j == pieces) {
      x[k] = quantile(part, level);
    } else {
      x[k] = std::min(part.edges[j] + (level - cum) / part.density[j], part.edges[j + 1]);
    }
  }
  return x;
}

ParticleDensity quantile_particles(const Partition& part, int n_particles, double min_gap) {
  if (n_particles < 2) throw InvalidArgument("need at least 2 particles");
  const double m = part.mass();
  if (!(m > 0.0)) throw EmptyDensityError("cannot build particles from a zero density");
  const double mp = m / n_particles;
  std::vector<double> levels(n_particles);
  for (int k = 0; k < n_particles; ++k) levels[k] = (k + 0.5) * mp;
  auto x = quantile_sweep(part, levels);
  enforce_min_gap(x, min_gap);
  return ParticleDensity(std::move(x), mp);
}

ParticleDensity to_particles(const GridDensity& rho, int n_particles) {
  return quantile_particles(partition_of(rho), n_particles, default_min_gap(rho.grid()));
}

GridDensity to_grid(const ParticleDensity& particles, GridPtr grid) {
  const double L = grid->half_width();
  return deposit(reconstruct(particles, L), std::move(grid));
}

}  // namespace jkoflow
