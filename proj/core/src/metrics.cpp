#include "jkoflow/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "jkoflow/errors.hpp"

namespace jkoflow {

namespace {

void require_equal_mass(double a, double b, const char* where) {
  if (std::abs(a - b) > 1e-9 * std::max(std::abs(a), std::abs(b))) {
    throw UnequalMassError(std::string(where) + ": masses differ (" + std::to_string(a) + " vs " +
                           std::to_string(b) + ")");
  }
}

// Cumulative distribution of a partition, evaluated at increasing x.
class CdfWalker {
 public:
  explicit CdfWalker(const Partition& p) : p_(p) {}

  double at(double x) {
    const std::size_t pieces = p_.density.size();
    while (j_ < pieces && p_.edges[j_ + 1] <= x) {
      cum_ += p_.density[j_] * (p_.edges[j_ + 1] - p_.edges[j_]);
      ++j_;
    }
    if (j_ == pieces || x <= p_.edges[j_]) return cum_;
    return cum_ + p_.density[j_] * (x - p_.edges[j_]);
  }

 private:
  const Partition& p_;
  std::size_t j_ = 0;
  double cum_ = 0.0;
};

std::pair<double, double> positive_hull(const Partition& p) {
  double lo = 0.0, hi = 0.0;
  bool found = false;
  for (std::size_t j = 0; j < p.density.size(); ++j) {
    if (p.density[j] <= 0.0 || p.edges[j + 1] <= p.edges[j]) continue;
    if (!found) lo = p.edges[j];
    hi = p.edges[j + 1];
    found = true;
  }
  return found ? std::make_pair(lo, hi) : std::make_pair(0.0, 0.0);
}

Partition scaled(Partition p, double factor) {
  for (double& d : p.density) d *= factor;
  return p;
}

double probe_pairing(const LipschitzProbe& f, const Partition& p) {
  double s = 0.0;
  for (std::size_t j = 0; j < p.density.size(); ++j) {
    if (p.density[j] == 0.0) continue;
    s += p.density[j] * f.integral(p.edges[j], p.edges[j + 1]);
  }
  return s;
}

LipschitzProbe ramp(double c, double sign) {
  return {{c - 1.0, c + 1.0}, {-sign, sign}};
}

LipschitzProbe tent(double c, double w, double sign) {
  if (w >= 1.0) {
    return {{c - w - 1.0, c - w + 1.0, c + w - 1.0, c + w + 1.0}, {-sign, sign, sign, -sign}};
  }
  return {{c - w - 1.0, c, c + w + 1.0}, {-sign, sign * w, -sign}};
}

}  // namespace

QuantileVector quantiles(const Partition& part, int count) {
  if (count < 1) throw InvalidArgument("quantiles: count must be positive");
  QuantileVector q;
  q.mass = part.mass();
  if (!(q.mass > 0.0)) throw EmptyDensityError("quantiles of an empty density");
  q.levels.resize(count);
  for (int j = 0; j < count; ++j) q.levels[j] = (j + 0.5) * q.mass / count;
  q.positions = quantile_sweep(part, q.levels);
  return q;
}

QuantileVector quantiles(const GridDensity& rho, int count) {
  return quantiles(partition_of(rho), count);
}

double w2_from_quantiles(const QuantileVector& a, const QuantileVector& b) {
  if (a.positions.size() != b.positions.size()) {
    throw InvalidArgument("w2_from_quantiles: level counts differ");
  }
  require_equal_mass(a.mass, b.mass, "w2");
  const std::size_t n = a.positions.size();
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = a.positions[j] - b.positions[j];
    s += d * d;
  }
  return std::sqrt(s * a.mass / static_cast<double>(n));
}

double w2_1d(const GridDensity& rho, const GridDensity& mu) {
  const double ma = mass(rho), mb = mass(mu);
  require_equal_mass(ma, mb, "w2_1d");
  if (ma == 0.0) return 0.0;
  const int count = 4 * std::max(rho.size(), mu.size());
  return w2_from_quantiles(quantiles(rho, count), quantiles(mu, count));
}

double w2_particles(const ParticleDensity& a, const ParticleDensity& b) {
  if (a.size() != b.size()) throw InvalidArgument("w2_particles: ladder sizes differ");
  require_equal_mass(a.total_mass(), b.total_mass(), "w2_particles");
  double s = 0.0;
  for (int k = 0; k < a.size(); ++k) {
    const double d = a.positions()[k] - b.positions()[k];
    s += d * d;
  }
  return std::sqrt(s * a.particle_mass());
}

double w1_partitions(const Partition& a, const Partition& b) {
  require_equal_mass(a.mass(), b.mass(), "w1");
  std::vector<double> cuts(a.edges);
  cuts.insert(cuts.end(), b.edges.begin(), b.edges.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  CdfWalker fa(a), fb(b);
  double s = 0.0;
  double prev = fa.at(cuts.front()) - fb.at(cuts.front());
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    const double cur = fa.at(cuts[k]) - fb.at(cuts[k]);
    const double w = cuts[k] - cuts[k - 1];
    const double p = std::abs(prev), c = std::abs(cur);
    if ((prev >= 0.0) == (cur >= 0.0) || p + c == 0.0) {
      s += 0.5 * (p + c) * w;
    } else {
      s += 0.5 * (p * p + c * c) / (p + c) * w;
    }
    prev = cur;
  }
  return s;
}

double w1_1d(const GridDensity& rho, const GridDensity& mu) {
  return w1_partitions(partition_of(rho), partition_of(mu));
}

double LipschitzProbe::operator()(double t) const {
  if (t <= x.front()) return y.front();
  if (t >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - x.begin());
  const double u = (t - x[k - 1]) / (x[k] - x[k - 1]);
  return y[k - 1] + u * (y[k] - y[k - 1]);
}

double LipschitzProbe::integral(double a, double b) const {
  if (b <= a) return 0.0;
  double s = 0.0;
  double left = a, fl = (*this)(a);
  for (double k : x) {
    if (k <= a || k >= b) continue;
    const double fk = (*this)(k);
    s += 0.5 * (fl + fk) * (k - left);
    left = k;
    fl = fk;
  }
  return s + 0.5 * (fl + (*this)(b)) * (b - left);
}

std::vector<LipschitzProbe> dbl_dictionary(double lo, double hi) {
  if (hi < lo) std::swap(lo, hi);
  const double span = std::max(hi - lo, 1e-12);
  auto at = [&](int j, int count) { return lo + span * j / (count - 1); };
  std::vector<LipschitzProbe> d;
  d.reserve(64);
  for (int j = 0; j < 12; ++j) {
    d.push_back(ramp(at(j, 12), 1.0));
    d.push_back(ramp(at(j, 12), -1.0));
  }
  for (int j = 0; j < 8; ++j) {
    for (double w : {0.5, 1.5}) {
      d.push_back(tent(at(j, 8), w, 1.0));
      d.push_back(tent(at(j, 8), w, -1.0));
    }
  }
  d.push_back({{lo}, {1.0}});
  d.push_back({{lo}, {-1.0}});
  const double mid = 0.5 * (lo + hi);
  for (const auto& [c, w] : {std::pair{mid, 1.0 + 0.5 * span}, std::pair{lo + 0.25 * span, 1.0 + 0.25 * span},
                             std::pair{hi - 0.25 * span, 1.0 + 0.25 * span}}) {
    d.push_back(tent(c, w, 1.0));
    d.push_back(tent(c, w, -1.0));
  }
  return d;
}

DblBounds dbl_bounds(const GridDensity& rho, const GridDensity& mu) {
  const Partition pa = partition_of(rho), pb = partition_of(mu);
  const double ma = pa.mass(), mb = pb.mass();
  DblBounds out;
  if (ma == 0.0 && mb == 0.0) return out;

  out.upper = l1_distance(rho, mu);
  if (ma > 0.0 && mb > 0.0) {
    out.upper = std::min(out.upper, std::abs(ma - mb) + w1_partitions(pa, scaled(pb, ma / mb)));
  }

  const auto ha = positive_hull(pa), hb = positive_hull(pb);
  double lo, hi;
  if (ma == 0.0) {
    std::tie(lo, hi) = hb;
  } else if (mb == 0.0) {
    std::tie(lo, hi) = ha;
  } else {
    lo = std::min(ha.first, hb.first);
    hi = std::max(ha.second, hb.second);
  }
  for (const auto& f : dbl_dictionary(lo, hi)) {
    out.lower = std::max(out.lower, probe_pairing(f, pa) - probe_pairing(f, pb));
  }
  return out;
}

}  // namespace jkoflow
