#include <cmath>

#include "newtoncurv/curvature.hpp"
#include "newtoncurv/geometry.hpp"
#include "newtoncurv/parallel.hpp"

namespace newtoncurv {

QuadratureGrid make_quadrature_grid(const ChartGeometry& geom,
                                    int resolution) {
  if (resolution < 1)
    throw ValidationError("make_quadrature_grid: resolution must be >= 1");
  const int m = geom.m;
  std::vector<std::vector<std::pair<double, double>>> axis(
      static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double a = geom.lo[k];
    const double len = geom.hi[k] - a;
    auto& nodes = axis[static_cast<std::size_t>(k)];
    if (geom.periodic[static_cast<std::size_t>(k)]) {
      // Uniform midpoint rule: spectrally accurate for periodic data.
      for (int j = 0; j < resolution; ++j)
        nodes.emplace_back(a + (j + 0.5) * len / resolution,
                           len / resolution);
    } else {
      // Composite two-point Gauss panels (degree-3 per panel).
      const int panels = std::max(1, resolution / 2);
      const double plen = len / panels;
      const double off = plen / (2.0 * std::sqrt(3.0));
      for (int j = 0; j < panels; ++j) {
        const double mid = a + (j + 0.5) * plen;
        nodes.emplace_back(mid - off, plen / 2.0);
        nodes.emplace_back(mid + off, plen / 2.0);
      }
    }
  }

  std::size_t total = 1;
  for (const auto& nodes : axis) total *= nodes.size();
  QuadratureGrid grid;
  grid.nodes.reserve(total);
  grid.weights.reserve(total);
  std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
  while (true) {
    Eigen::VectorXd x(m);
    double w = 1.0;
    for (int k = 0; k < m; ++k) {
      const auto& nk = axis[static_cast<std::size_t>(k)][idx[static_cast<std::size_t>(k)]];
      x[k] = nk.first;
      w *= nk.second;
    }
    grid.nodes.push_back(x);
    grid.weights.push_back(w);
    int k = 0;
    while (k < m) {
      auto& ik = idx[static_cast<std::size_t>(k)];
      if (++ik < axis[static_cast<std::size_t>(k)].size()) break;
      ik = 0;
      ++k;
    }
    if (k == m) break;
  }
  return grid;
}

double integrate_scalar(const ChartGeometry& geom,
                        const std::function<double(const Eigen::VectorXd&)>& f,
                        int resolution) {
  const QuadratureGrid grid = make_quadrature_grid(geom, resolution);
  std::vector<double> values(grid.nodes.size());
  parallel_for(grid.nodes.size(), [&](std::size_t i) {
    const Eigen::VectorXd& x = grid.nodes[i];
    const double v = f(x) * geom.volume_density(x) * grid.weights[i];
    if (!std::isfinite(v)) {
      std::string at;
      for (int k = 0; k < x.size(); ++k)
        at += (k ? ", " : "") + std::to_string(x[k]);
      throw IntegrationError(geom.name + ": non-finite sample at (" + at +
                             ")");
    }
    values[i] = v;
  });
  return pairwise_sum(values);
}

double total_mean_curvature(const ChartGeometry& geom,
                            const DistributionSpec& dist, int r,
                            int resolution, const FdConfig& cfg) {
  const int n = geom.m - dist.l;
  detail::require_even(r, "total_mean_curvature");
  if (r < 0 || r > n + 1)
    throw ValidationError("total_mean_curvature: order " + std::to_string(r) +
                          " outside 0.." + std::to_string(n + 1));
  return integrate_scalar(
      geom,
      [&](const Eigen::VectorXd& x) {
        return s_r_direct(shape_operators(geom, dist, x, cfg), r);
      },
      resolution);
}

double theorem2_closed_form(int n, int l, int s, double c, double vol) {
  if (n < 1 || l < 1)
    throw ValidationError("theorem2_closed_form: need n >= 1 and l >= 1");
  if (s < 1) throw ValidationError("theorem2_closed_form: need s >= 1");
  if (!(c >= 0.0))
    throw ValidationError("theorem2_closed_form: need curvature c >= 0");
  // Binomial coefficients by the product formula x(x-1)...(x-k+1)/k!.
  auto binom = [](double x, int k) {
    double out = 1.0;
    for (int i = 1; i <= k; ++i) out *= (x - (i - 1)) / i;
    return out;
  };
  const double cs = std::pow(c, s);
  if (n % 2 == 0 && l % 2 == 1) {
    const double denom = binom((l + 2.0 * s - 1.0) / 2.0, s);
    return binom(n / 2.0, s) * binom(l + 2.0 * s - 1.0, 2 * s) / denom * cs *
           vol;
  }
  if (n % 2 == 0 && l % 2 == 0) {
    // 2^{2s} (s!)^2 / (2s)! = prod_{i=1..s} 2i / (2i - 1).
    double pref = 1.0;
    for (int i = 1; i <= s; ++i) pref *= 2.0 * i / (2.0 * i - 1.0);
    return pref * binom(l / 2.0 + s - 1.0, s) * binom(n / 2.0, s) * cs * vol;
  }
  return 0.0;
}

double corollary1_residual(const ChartGeometry& geom,
                           const DistributionSpec& dist, int r, int resolution,
                           const FdConfig& cfg) {
  const int n = geom.m - dist.l;
  const double low = total_mean_curvature(geom, dist, r, resolution, cfg);
  const double high = total_mean_curvature(geom, dist, r + 2, resolution, cfg);
  const double predicted = geom.curvature_c * (n - r) * (dist.l + r) /
                           static_cast<double>((r + 1) * (r + 2)) * low;
  return std::abs(high - predicted) / (1.0 + std::abs(low));
}

}  // namespace newtoncurv
