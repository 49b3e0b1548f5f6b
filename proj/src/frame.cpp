#include <cmath>
#include <numeric>

#include "newtoncurv/geometry.hpp"

namespace newtoncurv {

namespace {

// Central-difference step for metric partials when no closed form is given.
constexpr double kMetricStep = 1e-6;
// Step for differentiating Christoffel symbols in the curvature tensor.
constexpr double kCurvatureStep = 1e-5;

std::vector<Eigen::MatrixXd> metric_partials_fd(const ChartGeometry& geom,
                                                const Eigen::VectorXd& p) {
  std::vector<Eigen::MatrixXd> d(static_cast<std::size_t>(geom.m));
  for (int k = 0; k < geom.m; ++k) {
    Eigen::VectorXd xp = p, xm = p;
    xp[k] += kMetricStep;
    xm[k] -= kMetricStep;
    d[static_cast<std::size_t>(k)] =
        (geom.metric(xp) - geom.metric(xm)) / (2.0 * kMetricStep);
  }
  return d;
}

}  // namespace

std::vector<Eigen::MatrixXd> christoffel(const ChartGeometry& geom,
                                         const Eigen::VectorXd& p) {
  if (p.size() != geom.m)
    throw ValidationError(geom.name + ": point dimension mismatch");
  const Eigen::MatrixXd g = geom.metric(p);
  const Eigen::MatrixXd ginv = g.inverse();
  const std::vector<Eigen::MatrixXd> dg =
      geom.metric_partials ? geom.metric_partials(p) : metric_partials_fd(geom, p);
  std::vector<Eigen::MatrixXd> christ(
      static_cast<std::size_t>(geom.m),
      Eigen::MatrixXd::Zero(geom.m, geom.m));
  for (int k = 0; k < geom.m; ++k)
    for (int i = 0; i < geom.m; ++i)
      for (int j = 0; j < geom.m; ++j) {
        double sum = 0.0;
        for (int a = 0; a < geom.m; ++a)
          sum += ginv(k, a) * (dg[static_cast<std::size_t>(i)](a, j) +
                               dg[static_cast<std::size_t>(j)](a, i) -
                               dg[static_cast<std::size_t>(a)](i, j));
        christ[static_cast<std::size_t>(k)](i, j) = 0.5 * sum;
      }
  return christ;
}

double sectional_curvature(const ChartGeometry& geom, const Eigen::VectorXd& p,
                           const Eigen::VectorXd& u,
                           const Eigen::VectorXd& v) {
  const int m = geom.m;
  if (u.size() != m || v.size() != m)
    throw ValidationError(geom.name + ": vector dimension mismatch");
  const Eigen::MatrixXd g = geom.metric(p);
  const auto christ = christoffel(geom, p);
  std::vector<std::vector<Eigen::MatrixXd>> dchrist(
      static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    Eigen::VectorXd xp = p, xm = p;
    xp[k] += kCurvatureStep;
    xm[k] -= kCurvatureStep;
    const auto cp = christoffel(geom, xp);
    const auto cm = christoffel(geom, xm);
    auto& dk = dchrist[static_cast<std::size_t>(k)];
    dk.resize(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a)
      dk[static_cast<std::size_t>(a)] =
          (cp[static_cast<std::size_t>(a)] - cm[static_cast<std::size_t>(a)]) /
          (2.0 * kCurvatureStep);
  }
  // z = R(u, v) v with R(d_i, d_j) d_k = (d_i G^a_{jk} - d_j G^a_{ik}
  //   + G^a_{ib} G^b_{jk} - G^a_{jb} G^b_{ik}) d_a.
  Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
  for (int a = 0; a < m; ++a) {
    double acc = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        if (u[i] == 0.0 && v[j] == 0.0) continue;
        for (int k = 0; k < m; ++k) {
          double term =
              dchrist[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)](
                  j, k) -
              dchrist[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)](
                  i, k);
          for (int b = 0; b < m; ++b)
            term += christ[static_cast<std::size_t>(a)](i, b) *
                        christ[static_cast<std::size_t>(b)](j, k) -
                    christ[static_cast<std::size_t>(a)](j, b) *
                        christ[static_cast<std::size_t>(b)](i, k);
          acc += u[i] * v[j] * v[k] * term;
        }
      }
    z[a] = acc;
  }
  const double uu = u.dot(g * u);
  const double vv = v.dot(g * v);
  const double uv = u.dot(g * v);
  const double denom = uu * vv - uv * uv;
  if (!(std::abs(denom) > 1e-14))
    throw ValidationError(geom.name + ": degenerate tangent plane");
  return u.dot(g * z) / denom;
}

Eigen::MatrixXd adapted_frame_matrix(const ChartGeometry& geom,
                                     const DistributionSpec& dist,
                                     const Eigen::VectorXd& p,
                                     int seed_variant, double rank_tol) {
  const int m = geom.m;
  const Eigen::MatrixXd g = geom.metric(p);
  const Eigen::MatrixXd f = dist.f_span(p);
  if (f.rows() != m || f.cols() != dist.l)
    throw ValidationError(geom.name + ": F span has wrong shape");
  const int l = dist.l;
  const int n = m - l;
  if (l < 1 || n < 1)
    throw ValidationError(geom.name + ": need 1 <= dim F <= m - 1");

  std::vector<Eigen::VectorXd> cols;
  auto project_out = [&](Eigen::VectorXd v) {
    for (const auto& b : cols) v -= b.dot(g * v) * b;
    return v;
  };
  auto accept = [&](const Eigen::VectorXd& v) {
    const Eigen::VectorXd w = project_out(v);
    const double norm = std::sqrt(w.dot(g * w));
    if (norm < rank_tol) return false;
    cols.push_back(w / norm);
    return true;
  };

  for (int c = 0; c < l; ++c)
    if (!accept(f.col(c)))
      throw DegenerateDistributionError(
          geom.name + ": F spanning fields are dependent at the point");

  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  const int shift = ((seed_variant % m) + m) % m;
  std::rotate(order.begin(), order.begin() + shift, order.end());
  if ((seed_variant / m) % 2 != 0) std::reverse(order.begin(), order.end());

  for (int idx : order) {
    if (static_cast<int>(cols.size()) == m) break;
    accept(Eigen::VectorXd::Unit(m, idx));
  }
  if (static_cast<int>(cols.size()) != m)
    throw DegenerateDistributionError(
        geom.name + ": could not complete an orthonormal frame");

  // Columns 1..n span D, columns n+1..m span F, orientation positive.
  Eigen::MatrixXd frame(m, m);
  for (int c = 0; c < l; ++c) frame.col(n + c) = cols[static_cast<std::size_t>(c)];
  for (int c = 0; c < n; ++c)
    frame.col(c) = cols[static_cast<std::size_t>(l + c)];
  if (frame.determinant() < 0.0) frame.col(0) *= -1.0;
  return frame;
}

FrameDerivatives frame_derivatives(
    const ChartGeometry& geom,
    const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& field,
    const Eigen::VectorXd& p, double step) {
  const int m = geom.m;
  FrameDerivatives out;
  out.E = field(p);
  if (out.E.rows() != m || out.E.cols() != m)
    throw ValidationError(geom.name + ": frame field must return m x m");
  const Eigen::MatrixXd g = geom.metric(p);
  const auto christ = christoffel(geom, p);
  out.W.resize(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    Eigen::VectorXd xp = p, xm = p;
    xp[k] += step;
    xm[k] -= step;
    const Eigen::MatrixXd dE = (field(xp) - field(xm)) / (2.0 * step);
    Eigen::MatrixXd gamma_k(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        gamma_k(a, b) = christ[static_cast<std::size_t>(a)](k, b);
    const Eigen::MatrixXd covariant = dE + gamma_k * out.E;
    out.W[static_cast<std::size_t>(k)] = covariant.transpose() * g * out.E;
  }
  out.conn.assign(static_cast<std::size_t>(m), Eigen::MatrixXd::Zero(m, m));
  for (int a = 0; a < m; ++a)
    for (int k = 0; k < m; ++k)
      out.conn[static_cast<std::size_t>(a)] +=
          out.E(k, a) * out.W[static_cast<std::size_t>(k)];
  return out;
}

AdaptedFramePoint adapted_frame(const ChartGeometry& geom,
                                const DistributionSpec& dist,
                                const Eigen::VectorXd& p, const FdConfig& cfg,
                                int seed_variant) {
  geom.require_inside(p);
  const int m = geom.m;
  const int l = dist.l;
  const int n = m - l;
  auto field = [&geom, &dist, seed_variant, &cfg](const Eigen::VectorXd& x) {
    return adapted_frame_matrix(geom, dist, x, seed_variant, cfg.rank_tol);
  };
  const FrameDerivatives fd = frame_derivatives(geom, field, p, cfg.frame_step);

  AdaptedFramePoint out;
  out.point = p;
  out.n = n;
  out.l = l;
  out.frame = fd.E;
  out.conn = fd.conn;
  out.stack.n = n;
  out.stack.l = l;
  out.stack.A.assign(static_cast<std::size_t>(l),
                     SquareMatrix<double>::Zero(n, n));
  for (int alpha = 0; alpha < l; ++alpha)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out.stack.A[static_cast<std::size_t>(alpha)](i, j) =
            -fd.conn[static_cast<std::size_t>(j)](n + alpha, i);
  const Eigen::MatrixXd g = geom.metric(p);
  out.orthonormality_residual =
      (fd.E.transpose() * g * fd.E - Eigen::MatrixXd::Identity(m, m))
          .cwiseAbs()
          .maxCoeff();
  return out;
}

ShapeOperatorStack<double> shape_operators(const ChartGeometry& geom,
                                           const DistributionSpec& dist,
                                           const Eigen::VectorXd& p,
                                           const FdConfig& cfg,
                                           int seed_variant) {
  return adapted_frame(geom, dist, p, cfg, seed_variant).stack;
}

}  // namespace newtoncurv
