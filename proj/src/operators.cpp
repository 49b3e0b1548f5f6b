#include <cmath>
#include <cstdio>

#include "newtoncurv/curvature.hpp"
#include "newtoncurv/geometry.hpp"

namespace newtoncurv {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", x);
  return buf;
}

// Plain Taylor series; arguments here have norm O(fd step), so a handful
// of terms reaches machine precision.
Eigen::MatrixXd matrix_exp_taylor(const Eigen::MatrixXd& b) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Identity(b.rows(), b.cols());
  Eigen::MatrixXd term = x;
  for (int j = 1; j <= 40; ++j) {
    term = (term * b / static_cast<double>(j)).eval();
    x += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  return x;
}

ShapeOperatorStack<double> stack_from_conn(
    const std::vector<Eigen::MatrixXd>& conn, int n, int l) {
  ShapeOperatorStack<double> st;
  st.n = n;
  st.l = l;
  st.A.assign(static_cast<std::size_t>(l), SquareMatrix<double>::Zero(n, n));
  for (int alpha = 0; alpha < l; ++alpha)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        st.A[static_cast<std::size_t>(alpha)](i, j) =
            -conn[static_cast<std::size_t>(j)](n + alpha, i);
  return st;
}

}  // namespace

double totally_geodesic_residual(const ChartGeometry& geom,
                                 const DistributionSpec& dist,
                                 const Eigen::VectorXd& p,
                                 const FdConfig& cfg) {
  const AdaptedFramePoint afp = adapted_frame(geom, dist, p, cfg);
  double worst = 0.0;
  for (int alpha = 0; alpha < afp.l; ++alpha)
    for (int beta = 0; beta < afp.l; ++beta)
      for (int i = 0; i < afp.n; ++i)
        worst = std::max(
            worst, std::abs(afp.conn[static_cast<std::size_t>(afp.n + alpha)](
                       afp.n + beta, i)));
  return worst;
}

double divergence_numeric(const ChartGeometry& geom,
                          const DistributionSpec& dist, int r,
                          const Eigen::VectorXd& p, const FdConfig& cfg) {
  const int m = geom.m;
  const int n = m - dist.l;
  detail::require_even(r, "divergence_numeric");
  if (r < 0 || r > n - 1)
    throw ValidationError("divergence_numeric: order " + std::to_string(r) +
                          " outside 0.." + std::to_string(n - 1));
  geom.require_inside(p);

  // Coordinate components of **S**_{r+1}; the assembled vector does not
  // depend on the frame used pointwise, so the field is smooth even where
  // the Gram-Schmidt frame is merely piecewise defined.
  auto weighted_component = [&](const Eigen::VectorXd& x, int k) {
    const AdaptedFramePoint a = adapted_frame(geom, dist, x, cfg);
    const NormalVector<double> s = mean_curvature_vector(a.stack, r);
    double zk = 0.0;
    for (int alpha = 0; alpha < a.l; ++alpha)
      zk += s.coeffs[static_cast<std::size_t>(alpha)] *
            a.frame(k, a.n + alpha);
    return geom.volume_density(x) * zk;
  };
  auto stencil = [&](double h) {
    double acc = 0.0;
    for (int k = 0; k < m; ++k) {
      Eigen::VectorXd xp = p, xm = p;
      xp[k] += h;
      xm[k] -= h;
      acc += (weighted_component(xp, k) - weighted_component(xm, k)) /
             (2.0 * h);
    }
    return acc / geom.volume_density(p);
  };
  double div = stencil(cfg.outer_step);
  if (cfg.richardson)
    div = (4.0 * stencil(cfg.outer_step / 2.0) - div) / 3.0;
  return div;
}

double theorem3_residual(const ChartGeometry& geom,
                         const DistributionSpec& dist, int r,
                         const Eigen::VectorXd& p, const FdConfig& cfg) {
  const double gate = totally_geodesic_residual(geom, dist, p, cfg);
  if (gate > cfg.geodesic_gate)
    throw HypothesisViolationError(
        geom.name + ": totally geodesic residual " + fmt(gate) +
        " exceeds the gate " + fmt(cfg.geodesic_gate));
  const ShapeOperatorStack<double> st = shape_operators(geom, dist, p, cfg);
  const double s_low = s_r_direct(st, r);
  const double s_high = s_r_direct(st, r + 2);
  const double rhs = -(r + 2) * s_high +
                     geom.curvature_c * (st.n - r) * (st.l + r) /
                         static_cast<double>(r + 1) * s_low;
  const double lhs = divergence_numeric(geom, dist, r, p, cfg);
  return std::abs(lhs - rhs);
}

Lemma2Result verify_lemma2(const ChartGeometry& geom,
                           const DistributionSpec& dist,
                           const Eigen::VectorXd& p, const FdConfig& cfg) {
  geom.require_inside(p);
  const int m = geom.m;
  const int l = dist.l;
  const int n = m - l;
  auto gs = [&](const Eigen::VectorXd& x) {
    return adapted_frame_matrix(geom, dist, x, 0, cfg.rank_tol);
  };
  // Step-halved extrapolation of the frame derivatives: the h^2 truncation
  // error grows with the frame's higher derivatives near chart
  // degeneracies and would otherwise dominate the gauge residual.
  auto extrapolated = [&](const std::function<Eigen::MatrixXd(
                              const Eigen::VectorXd&)>& field,
                          const Eigen::VectorXd& x) {
    FrameDerivatives coarse = frame_derivatives(geom, field, x, cfg.frame_step);
    const FrameDerivatives fine =
        frame_derivatives(geom, field, x, cfg.frame_step / 2.0);
    for (std::size_t k = 0; k < coarse.W.size(); ++k) {
      coarse.W[k] = (4.0 * fine.W[k] - coarse.W[k]) / 3.0;
      coarse.conn[k] = (4.0 * fine.conn[k] - coarse.conn[k]) / 3.0;
    }
    return coarse;
  };
  const FrameDerivatives base = extrapolated(gs, p);

  // First-order gauge: rotate by exp(sum_k (x - p)_k C_k) where C_k holds
  // the diagonal (D-D and F-F) blocks of W_k.  W_k is antisymmetric for an
  // orthonormal frame, so the rotation cancels exactly the in-D and in-F
  // connection coefficients at p.
  std::vector<Eigen::MatrixXd> gen(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m, m);
    c.topLeftCorner(n, n) =
        base.W[static_cast<std::size_t>(k)].topLeftCorner(n, n);
    c.bottomRightCorner(l, l) =
        base.W[static_cast<std::size_t>(k)].bottomRightCorner(l, l);
    gen[static_cast<std::size_t>(k)] = 0.5 * (c - c.transpose());
  }
  auto gauge = [&](const Eigen::VectorXd& x) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k < m; ++k)
      b += (x[k] - p[k]) * gen[static_cast<std::size_t>(k)];
    return (gs(x) * matrix_exp_taylor(b)).eval();
  };

  const FrameDerivatives fixed = extrapolated(gauge, p);
  Lemma2Result out;
  for (int a = 0; a < m; ++a) {
    const Eigen::MatrixXd& c = fixed.conn[static_cast<std::size_t>(a)];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out.gauge_residual = std::max(out.gauge_residual, std::abs(c(i, j)));
    for (int al = 0; al < l; ++al)
      for (int be = 0; be < l; ++be)
        out.gauge_residual =
            std::max(out.gauge_residual, std::abs(c(n + al, n + be)));
  }

  const Eigen::MatrixXd g0 = geom.metric(p);
  const auto christ = christoffel(geom, p);
  const ShapeOperatorStack<double> st0 = stack_from_conn(fixed.conn, n, l);
  auto stack_at = [&](const Eigen::VectorXd& x) {
    const FrameDerivatives fdx =
        frame_derivatives(geom, gauge, x, cfg.frame_step);
    return stack_from_conn(fdx.conn, n, l);
  };

  const double h = cfg.lemma2_step;
  for (int alpha = 0; alpha < l; ++alpha) {
    const Eigen::VectorXd dir = fixed.E.col(n + alpha);
    const ShapeOperatorStack<double> plus = stack_at(p + h * dir);
    const ShapeOperatorStack<double> minus = stack_at(p - h * dir);
    for (int beta = 0; beta < l; ++beta) {
      // Tangential part of nabla_{e_alpha} e_beta as a coordinate field.
      auto yfield = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        const FrameDerivatives fdx =
            frame_derivatives(geom, gauge, x, cfg.frame_step);
        Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
        for (int i = 0; i < n; ++i)
          y += fdx.conn[static_cast<std::size_t>(n + alpha)](n + beta, i) *
               fdx.E.col(i);
        return y;
      };
      const Eigen::VectorXd y0 = yfield(p);
      std::vector<Eigen::VectorXd> dy(static_cast<std::size_t>(m));
      for (int k = 0; k < m; ++k) {
        Eigen::VectorXd xp = p, xm = p;
        xp[k] += h;
        xm[k] -= h;
        dy[static_cast<std::size_t>(k)] = (yfield(xp) - yfield(xm)) / (2.0 * h);
      }

      const Eigen::MatrixXd product =
          st0.op(beta + 1) * st0.op(alpha + 1);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double lhs =
              (plus.A[static_cast<std::size_t>(beta)](i, j) -
               minus.A[static_cast<std::size_t>(beta)](i, j)) /
              (2.0 * h);
          double rhs = product(i, j);
          if (i == j && alpha == beta) rhs += geom.curvature_c;
          for (int gamma = 0; gamma < l; ++gamma)
            rhs += fixed.conn[static_cast<std::size_t>(n + alpha)](n + gamma,
                                                                   j) *
                   fixed.conn[static_cast<std::size_t>(n + gamma)](n + beta,
                                                                   i);
          // - <nabla_{e_j} (nabla_{e_alpha} e_beta)^T, e_i>
          Eigen::VectorXd cov = Eigen::VectorXd::Zero(m);
          for (int k = 0; k < m; ++k) {
            Eigen::VectorXd gamma_y(m);
            for (int a = 0; a < m; ++a)
              gamma_y[a] = christ[static_cast<std::size_t>(a)].row(k).dot(y0);
            cov += fixed.E(k, j) * (dy[static_cast<std::size_t>(k)] + gamma_y);
          }
          rhs -= fixed.E.col(i).dot(g0 * cov);
          out.identity_residual =
              std::max(out.identity_residual, std::abs(lhs - rhs));
        }
    }
  }
  return out;
}

}  // namespace newtoncurv
