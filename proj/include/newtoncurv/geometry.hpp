#pragma once

// Chart-based model Riemannian manifolds of constant sectional curvature
// carrying a distribution F (spanned by given fields) with orthogonal
// complement D: adapted orthonormal frames, pointwise shape-operator
// stacks, divergence residuals, the gauge-fixed derivative check, and total
// mean curvatures by tensor-product quadrature.

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "newtoncurv/errors.hpp"
#include "newtoncurv/stack.hpp"

namespace newtoncurv {

/// Chart box with a closed-form metric.  Built-in charts cover their
/// manifold up to measure zero.
struct ChartGeometry {
  std::string name;
  int m = 0;
  Eigen::VectorXd lo, hi;
  std::vector<bool> periodic;  ///< per-axis periodic identification
  double curvature_c = 0.0;    ///< pinned constant sectional curvature
  double known_volume = 0.0;   ///< closed-form volume of the manifold
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> metric;
  /// partials[k](i,j) = d g_ij / d x^k (closed-form for built-ins).
  std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&)>
      metric_partials;

  bool contains(const Eigen::VectorXd& p, double margin = 0.0) const;
  void require_inside(const Eigen::VectorXd& p) const;
  double volume_density(const Eigen::VectorXd& p) const;
};

/// Spanning fields for F; D is the orthogonal complement.
struct DistributionSpec {
  int l = 0;
  /// m x l matrix whose columns span F at the given point.
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> f_span;
};

struct ModelGeometry {
  ChartGeometry chart;
  DistributionSpec dist;
};

std::vector<std::string> builtin_geometry_names();
ModelGeometry make_builtin_geometry(const std::string& name);

/// Loads {"metric": "builtin:<name>", "f_rotation": [{"axes": [a, b],
/// "angle": t}, ...]}: a built-in geometry whose F-span columns are rotated
/// by constant coordinate-plane rotations.
ModelGeometry load_geometry_json(const nlohmann::json& doc);

/// Finite-difference configuration.  Steps are absolute (chart coordinates
/// of the built-ins are O(1) angles).
struct FdConfig {
  double frame_step = 1e-5;    ///< FD of frame fields and Christoffels
  double outer_step = 1e-4;    ///< FD of assembled fields (divergence)
  double lemma2_step = 1e-3;   ///< FD of shape operators along frame rays
  double geodesic_gate = 1e-6; ///< totally-geodesic hypothesis threshold
  double rank_tol = 1e-8;      ///< Gram-Schmidt rank threshold
  bool richardson = false;     ///< extrapolate the divergence stencil
};

/// Christoffel symbols; result[k](i,j) = Gamma^k_{ij}.
std::vector<Eigen::MatrixXd> christoffel(const ChartGeometry& geom,
                                         const Eigen::VectorXd& p);

/// Sectional curvature of the coordinate-expressed plane span(u, v).
double sectional_curvature(const ChartGeometry& geom, const Eigen::VectorXd& p,
                           const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Orthonormal adapted frame at p: columns 1..n span D, n+1..m span F,
/// orientation positive.  seed_variant rotates the Gram-Schmidt candidate
/// order for frame-independence checks.
Eigen::MatrixXd adapted_frame_matrix(const ChartGeometry& geom,
                                     const DistributionSpec& dist,
                                     const Eigen::VectorXd& p,
                                     int seed_variant = 0,
                                     double rank_tol = 1e-8);

/// First derivatives of an m-frame field along the chart coordinates.
struct FrameDerivatives {
  Eigen::MatrixXd E;                ///< frame at p (columns)
  std::vector<Eigen::MatrixXd> W;   ///< W[k](B,C) = <nabla_{d_k} e_B, e_C>
  std::vector<Eigen::MatrixXd> conn;///< conn[A](B,C) = <nabla_{e_A} e_B, e_C>
};

FrameDerivatives frame_derivatives(
    const ChartGeometry& geom,
    const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& field,
    const Eigen::VectorXd& p, double step);

/// Adapted frame with connection coefficients and the shape-operator stack
/// A^alpha{}^i_j = -<nabla_{e_j} e_{n+alpha}, e_i>.
struct AdaptedFramePoint {
  Eigen::VectorXd point;
  int n = 0, l = 0;
  Eigen::MatrixXd frame;
  std::vector<Eigen::MatrixXd> conn;
  ShapeOperatorStack<double> stack;
  double orthonormality_residual = 0.0;
};

AdaptedFramePoint adapted_frame(const ChartGeometry& geom,
                                const DistributionSpec& dist,
                                const Eigen::VectorXd& p,
                                const FdConfig& cfg = {},
                                int seed_variant = 0);

ShapeOperatorStack<double> shape_operators(const ChartGeometry& geom,
                                           const DistributionSpec& dist,
                                           const Eigen::VectorXd& p,
                                           const FdConfig& cfg = {},
                                           int seed_variant = 0);

/// max |<nabla_{e_alpha} e_beta, e_i>| over normal alpha, beta and
/// tangential i; zero iff F is totally geodesic at p.
double totally_geodesic_residual(const ChartGeometry& geom,
                                 const DistributionSpec& dist,
                                 const Eigen::VectorXd& p,
                                 const FdConfig& cfg = {});

/// Coordinate divergence of the mean curvature vector field of order r+1,
/// via central differences of sqrt(g) Z^k.
double divergence_numeric(const ChartGeometry& geom,
                          const DistributionSpec& dist, int r,
                          const Eigen::VectorXd& p, const FdConfig& cfg = {});

/// |div **S**_{r+1} - (-(r+2) S_{r+2} + c (n-r)(l+r)/(r+1) S_r)| at p.
/// Requires the totally geodesic gate to pass.
double theorem3_residual(const ChartGeometry& geom,
                         const DistributionSpec& dist, int r,
                         const Eigen::VectorXd& p, const FdConfig& cfg = {});

struct Lemma2Result {
  double gauge_residual = 0.0;     ///< max in-D / in-F connection entry at p
  double identity_residual = 0.0;  ///< max entry gap of the four-term identity
};

/// Gauge-fixes the adapted frame to first order at p and compares the
/// finite-difference derivative e_alpha(A^beta{}^i_j) against the four-term
/// right side (curvature term from the constant-c closed form).
Lemma2Result verify_lemma2(const ChartGeometry& geom,
                           const DistributionSpec& dist,
                           const Eigen::VectorXd& p, const FdConfig& cfg = {});

/// Tensor-product quadrature grid: composite two-point Gauss panels on
/// non-periodic axes, uniform midpoint rule on periodic ones.
struct QuadratureGrid {
  std::vector<Eigen::VectorXd> nodes;
  std::vector<double> weights;  ///< coordinate-box weights, no density
};

QuadratureGrid make_quadrature_grid(const ChartGeometry& geom, int resolution);

/// Integral of the field against the volume density over the chart.
double integrate_scalar(const ChartGeometry& geom,
                        const std::function<double(const Eigen::VectorXd&)>& f,
                        int resolution);

/// Total r-th mean curvature: the integral of S_r(p) over the manifold.
double total_mean_curvature(const ChartGeometry& geom,
                            const DistributionSpec& dist, int r,
                            int resolution, const FdConfig& cfg = {});

/// Closed-form total 2s-th mean curvature for constant curvature c >= 0:
/// the three-case binomial formula; generalized binomials are evaluated by
/// the product formula x(x-1)...(x-s+1)/s!.
double theorem2_closed_form(int n, int l, int s, double c, double vol);

/// |total(r+2) - c(n-r)(l+r)/((r+1)(r+2)) total(r)| / (1 + |total(r)|).
double corollary1_residual(const ChartGeometry& geom,
                           const DistributionSpec& dist, int r, int resolution,
                           const FdConfig& cfg = {});

}  // namespace newtoncurv
