#include <cmath>

#include "newtoncurv/geometry.hpp"

namespace newtoncurv {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::VectorXd vec3(double a, double b, double c) {
  Eigen::VectorXd v(3);
  v << a, b, c;
  return v;
}

// Round S^3 in Hopf coordinates (eta, xi1, xi2):
// (z1, z2) = (cos(eta) e^{i xi1}, sin(eta) e^{i xi2}),
// ds^2 = d eta^2 + cos^2(eta) d xi1^2 + sin^2(eta) d xi2^2.
// The fibers of the Hopf field d_xi1 + d_xi2 are unit great circles.
ModelGeometry hopf_s3() {
  ModelGeometry g;
  g.chart.name = "hopf-s3";
  g.chart.m = 3;
  g.chart.lo = vec3(0.0, 0.0, 0.0);
  g.chart.hi = vec3(kPi / 2.0, 2.0 * kPi, 2.0 * kPi);
  g.chart.periodic = {false, true, true};
  g.chart.curvature_c = 1.0;
  g.chart.known_volume = 2.0 * kPi * kPi;
  g.chart.metric = [](const Eigen::VectorXd& p) {
    const double c = std::cos(p[0]);
    const double s = std::sin(p[0]);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    m(0, 0) = 1.0;
    m(1, 1) = c * c;
    m(2, 2) = s * s;
    return m;
  };
  g.chart.metric_partials = [](const Eigen::VectorXd& p) {
    const double c = std::cos(p[0]);
    const double s = std::sin(p[0]);
    std::vector<Eigen::MatrixXd> d(3, Eigen::MatrixXd::Zero(3, 3));
    d[0](1, 1) = -2.0 * c * s;
    d[0](2, 2) = 2.0 * s * c;
    return d;
  };
  g.dist.l = 1;
  g.dist.f_span = [](const Eigen::VectorXd&) {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(3, 1);
    f(1, 0) = 1.0;
    f(2, 0) = 1.0;
    return f;
  };
  return g;
}

// Round S^5 in nested Hopf coordinates (t1, t2, p1, p2, p3):
// (z1, z2, z3) = (cos t1 e^{i p1}, sin t1 cos t2 e^{i p2},
//                 sin t1 sin t2 e^{i p3}),
// ds^2 = dt1^2 + sin^2 t1 dt2^2 + cos^2 t1 dp1^2
//        + sin^2 t1 cos^2 t2 dp2^2 + sin^2 t1 sin^2 t2 dp3^2.
// The Hopf field d_p1 + d_p2 + d_p3 is unit with great-circle fibers.
ModelGeometry hopf_s5() {
  ModelGeometry g;
  g.chart.name = "hopf-s5";
  g.chart.m = 5;
  g.chart.lo = Eigen::VectorXd::Zero(5);
  Eigen::VectorXd hi(5);
  hi << kPi / 2.0, kPi / 2.0, 2.0 * kPi, 2.0 * kPi, 2.0 * kPi;
  g.chart.hi = hi;
  g.chart.periodic = {false, false, true, true, true};
  g.chart.curvature_c = 1.0;
  g.chart.known_volume = kPi * kPi * kPi;
  g.chart.metric = [](const Eigen::VectorXd& p) {
    const double s1 = std::sin(p[0]), c1 = std::cos(p[0]);
    const double s2 = std::sin(p[1]), c2 = std::cos(p[1]);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(5, 5);
    m(0, 0) = 1.0;
    m(1, 1) = s1 * s1;
    m(2, 2) = c1 * c1;
    m(3, 3) = s1 * s1 * c2 * c2;
    m(4, 4) = s1 * s1 * s2 * s2;
    return m;
  };
  g.chart.metric_partials = [](const Eigen::VectorXd& p) {
    const double s1 = std::sin(p[0]), c1 = std::cos(p[0]);
    const double s2 = std::sin(p[1]), c2 = std::cos(p[1]);
    std::vector<Eigen::MatrixXd> d(5, Eigen::MatrixXd::Zero(5, 5));
    d[0](1, 1) = 2.0 * s1 * c1;
    d[0](2, 2) = -2.0 * c1 * s1;
    d[0](3, 3) = 2.0 * s1 * c1 * c2 * c2;
    d[0](4, 4) = 2.0 * s1 * c1 * s2 * s2;
    d[1](3, 3) = -2.0 * s1 * s1 * c2 * s2;
    d[1](4, 4) = 2.0 * s1 * s1 * s2 * c2;
    return d;
  };
  g.dist.l = 1;
  g.dist.f_span = [](const Eigen::VectorXd&) {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(5, 1);
    f(2, 0) = 1.0;
    f(3, 0) = 1.0;
    f(4, 0) = 1.0;
    return f;
  };
  return g;
}

// Unit cube with all faces identified; F the vertical linear foliation.
ModelGeometry flat_torus() {
  ModelGeometry g;
  g.chart.name = "flat-torus";
  g.chart.m = 3;
  g.chart.lo = vec3(0.0, 0.0, 0.0);
  g.chart.hi = vec3(1.0, 1.0, 1.0);
  g.chart.periodic = {true, true, true};
  g.chart.curvature_c = 0.0;
  g.chart.known_volume = 1.0;
  g.chart.metric = [](const Eigen::VectorXd&) {
    return Eigen::MatrixXd::Identity(3, 3).eval();
  };
  g.chart.metric_partials = [](const Eigen::VectorXd&) {
    return std::vector<Eigen::MatrixXd>(3, Eigen::MatrixXd::Zero(3, 3));
  };
  g.dist.l = 1;
  g.dist.f_span = [](const Eigen::VectorXd&) {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(3, 1);
    f(2, 0) = 1.0;
    return f;
  };
  return g;
}

// Negative control: flat metric but F tilts with height, so its integral
// curves are not geodesics and the totally-geodesic gate must fire.
ModelGeometry tilted_torus() {
  ModelGeometry g = flat_torus();
  g.chart.name = "tilted-torus";
  g.dist.f_span = [](const Eigen::VectorXd& p) {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(3, 1);
    f(0, 0) = 0.5 * std::sin(2.0 * kPi * p[2]);
    f(2, 0) = 1.0;
    return f;
  };
  return g;
}

}  // namespace

bool ChartGeometry::contains(const Eigen::VectorXd& p, double margin) const {
  if (p.size() != m) return false;
  for (int k = 0; k < m; ++k) {
    if (periodic[static_cast<std::size_t>(k)]) continue;
    if (p[k] < lo[k] + margin || p[k] > hi[k] - margin) return false;
  }
  return true;
}

void ChartGeometry::require_inside(const Eigen::VectorXd& p) const {
  if (!contains(p))
    throw ChartDomainError(name + ": point outside the chart domain");
}

double ChartGeometry::volume_density(const Eigen::VectorXd& p) const {
  const Eigen::MatrixXd g = metric(p);
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError(name + ": metric is not symmetric");
  const double det = g.determinant();
  if (!(det > 0.0))
    throw ValidationError(name + ": metric is not positive definite");
  return std::sqrt(det);
}

std::vector<std::string> builtin_geometry_names() {
  return {"hopf-s3", "hopf-s5", "flat-torus", "tilted-torus"};
}

ModelGeometry make_builtin_geometry(const std::string& name) {
  if (name == "hopf-s3") return hopf_s3();
  if (name == "hopf-s5") return hopf_s5();
  if (name == "flat-torus") return flat_torus();
  if (name == "tilted-torus") return tilted_torus();
  std::string known;
  for (const auto& n : builtin_geometry_names())
    known += (known.empty() ? "" : ", ") + n;
  throw LookupError("unknown geometry '" + name + "'; available: " + known);
}

ModelGeometry load_geometry_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("metric"))
    throw ValidationError("geometry spec: expected an object with 'metric'");
  const std::string metric = doc.at("metric").get<std::string>();
  const std::string prefix = "builtin:";
  if (metric.rfind(prefix, 0) != 0)
    throw ValidationError(
        "geometry spec: metric must be 'builtin:<name>' (custom metrics are "
        "not supported)");
  ModelGeometry g = make_builtin_geometry(metric.substr(prefix.size()));
  g.chart.name = "custom:" + g.chart.name;

  Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(g.chart.m, g.chart.m);
  if (doc.contains("f_rotation")) {
    const auto& rots = doc.at("f_rotation");
    if (!rots.is_array())
      throw ValidationError("geometry spec: f_rotation must be an array");
    for (const auto& r : rots) {
      if (!r.is_object() || !r.contains("axes") || !r.contains("angle"))
        throw ValidationError(
            "geometry spec: each rotation needs 'axes' and 'angle'");
      const auto axes = r.at("axes").get<std::vector<int>>();
      const double angle = r.at("angle").get<double>();
      if (axes.size() != 2 || axes[0] == axes[1])
        throw ValidationError("geometry spec: axes must be two distinct");
      for (int a : axes)
        if (a < 1 || a > g.chart.m)
          throw ValidationError("geometry spec: axis outside 1..m");
      Eigen::MatrixXd plane =
          Eigen::MatrixXd::Identity(g.chart.m, g.chart.m);
      const int a = axes[0] - 1, b = axes[1] - 1;
      plane(a, a) = std::cos(angle);
      plane(b, b) = std::cos(angle);
      plane(a, b) = -std::sin(angle);
      plane(b, a) = std::sin(angle);
      rot = (plane * rot).eval();
    }
  }
  const auto base = g.dist.f_span;
  g.dist.f_span = [base, rot](const Eigen::VectorXd& p) {
    return (rot * base(p)).eval();
  };
  return g;
}

}  // namespace newtoncurv
