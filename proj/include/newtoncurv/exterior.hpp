#pragma once

// Sparse exterior algebra on an oriented orthonormal m-frame, and the
// curvature n-forms Gamma_r built from connection data.  Forms are kept as
// maps from strictly increasing index tuples to coefficients; the wedge
// product merges tuples with a sign from inversion counting.

#include <map>
#include <vector>

#include "newtoncurv/curvature.hpp"
#include "newtoncurv/multiindex.hpp"
#include "newtoncurv/stack.hpp"

namespace newtoncurv {

class AlternatingForm {
 public:
  AlternatingForm(int m, int degree) : m_(m), degree_(degree) {
    if (m < 1) throw ValidationError("form: ambient dimension must be >= 1");
    if (degree < 0) throw ValidationError("form: degree must be >= 0");
  }

  /// Basis 1-form theta^a.
  static AlternatingForm theta(int m, int a) {
    AlternatingForm f(m, 1);
    if (a < 1 || a > m) throw ValidationError("theta: index out of range");
    f.coeffs_[{a}] = 1.0;
    return f;
  }

  /// Volume form theta^1 ^ ... ^ theta^m.
  static AlternatingForm volume(int m) {
    AlternatingForm f(m, m);
    IndexTuple all(static_cast<std::size_t>(m));
    for (int a = 1; a <= m; ++a) all[static_cast<std::size_t>(a - 1)] = a;
    f.coeffs_[all] = 1.0;
    return f;
  }

  int m() const { return m_; }
  int degree() const { return degree_; }
  const std::map<IndexTuple, double>& terms() const { return coeffs_; }

  /// Adds c times the basis form of the given strictly increasing tuple.
  void add_term(const IndexTuple& tuple, double c) {
    if (static_cast<int>(tuple.size()) != degree_)
      throw ValidationError("form: tuple length differs from degree");
    if (!is_strictly_increasing(tuple) ||
        (degree_ > 0 && (tuple.front() < 1 || tuple.back() > m_)))
      throw ValidationError("form: tuple must be strictly increasing in 1..m");
    const double v = (coeffs_[tuple] += c);
    if (v == 0.0) coeffs_.erase(tuple);
  }

  double coeff(const IndexTuple& tuple) const {
    auto it = coeffs_.find(tuple);
    return it == coeffs_.end() ? 0.0 : it->second;
  }

  AlternatingForm& operator+=(const AlternatingForm& other) {
    if (other.m_ != m_ || other.degree_ != degree_)
      throw ValidationError("form: shape mismatch in addition");
    for (const auto& [t, c] : other.coeffs_) add_term(t, c);
    return *this;
  }

  AlternatingForm operator*(double s) const {
    AlternatingForm out(m_, degree_);
    if (s != 0.0)
      for (const auto& [t, c] : coeffs_) out.coeffs_[t] = c * s;
    return out;
  }

 private:
  int m_, degree_;
  std::map<IndexTuple, double> coeffs_;
};

/// Exterior product.  Degrees add; degree > m gives the zero form.
inline AlternatingForm wedge(const AlternatingForm& f,
                             const AlternatingForm& g) {
  if (f.m() != g.m())
    throw ValidationError("wedge: ambient dimension mismatch");
  AlternatingForm out(f.m(), f.degree() + g.degree());
  if (out.degree() > out.m()) return out;
  IndexTuple merged;
  for (const auto& [tf, cf] : f.terms()) {
    for (const auto& [tg, cg] : g.terms()) {
      merged = tf;
      merged.insert(merged.end(), tg.begin(), tg.end());
      IndexTuple sorted = merged;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        continue;
      out.add_term(sorted, cf * cg * inversion_sign(merged));
    }
  }
  return out;
}

/// Connection data of an adapted frame: the mixed forms
/// omega^{i alpha} = -A^alpha{}^i_j theta^j + X^{i alpha}_beta theta^beta
/// (tangential part pinned to the stack, the normal part X free).
struct ConnectionData {
  ShapeOperatorStack<double> stack;
  /// X[alpha-1](i-1, beta-1) = X^{i alpha}_beta.
  std::vector<Eigen::MatrixXd> X;

  int n() const { return stack.n; }
  int l() const { return stack.l; }
  int m() const { return stack.n + stack.l; }

  void validate() const {
    stack.validate();
    if (X.size() != static_cast<std::size_t>(stack.l))
      throw ValidationError("connection: X must have one block per alpha");
    for (const auto& x : X)
      if (x.rows() != stack.n || x.cols() != stack.l || !x.allFinite())
        throw ValidationError("connection: X blocks must be finite n x l");
  }

  /// The 1-form omega^{i alpha} on the m-frame.
  AlternatingForm omega(int i, int alpha) const {
    AlternatingForm w(m(), 1);
    const auto& a = stack.op(alpha);
    for (int j = 1; j <= stack.n; ++j) {
      const double c = -a(i - 1, j - 1);
      if (c != 0.0) w.add_term({j}, c);
    }
    for (int beta = 1; beta <= stack.l; ++beta) {
      const double c = X[static_cast<std::size_t>(alpha - 1)](i - 1, beta - 1);
      if (c != 0.0) w.add_term({stack.n + beta}, c);
    }
    return w;
  }

  static ConnectionData from_stack(ShapeOperatorStack<double> st,
                                   std::vector<Eigen::MatrixXd> x) {
    ConnectionData c{std::move(st), std::move(x)};
    c.validate();
    return c;
  }

  static ConnectionData from_stack(ShapeOperatorStack<double> st) {
    std::vector<Eigen::MatrixXd> x(
        static_cast<std::size_t>(st.l),
        Eigen::MatrixXd::Zero(st.n, st.l));
    return from_stack(std::move(st), std::move(x));
  }
};

/// Random normal-part array for X-independence checks.
inline std::vector<Eigen::MatrixXd> random_normal_part(int n, int l,
                                                       std::uint64_t seed,
                                                       std::uint64_t trial) {
  TrialRng rng(seed, trial ^ 0xabcdef12345ULL);
  std::vector<Eigen::MatrixXd> x(static_cast<std::size_t>(l),
                                 Eigen::MatrixXd::Zero(n, l));
  for (auto& m : x)
    for (int i = 0; i < n; ++i)
      for (int b = 0; b < l; ++b) m(i, b) = rng.uniform_pm1();
  return x;
}

/// Largest frame dimension for which the permutation sum of gamma_r stays
/// interactive; callers above the library enforce it.
inline constexpr int kGammaMaxN = 7;

/// The curvature n-form Gamma_r: sum over all permutations sigma of {1..n}
/// and all beta assignments of
///   eps(sigma) (omega^{sigma(1) beta_1} ^ omega^{sigma(2) beta_1}) ^ ...
///   ^ (omega^{sigma(2s-1) beta_s} ^ omega^{sigma(2s) beta_s})
///   ^ theta^{sigma(2s+1)} ^ ... ^ theta^{sigma(n)}.
inline AlternatingForm gamma_r(const ConnectionData& conn, int r) {
  conn.validate();
  const int n = conn.n();
  const int l = conn.l();
  const int m = conn.m();
  if (r < 0 || r > n)
    throw ValidationError("gamma_r: order " + std::to_string(r) +
                          " outside 0.." + std::to_string(n));
  detail::require_even(r, "gamma_r");
  const int s = r / 2;

  // Cache the omega and theta 1-forms.
  std::vector<std::vector<AlternatingForm>> om;
  om.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    std::vector<AlternatingForm> row;
    row.reserve(static_cast<std::size_t>(l));
    for (int alpha = 1; alpha <= l; ++alpha) row.push_back(conn.omega(i, alpha));
    om.push_back(std::move(row));
  }
  std::vector<AlternatingForm> th;
  th.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) th.push_back(AlternatingForm::theta(m, i));

  AlternatingForm acc(m, n);
  std::vector<int> sigma(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) sigma[static_cast<std::size_t>(i)] = i + 1;
  std::vector<int> beta(static_cast<std::size_t>(s), 1);
  do {
    const int eps = inversion_sign(sigma);
    // Iterate all beta in {1..l}^s by odometer.
    std::fill(beta.begin(), beta.end(), 1);
    while (true) {
      AlternatingForm term(m, 0);
      term.add_term({}, static_cast<double>(eps));
      for (int p = 0; p < s; ++p) {
        const int b = beta[static_cast<std::size_t>(p)];
        term = wedge(term, om[static_cast<std::size_t>(
                                sigma[static_cast<std::size_t>(2 * p)] - 1)]
                               [static_cast<std::size_t>(b - 1)]);
        term = wedge(term, om[static_cast<std::size_t>(
                                sigma[static_cast<std::size_t>(2 * p + 1)] - 1)]
                               [static_cast<std::size_t>(b - 1)]);
      }
      for (int q = 2 * s; q < n; ++q)
        term = wedge(term, th[static_cast<std::size_t>(
                               sigma[static_cast<std::size_t>(q)] - 1)]);
      acc += term;
      int p = s - 1;
      while (p >= 0 && beta[static_cast<std::size_t>(p)] == l) {
        beta[static_cast<std::size_t>(p)] = 1;
        --p;
      }
      if (p < 0) break;
      ++beta[static_cast<std::size_t>(p)];
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return acc;
}

/// Coefficient of theta^1 ^ ... ^ theta^m; the form must have top degree.
inline double top_coefficient(const AlternatingForm& f) {
  if (f.degree() != f.m())
    throw ValidationError("top_coefficient: form does not have top degree");
  IndexTuple all(static_cast<std::size_t>(f.m()));
  for (int a = 1; a <= f.m(); ++a) all[static_cast<std::size_t>(a - 1)] = a;
  return f.coeff(all);
}

/// |top(Gamma_r ^ nu) / (r! (n-r)!) - S_r| for the given stack and normal
/// part X; the X terms must drop against nu = theta^{n+1} ^ ... ^ theta^m.
inline double verify_theorem1(const ShapeOperatorStack<double>& stack,
                              const std::vector<Eigen::MatrixXd>& X, int r) {
  ConnectionData conn = ConnectionData::from_stack(stack, X);
  const int n = conn.n();
  const int m = conn.m();
  AlternatingForm nu(m, 0);
  nu.add_term({}, 1.0);
  for (int beta = 1; beta <= conn.l(); ++beta)
    nu = wedge(nu, AlternatingForm::theta(m, n + beta));
  const AlternatingForm top = wedge(gamma_r(conn, r), nu);
  const double lhs = top_coefficient(top) /
                     static_cast<double>(factorial(r) * factorial(n - r));
  const double rhs = s_r_direct(stack, r);
  return std::abs(lhs - rhs);
}

}  // namespace newtoncurv
