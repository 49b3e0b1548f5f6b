#pragma once

// Shape operator stacks: the tangential Weingarten data of a distribution of
// rank n and codimension l, stored as l dense n x n matrices with
// A[alpha-1](i-1, j-1) = A^alpha{}^i_j (row = upper index).  Operators are in
// general non-symmetric.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "newtoncurv/errors.hpp"
#include "newtoncurv/rng.hpp"

namespace newtoncurv {

template <class Scalar>
using SquareMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
struct ShapeOperatorStack {
  int n = 0;  ///< rank of the distribution
  int l = 0;  ///< codimension
  std::vector<SquareMatrix<Scalar>> A;

  static ShapeOperatorStack zero(int n, int l) {
    ShapeOperatorStack st;
    st.n = n;
    st.l = l;
    st.A.assign(static_cast<std::size_t>(l),
                SquareMatrix<Scalar>::Zero(n, n));
    return st;
  }

  /// Operator of the alpha-th normal direction, alpha in 1..l.
  const SquareMatrix<Scalar>& op(int alpha) const {
    if (alpha < 1 || alpha > l)
      throw ValidationError("stack: normal index " + std::to_string(alpha) +
                            " outside 1.." + std::to_string(l));
    return A[static_cast<std::size_t>(alpha - 1)];
  }

  void validate() const {
    if (n < 1 || l < 1)
      throw ValidationError("stack: n and l must be positive");
    if (A.size() != static_cast<std::size_t>(l))
      throw ValidationError("stack: expected " + std::to_string(l) +
                            " operators, got " + std::to_string(A.size()));
    for (const auto& a : A) {
      if (a.rows() != n || a.cols() != n)
        throw ValidationError("stack: operator is not " + std::to_string(n) +
                              "x" + std::to_string(n));
      if constexpr (std::is_floating_point_v<Scalar>) {
        if (!a.allFinite())
          throw ValidationError("stack: operator has non-finite entries");
      }
    }
  }
};

/// Stack with independent uniform [-1,1) entries, keyed by (seed, trial).
inline ShapeOperatorStack<double> random_stack(int n, int l,
                                               std::uint64_t seed,
                                               std::uint64_t trial) {
  TrialRng rng(seed, trial);
  auto st = ShapeOperatorStack<double>::zero(n, l);
  for (auto& a : st.A)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = rng.uniform_pm1();
  return st;
}

/// Stack with dyadic entries k/denom, |k| <= 2*denom, exactly representable
/// in both double and rational scalars; useful for cross-checking paths.
template <class Scalar>
ShapeOperatorStack<Scalar> random_stack_dyadic(int n, int l,
                                               std::uint64_t seed,
                                               std::uint64_t trial,
                                               int denom = 32) {
  TrialRng rng(seed, trial);
  auto st = ShapeOperatorStack<Scalar>::zero(n, l);
  for (auto& a : st.A)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        a(i, j) = Scalar(rng.uniform_int(-2 * denom, 2 * denom)) / Scalar(denom);
  return st;
}

/// Conjugates every operator by a rotation of the tangent frame whose columns
/// are the new basis vectors: A^alpha -> Q^T A^alpha Q.  Q must be orthogonal.
template <class Scalar>
ShapeOperatorStack<Scalar> rotate_tangent(const ShapeOperatorStack<Scalar>& st,
                                          const SquareMatrix<Scalar>& Q) {
  if (Q.rows() != st.n || Q.cols() != st.n)
    throw ValidationError("rotate_tangent: rotation is not n x n");
  ShapeOperatorStack<Scalar> out = st;
  for (auto& a : out.A) a = (Q.transpose() * a * Q).eval();
  return out;
}

/// Mixes the normal frame, new e_alpha = sum_beta R(beta,alpha) e_beta:
/// new A^alpha = sum_beta R(beta,alpha) A^beta.  R must be orthogonal l x l.
template <class Scalar>
ShapeOperatorStack<Scalar> rotate_normal(const ShapeOperatorStack<Scalar>& st,
                                         const SquareMatrix<Scalar>& R) {
  if (R.rows() != st.l || R.cols() != st.l)
    throw ValidationError("rotate_normal: rotation is not l x l");
  ShapeOperatorStack<Scalar> out = ShapeOperatorStack<Scalar>::zero(st.n, st.l);
  out.A = std::vector<SquareMatrix<Scalar>>(
      static_cast<std::size_t>(st.l), SquareMatrix<Scalar>::Zero(st.n, st.n));
  for (int alpha = 0; alpha < st.l; ++alpha)
    for (int beta = 0; beta < st.l; ++beta)
      out.A[static_cast<std::size_t>(alpha)] +=
          R(beta, alpha) * st.A[static_cast<std::size_t>(beta)];
  return out;
}

/// Random orthogonal matrix built from plane rotations with Pythagorean
/// cosine/sine pairs and random axis sign flips.  Exactly orthogonal over
/// rational scalars; orthogonal to rounding over double.
template <class Scalar>
SquareMatrix<Scalar> pythagorean_orthogonal(int d, TrialRng& rng) {
  static constexpr int kTriples[][3] = {{3, 4, 5}, {5, 12, 13}, {8, 15, 17},
                                        {20, 21, 29}, {7, 24, 25}};
  SquareMatrix<Scalar> Q = SquareMatrix<Scalar>::Identity(d, d);
  for (int i = 0; i < d; ++i)
    if (rng.uniform_int(0, 1) == 1) Q(i, i) = Scalar(-1);
  const int sweeps = 2 * d;
  for (int s = 0; s < sweeps && d >= 2; ++s) {
    int a = rng.uniform_int(0, d - 1);
    int b = rng.uniform_int(0, d - 2);
    if (b >= a) ++b;
    const auto& t = kTriples[rng.uniform_int(0, 4)];
    const Scalar c = Scalar(t[0]) / Scalar(t[2]);
    const Scalar sn = Scalar(t[1]) / Scalar(t[2]);
    SquareMatrix<Scalar> G = SquareMatrix<Scalar>::Identity(d, d);
    G(a, a) = c;
    G(b, b) = c;
    G(a, b) = -sn;
    G(b, a) = sn;
    Q = (Q * G).eval();
  }
  return Q;
}

/// Serializes a stack as {"n":..., "l":..., "A":[[[...]]]} with
/// A[alpha-1][i-1][j-1] = A^alpha{}^i_j.
inline nlohmann::json stack_to_json(const ShapeOperatorStack<double>& st) {
  st.validate();
  nlohmann::json a = nlohmann::json::array();
  for (const auto& m : st.A) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < st.n; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < st.n; ++j) row.push_back(m(i, j));
      rows.push_back(std::move(row));
    }
    a.push_back(std::move(rows));
  }
  return nlohmann::json{{"n", st.n}, {"l", st.l}, {"A", std::move(a)}};
}

inline ShapeOperatorStack<double> stack_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("l") ||
      !doc.contains("A"))
    throw ValidationError("stack: document must carry n, l and A");
  const int n = doc.at("n").get<int>();
  const int l = doc.at("l").get<int>();
  if (n < 1 || l < 1) throw ValidationError("stack: n and l must be positive");
  const auto& a = doc.at("A");
  if (!a.is_array() || a.size() != static_cast<std::size_t>(l))
    throw ValidationError("stack: A must list one operator per codimension");
  auto st = ShapeOperatorStack<double>::zero(n, l);
  for (int alpha = 0; alpha < l; ++alpha) {
    const auto& rows = a.at(static_cast<std::size_t>(alpha));
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n))
      throw ValidationError("stack: operator " + std::to_string(alpha + 1) +
                            " must have n rows");
    for (int i = 0; i < n; ++i) {
      const auto& row = rows.at(static_cast<std::size_t>(i));
      if (!row.is_array() || row.size() != static_cast<std::size_t>(n))
        throw ValidationError("stack: operator " + std::to_string(alpha + 1) +
                              " row " + std::to_string(i + 1) +
                              " must have n entries");
      for (int j = 0; j < n; ++j) {
        const double v = row.at(static_cast<std::size_t>(j)).get<double>();
        if (!std::isfinite(v))
          throw ValidationError("stack: non-finite entry");
        st.A[static_cast<std::size_t>(alpha)](i, j) = v;
      }
    }
  }
  return st;
}

}  // namespace newtoncurv
