#pragma once

// Higher-order mean curvatures of a distribution from its shape-operator
// stack: the scalars S_r, the generalized Newton transformations T_r and
// T_q^alpha, slot tensors with free index pairs, and the mean curvature
// vector field.  Everything reduces to one antisymmetrized contraction
// engine over the pairings <B_{i1}^{j1}, B_{i2}^{j2}>.
//
// Orders follow the convention of the underlying formulas: the scalar and
// matrix quantities exist for even r only (odd-order contractions of a
// non-symmetric stack are not frame invariant), the alpha-variant T_q^alpha
// for odd q.  Conventions S_0 = 1, S_{n+1} = 0, T_0 = I, T_n = 0.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "newtoncurv/multiindex.hpp"
#include "newtoncurv/stack.hpp"

namespace newtoncurv {

template <class Scalar>
struct NewtonTransform {
  int order = 0;
  std::optional<int> alpha;  ///< set for the odd-order variant T_q^alpha
  SquareMatrix<Scalar> matrix;
};

template <class Scalar>
struct NormalVector {
  std::vector<Scalar> coeffs;  ///< components along e_{n+1}..e_m

  Scalar norm_squared() const {
    Scalar s(0);
    for (const Scalar& c : coeffs) s += c * c;
    return s;
  }
};

/// Contraction of order r with `rank` extra free upper/lower slot pairs,
/// dense over all 1-based slot index combinations.  Antisymmetric under
/// swapping two upper (or two lower) slot indices.
template <class Scalar>
class SlotTensor {
 public:
  SlotTensor(int n, int order, int rank)
      : n_(n), order_(order), rank_(rank) {
    if (n < 1) throw ValidationError("slot tensor: n must be positive");
    if (rank != 2 && rank != 3)
      throw ValidationError("slot tensor: rank must be 2 or 3");
    std::size_t size = 1;
    for (int k = 0; k < 2 * rank; ++k) size *= static_cast<std::size_t>(n);
    values_.assign(size, Scalar(0));
  }

  int n() const { return n_; }
  int order() const { return order_; }
  int rank() const { return rank_; }

  Scalar& at(const IndexTuple& upper, const IndexTuple& lower) {
    return values_[offset(upper, lower)];
  }
  const Scalar& at(const IndexTuple& upper, const IndexTuple& lower) const {
    return values_[offset(upper, lower)];
  }

 private:
  std::size_t offset(const IndexTuple& upper, const IndexTuple& lower) const {
    if (static_cast<int>(upper.size()) != rank_ ||
        static_cast<int>(lower.size()) != rank_)
      throw ValidationError("slot tensor: expected " + std::to_string(rank_) +
                            " upper and lower indices");
    std::size_t idx = 0;
    for (int v : upper) {
      if (v < 1 || v > n_)
        throw ValidationError("slot tensor: index out of range");
      idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v - 1);
    }
    for (int v : lower) {
      if (v < 1 || v > n_)
        throw ValidationError("slot tensor: index out of range");
      idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v - 1);
    }
    return idx;
  }

  int n_, order_, rank_;
  std::vector<Scalar> values_;
};

namespace detail {

inline void require_even(int r, const std::string& what) {
  if (r % 2 != 0)
    throw UnsupportedOrderError(what + ": order " + std::to_string(r) +
                                " is odd; defined for even orders only");
}

inline void require_odd(int q, const std::string& what) {
  if (q % 2 == 0)
    throw UnsupportedOrderError(what + ": order " + std::to_string(q) +
                                " is even; defined for odd orders only");
}

/// Memoized pairings b(i1,j1,i2,j2) = sum_alpha A^alpha{}^{j1}_{i1}
/// A^alpha{}^{j2}_{i2}; built once per stack, immutable afterwards.
template <class Scalar>
class PairingTable {
 public:
  explicit PairingTable(const ShapeOperatorStack<Scalar>& st)
      : n_(static_cast<std::size_t>(st.n)) {
    tab_.assign(n_ * n_ * n_ * n_, Scalar(0));
    for (int a = 0; a < st.l; ++a) {
      const auto& m = st.A[static_cast<std::size_t>(a)];
      for (int i1 = 1; i1 <= st.n; ++i1)
        for (int j1 = 1; j1 <= st.n; ++j1)
          for (int i2 = 1; i2 <= st.n; ++i2)
            for (int j2 = 1; j2 <= st.n; ++j2)
              tab_[pos(i1, j1, i2, j2)] += m(j1 - 1, i1 - 1) * m(j2 - 1, i2 - 1);
    }
  }

  const Scalar& b(int i1, int j1, int i2, int j2) const {
    return tab_[pos(i1, j1, i2, j2)];
  }

 private:
  std::size_t pos(int i1, int j1, int i2, int j2) const {
    return ((static_cast<std::size_t>(i1 - 1) * n_ +
             static_cast<std::size_t>(j1 - 1)) *
                n_ +
            static_cast<std::size_t>(i2 - 1)) *
               n_ +
           static_cast<std::size_t>(j2 - 1);
  }

  std::size_t n_;
  std::vector<Scalar> tab_;
};

inline bool has_duplicate(IndexTuple t) {
  std::sort(t.begin(), t.end());
  return std::adjacent_find(t.begin(), t.end()) != t.end();
}

inline void check_index_range(const IndexTuple& t, int n, const char* what) {
  for (int v : t)
    if (v < 1 || v > n)
      throw ValidationError(std::string(what) + ": index " +
                            std::to_string(v) + " outside 1.." +
                            std::to_string(n));
}

/// All arrangements (a1,b1,a2,b2,...) of the sorted `values` into pairs with
/// a_p < b_p and a_1 < a_2 < ..., i.e. one representative per orbit of the
/// pair-swap/pair-permute group.
inline void enumerate_matchings(const std::vector<int>& values,
                                std::vector<std::vector<int>>& out) {
  out.clear();
  const std::size_t k = values.size();
  if (k == 0) {
    out.emplace_back();
    return;
  }
  std::vector<bool> used(k, false);
  std::vector<int> current;
  current.reserve(k);
  auto rec = [&](auto&& self) -> void {
    std::size_t a = 0;
    while (a < k && used[a]) ++a;
    if (a == k) {
      out.push_back(current);
      return;
    }
    used[a] = true;
    current.push_back(values[a]);
    for (std::size_t b = a + 1; b < k; ++b) {
      if (used[b]) continue;
      used[b] = true;
      current.push_back(values[b]);
      self(self);
      current.pop_back();
      used[b] = false;
    }
    current.pop_back();
    used[a] = false;
  };
  rec(rec);
}

/// Core contraction: sums delta^{(contracted, upper_free)}_{(contracted',
/// lower_free)} times s_pairs pairings b(.) and, when bare_alpha > 0, one
/// bare factor A^{bare_alpha}{}^{j_bare}_{i_bare} on the last contracted
/// slot.  All contracted indices run over 1..n.  Returns the raw sum; the
/// callers divide by the order factorial.
///
/// The sum over upper arrangements is reduced to canonical matchings: the
/// summand and the sign product are invariant under the simultaneous
/// pair-swap/pair-permute action on upper and lower slots, the action is
/// free, so one canonical upper representative times 2^s s! covers the orbit
/// while the lower arrangement still runs over all permutations.
template <class Scalar>
Scalar delta_contract(const ShapeOperatorStack<Scalar>& st,
                      const PairingTable<Scalar>& bt, int s_pairs,
                      int bare_alpha, const IndexTuple& upper_free,
                      const IndexTuple& lower_free) {
  const int n = st.n;
  if (upper_free.size() != lower_free.size())
    throw ValidationError("delta_contract: free tuple lengths differ");
  check_index_range(upper_free, n, "delta_contract");
  check_index_range(lower_free, n, "delta_contract");
  const int k = 2 * s_pairs + (bare_alpha != 0 ? 1 : 0);
  const int u = static_cast<int>(upper_free.size());
  const int t = k + u;
  if (t > n) return Scalar(0);
  if (has_duplicate(upper_free) || has_duplicate(lower_free)) return Scalar(0);

  // Index sets the contraction must cover: both free tuples draw from the
  // same value set K.
  IndexTuple required = upper_free;
  required.insert(required.end(), lower_free.begin(), lower_free.end());
  std::sort(required.begin(), required.end());
  required.erase(std::unique(required.begin(), required.end()),
                 required.end());
  if (static_cast<int>(required.size()) > t) return Scalar(0);

  std::vector<int> complement;
  complement.reserve(static_cast<std::size_t>(n));
  for (int v = 1; v <= n; ++v)
    if (!std::binary_search(required.begin(), required.end(), v))
      complement.push_back(v);
  const int need = t - static_cast<int>(required.size());

  auto signed_concat = [](const std::vector<int>& arr,
                          const IndexTuple& fixed) {
    std::vector<int> seq = arr;
    seq.insert(seq.end(), fixed.begin(), fixed.end());
    return inversion_sign(seq);
  };

  Scalar total(0);
  for (const IndexTuple& pick :
       IncreasingTuples(static_cast<int>(complement.size()), need)) {
    std::vector<int> K = required;
    for (int e : pick)
      K.push_back(complement[static_cast<std::size_t>(e - 1)]);
    std::sort(K.begin(), K.end());

    auto minus = [&](const IndexTuple& drop) {
      std::vector<int> out;
      out.reserve(K.size());
      for (int v : K)
        if (std::find(drop.begin(), drop.end(), v) == drop.end())
          out.push_back(v);
      return out;
    };
    const std::vector<int> vu = minus(upper_free);
    const std::vector<int> vl = minus(lower_free);

    // Canonical upper arrangements with their delta signs.
    std::vector<std::pair<std::vector<int>, int>> uppers;
    std::vector<std::vector<int>> matchings;
    if (bare_alpha != 0) {
      std::vector<int> rest;
      rest.reserve(vu.size());
      for (std::size_t b = 0; b < vu.size(); ++b) {
        rest.assign(vu.begin(), vu.end());
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(b));
        enumerate_matchings(rest, matchings);
        for (auto& m : matchings) {
          m.push_back(vu[b]);
          uppers.emplace_back(m, signed_concat(m, upper_free));
        }
      }
    } else {
      enumerate_matchings(vu, matchings);
      for (auto& m : matchings)
        uppers.emplace_back(m, signed_concat(m, upper_free));
    }

    // Lower arrangements run over all permutations of vl.
    std::vector<int> lower = vl;
    Scalar block(0);
    do {
      const int sign_l = signed_concat(lower, lower_free);
      for (const auto& [arr, sign_u] : uppers) {
        Scalar w(sign_u * sign_l);
        for (int p = 0; p < s_pairs; ++p)
          w *= bt.b(arr[static_cast<std::size_t>(2 * p)],
                    lower[static_cast<std::size_t>(2 * p)],
                    arr[static_cast<std::size_t>(2 * p + 1)],
                    lower[static_cast<std::size_t>(2 * p + 1)]);
        if (bare_alpha != 0)
          w *= st.A[static_cast<std::size_t>(bare_alpha - 1)](
              lower[static_cast<std::size_t>(k - 1)] - 1,
              arr[static_cast<std::size_t>(k - 1)] - 1);
        block += w;
      }
    } while (std::next_permutation(lower.begin(), lower.end()));
    total += block;
  }
  const long long multiplicity = (1LL << s_pairs) * factorial(s_pairs);
  return total * Scalar(multiplicity);
}

/// Determinant by Laplace expansion along the first row; scalar-generic
/// (no pivoting, exact over rationals).  Intended for small matrices.
template <class Scalar>
Scalar determinant_laplace(const SquareMatrix<Scalar>& a) {
  const Eigen::Index d = a.rows();
  if (d == 0) return Scalar(1);
  if (d == 1) return a(0, 0);
  if (d == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  Scalar det(0);
  SquareMatrix<Scalar> sub(d - 1, d - 1);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index i = 1; i < d; ++i)
      for (Eigen::Index j = 0, sj = 0; j < d; ++j)
        if (j != c) sub(i - 1, sj++) = a(i, j);
    const Scalar term = a(0, c) * determinant_laplace(sub);
    if (c % 2 == 0)
      det += term;
    else
      det -= term;
  }
  return det;
}

}  // namespace detail

/// Pairing <B_{i1}^{j1}, B_{i2}^{j2}> = sum_alpha A^alpha{}^{j1}_{i1}
/// A^alpha{}^{j2}_{i2}.  Symmetric under swapping the two index pairs.
template <class Scalar>
Scalar b_inner(const ShapeOperatorStack<Scalar>& st, int i1, int j1, int i2,
               int j2) {
  st.validate();
  detail::check_index_range({i1, j1, i2, j2}, st.n, "b_inner");
  Scalar acc(0);
  for (const auto& m : st.A)
    acc += m(j1 - 1, i1 - 1) * m(j2 - 1, i2 - 1);
  return acc;
}

/// r-th mean curvature S_r by the full delta-contraction.  S_0 = 1 and
/// S_{n+1} = 0 by convention; other orders must be even and within 0..n.
template <class Scalar>
Scalar s_r_direct(const ShapeOperatorStack<Scalar>& st, int r) {
  st.validate();
  if (r < 0 || r > st.n + 1)
    throw ValidationError("s_r_direct: order " + std::to_string(r) +
                          " outside 0.." + std::to_string(st.n + 1));
  if (r == 0) return Scalar(1);
  if (r == st.n + 1) return Scalar(0);
  detail::require_even(r, "s_r_direct");
  detail::PairingTable<Scalar> bt(st);
  return detail::delta_contract(st, bt, r / 2, 0, {}, {}) /
         Scalar(factorial(r));
}

/// Independent oracle for the codimension-one case: the sum of all r x r
/// principal minors of a single (not necessarily symmetric) matrix.
template <class Scalar>
Scalar s_r_minor_oracle(const SquareMatrix<Scalar>& a, int r) {
  if (a.rows() != a.cols())
    throw ValidationError("s_r_minor_oracle: matrix must be square");
  const int n = static_cast<int>(a.rows());
  if (r < 0 || r > n)
    throw ValidationError("s_r_minor_oracle: order outside 0..n");
  if (r == 0) return Scalar(1);
  Scalar acc(0);
  SquareMatrix<Scalar> sub(r, r);
  for (const IndexTuple& t : IncreasingTuples(n, r)) {
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        sub(i, j) = a(t[static_cast<std::size_t>(i)] - 1,
                      t[static_cast<std::size_t>(j)] - 1);
    acc += detail::determinant_laplace(sub);
  }
  return acc;
}

/// Newton transformation T_r by the defining contraction with one free
/// index pair.  T_0 = I and T_n = 0 fall out of the same engine.
template <class Scalar>
NewtonTransform<Scalar> newton_direct(const ShapeOperatorStack<Scalar>& st,
                                      int r) {
  st.validate();
  if (r < 0 || r > st.n)
    throw ValidationError("newton_direct: order " + std::to_string(r) +
                          " outside 0.." + std::to_string(st.n));
  detail::require_even(r, "newton_direct");
  detail::PairingTable<Scalar> bt(st);
  const Scalar norm(factorial(r));
  SquareMatrix<Scalar> m(st.n, st.n);
  for (int i = 1; i <= st.n; ++i)
    for (int j = 1; j <= st.n; ++j)
      m(i - 1, j - 1) =
          detail::delta_contract(st, bt, r / 2, 0, {i}, {j}) / norm;
  return {r, std::nullopt, std::move(m)};
}

/// Odd-order variant T_q^alpha: contraction with (q-1)/2 pairings and one
/// bare A^alpha factor, plus one free index pair.
template <class Scalar>
NewtonTransform<Scalar> newton_alpha_direct(
    const ShapeOperatorStack<Scalar>& st, int q, int alpha) {
  st.validate();
  if (q < 1 || q > st.n - 1)
    throw ValidationError("newton_alpha_direct: order " + std::to_string(q) +
                          " outside 1.." + std::to_string(st.n - 1));
  detail::require_odd(q, "newton_alpha_direct");
  if (alpha < 1 || alpha > st.l)
    throw ValidationError("newton_alpha_direct: normal index " +
                          std::to_string(alpha) + " outside 1.." +
                          std::to_string(st.l));
  detail::PairingTable<Scalar> bt(st);
  const Scalar norm(factorial(q));
  SquareMatrix<Scalar> m(st.n, st.n);
  for (int i = 1; i <= st.n; ++i)
    for (int j = 1; j <= st.n; ++j)
      m(i - 1, j - 1) =
          detail::delta_contract(st, bt, (q - 1) / 2, alpha, {i}, {j}) / norm;
  return {q, alpha, std::move(m)};
}

/// T_r from the recursion T_r = S_r I - sum_alpha A^alpha T_{r-1}^alpha.
template <class Scalar>
NewtonTransform<Scalar> newton_recursive(const ShapeOperatorStack<Scalar>& st,
                                         int r) {
  st.validate();
  if (r < 0 || r > st.n)
    throw ValidationError("newton_recursive: order " + std::to_string(r) +
                          " outside 0.." + std::to_string(st.n));
  detail::require_even(r, "newton_recursive");
  if (r == 0)
    return {0, std::nullopt, SquareMatrix<Scalar>::Identity(st.n, st.n)};
  SquareMatrix<Scalar> m =
      s_r_direct(st, r) * SquareMatrix<Scalar>::Identity(st.n, st.n);
  for (int alpha = 1; alpha <= st.l; ++alpha)
    m -= st.op(alpha) * newton_alpha_direct(st, r - 1, alpha).matrix;
  return {r, std::nullopt, std::move(m)};
}

/// Mean curvature vector via the trace identity: coefficient alpha is
/// tr(T_r A^alpha) / (r+1).  Zero vector at r = n by the T_n = 0 convention.
template <class Scalar>
NormalVector<Scalar> mean_curvature_vector(const ShapeOperatorStack<Scalar>& st,
                                           int r) {
  st.validate();
  if (r < 0 || r > st.n)
    throw ValidationError("mean_curvature_vector: order " + std::to_string(r) +
                          " outside 0.." + std::to_string(st.n));
  detail::require_even(r, "mean_curvature_vector");
  const SquareMatrix<Scalar> t = newton_direct(st, r).matrix;
  NormalVector<Scalar> out;
  out.coeffs.reserve(static_cast<std::size_t>(st.l));
  for (int alpha = 1; alpha <= st.l; ++alpha)
    out.coeffs.push_back((t * st.op(alpha)).trace() / Scalar(r + 1));
  return out;
}

/// Mean curvature vector by the defining (r+1)-index contraction with a
/// bare B factor; cross-check partner of mean_curvature_vector.
template <class Scalar>
NormalVector<Scalar> mean_curvature_vector_direct(
    const ShapeOperatorStack<Scalar>& st, int r) {
  st.validate();
  if (r < 0 || r > st.n)
    throw ValidationError("mean_curvature_vector_direct: order " +
                          std::to_string(r) + " outside 0.." +
                          std::to_string(st.n));
  detail::require_even(r, "mean_curvature_vector_direct");
  detail::PairingTable<Scalar> bt(st);
  const Scalar norm(factorial(r + 1));
  NormalVector<Scalar> out;
  out.coeffs.reserve(static_cast<std::size_t>(st.l));
  for (int alpha = 1; alpha <= st.l; ++alpha)
    out.coeffs.push_back(
        detail::delta_contract(st, bt, r / 2, alpha, {}, {}) / norm);
  return out;
}

/// Normalized mean curvature H_r = S_r / C(n, r).
template <class Scalar>
Scalar h_r(const ShapeOperatorStack<Scalar>& st, int r) {
  st.validate();
  if (r < 0 || r > st.n)
    throw ValidationError("h_r: order " + std::to_string(r) + " outside 0.." +
                          std::to_string(st.n));
  detail::require_even(r, "h_r");
  return s_r_direct(st, r) / Scalar(binomial(st.n, r));
}

/// Slot tensor of order r with `rank` free upper/lower slot pairs,
/// normalized by 1/r!.  Identically zero when r + rank > n.
template <class Scalar>
SlotTensor<Scalar> slot_tensor(const ShapeOperatorStack<Scalar>& st, int r,
                               int rank) {
  st.validate();
  if (r < 0)
    throw ValidationError("slot_tensor: order must be nonnegative");
  detail::require_even(r, "slot_tensor");
  SlotTensor<Scalar> out(st.n, r, rank);
  if (r + rank > st.n) return out;
  detail::PairingTable<Scalar> bt(st);
  const Scalar norm(factorial(r));
  IndexTuple upper(static_cast<std::size_t>(rank), 1);
  IndexTuple lower(static_cast<std::size_t>(rank), 1);
  const std::size_t count = out.rank() == 2
                                ? static_cast<std::size_t>(st.n) * st.n
                                : static_cast<std::size_t>(st.n) * st.n * st.n;
  for (std::size_t ui = 0; ui < count; ++ui) {
    std::size_t rem = ui;
    for (int k = rank - 1; k >= 0; --k) {
      upper[static_cast<std::size_t>(k)] =
          static_cast<int>(rem % static_cast<std::size_t>(st.n)) + 1;
      rem /= static_cast<std::size_t>(st.n);
    }
    for (std::size_t li = 0; li < count; ++li) {
      rem = li;
      for (int k = rank - 1; k >= 0; --k) {
        lower[static_cast<std::size_t>(k)] =
            static_cast<int>(rem % static_cast<std::size_t>(st.n)) + 1;
        rem /= static_cast<std::size_t>(st.n);
      }
      out.at(upper, lower) =
          detail::delta_contract(st, bt, r / 2, 0, upper, lower) / norm;
    }
  }
  return out;
}

/// Max entrywise residual of the slot-expansion identity
///   T_r^{ab}_{cd} = delta^b_d T_r{}^a_c - delta^b_c T_r{}^a_d
///                   - (1/(r-1)) T_{r-2}^{p a q}_{s c d} A^alpha{}^s_p
///                     A^alpha{}^b_q   (p, q, s, alpha summed).
template <class Scalar>
Scalar lemma3_residual(const ShapeOperatorStack<Scalar>& st, int r) {
  st.validate();
  if (r % 2 != 0 || r < 2)
    throw UnsupportedOrderError(
        "lemma3_residual: defined for even orders r >= 2");
  if (r > st.n)
    throw ValidationError("lemma3_residual: order " + std::to_string(r) +
                          " outside 2.." + std::to_string(st.n));
  const int n = st.n;
  const SlotTensor<Scalar> lhs = slot_tensor(st, r, 2);
  const SlotTensor<Scalar> st3 = slot_tensor(st, r - 2, 3);
  const SquareMatrix<Scalar> t = newton_direct(st, r).matrix;
  const Scalar inv(Scalar(1) / Scalar(r - 1));
  using std::abs;
  Scalar worst(0);
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b)
      for (int c = 1; c <= n; ++c)
        for (int d = 1; d <= n; ++d) {
          Scalar rhs(0);
          if (b == d) rhs += t(a - 1, c - 1);
          if (b == c) rhs -= t(a - 1, d - 1);
          Scalar third(0);
          for (int alpha = 1; alpha <= st.l; ++alpha) {
            const auto& m = st.op(alpha);
            for (int p = 1; p <= n; ++p)
              for (int q = 1; q <= n; ++q)
                for (int s = 1; s <= n; ++s)
                  third +=
                      st3.at({p, a, q}, {s, c, d}) * m(s - 1, p - 1) *
                      m(b - 1, q - 1);
          }
          rhs -= inv * third;
          const Scalar res = abs(lhs.at({a, b}, {c, d}) - rhs);
          if (res > worst) worst = res;
        }
  return worst;
}

}  // namespace newtoncurv
