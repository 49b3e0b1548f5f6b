#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>

#include "doctest.h"
#include "newtoncurv/curvature.hpp"
#include "newtoncurv/rational.hpp"
#include "oracles.hpp"

using namespace newtoncurv;
using testing_oracles::raw_contract;

namespace {

ShapeOperatorStack<double> single(const Eigen::MatrixXd& a) {
  ShapeOperatorStack<double> st;
  st.n = static_cast<int>(a.rows());
  st.l = 1;
  st.A = {a};
  return st;
}

const Eigen::MatrixXd kHopfJ = (Eigen::MatrixXd(2, 2) << 0, -1, 1, 0).finished();

template <class Scalar>
Scalar rel_err(const Scalar& got, const Scalar& want) {
  using std::abs;
  return abs(got - want) / (Scalar(1) + abs(want));
}

}  // namespace

TEST_CASE("b_inner pinned values and symmetry") {
  auto st = single((Eigen::MatrixXd(2, 2) << 3, 0, 0, 5).finished());
  CHECK(b_inner(st, 1, 1, 2, 2) == doctest::Approx(15.0));
  CHECK(b_inner(st, 1, 2, 2, 1) == doctest::Approx(0.0));

  ShapeOperatorStack<double> two;
  two.n = 2;
  two.l = 2;
  two.A = {Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Zero(2, 2)};
  CHECK(b_inner(two, 1, 1, 1, 1) == doctest::Approx(1.0));

  const auto st3 = random_stack(4, 2, 99, 0);
  for (int p = 1; p <= 4; ++p)
    for (int q = 1; q <= 4; ++q)
      for (int r = 1; r <= 4; ++r)
        for (int s = 1; s <= 4; ++s)
          CHECK(b_inner(st3, p, q, r, s) == b_inner(st3, r, s, p, q));
  CHECK_THROWS_AS(b_inner(st3, 0, 1, 1, 1), ValidationError);
  CHECK_THROWS_AS(b_inner(st3, 1, 5, 1, 1), ValidationError);
}

TEST_CASE("s_r_direct pinned values") {
  auto hopf = single(kHopfJ);
  CHECK(s_r_direct(hopf, 2) == doctest::Approx(1.0));  // det of J
  CHECK(s_r_direct(hopf, 0) == doctest::Approx(1.0));
  CHECK(s_r_direct(hopf, 3) == doctest::Approx(0.0));  // S_{n+1} convention

  Eigen::MatrixXd jj = Eigen::MatrixXd::Zero(4, 4);
  jj.block<2, 2>(0, 0) = kHopfJ;
  jj.block<2, 2>(2, 2) = kHopfJ;
  auto st = single(jj);
  CHECK(s_r_direct(st, 2) == doctest::Approx(2.0));
  CHECK(s_r_direct(st, 4) == doctest::Approx(1.0));

  CHECK_THROWS_AS(s_r_direct(st, 3), UnsupportedOrderError);
  CHECK_THROWS_AS(s_r_direct(st, -2), ValidationError);
  CHECK_THROWS_AS(s_r_direct(st, 6), ValidationError);
}

TEST_CASE("s_r_minor_oracle pinned values") {
  Eigen::MatrixXd d = Eigen::Vector3d(1, 2, 3).asDiagonal();
  CHECK(s_r_minor_oracle<double>(d, 2) == doctest::Approx(11.0));
  CHECK(s_r_minor_oracle<double>(d, 0) == doctest::Approx(1.0));
  CHECK(s_r_minor_oracle<double>(d, 3) == doctest::Approx(6.0));  // det

  const auto st = random_stack(5, 1, 123, 7);
  CHECK(s_r_minor_oracle<double>(st.A[0], 5) ==
        doctest::Approx(st.A[0].determinant()));
  CHECK_THROWS_AS(s_r_minor_oracle<double>(d, 4), ValidationError);
}

TEST_CASE("engine matches raw-loop oracle in floating point") {
  for (int n = 2; n <= 5; ++n) {
    for (int l = 1; l <= 3; ++l) {
      const auto st = random_stack(n, l, 2026, static_cast<std::uint64_t>(
                                                   100 * n + l));
      for (int r = 2; r <= std::min(n, 4); r += 2) {
        const double got = s_r_direct(st, r);
        const double want = testing_oracles::s_r_naive(st, r);
        CHECK(rel_err(got, want) < 1e-12);
      }
    }
  }
}

TEST_CASE("engine matches raw-loop oracle exactly over rationals") {
  // Certifies the matching-orbit reduction of the upper-index sum: both
  // paths must agree to the last bit of exact arithmetic, including the
  // cross-pair couplings that appear first at r = 4 with l >= 2.
  for (int l = 1; l <= 2; ++l) {
    const auto st = random_stack_dyadic<Rational>(
        4, l, 77, static_cast<std::uint64_t>(l));
    detail::PairingTable<Rational> bt(st);
    for (int r = 2; r <= 4; r += 2)
      CHECK(detail::delta_contract(st, bt, r / 2, 0, {}, {}) ==
            raw_contract(st, r / 2, 0, {}, {}));
    // Free slots and bare factors.
    for (int i = 1; i <= 4; ++i)
      for (int j = 1; j <= 4; ++j) {
        CHECK(detail::delta_contract(st, bt, 1, 0, {i}, {j}) ==
              raw_contract(st, 1, 0, {i}, {j}));
        CHECK(detail::delta_contract(st, bt, 1, l, {i}, {j}) ==
              raw_contract(st, 1, l, {i}, {j}));
      }
    CHECK(detail::delta_contract(st, bt, 1, 1, {}, {}) ==
          raw_contract(st, 1, 1, {}, {}));
    CHECK(detail::delta_contract(st, bt, 0, 1, {1, 3}, {2, 3}) ==
          raw_contract(st, 0, 1, {1, 3}, {2, 3}));
  }
  // Three interacting pairs (r = 6) via the all-arrangements oracle; the
  // full n^(2k) loop is out of reach there.
  const auto st6 = random_stack_dyadic<Rational>(6, 2, 78, 1, 8);
  detail::PairingTable<Rational> bt6(st6);
  CHECK(detail::delta_contract(st6, bt6, 3, 0, {}, {}) ==
        testing_oracles::all_arrangements_contract(st6, 3));
  // Cross-check the two oracles against each other where both run.
  const auto st4 = random_stack_dyadic<Rational>(4, 2, 79, 2);
  CHECK(testing_oracles::all_arrangements_contract(st4, 2) ==
        raw_contract(st4, 2, 0, {}, {}));
  const auto st5 = random_stack_dyadic<Rational>(5, 2, 80, 3);
  detail::PairingTable<Rational> bt5(st5);
  CHECK(detail::delta_contract(st5, bt5, 2, 0, {}, {}) ==
        testing_oracles::all_arrangements_contract(st5, 2));
}

TEST_CASE("newton_direct pinned values and conventions") {
  Eigen::MatrixXd d = Eigen::Vector3d(2, 3, 5).asDiagonal();
  const auto t2 = newton_direct(single(d), 2);
  CHECK(t2.order == 2);
  CHECK(!t2.alpha.has_value());
  CHECK(t2.matrix(0, 0) == doctest::Approx(15.0));  // bc
  CHECK(t2.matrix(1, 1) == doctest::Approx(10.0));  // ac
  CHECK(t2.matrix(2, 2) == doctest::Approx(6.0));   // ab
  CHECK(t2.matrix.cwiseAbs().sum() == doctest::Approx(31.0));

  const auto st = random_stack(4, 2, 11, 3);
  CHECK((newton_direct(st, 0).matrix - Eigen::MatrixXd::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() == doctest::Approx(0.0));
  CHECK(newton_direct(st, 4).matrix.cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0));  // T_n = 0
  CHECK_THROWS_AS(newton_direct(st, 3), UnsupportedOrderError);
  CHECK_THROWS_AS(newton_direct(st, 6), ValidationError);
}

TEST_CASE("newton_alpha_direct pinned values") {
  Eigen::MatrixXd d = Eigen::Vector2d(2, 7).asDiagonal();
  const auto t1 = newton_alpha_direct(single(d), 1, 1);
  CHECK(t1.order == 1);
  CHECK(t1.alpha == 1);
  CHECK(t1.matrix(0, 0) == doctest::Approx(7.0));
  CHECK(t1.matrix(1, 1) == doctest::Approx(2.0));
  CHECK(t1.matrix(0, 1) == doctest::Approx(0.0));

  const auto tj = newton_alpha_direct(single(kHopfJ), 1, 1);
  CHECK(tj.matrix(0, 1) == doctest::Approx(1.0));
  CHECK(tj.matrix(1, 0) == doctest::Approx(-1.0));
  CHECK(tj.matrix(0, 0) == doctest::Approx(0.0));

  const auto st = random_stack(4, 2, 5, 9);
  CHECK_THROWS_AS(newton_alpha_direct(st, 2, 1), UnsupportedOrderError);
  CHECK_THROWS_AS(newton_alpha_direct(st, 1, 3), ValidationError);
  CHECK_THROWS_AS(newton_alpha_direct(st, 5, 1), ValidationError);
}

TEST_CASE("newton_recursive equals newton_direct") {
  Eigen::MatrixXd d = Eigen::Vector3d(2, 3, 5).asDiagonal();
  const auto rec = newton_recursive(single(d), 2);
  CHECK(rec.matrix(0, 0) == doctest::Approx(15.0));
  CHECK(rec.matrix(1, 1) == doctest::Approx(10.0));
  CHECK(rec.matrix(2, 2) == doctest::Approx(6.0));

  for (int trial = 0; trial < 20; ++trial) {
    const auto st = random_stack(4, 2, 31, static_cast<std::uint64_t>(trial));
    for (int r = 0; r <= 4; r += 2) {
      const auto a = newton_recursive(st, r).matrix;
      const auto b = newton_direct(st, r).matrix;
      CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  // Exact equality over rationals.
  const auto st = random_stack_dyadic<Rational>(4, 2, 44, 0);
  for (int r = 2; r <= 4; r += 2) {
    const auto a = newton_recursive(st, r).matrix;
    const auto b = newton_direct(st, r).matrix;
    CHECK((a - b).cwiseAbs().maxCoeff() == Rational(0));
  }
}

TEST_CASE("the five trace and recursion identities hold exactly") {
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    const auto st = random_stack_dyadic<Rational>(4, 2, 314, trial);
    const int n = st.n;
    for (int r = 2; r <= 4; r += 2) {
      const Rational sr = s_r_direct(st, r);
      const auto tr_mat = newton_direct(st, r).matrix;

      // S_r = (1/r) sum_alpha tr(T_{r-1}^alpha A^alpha).
      Rational acc(0);
      for (int alpha = 1; alpha <= st.l; ++alpha)
        acc += (newton_alpha_direct(st, r - 1, alpha).matrix * st.op(alpha))
                   .trace();
      CHECK(sr == acc / Rational(r));

      // tr(T_r) = (n - r) S_r.
      CHECK(tr_mat.trace() == Rational(n - r) * sr);

      // T_r = S_r I - sum_alpha A^alpha T_{r-1}^alpha.
      SquareMatrix<Rational> rhs =
          sr * SquareMatrix<Rational>::Identity(n, n);
      for (int alpha = 1; alpha <= st.l; ++alpha)
        rhs -= st.op(alpha) * newton_alpha_direct(st, r - 1, alpha).matrix;
      CHECK((tr_mat - rhs).cwiseAbs().maxCoeff() == Rational(0));

      // Vector identity: direct contraction equals trace route.
      const auto via_trace = mean_curvature_vector(st, r);
      const auto via_delta = mean_curvature_vector_direct(st, r);
      for (int alpha = 0; alpha < st.l; ++alpha)
        CHECK(via_trace.coeffs[static_cast<std::size_t>(alpha)] ==
              via_delta.coeffs[static_cast<std::size_t>(alpha)]);
    }

    // Odd-order trace identity, per alpha: tr(T_q^alpha) =
    // ((n-q)/q) tr(T_{q-1} A^alpha).
    for (int q = 1; q <= 3; q += 2)
      for (int alpha = 1; alpha <= st.l; ++alpha) {
        const Rational lhs = newton_alpha_direct(st, q, alpha).matrix.trace();
        const Rational rhs =
            Rational(n - q) *
            (newton_direct(st, q - 1).matrix * st.op(alpha)).trace() /
            Rational(q);
        CHECK(lhs == rhs);
      }
  }
}

TEST_CASE("mean curvature vector pinned values and codimension one") {
  const auto st = random_stack(3, 2, 400, 2);
  const auto v0 = mean_curvature_vector(st, 0);
  CHECK(v0.coeffs[0] == doctest::Approx(st.A[0].trace()));
  CHECK(v0.coeffs[1] == doctest::Approx(st.A[1].trace()));

  const auto hopf = single(kHopfJ);
  CHECK(mean_curvature_vector(hopf, 0).coeffs[0] == doctest::Approx(0.0));
  CHECK(mean_curvature_vector(hopf, 2).coeffs[0] == doctest::Approx(0.0));

  // l = 1, symmetric A: the single coefficient is the (r+1)-minor sum.
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    auto base = random_stack(5, 1, 500, trial);
    base.A[0] = ((base.A[0] + base.A[0].transpose()) / 2).eval();
    for (int r = 0; r <= 4; r += 2) {
      const double got = mean_curvature_vector(base, r).coeffs[0];
      const double want = s_r_minor_oracle<double>(base.A[0], r + 1);
      CHECK(rel_err(got, want) < 1e-10);
    }
  }
  CHECK(mean_curvature_vector(single(kHopfJ), 2).coeffs[0] ==
        doctest::Approx(0.0));  // r = n gives the zero vector
}

TEST_CASE("mean curvature vector matches raw oracle") {
  for (std::uint64_t trial = 0; trial < 4; ++trial) {
    const auto st = random_stack(4, 2, 610, trial);
    for (int r = 0; r <= 2; r += 2) {
      const auto got = mean_curvature_vector(st, r);
      for (int alpha = 1; alpha <= st.l; ++alpha)
        CHECK(rel_err(got.coeffs[static_cast<std::size_t>(alpha - 1)],
                      testing_oracles::vector_coeff_naive(st, r, alpha)) <
              1e-12);
    }
  }
}

TEST_CASE("l=1 reduction to principal minors") {
  for (int n = 2; n <= 6; ++n)
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
      const auto st = random_stack(n, 1, 800 + static_cast<std::uint64_t>(n),
                                   trial);
      for (int r = 2; r <= n; r += 2)
        CHECK(rel_err(s_r_direct(st, r),
                      s_r_minor_oracle<double>(st.A[0], r)) < 1e-10);
    }
}

TEST_CASE("h_r normalization") {
  Eigen::MatrixXd jj = Eigen::MatrixXd::Zero(4, 4);
  jj.block<2, 2>(0, 0) = kHopfJ;
  jj.block<2, 2>(2, 2) = kHopfJ;
  const auto st = single(jj);
  CHECK(h_r(st, 0) == doctest::Approx(1.0));
  CHECK(h_r(st, 2) == doctest::Approx(2.0 / 6.0));
  CHECK(h_r(st, 4) == doctest::Approx(1.0));
}

TEST_CASE("slot tensors") {
  const auto st = random_stack(4, 2, 900, 1);
  const auto t0 = slot_tensor(st, 0, 2);
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b)
      for (int c = 1; c <= 4; ++c)
        for (int d = 1; d <= 4; ++d)
          CHECK(t0.at({a, b}, {c, d}) ==
                doctest::Approx(generalized_kronecker({a, b}, {c, d})));

  const auto st2 = random_stack(2, 1, 900, 2);
  const auto z = slot_tensor(st2, 2, 2);
  for (int a = 1; a <= 2; ++a)
    for (int b = 1; b <= 2; ++b) CHECK(z.at({a, b}, {a, b}) == 0.0);

  // Antisymmetry under slot swaps, exact over rationals.
  const auto rst = random_stack_dyadic<Rational>(5, 2, 901, 0);
  const auto t2 = slot_tensor(rst, 2, 2);
  for (int a = 1; a <= 5; ++a)
    for (int b = 1; b <= 5; ++b)
      for (int c = 1; c <= 5; ++c)
        for (int d = 1; d <= 5; ++d) {
          CHECK(t2.at({a, b}, {c, d}) == -t2.at({b, a}, {c, d}));
          CHECK(t2.at({a, b}, {c, d}) == -t2.at({a, b}, {d, c}));
        }

  // Against the raw oracle.
  const auto st3 = random_stack(4, 2, 902, 3);
  const auto s3 = slot_tensor(st3, 2, 2);
  for (int a = 1; a <= 4; ++a)
    for (int c = 1; c <= 4; ++c)
      CHECK(rel_err(s3.at({a, 3}, {c, 2}),
                    testing_oracles::slot_entry_naive(st3, 2, {a, 3}, {c, 2})) <
            1e-12);
  CHECK_THROWS_AS(slot_tensor(st3, 2, 4), ValidationError);
  CHECK_THROWS_AS(slot_tensor(st3, 1, 2), UnsupportedOrderError);
}

TEST_CASE("lemma3 residual vanishes") {
  // Exact certification over rationals.
  for (std::uint64_t trial = 0; trial < 3; ++trial) {
    const auto st = random_stack_dyadic<Rational>(4, 2, 1000, trial);
    CHECK(lemma3_residual(st, 2) == Rational(0));
    CHECK(lemma3_residual(st, 4) == Rational(0));
  }

  // n = 2: both sides identically zero.
  const auto st2 = random_stack(2, 2, 1001, 0);
  CHECK(lemma3_residual(st2, 2) == 0.0);

  // Diagonal codimension-one stack.
  Eigen::MatrixXd d = Eigen::Vector4d(2, 3, 5, 7).asDiagonal();
  CHECK(lemma3_residual(single(d), 2) < 1e-12);

  // Floating point at n = 5.
  for (std::uint64_t trial = 0; trial < 3; ++trial) {
    const auto st = random_stack(5, 2, 1002, trial);
    CHECK(lemma3_residual(st, 2) < 1e-10);
    CHECK(lemma3_residual(st, 4) < 1e-10);
  }
  CHECK_THROWS_AS(lemma3_residual(st2, 0), UnsupportedOrderError);
  CHECK_THROWS_AS(lemma3_residual(st2, 4), ValidationError);
}

TEST_CASE("frame invariances hold exactly for rational rotations") {
  TrialRng rng(2200, 5);
  const auto st = random_stack_dyadic<Rational>(4, 2, 2200, 0);
  const auto qt = pythagorean_orthogonal<Rational>(4, rng);
  CHECK((qt.transpose() * qt -
         SquareMatrix<Rational>::Identity(4, 4)).cwiseAbs().maxCoeff() ==
        Rational(0));
  const auto qn = pythagorean_orthogonal<Rational>(2, rng);

  const auto rot_t = rotate_tangent(st, qt);
  const auto rot_n = rotate_normal(st, qn);
  for (int r = 0; r <= 4; r += 2) {
    const Rational base = s_r_direct(st, r);
    CHECK(s_r_direct(rot_t, r) == base);
    CHECK(s_r_direct(rot_n, r) == base);
  }
  CHECK(mean_curvature_vector(rot_n, 2).norm_squared() ==
        mean_curvature_vector(st, 2).norm_squared());
}

TEST_CASE("stack JSON round trip") {
  const auto st = random_stack(3, 2, 3300, 4);
  const auto doc = stack_to_json(st);
  const auto back = stack_from_json(doc);
  CHECK(back.n == st.n);
  CHECK(back.l == st.l);
  for (int alpha = 0; alpha < st.l; ++alpha)
    CHECK((back.A[static_cast<std::size_t>(alpha)] -
           st.A[static_cast<std::size_t>(alpha)])
              .cwiseAbs()
              .maxCoeff() == 0.0);

  CHECK_THROWS_AS(stack_from_json(nlohmann::json{{"n", 2}, {"l", 1}}),
                  ValidationError);
  auto bad = doc;
  bad["A"][0][0][0] = "x";
  CHECK_THROWS(stack_from_json(bad));
}

TEST_CASE("validation of malformed stacks") {
  ShapeOperatorStack<double> st;
  st.n = 2;
  st.l = 2;
  st.A = {Eigen::MatrixXd::Zero(2, 2)};
  CHECK_THROWS_AS(st.validate(), ValidationError);
  st.A = {Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 3)};
  CHECK_THROWS_AS(st.validate(), ValidationError);
  st.A = {Eigen::MatrixXd::Zero(2, 2),
          (Eigen::MatrixXd(2, 2) << 1, 2, 3,
           std::numeric_limits<double>::quiet_NaN())
              .finished()};
  CHECK_THROWS_AS(st.validate(), ValidationError);
}
