#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "newtoncurv/exterior.hpp"

using namespace newtoncurv;

namespace {

ShapeOperatorStack<double> single(const Eigen::MatrixXd& a) {
  ShapeOperatorStack<double> st;
  st.n = static_cast<int>(a.rows());
  st.l = 1;
  st.A = {a};
  return st;
}

const Eigen::MatrixXd kHopfJ = (Eigen::MatrixXd(2, 2) << 0, -1, 1, 0).finished();

}  // namespace

TEST_CASE("wedge basics") {
  const auto t1 = AlternatingForm::theta(3, 1);
  const auto t2 = AlternatingForm::theta(3, 2);

  const auto w = wedge(t1, t2);
  CHECK(w.degree() == 2);
  CHECK(w.coeff({1, 2}) == 1.0);
  CHECK(w.coeff({1, 3}) == 0.0);

  CHECK(wedge(t1, t1).terms().empty());

  AlternatingForm sum = t1;
  sum += t2;
  const auto s2 = wedge(sum, t2);
  CHECK(s2.coeff({1, 2}) == 1.0);
  CHECK(s2.terms().size() == 1);

  // Graded anticommutativity on random forms.
  TrialRng rng(77, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 5;
    const int df = rng.uniform_int(0, 3);
    const int dg = rng.uniform_int(0, 3);
    AlternatingForm f(m, df), g(m, dg);
    for (const IndexTuple& t : IncreasingTuples(m, df))
      f.add_term(t, rng.uniform_pm1());
    for (const IndexTuple& t : IncreasingTuples(m, dg))
      g.add_term(t, rng.uniform_pm1());
    const auto fg = wedge(f, g);
    const auto gf = wedge(g, f);
    const double sgn = (df * dg) % 2 == 0 ? 1.0 : -1.0;
    for (const IndexTuple& t : IncreasingTuples(m, df + dg))
      CHECK(fg.coeff(t) == doctest::Approx(sgn * gf.coeff(t)).epsilon(1e-12));
    // Associativity with a third random 1-form.
    AlternatingForm h(m, 1);
    for (const IndexTuple& t : IncreasingTuples(m, 1))
      h.add_term(t, rng.uniform_pm1());
    const auto l = wedge(wedge(f, g), h);
    const auto r = wedge(f, wedge(g, h));
    for (const IndexTuple& t : IncreasingTuples(m, df + dg + 1))
      CHECK(l.coeff(t) == doctest::Approx(r.coeff(t)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(wedge(AlternatingForm::theta(3, 1),
                        AlternatingForm::theta(4, 1)),
                  ValidationError);
}

TEST_CASE("top_coefficient") {
  const auto vol = AlternatingForm::volume(4);
  CHECK(top_coefficient(vol) == 1.0);
  CHECK(top_coefficient(vol * 3.0) == 3.0);

  // theta^2 ^ theta^1 ^ theta^3 ^ theta^4 = -Omega.
  auto f = wedge(wedge(wedge(AlternatingForm::theta(4, 2),
                             AlternatingForm::theta(4, 1)),
                       AlternatingForm::theta(4, 3)),
                 AlternatingForm::theta(4, 4));
  CHECK(top_coefficient(f) == -1.0);

  CHECK_THROWS_AS(top_coefficient(AlternatingForm::theta(3, 1)),
                  ValidationError);
}

TEST_CASE("gamma_0 is n! times the tangential volume") {
  const auto st = random_stack(3, 2, 5, 0);
  const auto conn = ConnectionData::from_stack(st);
  const auto g0 = gamma_r(conn, 0);
  CHECK(g0.degree() == 3);
  CHECK(g0.coeff({1, 2, 3}) == doctest::Approx(6.0));
  CHECK(g0.terms().size() == 1);
  CHECK(verify_theorem1(st, conn.X, 0) == 0.0);
}

TEST_CASE("hopf matrix top coefficient") {
  const auto st = single(kHopfJ);
  const auto conn = ConnectionData::from_stack(st);
  const auto top = wedge(gamma_r(conn, 2), AlternatingForm::theta(3, 3));
  CHECK(top_coefficient(top) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(verify_theorem1(st, conn.X, 2) < 1e-12);
}

TEST_CASE("theorem1 residual on random stacks") {
  for (int n = 2; n <= 4; ++n)
    for (int l = 1; l <= 2; ++l)
      for (std::uint64_t trial = 0; trial < 5; ++trial) {
        const auto st = random_stack(n, l, 40 + static_cast<std::uint64_t>(n),
                                     trial);
        const auto x = random_normal_part(n, l, 41, trial);
        for (int r = 0; r <= std::min(4, n); r += 2)
          CHECK(verify_theorem1(st, x, r) < 1e-10);
      }
}

TEST_CASE("X independence") {
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    const auto st = random_stack(3, 2, 60, trial);
    const auto zero = ConnectionData::from_stack(st);
    const auto rich =
        ConnectionData::from_stack(st, random_normal_part(3, 2, 61, trial));
    AlternatingForm nu(5, 0);
    nu.add_term({}, 1.0);
    nu = wedge(nu, AlternatingForm::theta(5, 4));
    nu = wedge(nu, AlternatingForm::theta(5, 5));
    const double a = top_coefficient(wedge(gamma_r(zero, 2), nu));
    const double b = top_coefficient(wedge(gamma_r(rich, 2), nu));
    CHECK(a == doctest::Approx(b).epsilon(1e-14));
  }
}

TEST_CASE("degree-r homogeneity in the stack") {
  const auto st = random_stack(4, 2, 70, 0);
  auto scaled = st;
  for (auto& a : scaled.A) a *= 2.0;
  for (int r = 2; r <= 4; r += 2) {
    const auto c1 = ConnectionData::from_stack(st);
    const auto c2 = ConnectionData::from_stack(scaled);
    AlternatingForm nu(6, 0);
    nu.add_term({}, 1.0);
    nu = wedge(nu, AlternatingForm::theta(6, 5));
    nu = wedge(nu, AlternatingForm::theta(6, 6));
    const double base = top_coefficient(wedge(gamma_r(c1, r), nu));
    const double big = top_coefficient(wedge(gamma_r(c2, r), nu));
    CHECK(big == doctest::Approx(std::pow(2.0, r) * base).epsilon(1e-12));
  }
}

TEST_CASE("gamma_r validation") {
  const auto st = random_stack(3, 1, 80, 0);
  const auto conn = ConnectionData::from_stack(st);
  CHECK_THROWS_AS(gamma_r(conn, 1), UnsupportedOrderError);
  CHECK_THROWS_AS(gamma_r(conn, 4), ValidationError);
  CHECK(kGammaMaxN == 7);
}
