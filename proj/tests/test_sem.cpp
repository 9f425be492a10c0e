#include "doctest.h"

#include <cmath>

#include "lingd/sem.hpp"
#include "oracles.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using lingd::ErrorCode;

namespace {

MatrixXd example1() {
  MatrixXd b = MatrixXd::Zero(5, 5);
  b(1, 0) = 1.2;
  b(1, 3) = -0.3;
  b(2, 1) = 2.0;
  b(3, 2) = -1.0;
  b(4, 1) = 3.0;
  return b;
}

MatrixXd three_cycle(double a, double b, double c) {
  MatrixXd m = MatrixXd::Zero(3, 3);
  m(1, 0) = a;
  m(2, 1) = b;
  m(0, 2) = c;
  return m;
}

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const lingd::Error& e) {
    return e.code();
  }
  FAIL("expected lingd::Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("validate accepts the empty graph and Example 1") {
  CHECK_NOTHROW(lingd::validate(MatrixXd::Zero(5, 5)));
  const auto b = lingd::validate(example1());
  CHECK(b.size() == 5);
  CHECK(b(1, 0) == 1.2);
}

TEST_CASE("validate rejects self-loops and singular reduced forms") {
  MatrixXd loop = MatrixXd::Zero(3, 3);
  loop(1, 1) = 0.5;
  CHECK(code_of([&] { lingd::validate(loop); }) == ErrorCode::NonZeroDiagonal);
  // det(I - B) = 1 - 1*1*1 = 0
  CHECK(code_of([&] { lingd::validate(three_cycle(1, 1, 1)); }) == ErrorCode::SingularReducedForm);
  CHECK(code_of([&] { lingd::validate(MatrixXd::Zero(2, 3)); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("reduced_form on closed-form cases") {
  CHECK(lingd::reduced_form(MatrixXd::Zero(4, 4)).isApprox(MatrixXd::Identity(4, 4)));

  MatrixXd chain = MatrixXd::Zero(2, 2);
  chain(1, 0) = 0.7;
  MatrixXd expect_chain(2, 2);
  expect_chain << 1, 0, 0.7, 1;
  CHECK((lingd::reduced_form(chain) - expect_chain).cwiseAbs().maxCoeff() < 1e-12);

  const double p = 0.4, q = -1.5;
  MatrixXd two = MatrixXd::Zero(2, 2);
  two(0, 1) = p;
  two(1, 0) = q;
  MatrixXd expect_two(2, 2);
  expect_two << 1, p, q, 1;
  expect_two /= (1 - p * q);
  CHECK((lingd::reduced_form(two) - expect_two).cwiseAbs().maxCoeff() < 1e-12);

  CHECK(code_of([&] { lingd::reduced_form(three_cycle(1, 1, 1)); }) == ErrorCode::SingularReducedForm);
}

TEST_CASE("reduced_form residual property") {
  lingd::Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(6));
    MatrixXd b = oracle::random_with_spectral_radius(n, 0.3 + 1.2 * rng.uniform(), rng);
    b.diagonal().setZero();
    if (lingd::detail::reduced_form_is_singular(b, lingd::kSingularTolerance)) continue;
    const MatrixXd a = lingd::reduced_form(b);
    const MatrixXd residual = (MatrixXd::Identity(n, n) - b) * a - MatrixXd::Identity(n, n);
    CHECK(residual.cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("reduced_form works in extended precision") {
  using MatrixXld = lingd::MatrixX<long double>;
  MatrixXld b = example1().cast<long double>();
  const MatrixXld a = lingd::reduced_form(b);
  const MatrixXld r = (MatrixXld::Identity(5, 5) - b) * a - MatrixXld::Identity(5, 5);
  CHECK(static_cast<double>(r.cwiseAbs().maxCoeff()) < 1e-15);
}

TEST_CASE("find_simple_cycles on named examples") {
  CHECK(lingd::find_simple_cycles(MatrixXd::Zero(5, 5)).empty());

  const auto cycles = lingd::find_simple_cycles(example1());
  REQUIRE(cycles.size() == 1);
  CHECK(cycles[0].vertices == std::vector<Eigen::Index>{1, 2, 3});
  CHECK(cycles[0].product == doctest::Approx(2.0 * -1.0 * -0.3).epsilon(1e-15));

  MatrixXd two = MatrixXd::Zero(2, 2);
  two(0, 1) = 2.0;
  two(1, 0) = -0.75;
  const auto c2 = lingd::find_simple_cycles(two);
  REQUIRE(c2.size() == 1);
  CHECK(c2[0].product == -1.5);
}

TEST_CASE("find_simple_cycles matches subset enumeration for n <= 6") {
  lingd::Rng rng(5);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(5));
    MatrixXd b = MatrixXd::Zero(n, n);
    const double density = 0.2 + 0.6 * rng.uniform();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && rng.uniform() < density) b(i, j) = oracle::coefficient(rng, 0.1, 2.0);
    const auto got = lingd::find_simple_cycles(b);
    const auto want = oracle::cycles_by_enumeration(b);
    REQUIRE(got.size() == want.size());
    for (std::size_t k = 0; k < got.size(); ++k) {
      CHECK(got[k].vertices == want[k].vertices);
      CHECK(got[k].product == doctest::Approx(want[k].product).epsilon(1e-12));
    }
    CHECK(lingd::has_disjoint_cycles(b) == oracle::cycles_disjoint_by_enumeration(b));
  }
}

TEST_CASE("find_simple_cycles enforces the cycle cap") {
  const MatrixXd dense = MatrixXd::Constant(7, 7, 0.1) - 0.1 * MatrixXd::Identity(7, 7);
  CHECK(code_of([&] { lingd::find_simple_cycles(dense, 100); }) == ErrorCode::CycleLimitExceeded);
  // Complete digraph: sum over k of C(7, k) (k - 1)! cycles of length k.
  CHECK(lingd::find_simple_cycles(dense).size() == 21 + 70 + 210 + 504 + 840 + 720);
}

TEST_CASE("has_disjoint_cycles") {
  CHECK(lingd::has_disjoint_cycles(example1()));
  MatrixXd shared = MatrixXd::Zero(3, 3);
  shared(0, 1) = shared(1, 0) = shared(0, 2) = shared(2, 0) = 0.5;
  CHECK_FALSE(lingd::has_disjoint_cycles(shared));
  lingd::Rng rng(3);
  CHECK(lingd::has_disjoint_cycles(oracle::random_dag(6, rng)));
}

TEST_CASE("is_stable on cycle blocks") {
  const auto zero = lingd::is_stable(MatrixXd::Zero(4, 4));
  CHECK(zero.spectral_radius == 0.0);
  CHECK(zero.stable);

  // Eigenvalues of a 3-cycle are the cube roots of its product.
  const auto s = lingd::is_stable(three_cycle(2.0, -1.0, -0.3));
  CHECK(s.spectral_radius == doctest::Approx(0.8434326653017492).epsilon(1e-9));
  CHECK(s.stable);
  const auto u = lingd::is_stable(three_cycle(0.5, -1.0, -1.0 / 0.3));
  CHECK(u.spectral_radius == doctest::Approx(1.1856311014966876).epsilon(1e-9));
  CHECK_FALSE(u.stable);

  MatrixXd unit = MatrixXd::Zero(2, 2);
  unit(0, 1) = 2.0;
  unit(1, 0) = 0.5;
  const auto m = lingd::is_stable(unit);
  CHECK(m.spectral_radius == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(m.stable);
  CHECK(m.marginal);
}

TEST_CASE("is_stable agrees with matrix powers") {
  lingd::Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const bool small = trial % 2 == 0;
    const double rho = small ? 0.1 + 0.84 * rng.uniform() : 1.06 + rng.uniform();
    const MatrixXd b = oracle::random_with_spectral_radius(4, rho, rng);
    MatrixXd p = MatrixXd::Identity(4, 4);
    for (int k = 0; k < 64; ++k) p *= b;
    const auto st = lingd::is_stable(b);
    CHECK(st.spectral_radius == doctest::Approx(rho).epsilon(1e-9));
    CHECK(st.stable == small);
    if (small) {
      CHECK(p.cwiseAbs().maxCoeff() < b.cwiseAbs().maxCoeff());
    } else {
      CHECK(p.cwiseAbs().maxCoeff() > b.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("stability of disjoint-cycle graphs follows their cycle products") {
  lingd::Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(5));
    const bool stable = trial % 2 == 0;
    MatrixXd b = stable ? oracle::random_disjoint_cycle_model(n, rng, 0.1, 0.95)
                        : oracle::random_disjoint_cycle_model(n, rng, 1.05, 3.0);
    REQUIRE(lingd::has_disjoint_cycles(b));
    bool all_small = true;
    for (const auto& c : lingd::find_simple_cycles(b)) all_small = all_small && std::abs(c.product) < 1.0;
    CHECK(lingd::is_stable(b).stable == all_small);
  }
}

TEST_CASE("remove_self_loops rescales rows") {
  const MatrixXd zero_diag = example1();
  const auto same = lingd::remove_self_loops(zero_diag);
  CHECK(same.b.matrix() == zero_diag);
  CHECK(same.error_scales == VectorXd::Ones(5));

  MatrixXd b(2, 2);
  b << 0.0, 0.0, 0.8, 0.5;
  const auto r = lingd::remove_self_loops(b);
  CHECK(r.b(1, 0) == doctest::Approx(1.6));
  CHECK(r.b(1, 1) == 0.0);
  CHECK(r.error_scales(1) == doctest::Approx(2.0));

  MatrixXd unit = MatrixXd::Zero(2, 2);
  unit(0, 0) = 1.0;
  CHECK(code_of([&] { lingd::remove_self_loops(unit); }) == ErrorCode::UnitSelfLoop);
}

TEST_CASE("remove_self_loops preserves the equilibrium") {
  lingd::Rng rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(5));
    MatrixXd b_dyn(n, n);
    for (Eigen::Index i = 0; i < b_dyn.size(); ++i) b_dyn.data()[i] = 0.4 * rng.normal();
    for (int a = 0; a < n; ++a) b_dyn(a, a) = -0.8 + 1.6 * rng.uniform();
    const auto r = lingd::remove_self_loops(b_dyn);
    VectorXd e(n);
    for (int i = 0; i < n; ++i) e(i) = rng.normal();
    const VectorXd lhs = lingd::reduced_form(r.b) * r.error_scales.asDiagonal() * e;
    const VectorXd rhs = (MatrixXd::Identity(n, n) - b_dyn).fullPivLu().solve(e);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
  }
}
