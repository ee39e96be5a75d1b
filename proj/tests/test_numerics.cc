#include <doctest.h>

#include <random>

#include "gsteady/errors.h"
#include "gsteady/numerics.h"
#include "test_util.h"

using namespace gsteady;

TEST_SUITE("numerics") {

TEST_CASE("symplectic form squares to minus identity") {
  for (int n = 1; n <= 4; ++n) {
    const Matrix j = symplectic_form(n);
    CHECK(max_abs(j * j + Matrix::Identity(2 * n, 2 * n)) == 0.0);
    CHECK(max_abs(j + j.transpose()) == 0.0);
    CHECK(j(0, n) == 1.0);
    CHECK(j(n, 0) == -1.0);
  }
}

TEST_CASE("mode_count rejects odd or non-square input") {
  CHECK(mode_count(Matrix::Zero(6, 6)) == 3);
  CHECK_THROWS_AS(mode_count(Matrix::Zero(3, 3)), InvalidInput);
  CHECK_THROWS_AS(mode_count(Matrix::Zero(2, 4)), InvalidInput);
  CHECK_THROWS_AS(mode_count(Matrix::Zero(0, 0)), InvalidInput);
}

TEST_CASE("tolerances must be finite and positive") {
  Tolerances t;
  CHECK_NOTHROW(t.validate());
  t.residual_tol = 0.0;
  CHECK_THROWS_AS(t.validate(), InvalidInput);
  t = {};
  t.eig_zero_band = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(t.validate(), InvalidInput);
}

TEST_CASE("hermitian spectrum is ascending and rejects non-hermitian input") {
  CMatrix m(2, 2);
  m << 2.0, Complex(0, 1), Complex(0, -1), 2.0;
  const Vector s = hermitian_spectrum(m, {});
  CHECK(s(0) == doctest::Approx(1.0));
  CHECK(s(1) == doctest::Approx(3.0));

  CMatrix bad = m;
  bad(0, 1) = Complex(0.5, 1.0);
  CHECK_THROWS_AS(hermitian_spectrum(bad, {}), InvalidInput);
}

TEST_CASE("inertia counts signs with a relative zero band") {
  Matrix d = Vector((Vector(4) << 3.0, 1e-12, -2.0, 5.0).finished()).asDiagonal();
  const InertiaIndex in = inertia(d, {});
  CHECK(in == InertiaIndex{2, 1, 1});
  CHECK(in.dimension() == 4);

  // Scaling by 1e6 keeps the same verdict: the band is relative.
  const InertiaIndex scaled = inertia(Matrix(1e6 * d), {});
  CHECK(scaled == in);

  CHECK(definiteness_of({3, 0, 0}) == Definiteness::PositiveDefinite);
  CHECK(definiteness_of({2, 1, 0}) == Definiteness::PositiveSemidefiniteMarginal);
  CHECK(definiteness_of({2, 1, 1}) == Definiteness::Indefinite);
}

TEST_CASE("inertia is invariant under congruence") {
  std::mt19937 rng(11);
  const Matrix d = Vector((Vector(5) << 1.0, -1.0, 2.0, 0.0, -3.0).finished()).asDiagonal();
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix s = testing::random_matrix(rng, 5, 5);
    CHECK(inertia(Matrix(s * d * s.transpose()), {}) == InertiaIndex{2, 1, 2});
  }
}

TEST_CASE("psd verdict on vacuum plus iJ is marginal") {
  const CMatrix m = Matrix::Identity(2, 2).cast<Complex>() + Complex(0, 1) * symplectic_form(1).cast<Complex>();
  CHECK(psd_verdict(m, {}) == Definiteness::PositiveSemidefiniteMarginal);
}

TEST_CASE("spectral abscissa and sorted spectrum") {
  Matrix a(2, 2);
  a << -1.0, 2.0, 0.0, -3.0;
  CHECK(spectral_abscissa(a) == doctest::Approx(-1.0));
  const auto s = sorted_spectrum(a);
  REQUIRE(s.size() == 2);
  CHECK(s[0].real() == doctest::Approx(-3.0));
  CHECK(s[1].real() == doctest::Approx(-1.0));

  Matrix rot(2, 2);
  rot << -0.5, 1.0, -1.0, -0.5;
  CHECK(spectral_abscissa(rot) == doctest::Approx(-0.5));
}

TEST_CASE("reorder between block and interleaved layouts") {
  const auto src = interleaved_source(3);
  CHECK(src == std::vector<int>{0, 3, 1, 4, 2, 5});

  const Matrix j = symplectic_form(2);
  const Matrix inter = reorder(j, {2, Layout::BlockQP}, Layout::InterleavedQP);
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 1) = 1.0;
  expected(1, 0) = -1.0;
  expected(2, 3) = 1.0;
  expected(3, 2) = -1.0;
  CHECK(max_abs(inter - expected) == 0.0);

  std::mt19937 rng(3);
  const Matrix m = testing::random_matrix(rng, 6, 6);
  const Matrix back = reorder(reorder(m, {3, Layout::BlockQP}, Layout::InterleavedQP),
                              {3, Layout::InterleavedQP}, Layout::BlockQP);
  CHECK(max_abs(back - m) == 0.0);
  CHECK_THROWS_AS(reorder(m, {2, Layout::BlockQP}, Layout::InterleavedQP), InvalidInput);
}

}
