#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "signals.hpp"
#include "space.hpp"

using namespace obproj;
namespace sig = obproj::signals;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("diffraction atom values") {
  // n = 1 is the constant 1
  const SpacePtr s = Space::grid(kPi / 2, 3 * kPi / 2, 513);
  const Signal a1 = sig::diffraction_atom(1, s);
  for (int i = 0; i < s->dim(); ++i)
    CHECK(a1.values[i].real() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(sig::diffraction_intensity(2, kPi / 2) ==
        doctest::Approx(0.0).epsilon(1e-12));
  // removable singularity at x = pi: limit n^2
  CHECK(sig::diffraction_intensity(3, kPi) == doctest::Approx(9.0));
  CHECK(sig::diffraction_intensity(7, kPi) == doctest::Approx(49.0));
}

TEST_CASE("diffraction atoms are nonnegative and finite") {
  const SpacePtr s = Space::grid(kPi / 2, 3 * kPi / 2, 1025);  // hits x = pi
  for (int n : {1, 2, 5, 13, 40}) {
    const Signal a = sig::diffraction_atom(n, s);
    for (int i = 0; i < s->dim(); ++i) {
      CHECK(a.values[i].real() >= 0.0);
      CHECK(std::isfinite(a.values[i].real()));
    }
  }
}

TEST_CASE("diffraction coefficients") {
  // c_7: second hump is ~2e-35, invisible at double precision
  CHECK(sig::diffraction_coefficient(7) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sig::diffraction_coefficient(35) ==
        doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("diffraction truth against refined-grid recomputation") {
  const SpacePtr coarse = Space::grid(kPi / 2, 3 * kPi / 2, 257);
  const SpacePtr fine = Space::grid(kPi / 2, 3 * kPi / 2, 1025);
  const Signal ft_coarse = sig::diffraction_truth(coarse);
  const Signal ft_fine = sig::diffraction_truth(fine);
  // node x_i of the coarse grid is node 4i of the fine one
  for (int i = 0; i < coarse->dim(); i += 16) {
    CHECK(ft_coarse.values[i].real() ==
          doctest::Approx(ft_fine.values[4 * i].real()).epsilon(1e-8));
  }
}

TEST_CASE("diffraction background values") {
  const SpacePtr s = Space::grid(kPi / 2, 3 * kPi / 2, 1025);
  const Signal bg = sig::diffraction_background(s);
  CHECK(bg.values[0].real() == doctest::Approx(300.0).epsilon(1e-13));
  // frozen from a high-precision evaluation of 50(e^-pi + 2e^-2pi + 3e^-3pi)
  CHECK(bg.values[s->dim() - 1].real() ==
        doctest::Approx(2.3595451139949571).epsilon(1e-13));
  for (int i = 1; i < s->dim(); ++i)
    CHECK(bg.values[i].real() < bg.values[i - 1].real());
}

TEST_CASE("diffraction null-space modes") {
  const SpacePtr s = Space::grid(kPi / 2, 3 * kPi / 2, 513);
  const std::vector<Signal> w = sig::wperp_diffraction(s);
  REQUIRE(w.size() == 3);
  for (const Signal& wj : w)
    CHECK(wj.values[0].real() == doctest::Approx(1.0).epsilon(1e-14));

  // Gram matrix is positive definite with finite conditioning
  Mat gram(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gram(i, j) = inner_product(w[i], w[j]);
  Eigen::SelfAdjointEigenSolver<Mat> eig(gram);
  REQUIRE(eig.info() == Eigen::Success);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  CHECK(lo > 0.0);
  MESSAGE("background Gram condition number: ", hi / lo);
  CHECK(std::isfinite(hi / lo));
}

TEST_CASE("oscillator atom values") {
  const SpacePtr s = Space::grid(0.0, 1.0, 513);
  for (int n : {1, 2, 75}) {
    const Signal a = sig::oscillator_atom(n, s);
    CHECK(a.values[0].real() == doctest::Approx(1.0).epsilon(1e-14));
  }
  const Signal a2 = sig::oscillator_atom(2, s);
  CHECK(a2.values[s->dim() - 1].real() ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-13));

  // x_75(0.5) = e^{-1/2} cos(37.5 pi) = 0
  const SpacePtr mid = Space::grid(0.0, 1.0, 3);
  const Signal a75 = sig::oscillator_atom(75, mid);
  CHECK(std::abs(a75.values[1].real()) <= 1e-12);
}

TEST_CASE("oscillator coefficients and truth") {
  CHECK(sig::oscillator_coefficient(75) == 1.0);
  CHECK(sig::oscillator_coefficient(74) ==
        doctest::Approx(1.0 / 1.7).epsilon(1e-15));

  const SpacePtr coarse = Space::grid(0.0, 1.0, 129);
  const SpacePtr fine = Space::grid(0.0, 1.0, 513);
  const Signal tc = sig::oscillator_truth(coarse);
  const Signal tf = sig::oscillator_truth(fine);
  for (int i = 0; i < coarse->dim(); i += 8)
    CHECK(tc.values[i].real() ==
          doctest::Approx(tf.values[4 * i].real()).epsilon(1e-10));
}

TEST_CASE("spark pulse shape") {
  // grid with nodes at multiples of 0.0025 hits every pulse center
  const SpacePtr s = Space::grid(0.0, 1.0, 401);
  const std::vector<Signal> pulses = sig::spark_atoms(s);
  REQUIRE(pulses.size() == 400);

  // pulse 1 peaks at t = 0.0025 (node 1) with value 1
  CHECK(pulses[0].values[1].real() == doctest::Approx(1.0).epsilon(1e-14));

  // value 0.01 away from the center: e^{-10}
  CHECK(sig::spark_value(1, 0.0025 + 0.01) ==
        doctest::Approx(4.5399929762484854e-5).epsilon(1e-12));

  // pulses 4 apart overlap below e^{-10} at each other's center
  CHECK(sig::spark_value(10, 0.0025 * 14) <= 4.54e-5);
}

TEST_CASE("random spark noise is deterministic and counts its support") {
  const SpacePtr s = Space::grid(0.0, 1.0, 401);

  const Signal none = sig::random_spark_noise(0, 99, s);
  CHECK(none.values.norm() == 0.0);

  const Signal a = sig::random_spark_noise(50, 1, s);
  const Signal b = sig::random_spark_noise(50, 1, s);
  CHECK((a.values - b.values).norm() == 0.0);

  const Signal c = sig::random_spark_noise(50, 2, s);
  CHECK((a.values - c.values).norm() > 0.0);

  const sig::SparkDraw draw = sig::draw_sparks(50, 1, s);
  const std::set<int> unique(draw.indices.begin(), draw.indices.end());
  CHECK(unique.size() == 50);
  for (int j : draw.indices) {
    CHECK(j >= 1);
    CHECK(j <= 400);
  }

  // amplitudes respect the documented rule
  const Signal f1 = sig::oscillator_truth(s);
  const double peak = f1.values.cwiseAbs().maxCoeff();
  for (double amp : draw.amplitudes) {
    CHECK(amp >= 0.5 * peak);
    CHECK(amp <= peak);
  }

  CHECK_THROWS_AS(sig::random_spark_noise(401, 1, s), Error);
}
