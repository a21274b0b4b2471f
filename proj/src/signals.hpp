#ifndef OBPROJ_SIGNALS_HPP
#define OBPROJ_SIGNALS_HPP

#include <cstdint>
#include <vector>

#include "space.hpp"

namespace obproj::signals {

// --- X-ray diffraction family, defined on [pi/2, 3pi/2] ---

/// Intensity of an n-layer crystal, sin^2(nx)/sin^2(x), evaluated pointwise.
/// The singularity at sin(x) = 0 is removable with limit n^2.
double diffraction_intensity(int n, double x);

Signal diffraction_atom(int n, const SpacePtr& grid_space);

/// Layer-count mixture coefficient c_n = e^{-0.05(n-7)^2} + 0.2 e^{-0.1(n-35)^2}.
double diffraction_coefficient(int n);

/// The simulated diffraction peak: sum of 60 layer atoms weighted by
/// diffraction_coefficient.
Signal diffraction_truth(const SpacePtr& grid_space);

/// Dispersive background 50 * sum_{j=1..3} j e^{-j(x - pi/2)}.
Signal diffraction_background(const SpacePtr& grid_space);

/// The three exponential background modes spanning the null subspace.
std::vector<Signal> wperp_diffraction(const SpacePtr& grid_space);

// --- Damped-oscillator family, defined on [0, 1] ---

/// Motion of the n-th oscillator, e^{-t} cos(pi n t).
Signal oscillator_atom(int n, const SpacePtr& grid_space);

/// Frequency-distribution coefficient 1 / (1 + 0.7 (n - 75)^2).
double oscillator_coefficient(int n);

/// Registered system motion: 100 oscillator atoms weighted by
/// oscillator_coefficient.
Signal oscillator_truth(const SpacePtr& grid_space);

inline constexpr int kSparkCount = 400;

/// Gaussian spark j (1-based): e^{-100000 (t - 0.0025 j)^2}, evaluated
/// pointwise.
double spark_value(int j, double t);

/// All 400 spark pulses sampled on the grid.
std::vector<Signal> spark_atoms(const SpacePtr& grid_space);

/// Random superposition of `count` distinct sparks. Indices are drawn by a
/// seeded SplitMix64 partial Fisher-Yates shuffle of 1..400; amplitudes are
/// uniform in [0.5 A, A] with A = max |oscillator_truth| on the grid.
Signal random_spark_noise(int count, std::uint64_t seed,
                          const SpacePtr& grid_space);

/// The spark indices and amplitudes the seed produces, for metadata output.
struct SparkDraw {
  std::vector<int> indices;      // 1-based, in draw order
  std::vector<double> amplitudes;
};
SparkDraw draw_sparks(int count, std::uint64_t seed,
                      const SpacePtr& grid_space);

}  // namespace obproj::signals

#endif  // OBPROJ_SIGNALS_HPP
