#include "signals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rng.hpp"

namespace obproj::signals {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSinFloor = 1e-8;  // switch to the analytic limit below this
}  // namespace

double diffraction_intensity(int n, double x) {
  const double s = std::sin(x);
  if (std::abs(s) < kSinFloor) return static_cast<double>(n) * n;
  const double sn = std::sin(n * x);
  return (sn * sn) / (s * s);
}

Signal diffraction_atom(int n, const SpacePtr& grid_space) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "atom index n >= 1");
  return Signal::sample(grid_space,
                        [n](double x) { return diffraction_intensity(n, x); });
}

double diffraction_coefficient(int n) {
  const double d1 = n - 7.0, d2 = n - 35.0;
  return std::exp(-0.05 * d1 * d1) + 0.2 * std::exp(-0.1 * d2 * d2);
}

Signal diffraction_truth(const SpacePtr& grid_space) {
  Signal f = Signal::zero(grid_space);
  for (int n = 1; n <= 60; ++n)
    f.values += diffraction_coefficient(n) *
                diffraction_atom(n, grid_space).values;
  return f;
}

Signal diffraction_background(const SpacePtr& grid_space) {
  return Signal::sample(grid_space, [](double x) {
    double acc = 0.0;
    for (int j = 1; j <= 3; ++j) acc += j * std::exp(-j * (x - kPi / 2.0));
    return 50.0 * acc;
  });
}

std::vector<Signal> wperp_diffraction(const SpacePtr& grid_space) {
  std::vector<Signal> w;
  w.reserve(3);
  for (int j = 1; j <= 3; ++j)
    w.push_back(Signal::sample(grid_space, [j](double x) {
      return std::exp(-j * (x - kPi / 2.0));
    }));
  return w;
}

Signal oscillator_atom(int n, const SpacePtr& grid_space) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "atom index n >= 1");
  return Signal::sample(grid_space, [n](double t) {
    return std::exp(-t) * std::cos(kPi * n * t);
  });
}

double oscillator_coefficient(int n) {
  const double d = n - 75.0;
  return 1.0 / (1.0 + 0.7 * d * d);
}

Signal oscillator_truth(const SpacePtr& grid_space) {
  Signal f = Signal::zero(grid_space);
  for (int n = 1; n <= 100; ++n)
    f.values += oscillator_coefficient(n) *
                oscillator_atom(n, grid_space).values;
  return f;
}

double spark_value(int j, double t) {
  const double d = t - 0.0025 * j;
  return std::exp(-100000.0 * d * d);
}

std::vector<Signal> spark_atoms(const SpacePtr& grid_space) {
  std::vector<Signal> pulses;
  pulses.reserve(kSparkCount);
  for (int j = 1; j <= kSparkCount; ++j)
    pulses.push_back(Signal::sample(
        grid_space, [j](double t) { return spark_value(j, t); }));
  return pulses;
}

SparkDraw draw_sparks(int count, std::uint64_t seed,
                      const SpacePtr& grid_space) {
  if (count < 0 || count > kSparkCount)
    throw Error(ErrorCode::kInvalidArgument,
                "spark count must lie in 0.." + std::to_string(kSparkCount));
  SparkDraw draw;
  SplitMix64 rng(seed);

  // Partial Fisher-Yates over 1..400: distinct indices, deterministic order.
  std::vector<int> pool(kSparkCount);
  std::iota(pool.begin(), pool.end(), 1);
  for (int i = 0; i < count; ++i) {
    const auto pick =
        i + static_cast<int>(rng.below(static_cast<std::uint64_t>(
                kSparkCount - i)));
    std::swap(pool[i], pool[pick]);
    draw.indices.push_back(pool[i]);
  }

  const Signal f1 = oscillator_truth(grid_space);
  const double peak = f1.values.cwiseAbs().maxCoeff();
  for (int i = 0; i < count; ++i)
    draw.amplitudes.push_back(peak * (0.5 + 0.5 * rng.uniform()));
  return draw;
}

Signal random_spark_noise(int count, std::uint64_t seed,
                          const SpacePtr& grid_space) {
  const SparkDraw draw = draw_sparks(count, seed, grid_space);
  Signal noise = Signal::zero(grid_space);
  for (int i = 0; i < count; ++i) {
    const int j = draw.indices[i];
    const double amp = draw.amplitudes[i];
    noise.values += amp * Signal::sample(grid_space, [j](double t) {
                            return spark_value(j, t);
                          }).values;
  }
  return noise;
}

}  // namespace obproj::signals
