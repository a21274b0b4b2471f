#ifndef OBPROJ_EXPERIMENT_HPP
#define OBPROJ_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "projector.hpp"
#include "serialize.hpp"
#include "space.hpp"

namespace obproj::experiments {

struct ExperimentConfig {
  enum class Kind { kDiffraction, kOscillators, kCustom };

  Kind experiment = Kind::kDiffraction;
  int grid_points = 2048;
  int k = 0;  // 0 selects the experiment preset
  std::optional<std::pair<int, int>> k_sweep;  // (lo, hi), lo <= hi
  std::uint64_t seed = 1;
  int pulse_count = 50;  // oscillators only
  double dep_tol = 1e-10;
  std::string output_dir;  // empty: compute only, write nothing
  bool oracle_check = false;
  // Residual-basis maintenance after rank-reducing downdates: full
  // re-orthonormalization (robust default) or the one-pass deflation,
  // exposed for benchmarking.
  QBasisPolicy q_basis_policy = QBasisPolicy::kRecompute;

  void validate() const;
};

struct SweepPoint {
  int k = 0;
  char phase = 'u';  // 'u' while enlarging, 'd' while downdating
  double rel_error = 0.0;
};

struct ExperimentReport {
  std::string experiment;
  int final_k = 0;
  /// ||recovered - truth|| / ||truth|| at the final state (relative L2 on the
  /// working grid); for the custom pipeline, ||f - recovered|| / ||f||.
  double rel_error = 0.0;
  std::vector<SweepPoint> sweep;
  double conditioning = 1.0;  // min ||q||/||u|| over independent updates
  ProjectorState::Stats stats;
  std::optional<double> oracle_distance;
  std::optional<double> oracle_rel_error;
  std::vector<std::string> outputs;

  std::string to_json() const;
};

/// Extraction of the diffraction peak from the dispersive background.
/// Default protocol (no k, no sweep): enlarge the model to k = 200, then
/// downdate to k = 40, reporting the recovery error at every visited order.
ExperimentReport run_diffraction(const ExperimentConfig& cfg);

/// Removal of impulsive spark noise from the damped-oscillator register.
/// The null subspace is spanned by all 400 spark pulses; default model
/// order is 100.
ExperimentReport run_oscillators(const ExperimentConfig& cfg);

/// The same split pipeline on a user-supplied model document.
ExperimentReport run_custom(const CustomModel& model,
                            const ExperimentConfig& cfg);
ExperimentReport run_custom_file(const std::string& model_path,
                                 const ExperimentConfig& cfg);

}  // namespace obproj::experiments

#endif  // OBPROJ_EXPERIMENT_HPP
