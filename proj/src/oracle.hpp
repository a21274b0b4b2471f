#ifndef OBPROJ_ORACLE_HPP
#define OBPROJ_ORACLE_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "space.hpp"

namespace obproj {

/// SVD-based Moore-Penrose pseudo-inverse; singular values at or below
/// rel_tol * sigma_max are treated as zero. The zero matrix maps to the zero
/// matrix.
Mat pseudo_inverse(const Mat& m, double rel_tol = 1e-12);

/// The projector assembled in one shot from the Gram pseudo-inverse, used as
/// ground truth for the recursive path.
struct GramOracleResult {
  SpacePtr space;
  std::vector<Signal> atoms;   // v_i
  std::vector<Signal> w_comp;  // u_i = v_i - P_{W-perp} v_i
  std::vector<Signal> duals;
  Mat gram;       // entries <v_i, u_j>
  Mat gram_pinv;  // Moore-Penrose pseudo-inverse of gram
  int rank = 0;
  std::vector<double> singular_values;  // descending

  Signal apply(const Signal& f) const;
  /// Dense matrix of the operator on the standard basis (Euclidean mode).
  Mat matrix() const;
};

/// Builds the oblique projector onto span{v_set} along span{wperp_spanning}
/// directly: orthonormalize the null-space set, form u_i, take the
/// pseudo-inverse of the Gram matrix and read the duals off its rows. A
/// failing direct-sum condition shows up as a rank drop in the result, not
/// as an error.
GramOracleResult direct_projector(const std::vector<Signal>& v_set,
                                  const std::vector<Signal>& wperp_spanning,
                                  double rel_tol = 1e-12);

using Operator = std::function<Signal(const Signal&)>;

/// Distance between two operators on the same space. Euclidean mode compares
/// dense matrices in Frobenius norm; grid mode takes the max relative
/// deviation over seeded random probe signals.
double operator_distance(const Operator& a, const Operator& b,
                         const SpacePtr& space, int probes, std::uint64_t seed);

}  // namespace obproj

#endif  // OBPROJ_ORACLE_HPP
