#ifndef OBPROJ_PROJECTOR_HPP
#define OBPROJ_PROJECTOR_HPP

#include <optional>
#include <vector>

#include "space.hpp"

namespace obproj {

/// Outcome of a single model-order increase.
struct UpdateReport {
  bool independent = false;   // residual case: new direction entered W_k
  double residual_ratio = 0;  // r = ||q|| / ||u_new||  (0 when u_new == 0)
  double q_norm = 0;
  double u_norm = 0;
};

/// Outcome of a single model-order decrease.
struct DowndateReport {
  bool removed_independent = false;  // |s - 1| <= dep_tol branch
  double s = 0;                      // <u_j, duals_j>
  int rank_before = 0;
  int rank_after = 0;
};

struct ReplaceReport {
  DowndateReport downdate;
  UpdateReport update;
};

/// How the residual basis is restored after removing an independent atom.
enum class QBasisPolicy {
  kRecompute,    // re-orthonormalize the surviving W-components
  kIncremental,  // deflate the deleted dual direction out of the basis
};

/// Recursive state of the oblique projector onto span{v_i} along a fixed
/// subspace spanned by wperp_basis.
///
/// The operator acts as  apply(f) = sum_i v_i <duals_i, f>.  Alongside the
/// atoms v_i the state carries their components u_i orthogonal to the null
/// space, the dual (analysis) vectors, and an orthonormal residual basis
/// q_basis spanning span{u_i}; q_basis doubles as the rank witness: the atoms
/// are linearly independent exactly when q_basis has one element per atom.
///
/// update/downdate/replace mutate in place and return a report; the state has
/// value semantics, so a plain copy is a snapshot usable for speculative
/// edits. Mutations are single-writer; the const operations (apply, apply_pw,
/// perturb_duals) may run concurrently with each other.
class ProjectorState {
 public:
  /// Orthonormalizes the null-space spanning set; starts with zero atoms.
  ProjectorState(const SpacePtr& space,
                 const std::vector<Signal>& wperp_spanning, double dep_tol);

  /// Appends one atom. Independent case: the new dual is q/||q||^2 built from
  /// the residual q of u_new against q_basis, and the old duals are corrected
  /// by their overlap with u_new. Dependent case: the new dual is y_choice
  /// (zero by default) and the operator is left unchanged.
  UpdateReport update(const Signal& v_new,
                      const std::optional<Signal>& y_choice = std::nullopt);

  /// Removes atom j (1-based). The branch is decided by s = <u_j, duals_j>,
  /// which equals 1 exactly when the deleted atom was independent of the
  /// rest; in that case the duals lose their component along duals_j and
  /// q_basis is rebuilt, otherwise the duals absorb a correction scaled by
  /// 1/(1 - s) and the operator is unchanged.
  DowndateReport downdate(int j);

  /// downdate(j) followed by update(v_new); v_new lands at the end. The state
  /// is restored on failure.
  ReplaceReport replace(int j, const Signal& v_new,
                        const std::optional<Signal>& y_choice = std::nullopt);

  /// sum_i v_i <duals_i, f>
  Signal apply(const Signal& f) const;

  /// sum_i u_i <duals_i, f>; equals the orthogonal projection of f onto
  /// span{u_i} regardless of how the duals were chosen.
  Signal apply_pw(const Signal& f) const;

  /// Duals shifted by arbitrary vectors y_i per
  ///   y~_i = duals_i + y_i - sum_j y_j <v_j, duals_i>.
  /// Leaves the operator unchanged; for independent atoms returns the duals
  /// themselves. Does not mutate the state.
  std::vector<Signal> perturb_duals(const std::vector<Signal>& y) const;

  int size() const { return static_cast<int>(v_.size()); }
  int rank() const { return static_cast<int>(q_basis_.size()); }
  bool independent() const { return rank() == size(); }

  const SpacePtr& space() const { return space_; }
  const std::vector<Signal>& wperp_basis() const { return wperp_basis_; }
  const std::vector<Signal>& atoms() const { return v_; }
  const std::vector<Signal>& w_components() const { return u_; }
  const std::vector<Signal>& duals() const { return duals_; }
  const std::vector<Signal>& q_basis() const { return q_basis_; }
  double dep_tol() const { return dep_tol_; }

  QBasisPolicy q_basis_policy() const { return q_policy_; }
  void set_q_basis_policy(QBasisPolicy p) { q_policy_ = p; }

  /// Operation counters and the conditioning indicator
  /// min_i ||q_i|| / ||u_i|| over all independent updates so far.
  struct Stats {
    long independent_updates = 0;
    long dependent_updates = 0;
    long redundant_downdates = 0;    // operator-preserving branch
    long independent_downdates = 0;  // rank-reducing branch
    double min_residual_ratio = 1.0;
  };
  const Stats& stats() const { return stats_; }

  /// Restores a state from its serialized parts (see serialize.hpp).
  static ProjectorState restore(SpacePtr space, std::vector<Signal> wperp_basis,
                                std::vector<Signal> v, std::vector<Signal> u,
                                std::vector<Signal> duals,
                                std::vector<Signal> q_basis, double dep_tol,
                                Stats stats);

 private:
  ProjectorState() = default;

  Signal project_off_wperp(const Signal& f) const;
  void check_index(int j) const;
  void require_in_space(const Signal& f) const;
  bool deflate_q_basis(const Signal& deleted_dual);

  SpacePtr space_;
  std::vector<Signal> wperp_basis_;
  std::vector<Signal> v_;
  std::vector<Signal> u_;
  std::vector<Signal> duals_;
  std::vector<Signal> q_basis_;
  double dep_tol_ = 1e-10;
  QBasisPolicy q_policy_ = QBasisPolicy::kRecompute;
  Stats stats_;
};

}  // namespace obproj

#endif  // OBPROJ_PROJECTOR_HPP
