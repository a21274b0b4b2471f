#include "projector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace obproj {

ProjectorState::ProjectorState(const SpacePtr& space,
                               const std::vector<Signal>& wperp_spanning,
                               double dep_tol)
    : space_(space), dep_tol_(dep_tol) {
  if (!space_) throw Error(ErrorCode::kInvalidArgument, "null space");
  if (!(dep_tol > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "dep_tol must be positive");
  for (const Signal& w : wperp_spanning) {
    if (!w.space || !(*w.space == *space_))
      throw Error(ErrorCode::kSpaceMismatch,
                  "null-space spanning vector bound to a different space");
  }
  if (!wperp_spanning.empty())
    wperp_basis_ = orthonormalize(wperp_spanning, dep_tol_).basis;
}

Signal ProjectorState::project_off_wperp(const Signal& f) const {
  Signal u = f;
  // Two passes, as in orthonormalize: the component along W-perp must be
  // removed to near roundoff or biorthogonality decays over long sequences.
  for (int pass = 0; pass < 2; ++pass)
    for (const Signal& b : wperp_basis_)
      u.values -= inner_product(b, u) * b.values;
  return u;
}

void ProjectorState::require_in_space(const Signal& f) const {
  if (!f.space || !(*f.space == *space_))
    throw Error(ErrorCode::kSpaceMismatch,
                "signal bound to a different space than the projector");
}

UpdateReport ProjectorState::update(const Signal& v_new,
                                    const std::optional<Signal>& y_choice) {
  require_in_space(v_new);
  if (y_choice) require_in_space(*y_choice);

  const double v_norm = norm(v_new);
  Signal u_new = project_off_wperp(v_new);
  const double u_norm = norm(u_new);

  // u_new == 0 means v_new lies entirely in the null space (or is zero);
  // admitting it would break the direct-sum condition.
  if (v_norm > 0.0 && u_norm <= dep_tol_ * v_norm)
    throw Error(ErrorCode::kDirectSumViolation,
                "new atom lies in the null subspace");
  if (v_norm == 0.0 && size() == 0)
    throw Error(ErrorCode::kDirectSumViolation,
                "cannot start the model with the zero atom");

  Signal q = u_new;
  for (int pass = 0; pass < 2; ++pass)
    for (const Signal& b : q_basis_)
      q.values -= inner_product(b, q) * b.values;
  const double q_norm = norm(q);
  const double r = u_norm > 0.0 ? q_norm / u_norm : 0.0;

  UpdateReport report;
  report.residual_ratio = r;
  report.q_norm = q_norm;
  report.u_norm = u_norm;

  if (r > dep_tol_) {
    report.independent = true;
    Signal new_dual(space_, q.values / Complex(q_norm * q_norm, 0.0));
    for (std::size_t i = 0; i < duals_.size(); ++i) {
      const Complex c = inner_product(u_new, duals_[i]);
      duals_[i].values -= c * new_dual.values;
    }
    duals_.push_back(std::move(new_dual));
    q_basis_.emplace_back(space_, q.values / Complex(q_norm, 0.0));
    ++stats_.independent_updates;
    stats_.min_residual_ratio = std::min(stats_.min_residual_ratio, r);
  } else {
    report.independent = false;
    Signal y = y_choice ? *y_choice : Signal::zero(space_);
    for (std::size_t i = 0; i < duals_.size(); ++i) {
      const Complex c = inner_product(u_new, duals_[i]);
      duals_[i].values -= c * y.values;
    }
    duals_.push_back(std::move(y));
    ++stats_.dependent_updates;
  }
  v_.push_back(v_new);
  u_.push_back(std::move(u_new));
  return report;
}

void ProjectorState::check_index(int j) const {
  if (j < 1 || j > size())
    throw Error(ErrorCode::kIndexOutOfRange,
                "atom index " + std::to_string(j) + " outside 1.." +
                    std::to_string(size()));
}

DowndateReport ProjectorState::downdate(int j) {
  check_index(j);
  const int idx = j - 1;

  const Complex s_c = inner_product(u_[idx], duals_[idx]);
  const double s = s_c.real();

  DowndateReport report;
  report.s = s;
  report.rank_before = rank();
  report.removed_independent = std::abs(s - 1.0) <= dep_tol_;

  const Signal uj = u_[idx];
  const Signal dj = duals_[idx];
  v_.erase(v_.begin() + idx);
  u_.erase(u_.begin() + idx);
  duals_.erase(duals_.begin() + idx);

  if (report.removed_independent) {
    // The deleted atom carried its own direction: strip the duals of their
    // component along its dual and rebuild the residual basis.
    const double dj_nsq = norm_sq(dj);
    if (dj_nsq > 0.0) {
      for (Signal& d : duals_) {
        const Complex c = inner_product(dj, d) / Complex(dj_nsq, 0.0);
        d.values -= c * dj.values;
      }
    }
    if (u_.empty()) {
      q_basis_.clear();
    } else if (q_policy_ == QBasisPolicy::kRecompute ||
               !deflate_q_basis(dj)) {
      q_basis_ = orthonormalize(u_, dep_tol_).basis;
    }
    ++stats_.independent_downdates;
  } else {
    const double denom = 1.0 - s;
    if (std::abs(denom) < 1e2 * std::numeric_limits<double>::epsilon())
      throw Error(ErrorCode::kNumericalDegeneracy,
                  "downdate correction 1/(1-s) is numerically singular");
    for (Signal& d : duals_) {
      const Complex c = inner_product(uj, d) / Complex(denom, 0.0);
      d.values += c * dj.values;
    }
    ++stats_.redundant_downdates;
  }
  report.rank_after = rank();
  return report;
}

bool ProjectorState::deflate_q_basis(const Signal& deleted_dual) {
  // Rotate the deleted dual's direction into the last basis column and drop
  // it: with a = coordinates of the normalized dual in q_basis, a Householder
  // reflector H sending e_m to -a makes (q_basis * H) orthonormal with last
  // column along the dual. One pass over the basis instead of a full
  // re-orthonormalization.
  const int m = static_cast<int>(q_basis_.size());
  const double dn = norm(deleted_dual);
  if (m == 0 || dn == 0.0) return false;
  const Signal dhat(space_, deleted_dual.values / Complex(dn, 0.0));

  Vec a(m);
  for (int n = 0; n < m; ++n) a[n] = inner_product(q_basis_[n], dhat);
  const double an = a.norm();
  // A dual with a large component outside span(q_basis) signals duals not
  // produced by the canonical recursion; fall back to recomputation.
  if (an < 0.5) return false;
  a /= Complex(an, 0.0);

  // phase-align so that a[m-1] is real and nonnegative
  if (std::abs(a[m - 1]) > 0.0) a *= std::conj(a[m - 1]) / std::abs(a[m - 1]);

  Vec w = a;
  w[m - 1] += 1.0;  // w = e_m + a, ||w||^2 = 2 + 2 a_m >= 2
  const double wsq = w.squaredNorm();

  Signal bw = Signal::zero(space_);
  for (int n = 0; n < m; ++n) bw.values += w[n] * q_basis_[n].values;

  std::vector<Signal> rotated;
  rotated.reserve(m - 1);
  for (int n = 0; n < m - 1; ++n) {
    const Complex c = 2.0 * std::conj(w[n]) / wsq;
    rotated.emplace_back(space_, q_basis_[n].values - c * bw.values);
  }
  q_basis_ = std::move(rotated);
  return true;
}

ReplaceReport ProjectorState::replace(int j, const Signal& v_new,
                                      const std::optional<Signal>& y_choice) {
  check_index(j);
  ProjectorState snapshot = *this;
  try {
    ReplaceReport report;
    report.downdate = downdate(j);
    report.update = update(v_new, y_choice);
    return report;
  } catch (...) {
    *this = std::move(snapshot);
    throw;
  }
}

Signal ProjectorState::apply(const Signal& f) const {
  require_in_space(f);
  Signal out = Signal::zero(space_);
  for (std::size_t i = 0; i < v_.size(); ++i)
    out.values += inner_product(duals_[i], f) * v_[i].values;
  return out;
}

Signal ProjectorState::apply_pw(const Signal& f) const {
  require_in_space(f);
  Signal out = Signal::zero(space_);
  for (std::size_t i = 0; i < u_.size(); ++i)
    out.values += inner_product(duals_[i], f) * u_[i].values;
  return out;
}

std::vector<Signal> ProjectorState::perturb_duals(
    const std::vector<Signal>& y) const {
  if (static_cast<int>(y.size()) != size())
    throw Error(ErrorCode::kInvalidArgument,
                "perturb_duals needs one shift vector per atom");
  for (const Signal& yi : y) require_in_space(yi);

  std::vector<Signal> out = duals_;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].values += y[i].values;
    for (std::size_t jj = 0; jj < y.size(); ++jj) {
      const Complex c = inner_product(v_[jj], duals_[i]);
      out[i].values -= c * y[jj].values;
    }
  }
  return out;
}

ProjectorState ProjectorState::restore(SpacePtr space,
                                       std::vector<Signal> wperp_basis,
                                       std::vector<Signal> v,
                                       std::vector<Signal> u,
                                       std::vector<Signal> duals,
                                       std::vector<Signal> q_basis,
                                       double dep_tol, Stats stats) {
  if (v.size() != u.size() || v.size() != duals.size())
    throw Error(ErrorCode::kInvalidArgument,
                "restore: v, u and duals must have equal lengths");
  ProjectorState st;
  st.space_ = std::move(space);
  st.wperp_basis_ = std::move(wperp_basis);
  st.v_ = std::move(v);
  st.u_ = std::move(u);
  st.duals_ = std::move(duals);
  st.q_basis_ = std::move(q_basis);
  st.dep_tol_ = dep_tol;
  st.stats_ = stats;
  return st;
}

}  // namespace obproj
