#include "oracle.hpp"

#include <Eigen/SVD>

#include <cmath>

#include "rng.hpp"

namespace obproj {

Mat pseudo_inverse(const Mat& m, double rel_tol) {
  if (m.size() == 0) return Mat(m.cols(), m.rows());
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVec& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? rel_tol * sv[0] : 0.0;
  RealVec inv_sv = RealVec::Zero(sv.size());
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > cutoff && sv[i] > 0.0) inv_sv[i] = 1.0 / sv[i];
  return svd.matrixV() * inv_sv.cast<Complex>().asDiagonal() *
         svd.matrixU().adjoint();
}

Signal GramOracleResult::apply(const Signal& f) const {
  Signal out = Signal::zero(space);
  for (std::size_t i = 0; i < atoms.size(); ++i)
    out.values += inner_product(duals[i], f) * atoms[i].values;
  return out;
}

Mat GramOracleResult::matrix() const {
  const int n = space->dim();
  Mat m = Mat::Zero(n, n);
  // apply(f) = sum_i v_i <duals_i, f>  =  (sum_i v_i duals_i^H) f
  for (std::size_t i = 0; i < atoms.size(); ++i)
    m += atoms[i].values * duals[i].values.adjoint();
  if (space->is_grid()) {
    // Grid inner products carry quadrature weights; fold them into the
    // matrix so that m * f.values reproduces apply(f).
    m = m * space->weights().cast<Complex>().asDiagonal();
  }
  return m;
}

GramOracleResult direct_projector(const std::vector<Signal>& v_set,
                                  const std::vector<Signal>& wperp_spanning,
                                  double rel_tol) {
  if (v_set.empty())
    throw Error(ErrorCode::kInvalidArgument, "direct_projector needs atoms");
  GramOracleResult res;
  res.space = v_set[0].space;
  for (const Signal& v : v_set) require_same_space(v_set[0], v);
  for (const Signal& w : wperp_spanning) require_same_space(v_set[0], w);

  std::vector<Signal> wbasis;
  if (!wperp_spanning.empty())
    wbasis = orthonormalize(wperp_spanning, 1e-10).basis;

  const int k = static_cast<int>(v_set.size());
  res.atoms = v_set;
  res.w_comp.reserve(k);
  for (const Signal& v : v_set) {
    Signal u = v;
    for (int pass = 0; pass < 2; ++pass)
      for (const Signal& b : wbasis) u.values -= inner_product(b, u) * b.values;
    res.w_comp.push_back(std::move(u));
  }

  res.gram = Mat(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      res.gram(i, j) = inner_product(res.atoms[i], res.w_comp[j]);

  Eigen::JacobiSVD<Mat> svd(res.gram,
                            Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVec& sv = svd.singularValues();
  res.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double cutoff = sv.size() > 0 ? rel_tol * sv[0] : 0.0;
  res.rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > cutoff && sv[i] > 0.0) ++res.rank;
  res.gram_pinv = pseudo_inverse(res.gram, rel_tol);

  // duals_i = sum_j conj(pinv_{ij}) u_j: the conjugate keeps
  // apply(f) = sum_i v_i <duals_i, f> equal to V pinv(G) V* P_W f under the
  // conjugate-linear-in-first-slot product. Real instances are unaffected.
  res.duals.reserve(k);
  for (int i = 0; i < k; ++i) {
    Signal d = Signal::zero(res.space);
    for (int j = 0; j < k; ++j)
      d.values += std::conj(res.gram_pinv(i, j)) * res.w_comp[j].values;
    res.duals.push_back(std::move(d));
  }
  return res;
}

double operator_distance(const Operator& a, const Operator& b,
                         const SpacePtr& space, int probes,
                         std::uint64_t seed) {
  if (!space->is_grid()) {
    const int n = space->dim();
    Mat ma(n, n), mb(n, n);
    for (int j = 0; j < n; ++j) {
      const Signal e = Signal::basis(space, j);
      ma.col(j) = a(e).values;
      mb.col(j) = b(e).values;
    }
    return (ma - mb).norm();  // Frobenius
  }
  SplitMix64 rng(seed);
  double worst = 0.0;
  for (int p = 0; p < probes; ++p) {
    Vec f(space->dim());
    for (int i = 0; i < f.size(); ++i)
      f[i] = Complex(2.0 * rng.uniform() - 1.0, 0.0);
    const Signal probe(space, std::move(f));
    const double fn = norm(probe);
    if (fn == 0.0) continue;
    const double d = norm(a(probe) - b(probe)) / fn;
    worst = std::max(worst, d);
  }
  return worst;
}

}  // namespace obproj
