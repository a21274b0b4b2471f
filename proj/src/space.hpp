#ifndef OBPROJ_SPACE_HPP
#define OBPROJ_SPACE_HPP

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace obproj {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;
using Mat = Eigen::MatrixXcd;

enum class ErrorCode {
  kInvalidArgument,
  kSpaceMismatch,
  kIndexOutOfRange,
  kDirectSumViolation,
  kNumericalDegeneracy,
  kParseError,
  kIoError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Uniform discretization of [a, b] carrying composite trapezoid weights.
/// sum(weights) == b - a by construction.
struct Grid {
  double a = 0.0;
  double b = 1.0;
  RealVec nodes;
  RealVec weights;

  static Grid uniform(double a, double b, int n_points);
  int n_points() const { return static_cast<int>(nodes.size()); }
};

/// An inner-product space: either plain C^n with the Euclidean product or
/// functions sampled on a Grid with the quadrature-weighted product
/// <f,g> = sum_p conj(f_p) g_p w_p  (conjugate-linear in the first slot).
///
/// Spaces are immutable and shared; two signals are combinable exactly when
/// their space tags compare equal.
class Space {
 public:
  static std::shared_ptr<const Space> euclidean(int dim);
  static std::shared_ptr<const Space> grid(double a, double b, int n_points);
  static std::shared_ptr<const Space> grid(const Grid& g);

  bool is_grid() const { return is_grid_; }
  const Grid& grid_info() const;
  int dim() const { return dim_; }
  const RealVec& weights() const { return weights_; }
  const Vec& complex_weights() const { return cweights_; }
  const std::string& tag() const { return tag_; }

  friend bool operator==(const Space& lhs, const Space& rhs) {
    return lhs.tag_ == rhs.tag_;
  }

 private:
  Space() = default;
  bool is_grid_ = false;
  int dim_ = 0;
  Grid grid_;
  RealVec weights_;
  Vec cweights_;
  std::string tag_;
};

using SpacePtr = std::shared_ptr<const Space>;

/// A vector of the working space: complex values bound to a Space.
struct Signal {
  SpacePtr space;
  Vec values;

  Signal() = default;
  Signal(SpacePtr s, Vec v);

  static Signal zero(const SpacePtr& s);
  /// i-th standard basis vector (0-based index).
  static Signal basis(const SpacePtr& s, int i);
  /// Sample a real-valued function on the grid nodes of s.
  template <typename F>
  static Signal sample(const SpacePtr& s, F&& f) {
    Vec v(s->dim());
    const RealVec& x = s->grid_info().nodes;
    for (int i = 0; i < v.size(); ++i) v[i] = Complex(f(x[i]), 0.0);
    return Signal(s, std::move(v));
  }

  bool same_space(const Signal& other) const;
};

void require_same_space(const Signal& f, const Signal& g);

Signal operator+(const Signal& f, const Signal& g);
Signal operator-(const Signal& f, const Signal& g);
Signal operator*(Complex c, const Signal& f);
Signal operator*(double c, const Signal& f);

Complex inner_product(const Signal& f, const Signal& g);

/// <f,f> with the (identically zero here) imaginary part asserted away.
double norm_sq(const Signal& f);
double norm(const Signal& f);

struct OrthoResult {
  std::vector<Signal> basis;
  int rank = 0;
};

/// Modified Gram-Schmidt with one reorthogonalization pass. Vectors whose
/// residual after projection falls at or below tol * (own norm) are dropped.
OrthoResult orthonormalize(const std::vector<Signal>& vectors, double tol);

/// sum_i b_i <b_i, f> for an orthonormal basis (caller guarantee).
Signal project_orthonormal(const std::vector<Signal>& basis, const Signal& f);

}  // namespace obproj

#endif  // OBPROJ_SPACE_HPP
