#include "space.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

namespace obproj {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

Grid Grid::uniform(double a, double b, int n_points) {
  if (!(b > a)) throw Error(ErrorCode::kInvalidArgument, "grid requires b > a");
  if (n_points < 2)
    throw Error(ErrorCode::kInvalidArgument, "grid requires n_points >= 2");
  Grid g;
  g.a = a;
  g.b = b;
  g.nodes.resize(n_points);
  g.weights.resize(n_points);
  const double h = (b - a) / static_cast<double>(n_points - 1);
  for (int i = 0; i < n_points; ++i) g.nodes[i] = a + h * i;
  g.nodes[n_points - 1] = b;
  g.weights.setConstant(h);
  g.weights[0] = 0.5 * h;
  g.weights[n_points - 1] = 0.5 * h;
  return g;
}

SpacePtr Space::euclidean(int dim) {
  if (dim < 1)
    throw Error(ErrorCode::kInvalidArgument, "euclidean space needs dim >= 1");
  auto s = std::shared_ptr<Space>(new Space());
  s->is_grid_ = false;
  s->dim_ = dim;
  s->weights_ = RealVec::Ones(dim);
  s->cweights_ = s->weights_.cast<Complex>();
  s->tag_ = "euclidean:" + std::to_string(dim);
  return s;
}

SpacePtr Space::grid(double a, double b, int n_points) {
  return grid(Grid::uniform(a, b, n_points));
}

SpacePtr Space::grid(const Grid& g) {
  auto s = std::shared_ptr<Space>(new Space());
  s->is_grid_ = true;
  s->dim_ = g.n_points();
  s->grid_ = g;
  s->weights_ = g.weights;
  s->cweights_ = s->weights_.cast<Complex>();
  s->tag_ = "grid:" + format_double(g.a) + ":" + format_double(g.b) + ":" +
            std::to_string(g.n_points());
  return s;
}

const Grid& Space::grid_info() const {
  if (!is_grid_)
    throw Error(ErrorCode::kInvalidArgument, "space has no grid");
  return grid_;
}

Signal::Signal(SpacePtr s, Vec v) : space(std::move(s)), values(std::move(v)) {
  if (!space)
    throw Error(ErrorCode::kInvalidArgument, "signal requires a space");
  if (values.size() != space->dim())
    throw Error(ErrorCode::kInvalidArgument,
                "signal length does not match space dimension");
}

Signal Signal::zero(const SpacePtr& s) { return Signal(s, Vec::Zero(s->dim())); }

Signal Signal::basis(const SpacePtr& s, int i) {
  if (i < 0 || i >= s->dim())
    throw Error(ErrorCode::kIndexOutOfRange, "basis index out of range");
  Vec v = Vec::Zero(s->dim());
  v[i] = Complex(1.0, 0.0);
  return Signal(s, std::move(v));
}

bool Signal::same_space(const Signal& other) const {
  return space && other.space && *space == *other.space;
}

void require_same_space(const Signal& f, const Signal& g) {
  if (!f.same_space(g))
    throw Error(ErrorCode::kSpaceMismatch,
                "signals live in different spaces: '" +
                    (f.space ? f.space->tag() : std::string("null")) +
                    "' vs '" +
                    (g.space ? g.space->tag() : std::string("null")) + "'");
}

Signal operator+(const Signal& f, const Signal& g) {
  require_same_space(f, g);
  return Signal(f.space, f.values + g.values);
}

Signal operator-(const Signal& f, const Signal& g) {
  require_same_space(f, g);
  return Signal(f.space, f.values - g.values);
}

Signal operator*(Complex c, const Signal& f) {
  return Signal(f.space, c * f.values);
}

Signal operator*(double c, const Signal& f) {
  return Signal(f.space, Complex(c, 0.0) * f.values);
}

Complex inner_product(const Signal& f, const Signal& g) {
  require_same_space(f, g);
  // Eigen's dot conjugates the first factor, matching the adopted convention.
  if (!f.space->is_grid()) return f.values.dot(g.values);
  return f.values.conjugate()
      .cwiseProduct(g.values)
      .cwiseProduct(f.space->complex_weights())
      .sum();
}

double norm_sq(const Signal& f) {
  const Complex ip = inner_product(f, f);
  if (std::abs(ip.imag()) >= 1e-12)
    throw Error(ErrorCode::kNumericalDegeneracy,
                "norm_sq produced a non-real inner product");
  return ip.real() < 0.0 ? 0.0 : ip.real();
}

double norm(const Signal& f) { return std::sqrt(norm_sq(f)); }

OrthoResult orthonormalize(const std::vector<Signal>& vectors, double tol) {
  if (vectors.empty())
    throw Error(ErrorCode::kInvalidArgument, "orthonormalize needs input");
  for (std::size_t i = 1; i < vectors.size(); ++i)
    require_same_space(vectors[0], vectors[i]);

  OrthoResult out;
  for (const Signal& v : vectors) {
    const double vnorm = norm(v);
    Signal w = v;
    // Two MGS passes keep the basis orthonormal to near roundoff.
    for (int pass = 0; pass < 2; ++pass) {
      for (const Signal& b : out.basis) {
        w.values -= inner_product(b, w) * b.values;
      }
    }
    const double wnorm = norm(w);
    if (wnorm <= tol * vnorm) continue;  // dependent (or zero) input
    w.values /= Complex(wnorm, 0.0);
    out.basis.push_back(std::move(w));
  }
  out.rank = static_cast<int>(out.basis.size());
  return out;
}

Signal project_orthonormal(const std::vector<Signal>& basis, const Signal& f) {
  Signal p = Signal::zero(f.space);
  for (const Signal& b : basis) p.values += inner_product(b, f) * b.values;
  return p;
}

}  // namespace obproj
