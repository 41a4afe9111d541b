#pragma once

#include "ifsends/exact_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace ifsends {

inline constexpr std::size_t kMaxDimension = 3;

/// x -> M x + t over Q(sqrt r). Affine maps are equal as functions on R^d
/// exactly when their coefficients agree, so == is function equality.
struct AffineMap {
  Matrix linear;
  Vector translation;

  AffineMap() = default;
  AffineMap(Matrix m, Vector t) : linear(std::move(m)), translation(std::move(t)) {
    if (linear.dim() != translation.dim()) throw DimensionError("affine map: matrix/vector dimension mismatch");
  }

  static AffineMap identity(std::size_t dim) { return {Matrix::identity(dim), Vector(dim)}; }

  std::size_t dim() const { return translation.dim(); }

  friend bool operator==(const AffineMap&, const AffineMap&) = default;

  std::size_t hash() const {
    std::size_t h = linear.hash();
    detail::hash_mix(h, translation.hash());
    return h;
  }
};

struct AffineMapHash {
  std::size_t operator()(const AffineMap& f) const { return f.hash(); }
};

/// f o g: apply g first.
inline AffineMap compose(const AffineMap& f, const AffineMap& g) {
  if (f.dim() != g.dim()) throw DimensionError("compose: dimension mismatch");
  Vector t = f.linear * g.translation;
  t += f.translation;
  return {f.linear * g.linear, std::move(t)};
}

inline bool is_constant(const AffineMap& f) { return f.linear.is_zero(); }

inline Point apply(const AffineMap& f, const Point& p) {
  if (f.dim() != p.dim()) throw DimensionError("apply: dimension mismatch");
  Point q = f.linear * p;
  q += f.translation;
  return q;
}

/// Unique solution of (I - M) p = t. Throws ArithmeticError when I - M is singular.
inline Point fixed_point(const AffineMap& f) {
  return solve(Matrix::identity(f.dim()) - f.linear, f.translation);
}

/// Upper bound on the operator 2-norm of the linear part: Frobenius norm in
/// doubles plus 1e-9.
inline double contraction_bound(const AffineMap& f) {
  double sum = 0.0;
  for (const auto& x : f.linear.entries()) {
    const double v = x.to_double();
    sum += v * v;
  }
  return std::sqrt(sum) + 1e-9;
}

inline double euclidean_norm(const Vector& v) {
  double sum = 0.0;
  for (const auto& x : v) {
    const double d = x.to_double();
    sum += d * d;
  }
  return std::sqrt(sum);
}

struct Generator {
  std::string name;
  AffineMap map;

  friend bool operator==(const Generator&, const Generator&) = default;
};

class AdmissionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BoundingBall {
  double radius = 0.0;
  double diameter = 0.0;
};

/// Ball around the origin invariant under every map with Lipschitz factor
/// <= lambda: R = max |t_f| / (1 - lambda), nudged upward.
inline BoundingBall bounding_ball(const std::vector<Generator>& generators, double lambda) {
  double max_t = 0.0;
  for (const auto& g : generators) max_t = std::max(max_t, euclidean_norm(g.map.translation));
  const double r = max_t / (1.0 - lambda) * (1.0 + 1e-12);
  return {r, 2.0 * r};
}

inline bool is_identifier(const std::string& name) {
  static const std::regex re("[a-zA-Z][a-zA-Z0-9_]*");
  return std::regex_match(name, re);
}

/// An admitted iterated function system: every generator certified
/// contracting, attractor contained in a ball of diameter `diameter_bound()`.
class IfsSystem {
 public:
  IfsSystem() = default;

  static IfsSystem admit(std::size_t dim, std::uint32_t radicand, std::vector<Generator> generators) {
    if (dim < 1 || dim > kMaxDimension) throw AdmissionError("dimension must be 1, 2 or 3");
    if (!is_square_free(radicand)) throw AdmissionError("radicand " + std::to_string(radicand) + " is not square-free");
    if (generators.empty()) throw AdmissionError("system has no generators");
    const std::uint32_t field_r = radicand <= 1 ? 0 : radicand;
    std::set<std::string> names;
    IfsSystem s;
    s.dim_ = dim;
    s.radicand_ = radicand;
    for (const auto& g : generators) {
      if (!is_identifier(g.name)) throw AdmissionError("invalid generator name '" + g.name + "'");
      if (!names.insert(g.name).second) throw AdmissionError("duplicate generator name '" + g.name + "'");
      if (g.map.dim() != dim) throw AdmissionError("generator '" + g.name + "' has wrong dimension");
      auto check_field = [&](const QuadScalar& x) {
        if (!x.is_rational() && x.radicand() != field_r)
          throw AdmissionError("generator '" + g.name + "' uses sqrt(" + std::to_string(x.radicand()) +
                               ") in a system with radicand " + std::to_string(radicand));
      };
      for (const auto& x : g.map.linear.entries()) check_field(x);
      for (const auto& x : g.map.translation) check_field(x);
      const double bound = contraction_bound(g.map);
      if (!(bound < 1.0)) {
        std::ostringstream msg;
        msg << "generator '" << g.name << "' is not certified contracting (Frobenius bound " << bound << " >= 1)";
        throw AdmissionError(msg.str());
      }
      s.lambda_ = std::max(s.lambda_, bound);
    }
    s.generators_ = std::move(generators);
    const BoundingBall ball = bounding_ball(s.generators_, s.lambda_);
    s.radius_ = ball.radius;
    s.diameter_bound_ = ball.diameter;
    return s;
  }

  std::size_t dim() const { return dim_; }
  std::uint32_t radicand() const { return radicand_; }
  const std::vector<Generator>& generators() const { return generators_; }
  std::size_t size() const { return generators_.size(); }
  const AffineMap& map(std::size_t i) const { return generators_.at(i).map; }
  const std::string& name(std::size_t i) const { return generators_.at(i).name; }
  double lambda() const { return lambda_; }
  double radius() const { return radius_; }
  double diameter_bound() const { return diameter_bound_; }

  std::optional<std::size_t> index_of(const std::string& name) const {
    for (std::size_t i = 0; i < generators_.size(); ++i)
      if (generators_[i].name == name) return i;
    return std::nullopt;
  }

  /// Index of the first generator with nonzero linear part, if any.
  std::optional<std::size_t> first_nonconstant() const {
    for (std::size_t i = 0; i < generators_.size(); ++i)
      if (!is_constant(generators_[i].map)) return i;
    return std::nullopt;
  }

  friend bool operator==(const IfsSystem& a, const IfsSystem& b) {
    return a.dim_ == b.dim_ && a.radicand_ == b.radicand_ && a.generators_ == b.generators_;
  }

 private:
  std::size_t dim_ = 0;
  std::uint32_t radicand_ = 0;
  std::vector<Generator> generators_;
  double lambda_ = 0.0;
  double radius_ = 0.0;
  double diameter_bound_ = 0.0;
};

inline BoundingBall bounding_ball(const IfsSystem& system) {
  return {system.radius(), system.diameter_bound()};
}

}  // namespace ifsends
