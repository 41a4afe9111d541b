#pragma once

// Exact arithmetic in Q(sqrt(r)) for a single square-free radicand r >= 0,
// plus the small dense vectors and matrices the affine layer is built from.

#include <gmpxx.h>

#include <cfloat>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ifsends {

class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline bool is_square_free(std::uint64_t n) {
  if (n == 0) return true;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
  }
  return true;
}

namespace detail {

inline void hash_mix(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

inline std::size_t hash_mpz(mpz_srcptr z) {
  std::size_t h = static_cast<std::size_t>(z->_mp_size);
  const auto limbs = static_cast<std::size_t>(z->_mp_size < 0 ? -z->_mp_size : z->_mp_size);
  for (std::size_t i = 0; i < limbs; ++i) hash_mix(h, static_cast<std::size_t>(z->_mp_d[i]));
  return h;
}

inline std::size_t hash_mpq(const mpq_class& q) {
  std::size_t h = hash_mpz(q.get_num_mpz_t());
  hash_mix(h, hash_mpz(q.get_den_mpz_t()));
  return h;
}

}  // namespace detail

/// An element p + q*sqrt(r) of Q(sqrt(r)).
///
/// Both rational parts are kept in lowest terms. A radicand of 0 or 1 makes the
/// field collapse to Q, so the radical part is folded into the rational part and
/// the radicand is stored as 0. Two scalars compare equal iff their stored parts
/// are identical, which is what makes coefficient tuples usable as hash keys.
class QuadScalar {
 public:
  QuadScalar() = default;
  QuadScalar(long value) : rat_(value) {}  // NOLINT(google-explicit-constructor)
  explicit QuadScalar(mpq_class rat, mpq_class rad = 0, std::uint32_t radicand = 0)
      : rat_(std::move(rat)), rad_(std::move(rad)), r_(radicand) {
    rat_.canonicalize();
    rad_.canonicalize();
    normalize();
  }

  static QuadScalar rational(long num, long den = 1) {
    if (den == 0) throw ArithmeticError("zero denominator");
    return QuadScalar(mpq_class(num, den));
  }

  const mpq_class& rational_part() const { return rat_; }
  const mpq_class& radical_part() const { return rad_; }
  std::uint32_t radicand() const { return r_; }

  bool is_zero() const { return sgn(rat_) == 0 && sgn(rad_) == 0; }
  bool is_rational() const { return sgn(rad_) == 0; }

  QuadScalar conjugate() const {
    QuadScalar c = *this;
    c.rad_ = -c.rad_;
    return c;
  }

  /// p^2 - q^2 r; nonzero for nonzero scalars because r is square-free.
  mpq_class norm() const {
    if (sgn(rad_) == 0) return rat_ * rat_;
    return rat_ * rat_ - rad_ * rad_ * r_;
  }

  QuadScalar operator-() const {
    QuadScalar c = *this;
    c.rat_ = -c.rat_;
    c.rad_ = -c.rad_;
    return c;
  }

  QuadScalar& operator+=(const QuadScalar& o) {
    r_ = join(*this, o);
    rat_ += o.rat_;
    if (sgn(o.rad_) != 0) rad_ += o.rad_;
    return *this;
  }

  QuadScalar& operator-=(const QuadScalar& o) {
    r_ = join(*this, o);
    rat_ -= o.rat_;
    if (sgn(o.rad_) != 0) rad_ -= o.rad_;
    return *this;
  }

  QuadScalar& operator*=(const QuadScalar& o) {
    const std::uint32_t r = join(*this, o);
    const bool a_rat = sgn(rad_) == 0;
    const bool b_rat = sgn(o.rad_) == 0;
    if (a_rat && b_rat) {
      rat_ *= o.rat_;
    } else if (b_rat) {
      rat_ *= o.rat_;
      rad_ *= o.rat_;
    } else if (a_rat) {
      rad_ = rat_ * o.rad_;
      rat_ *= o.rat_;
    } else {
      mpq_class p = rat_ * o.rat_ + rad_ * o.rad_ * r;
      rad_ = rat_ * o.rad_ + rad_ * o.rat_;
      rat_ = std::move(p);
    }
    r_ = r;
    return *this;
  }

  QuadScalar& operator/=(const QuadScalar& o) {
    if (o.is_zero()) throw ArithmeticError("division by zero in Q(sqrt r)");
    if (sgn(o.rad_) == 0) {
      rat_ /= o.rat_;
      if (sgn(rad_) != 0) rad_ /= o.rat_;
      return *this;
    }
    const mpq_class n = o.norm();
    *this *= o.conjugate();
    rat_ /= n;
    rad_ /= n;
    return *this;
  }

  friend QuadScalar operator+(QuadScalar a, const QuadScalar& b) { return a += b; }
  friend QuadScalar operator-(QuadScalar a, const QuadScalar& b) { return a -= b; }
  friend QuadScalar operator*(QuadScalar a, const QuadScalar& b) { return a *= b; }
  friend QuadScalar operator/(QuadScalar a, const QuadScalar& b) { return a /= b; }

  friend bool operator==(const QuadScalar& a, const QuadScalar& b) {
    if (a.rat_ != b.rat_ || a.rad_ != b.rad_) return false;
    return sgn(a.rad_) == 0 || a.r_ == b.r_;
  }

  std::size_t hash() const {
    std::size_t h = detail::hash_mpq(rat_);
    if (sgn(rad_) != 0) detail::hash_mix(h, detail::hash_mpq(rad_));
    return h;
  }

  /// Nearest-double approximation (a few ulp at most). Throws rather than
  /// returning an infinity for values outside the double range.
  double to_double() const;

  /// "p/q" or "p/q+s/t*sqrt(r)" (the sign joins the radical term).
  std::string to_string() const;

  /// DSL coefficient form: "p/q" or "p/q+s/tr".
  std::string to_dsl() const;

 private:
  static std::uint32_t join(const QuadScalar& a, const QuadScalar& b) {
    if (a.r_ == b.r_) return a.r_;
    if (sgn(a.rad_) == 0) return b.r_;
    if (sgn(b.rad_) == 0) return a.r_;
    throw ArithmeticError("scalars from different quadratic fields");
  }

  void normalize() {
    if (r_ == 1) {
      rat_ += rad_;
      rad_ = 0;
      r_ = 0;
    } else if (r_ == 0) {
      rad_ = 0;
    }
  }

  mpq_class rat_{0};
  mpq_class rad_{0};
  std::uint32_t r_ = 0;
};

namespace detail {

inline double checked_double(const mpf_class& v) {
  static const mpf_class max_double(DBL_MAX, 64);
  if (abs(v) > max_double) throw ArithmeticError("value exceeds double range");
  return v.get_d();
}

inline std::string mpq_text(const mpq_class& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace detail

inline double QuadScalar::to_double() const {
  constexpr mp_bitcnt_t kPrec = 256;
  if (sgn(rad_) == 0) {
    return detail::checked_double(mpf_class(rat_, kPrec));
  }
  mpf_class root(static_cast<unsigned long>(r_), kPrec);
  root = sqrt(root);
  const mpf_class p(rat_, kPrec);
  mpf_class qs(rad_, kPrec);
  qs *= root;
  if (sgn(rat_) == 0 || sgn(rat_) == sgn(rad_)) {
    return detail::checked_double(mpf_class(p + qs, kPrec));
  }
  // Opposite signs: p + q*sqrt(r) = norm / (p - q*sqrt(r)) avoids cancellation.
  const mpf_class denom(p - qs, kPrec);
  return detail::checked_double(mpf_class(mpf_class(norm(), kPrec) / denom, kPrec));
}

inline std::string QuadScalar::to_string() const {
  std::string s = detail::mpq_text(rat_);
  if (sgn(rad_) != 0) {
    s += sgn(rad_) > 0 ? "+" : "-";
    s += detail::mpq_text(abs(rad_)) + "*sqrt(" + std::to_string(r_) + ")";
  }
  return s;
}

inline std::string QuadScalar::to_dsl() const {
  std::string s = detail::mpq_text(rat_);
  if (sgn(rad_) != 0) {
    s += sgn(rad_) > 0 ? "+" : "-";
    s += detail::mpq_text(abs(rad_)) + "r";
  }
  return s;
}

/// Dense vector over Q(sqrt r). Also used for points of R^d.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t dim) : v_(dim) {}
  Vector(std::initializer_list<QuadScalar> init) : v_(init) {}
  explicit Vector(std::vector<QuadScalar> entries) : v_(std::move(entries)) {}

  std::size_t dim() const { return v_.size(); }
  QuadScalar& operator[](std::size_t i) { return v_[i]; }
  const QuadScalar& operator[](std::size_t i) const { return v_[i]; }
  std::span<const QuadScalar> entries() const { return v_; }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  bool is_zero() const {
    for (const auto& x : v_)
      if (!x.is_zero()) return false;
    return true;
  }

  Vector& operator+=(const Vector& o) {
    if (o.dim() != dim()) throw DimensionError("vector dimension mismatch");
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }
  Vector& operator-=(const Vector& o) {
    if (o.dim() != dim()) throw DimensionError("vector dimension mismatch");
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
  }
  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend bool operator==(const Vector& a, const Vector& b) = default;

  std::size_t hash() const {
    std::size_t h = v_.size();
    for (const auto& x : v_) detail::hash_mix(h, x.hash());
    return h;
  }

  std::vector<double> to_doubles() const {
    std::vector<double> out;
    out.reserve(v_.size());
    for (const auto& x : v_) out.push_back(x.to_double());
    return out;
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < v_.size(); ++i) {
      if (i) s += ", ";
      s += v_[i].to_string();
    }
    return s + ")";
  }

 private:
  std::vector<QuadScalar> v_;
};

using Point = Vector;

/// Square d x d matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim) : d_(dim), a_(dim * dim) {}
  Matrix(std::size_t dim, std::vector<QuadScalar> row_major) : d_(dim), a_(std::move(row_major)) {
    if (a_.size() != d_ * d_) throw DimensionError("matrix is not square");
  }

  static Matrix identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t dim() const { return d_; }
  QuadScalar& operator()(std::size_t i, std::size_t j) { return a_[i * d_ + j]; }
  const QuadScalar& operator()(std::size_t i, std::size_t j) const { return a_[i * d_ + j]; }
  std::span<const QuadScalar> entries() const { return a_; }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!x.is_zero()) return false;
    return true;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.d_ != b.d_) throw DimensionError("matrix dimension mismatch");
    Matrix c(a.d_);
    QuadScalar t;
    for (std::size_t i = 0; i < a.d_; ++i) {
      for (std::size_t k = 0; k < a.d_; ++k) {
        const QuadScalar& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < a.d_; ++j) {
          const QuadScalar& bkj = b(k, j);
          if (bkj.is_zero()) continue;
          t = aik;
          t *= bkj;
          c(i, j) += t;
        }
      }
    }
    return c;
  }

  friend Vector operator*(const Matrix& a, const Vector& v) {
    if (a.d_ != v.dim()) throw DimensionError("matrix/vector dimension mismatch");
    Vector out(a.d_);
    QuadScalar t;
    for (std::size_t i = 0; i < a.d_; ++i) {
      for (std::size_t k = 0; k < a.d_; ++k) {
        const QuadScalar& aik = a(i, k);
        if (aik.is_zero() || v[k].is_zero()) continue;
        t = aik;
        t *= v[k];
        out[i] += t;
      }
    }
    return out;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.d_ != b.d_) throw DimensionError("matrix dimension mismatch");
    Matrix c = a;
    for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] += b.a_[i];
    return c;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.d_ != b.d_) throw DimensionError("matrix dimension mismatch");
    Matrix c = a;
    for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] -= b.a_[i];
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

  /// Cofactor expansion; dimensions above 3 are not supported.
  QuadScalar det() const {
    switch (d_) {
      case 0:
        return 1;
      case 1:
        return a_[0];
      case 2:
        return a_[0] * a_[3] - a_[1] * a_[2];
      case 3: {
        const auto& m = *this;
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
               m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
               m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
      }
      default:
        throw DimensionError("determinant only supported for d <= 3");
    }
  }

  std::size_t hash() const {
    std::size_t h = d_;
    for (const auto& x : a_) detail::hash_mix(h, x.hash());
    return h;
  }

 private:
  std::size_t d_ = 0;
  std::vector<QuadScalar> a_;
};

/// Solves A x = b exactly by Gaussian elimination over the field.
inline Vector solve(Matrix a, Vector b) {
  const std::size_t n = a.dim();
  if (b.dim() != n) throw DimensionError("solve: dimension mismatch");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a(pivot, col).is_zero()) ++pivot;
    if (pivot == n) throw ArithmeticError("singular linear system");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t row = col + 1; row < n; ++row) {
      if (a(row, col).is_zero()) continue;
      const QuadScalar factor = a(row, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(row, j) -= factor * a(col, j);
      b[row] -= factor * b[col];
    }
  }
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    QuadScalar acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a(i, j) * x[j];
    x[i] = acc / a(i, i);
  }
  return x;
}

}  // namespace ifsends
