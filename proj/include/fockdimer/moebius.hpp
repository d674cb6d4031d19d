#pragma once

#include <complex>
#include <iosfwd>

namespace fockdimer {

using Complex = std::complex<double>;

/// A point of the Riemann sphere. Infinity is a first-class value.
class Point {
 public:
  Point() = default;
  Point(Complex z);  // NOLINT(google-explicit-constructor)
  Point(double x) : Point(Complex(x, 0.0)) {}  // NOLINT(google-explicit-constructor)

  static Point infinity() {
    Point p;
    p.infinite_ = true;
    return p;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  /// Finite value; throws DomainError at infinity.
  Complex value() const;
  /// Finite value without the check (0 at infinity).
  Complex raw() const { return z_; }

  bool is_real(double tol = 0.0) const { return infinite_ || std::abs(z_.imag()) <= tol; }
  Point conj() const { return infinite_ ? *this : Point(std::conj(z_)); }

  friend bool operator==(const Point& a, const Point& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.z_ == b.z_);
  }

 private:
  Complex z_{0.0, 0.0};
  bool infinite_ = false;
};

std::ostream& operator<<(std::ostream& os, const Point& p);

/// Chordal distance on the sphere; finite for every pair of points.
double chordal_distance(const Point& a, const Point& b);

/// z -> (a z + b) / (c z + d).
struct Moebius {
  Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

  static Moebius identity() { return {}; }

  Complex determinant() const { return a * d - b * c; }
  /// Rescaled so that ad - bc = 1.
  Moebius normalized() const;
  Moebius inverse() const;

  Point operator()(const Point& p) const;
  Moebius operator*(const Moebius& rhs) const;

  /// Ratio of the two eigenvalues (smaller over larger modulus) of the normalized matrix.
  Complex multiplier() const;
};

/// [a, b; c, d] = ((a - c)(b - d)) / ((a - d)(b - c)).
///
/// Factors containing an infinite argument cancel pairwise. Returns complex infinity
/// when only the denominator vanishes and throws DegenerateError on 0/0.
Complex cross_ratio(const Point& a, const Point& b, const Point& c, const Point& d);

}  // namespace fockdimer
