#include "fockdimer/moebius.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "fockdimer/errors.hpp"

namespace fockdimer {

Point::Point(Complex z) : z_(z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    z_ = {};
    infinite_ = true;
  }
}

Complex Point::value() const {
  if (infinite_) throw DomainError("point at infinity has no finite value");
  return z_;
}

std::ostream& operator<<(std::ostream& os, const Point& p) {
  if (p.is_infinite()) return os << "inf";
  return os << p.raw();
}

double chordal_distance(const Point& a, const Point& b) {
  if (a.is_infinite() && b.is_infinite()) return 0.0;
  if (a.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(b.raw()));
  if (b.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(a.raw()));
  return 2.0 * std::abs(a.raw() - b.raw()) /
         std::sqrt((1.0 + std::norm(a.raw())) * (1.0 + std::norm(b.raw())));
}

Moebius Moebius::normalized() const {
  const Complex det = determinant();
  if (det == Complex(0.0)) throw DegenerateError("singular Moebius map");
  const Complex k = std::sqrt(det);
  return {a / k, b / k, c / k, d / k};
}

Moebius Moebius::inverse() const { return {d, -b, -c, a}; }

Point Moebius::operator()(const Point& p) const {
  if (p.is_infinite()) {
    if (c == Complex(0.0)) return Point::infinity();
    return Point(a / c);
  }
  const Complex z = p.raw();
  const Complex den = c * z + d;
  if (den == Complex(0.0)) return Point::infinity();
  return Point((a * z + b) / den);
}

Moebius Moebius::operator*(const Moebius& r) const {
  return {a * r.a + b * r.c, a * r.b + b * r.d, c * r.a + d * r.c, c * r.b + d * r.d};
}

Complex Moebius::multiplier() const {
  const Moebius n = normalized();
  const Complex tr = n.a + n.d;
  const Complex disc = std::sqrt(tr * tr - 4.0);
  Complex l1 = (tr + disc) / 2.0;
  Complex l2 = (tr - disc) / 2.0;
  if (std::abs(l1) < std::abs(l2)) std::swap(l1, l2);
  return l2 / l1;
}

namespace {

// (x - y) as a factor that may be infinite (one argument at infinity) or zero.
struct Factor {
  Complex value{1.0};
  int infinite = 0;
};

Factor difference(const Point& x, const Point& y) {
  if (x.is_infinite() && y.is_infinite()) return {Complex(0.0), 0};
  if (x.is_infinite() || y.is_infinite()) return {Complex(1.0), 1};
  return {x.raw() - y.raw(), 0};
}

}  // namespace

Complex cross_ratio(const Point& a, const Point& b, const Point& c, const Point& d) {
  const Factor n1 = difference(a, c), n2 = difference(b, d);
  const Factor d1 = difference(a, d), d2 = difference(b, c);
  const Complex num = n1.value * n2.value;
  const Complex den = d1.value * d2.value;
  const int inf_balance = n1.infinite + n2.infinite - d1.infinite - d2.infinite;
  const bool num_zero = num == Complex(0.0) || inf_balance < 0;
  const bool den_zero = den == Complex(0.0) || inf_balance > 0;
  if (num == Complex(0.0) && den == Complex(0.0)) {
    throw DegenerateError("cross-ratio is 0/0 for this configuration");
  }
  if (den_zero && !num_zero) {
    return {std::numeric_limits<double>::infinity(), 0.0};
  }
  if (num_zero && !den_zero) return Complex(0.0);
  return num / den;
}

}  // namespace fockdimer
