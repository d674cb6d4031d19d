#include <doctest.h>

#include <cmath>

#include "fockdimer/abelian.hpp"
#include "fockdimer/errors.hpp"
#include "fockdimer/theta.hpp"
#include "oracles.hpp"

using namespace fockdimer;

namespace {

PeriodData periods(std::vector<Complex> centers, std::vector<double> s, int L = 6) {
  SchottkyData d;
  d.centers = std::move(centers);
  d.multipliers = std::move(s);
  d.max_word_length = L;
  return period_matrix(*make_group(d));
}

Eigen::VectorXcd vec(std::initializer_list<Complex> v) {
  Eigen::VectorXcd z(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (Complex c : v) z(k++) = c;
  return z;
}

}  // namespace

TEST_CASE("genus 1 theta equals the Jacobi triple product") {
  const ThetaEvaluator th(periods({Complex(0, 3)}, {0.3}));
  for (Complex z : {Complex(0.0), Complex(0.21), Complex(0.4, 0.1), Complex(-0.3, -0.2)}) {
    const Complex ref = oracle::jacobi_theta(0.3, z);
    CHECK(std::abs(th.theta(vec({z})) - ref) < 1e-13 * std::abs(ref));
  }
}

TEST_CASE("genus 2 theta against a wide lattice sum") {
  const PeriodData p = periods({Complex(-5, 2), Complex(5, 2)}, {0.05, 0.02});
  const ThetaEvaluator th(p);
  for (const Eigen::VectorXcd& z : {vec({0.21, 0.33}), vec({Complex(0.21, 0.05), Complex(0.33, -0.02)})}) {
    const Complex ref = oracle::brute_theta(p.real_q(), z, 12);
    CHECK(std::abs(th.theta(z) - ref) < 1e-13);
  }
  // Same reference values from the Python implementation.
  CHECK(std::abs(ThetaEvaluator(periods({Complex(-5, 2), Complex(5, 2)}, {0.05, 0.02}, 5)).theta(vec({0.21, 0.33})) -
                 0.9713547895163651) < 1e-13);
}

TEST_CASE("truncation radius") {
  CHECK(ThetaEvaluator::lattice_radius(0.05, 1e-14) ==
        static_cast<int>(std::ceil(std::sqrt(2.0 * std::log(1e14) / std::log(20.0)))) + 2);
  const PeriodData p = periods({Complex(-5, 2), Complex(5, 2)}, {0.05, 0.02});
  const Eigen::VectorXcd z = vec({0.1, -0.37});
  const ThetaEvaluator base(p);
  // Enlarging the lattice changes nothing visible.
  const ThetaEvaluator wider(p, 1e-14, base.radius() + 3);
  CHECK(std::abs(base.theta(z) - wider.theta(z)) < 1e-14);
}

TEST_CASE("periodicity, quasi-periodicity and evenness") {
  const PeriodData p = periods({Complex(-5, 2), Complex(5, 2)}, {0.1, 0.08});
  const ThetaEvaluator th(p);
  const Eigen::VectorXcd z = vec({Complex(0.13, 0.02), Complex(-0.4, 0.01)});
  const Complex v = th.theta(z);
  for (int j = 0; j < 2; ++j) {
    Eigen::VectorXcd zp = z;
    zp(j) += 1.0;
    CHECK(std::abs(th.theta(zp) - v) < 1e-12);
    const Eigen::VectorXcd zq = z + th.omega().col(j);
    const Complex factor = std::exp(-M_PI * oracle::kI * th.omega()(j, j) - 2.0 * M_PI * oracle::kI * z(j));
    CHECK(std::abs(th.theta(zq) - factor * v) < 1e-9 * std::abs(factor * v));
  }
  CHECK(std::abs(th.theta(-z) - v) < 1e-13);
}

TEST_CASE("real and positive on real arguments") {
  const ThetaEvaluator th(periods({Complex(-5, 2), Complex(5, 2)}, {0.1, 0.1}));
  for (double x = -1.0; x <= 1.0; x += 0.137) {
    const Complex v = th.theta(vec({x, 0.5 - x}));
    CHECK(v.real() > 0.0);
    CHECK(std::abs(v.imag()) < 1e-14);
  }
}

TEST_CASE("logarithmic gradient against finite differences") {
  const ThetaEvaluator th(periods({Complex(-5, 2), Complex(5, 2)}, {0.05, 0.02}));
  const Eigen::VectorXcd z = vec({Complex(0.3, 0.05), 0.11});
  const Eigen::VectorXcd grad = th.dlog_theta(z);
  const double h = 1e-6;
  for (int j = 0; j < 2; ++j) {
    Eigen::VectorXcd a = z, b = z;
    a(j) += h;
    b(j) -= h;
    const Complex fd = (std::log(th.theta(a)) - std::log(th.theta(b))) / (2.0 * h);
    CHECK(std::abs(fd - grad(j)) < 1e-8);
    CHECK(std::abs(th.dlog_theta(z, j + 1) - grad(j)) < 1e-15);
  }
}

TEST_CASE("genus 0 theta is 1") {
  const ThetaEvaluator th(periods({}, {}));
  CHECK(th.radius() == 0);
  CHECK(th.theta(Eigen::VectorXcd(0)) == 1.0);
}

TEST_CASE("first-order theta") {
  // Genus 2: halving s halves the remainder. (At z = (0.21, 0.33) the O(s) coefficient
  // nearly cancels, so a generic point is used.)
  const Eigen::VectorXd z = Eigen::Vector2d(0.1, 0.3);
  auto err = [&](double s) {
    const ThetaEvaluator th(periods({Complex(-5, 2), Complex(5, 2)}, {s, s}));
    return std::abs(th.theta(z.cast<Complex>()) - theta_order1({s, s}, z));
  };
  CHECK(err(0.02) / err(0.01) == doctest::Approx(2.0).epsilon(0.15));
  // Genus 1: q = s exactly, so the remainder is q^2 terms and the ratio is 4.
  auto err1 = [&](double s) {
    const ThetaEvaluator th(periods({Complex(0, 3)}, {s}));
    const Eigen::VectorXd z1 = Eigen::VectorXd::Constant(1, 0.21);
    return std::abs(th.theta(z1.cast<Complex>()) - theta_order1({s}, z1));
  };
  CHECK(err1(0.02) / err1(0.01) == doctest::Approx(4.0).epsilon(0.1));
}
