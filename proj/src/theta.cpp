#include "fockdimer/theta.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fockdimer/errors.hpp"

namespace fockdimer {

int ThetaEvaluator::lattice_radius(double q_max, double eps) {
  if (!(q_max > 0.0 && q_max < 1.0)) throw DomainError("theta: q_max must lie in (0, 1)");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("theta: eps must lie in (0, 1)");
  return static_cast<int>(std::ceil(std::sqrt(2.0 * std::log(1.0 / eps) / std::log(1.0 / q_max)))) + 2;
}

ThetaEvaluator::ThetaEvaluator(const PeriodData& periods, double eps) : genus_(periods.genus()), eps_(eps) {
  if (genus_ > 0) {
    double q_max = 0.0;
    for (int i = 0; i < genus_; ++i) q_max = std::max(q_max, periods.q(i, i).real());
    radius_ = lattice_radius(q_max, eps);
  }
  build(periods);
}

ThetaEvaluator::ThetaEvaluator(const PeriodData& periods, double eps, int radius)
    : genus_(periods.genus()), radius_(radius), eps_(eps) {
  if (radius < 0) throw DomainError("theta: negative lattice radius");
  build(periods);
}

void ThetaEvaluator::build(const PeriodData& periods) {
  q_ = periods.real_q();
  omega_ = periods.omega;
  for (int i = 0; i < genus_; ++i) {
    if (!(q_(i, i) > 0.0 && q_(i, i) < 1.0)) throw DomainError("theta: q_ii outside (0, 1)");
    for (int j = 0; j < genus_; ++j) {
      if (!(q_(i, j) > 0.0)) throw DomainError("theta: q_ij must be positive");
    }
  }
  const Eigen::MatrixXd log_q = q_.array().log().matrix();
  Eigen::VectorXd u = Eigen::VectorXd::Constant(genus_, -radius_);
  while (true) {
    // exponent: sum_i u_i^2/2 ln q_ii + sum_{i<j} u_i u_j ln q_ij
    double e = 0.0;
    for (int i = 0; i < genus_; ++i) {
      e += 0.5 * u(i) * u(i) * log_q(i, i);
      for (int j = i + 1; j < genus_; ++j) e += u(i) * u(j) * log_q(i, j);
    }
    points_.push_back(u);
    weights_.push_back(std::exp(e));
    int k = 0;
    while (k < genus_ && u(k) == radius_) u(k++) = -radius_;
    if (k == genus_) break;
    u(k) += 1.0;
  }
}

ThetaEvaluator::Sums ThetaEvaluator::sums(const Eigen::VectorXcd& z, bool with_gradient) const {
  if (z.size() != genus_) {
    throw DomainError("theta: argument has length " + std::to_string(z.size()) + ", genus is " +
                      std::to_string(genus_));
  }
  Sums s{0.0, Eigen::VectorXcd::Zero(genus_), 0.0};
  const Complex two_pi_i(0.0, 2.0 * std::numbers::pi);
  for (std::size_t n = 0; n < points_.size(); ++n) {
    const Complex term = weights_[n] * std::exp(two_pi_i * (z.array() * points_[n].array().cast<Complex>()).sum());
    s.value += term;
    s.largest = std::max(s.largest, std::abs(term));
    if (with_gradient) s.gradient += (two_pi_i * term) * points_[n].cast<Complex>();
  }
  if (s.largest > 1e12 * std::abs(s.value)) {
    throw ConvergenceError("theta: series ill-conditioned (largest term exceeds 1e12 |theta|)");
  }
  return s;
}

Complex ThetaEvaluator::theta(const Eigen::VectorXcd& z) const {
  if (genus_ == 0) return 1.0;
  return sums(z, false).value;
}

Eigen::VectorXcd ThetaEvaluator::dlog_theta(const Eigen::VectorXcd& z) const {
  if (genus_ == 0) return Eigen::VectorXcd(0);
  const Sums s = sums(z, true);
  if (std::abs(s.value) <= 1e-12) throw DegenerateError("dlog_theta: theta is numerically zero");
  return s.gradient / s.value;
}

Complex ThetaEvaluator::dlog_theta(const Eigen::VectorXcd& z, int j) const {
  if (j < 1 || j > genus_) throw DomainError("dlog_theta: index out of range");
  return dlog_theta(z)(j - 1);
}

Complex theta_order1(const std::vector<double>& multipliers, const Eigen::VectorXd& z) {
  if (static_cast<Eigen::Index>(multipliers.size()) != z.size()) {
    throw DomainError("theta_order1: multipliers and z differ in length");
  }
  Complex out = 1.0;
  for (std::size_t i = 0; i < multipliers.size(); ++i) {
    if (multipliers[i] < 0.0) throw DomainError("theta_order1: negative multiplier");
    out += 2.0 * std::cos(2.0 * std::numbers::pi * z(static_cast<Eigen::Index>(i))) * std::sqrt(multipliers[i]);
  }
  return out;
}

}  // namespace fockdimer
