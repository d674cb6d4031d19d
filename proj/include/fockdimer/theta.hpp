#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fockdimer/abelian.hpp"

namespace fockdimer {

/// Truncated Riemann theta series of a purely imaginary period matrix.
///
/// exp(pi i u Omega u^T) is assembled from q_ii^{u_i^2/2} (positive root) and q_ij^{u_i u_j}, so
/// only Re q enters. Lattice points are enumerated once at construction.
class ThetaEvaluator {
 public:
  /// N = ceil(sqrt(2 ln(1/eps) / ln(1/q_max))) + 2. Genus 0 gives the constant 1.
  explicit ThetaEvaluator(const PeriodData& periods, double eps = 1e-14);
  /// Fixed lattice radius (used by the N+k oracle tests).
  ThetaEvaluator(const PeriodData& periods, double eps, int radius);

  int genus() const { return genus_; }
  int radius() const { return radius_; }
  double eps() const { return eps_; }
  const Eigen::MatrixXd& q() const { return q_; }
  const Eigen::MatrixXcd& omega() const { return omega_; }

  /// Throws ConvergenceError when the largest term exceeds 1e12 |theta|.
  Complex theta(const Eigen::VectorXcd& z) const;
  /// Partial derivatives of log theta. Throws DegenerateError when |theta| <= 1e-12.
  Eigen::VectorXcd dlog_theta(const Eigen::VectorXcd& z) const;
  Complex dlog_theta(const Eigen::VectorXcd& z, int j) const;

  static int lattice_radius(double q_max, double eps);

 private:
  struct Sums {
    Complex value;
    Eigen::VectorXcd gradient;
    double largest;
  };
  Sums sums(const Eigen::VectorXcd& z, bool with_gradient) const;
  void build(const PeriodData& periods);

  int genus_ = 0;
  int radius_ = 0;
  double eps_ = 0.0;
  Eigen::MatrixXd q_;
  Eigen::MatrixXcd omega_;
  std::vector<Eigen::VectorXd> points_;  // u in Z^g, |u_i| <= N
  std::vector<double> weights_;          // exp(pi i u Omega u^T), real and positive
};

/// 1 + sum_i (e^{2 pi i z_i} + e^{-2 pi i z_i}) sqrt(s_i).
Complex theta_order1(const std::vector<double>& multipliers, const Eigen::VectorXd& z);

}  // namespace fockdimer
