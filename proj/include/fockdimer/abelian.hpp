#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "fockdimer/moebius.hpp"
#include "fockdimer/schottky.hpp"

namespace fockdimer {

/// Value of a truncated series at word length L, with the L-1 truncation alongside.
template <class T>
struct Truncated {
  T value;
  T previous;
};

/// Minimal distance to an enumerated pole below which series evaluation is refused.
inline constexpr double kPoleGuard = 1e-9;

/// Density against dz of the normalized first-kind differential omega_i at z (i is 1-based).
Complex omega_first_kind(const SchottkyGroup& group, int i, const Point& z);
Truncated<Complex> omega_first_kind_truncated(const SchottkyGroup& group, int i, const Point& z);
/// All g densities at once.
Eigen::VectorXcd omega_first_kind_all(const SchottkyGroup& group, const Point& z);

/// Density against dz of the normalized third-kind differential with residues +1 at x, -1 at y.
Complex omega_third_kind(const SchottkyGroup& group, const Point& x, const Point& y, const Point& z);
Truncated<Complex> omega_third_kind_truncated(const SchottkyGroup& group, const Point& x,
                                              const Point& y, const Point& z);

/// Multiplicative periods q_ij = exp(2 pi i Omega_ij) and the period matrix.
struct PeriodData {
  Eigen::MatrixXcd q;           ///< truncated at word length L
  Eigen::MatrixXcd q_previous;  ///< truncated at L-1
  Eigen::MatrixXcd omega;       ///< log(q) / (2 pi i), purely imaginary branch

  int genus() const { return static_cast<int>(q.rows()); }
  /// Real parts of q; these define the theta function.
  Eigen::MatrixXd real_q() const { return q.real(); }
  double max_asymmetry() const;
  double max_imag_q() const;
  double max_real_omega() const;
  double tail() const { return q.size() ? (q - q_previous).cwiseAbs().maxCoeff() : 0.0; }
  /// Throws DomainError when q is not real-symmetric with 0 < q_ii < 1 within tol.
  void validate(double tol) const;
};

/// Products over double-coset representatives. Throws ConvergenceError when the L and
/// L-1 truncations differ by more than the group's tail tolerance.
PeriodData period_matrix(const SchottkyGroup& group);

/// Formal sum of points with integer multiplicities.
struct Divisor {
  std::vector<std::pair<Point, int>> terms;

  int degree() const;
  Divisor& add(const Point& p, int multiplicity);
};

/// Lifted Abel-Jacobi image in R^g; the reduction lives in [0,1)^g.
struct AbelVector {
  Eigen::VectorXd lifted;

  Eigen::VectorXd reduced() const;
};

/// Abel-Jacobi map of a degree-0 divisor supported on the real line (A_0).
///
/// Factors are grouped so that every grouped factor has unit modulus; the lift is the sum of
/// their principal arguments over 2 pi, in enumeration order.
AbelVector abel_map(const SchottkyGroup& group, const Divisor& divisor);

/// Integral of (omega_1..omega_g) from x to y as complex numbers, defined modulo Z^g
/// (principal logarithms, summed in enumeration order). Works for any points of the domain
/// of discontinuity; exp(2 pi i .) of the result is branch independent.
Eigen::VectorXcd abel_difference(const SchottkyGroup& group, const Point& y, const Point& x);

/// Leading-order (all s -> 0) Abel-Jacobi image: exp(2 pi i AJ_i) = prod_p xi_i(p)^{n_p}
/// with xi_i(p) = (p - alpha_i)/(p - conj alpha_i). Returns that exponential per component.
Eigen::VectorXcd abel_exponential_leading(const std::vector<Complex>& centers, const Divisor& divisor);

/// Coordinate part P(a, b) of the prime form in the Schottky chart.
///
/// (a - b) times the product over one element of each pair {gamma, gamma^-1}. An infinite
/// argument uses the chart -1/z there, so P(a, inf) = -prod(...) and P(inf, b) = prod(...).
Complex prime_p(const SchottkyGroup& group, const Point& a, const Point& b);
Truncated<Complex> prime_p_truncated(const SchottkyGroup& group, const Point& a, const Point& b);

}  // namespace fockdimer
