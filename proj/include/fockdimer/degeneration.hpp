#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fockdimer/fock.hpp"
#include "fockdimer/schottky.hpp"

namespace fockdimer {

/// Schottky data on the generators outside I (1-based). This stands in for s_i = 0, i in I.
SchottkyData subgroup_reference(const SchottkyData& data, const std::vector<int>& I);

/// Indices (1-based, into the original data) kept by subgroup_reference.
std::vector<int> kept_indices(int genus, const std::vector<int>& I);

/// c + sum_i a_i sqrt(s_i) + sum_{i,j} b_ij sqrt(s_i) sqrt(s_j).
struct SeriesExpansion {
  std::string domain;  ///< theta, prime-form, period, weight or kernel
  Complex constant;
  std::vector<Complex> first;                       ///< coefficients of sqrt(s_i)
  std::map<std::pair<int, int>, Complex> second;    ///< 0-based (i, j); empty for weights and kernels

  Complex evaluate(const std::vector<double>& s) const;
};

/// 1 + sum_i (e^{2 pi i z_i} + e^{-2 pi i z_i}) sqrt(s_i).
SeriesExpansion theta_expansion(const Eigen::VectorXcd& z);
/// P(a, b) = P0(a, b) (1 + sum_i s_i (2 - r_i - 1/r_i)), r_i = [a, b; alpha_i, conj alpha_i].
SeriesExpansion prime_expansion(const std::vector<Complex>& centers, const Point& a, const Point& b);
/// Weight of an edge to first order in sqrt(s) under full degeneration.
SeriesExpansion weight_order1(const FockModel& model, int edge);
/// g_{f,w}(u) to first order: {1 + sum_i (e^{2 pi i t_i} Pi_i + e^{-2 pi i t_i} / Pi_i) sqrt(s_i)} / P0(u, beta),
/// Pi_i the product of xi_i over the divisor u + d(w).
SeriesExpansion kernel_order1(const FockModel& model, int f, int w, const Point& u);

/// Evaluates a quantity on (possibly reduced) data. `present` lists the original generator
/// indices carried by `data`; `target` those surviving the degeneration, so that full and
/// reduced evaluations return comparable components.
using ScanQuantity = std::function<Eigen::VectorXcd(const SchottkyData& data, const std::vector<int>& present,
                                                    const std::vector<int>& target)>;

struct LimitScan {
  std::vector<double> s;                ///< s_k = s0 2^{-k}
  std::vector<Eigen::VectorXcd> values;
  Eigen::VectorXcd reference;
  std::vector<double> diff;  ///< max-norm of values[k] - reference
  std::vector<Eigen::Index> worst;  ///< component attaining diff[k]
  double order = 0.0;
  double fit_residual = 0.0;  ///< RMS deviation of log diff from the fitted line
  bool conclusive = false;
};

/// Sends s_i (i in I) to zero along s0 2^{-k}, k < steps, against the subgroup reference.
/// With I empty there is nothing to scan: one row with zero difference.
/// Throws DomainError for steps < 4.
LimitScan limit_scan(const ScanQuantity& quantity, const SchottkyData& data, const std::vector<int>& I, double s0,
                     int steps, int threads = 1);

/// Least-squares slope of log y against log x, with the RMS residual of the fit.
std::pair<double, double> fit_order(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fockdimer
