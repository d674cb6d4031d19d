#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fockdimer/abelian.hpp"
#include "fockdimer/minimal_graph.hpp"
#include "fockdimer/quadrature.hpp"
#include "fockdimer/schottky.hpp"
#include "fockdimer/theta.hpp"

namespace fockdimer {

/// Enumerated group, periods and theta series of one curve.
struct Curve {
  SchottkyGroupPtr group;
  PeriodData periods;
  ThetaEvaluator theta;

  Curve(SchottkyGroupPtr g, double theta_eps);
  static std::shared_ptr<const Curve> make(const SchottkyData& data, double theta_eps = 1e-14);
  int genus() const { return group->genus(); }
};
using CurvePtr = std::shared_ptr<const Curve>;

/// A patch with angles, a curve and the parameter t; the discrete Abel map is based at base_face.
///
/// Abel-Jacobi images of vertex divisors are taken relative to the real base point 0; only
/// degree-0 combinations reach the theta function.
class FockModel {
 public:
  FockModel(CurvePtr curve, AngledPatch patch, Eigen::VectorXd t, int base_face);

  const Curve& curve() const { return *curve_; }
  const CurvePtr& curve_ptr() const { return curve_; }
  const MinimalGraphPatch& patch() const { return patch_.patch; }
  const AngleMap& angles() const { return patch_.angles; }
  const DiscreteAbelMap& abel() const { return abel_; }
  const Eigen::VectorXd& t() const { return t_; }
  const Point& angle(int track) const { return patch_.angles.angle[static_cast<std::size_t>(track)]; }

  /// Sum of n_T A(angle_T) for the divisor of quad-graph vertex v.
  const Eigen::VectorXcd& vertex_abel(int v) const { return vertex_abel_[static_cast<std::size_t>(v)]; }
  /// A(u) relative to the base point.
  Eigen::VectorXcd abel_of(const Point& u) const;

 private:
  CurvePtr curve_;
  AngledPatch patch_;
  Eigen::VectorXd t_;
  DiscreteAbelMap abel_;
  std::vector<Eigen::VectorXcd> vertex_abel_;
};

/// K_{w,b} = P(beta, alpha) / (theta(t + d(f)) theta(t + d(f'))).
Complex fock_weight(const FockModel& model, int edge);

struct FockWeights {
  Eigen::VectorXd t;
  std::vector<Complex> value;  ///< per edge of the patch, same order
};

/// All edges; parallel over edges with results written to per-edge slots.
FockWeights fock_weights(const FockModel& model, int threads = 1);

/// Value of g_{x,y}(u) with its weight in du: half_degree is twice the exponent of du, so 2
/// marks the density of a 1-form and 0 a function.
struct KernelValue {
  Complex value;
  int half_degree = 0;
  bool is_one_form() const { return half_degree == 2; }
};

/// Per-u cache of A(u), prime-form factors P(u, angle_T) and theta values at vertices.
class KernelEvaluator {
 public:
  /// Throws PoleError when u lies within 1e-9 of a track angle, DomainError off the domain.
  KernelEvaluator(const FockModel& model, const Point& u);

  const Point& u() const { return u_; }
  /// g for one quad-graph edge x -> y.
  KernelValue step(int x, int y);
  /// Product of steps along a quad-graph path (consecutive vertices adjacent).
  KernelValue along(const std::vector<int>& path);

 private:
  Complex prime(int track);
  Complex theta_white(int w);
  Complex theta_black(int b);

  const FockModel& model_;
  Point u_;
  Eigen::VectorXcd abel_u_;
  std::map<int, Complex> prime_;
  std::map<int, Complex> theta_w_, theta_b_;
};

/// g_{x,y}(u) along the given path, or the breadth-first path when none is given.
KernelValue kernel_form(const FockModel& model, int x, int y, const Point& u,
                        const std::optional<std::vector<int>>& path = std::nullopt);

struct KernelResidual {
  double right = 0.0;  ///< max over interior w of |sum_b K_wb g_bx| / max_b |K_wb g_bx|
  double left = 0.0;   ///< max over interior b of |sum_w g_xw K_wb| / max_w |g_xw K_wb|
  int rows = 0;
  int columns = 0;
};

KernelResidual check_kernel(const FockModel& model, const Point& u, int x);

struct Identity35 {
  Complex lhs;
  Complex rhs;
  double residual = 0.0;  ///< |lhs - rhs| / max(|lhs|, |rhs|)
};

/// K_{w,b} g_{b,w}(u) against omega_{beta,alpha}(u) plus the theta-gradient correction.
Identity35 identity_35(const FockModel& model, int edge, const Point& u);

struct InverseEntry {
  Complex value;
  Complex u0;
  double u_c = 0.0;
  QuadratureResult quadrature;
};

/// Crossing point on the real line for the path of g_{b,w}.
///
/// Net poles of g_{b,w} sit at their angles and net zeros at the antipodal direction; u_c
/// goes into the middle half of the largest gap between these directions, as close to 0 as
/// possible.
double default_crossing(const FockModel& model, int b, int w);

/// (1/2 pi i) integral of g_{b,w}(u) du along conj(u0) -> u_c -> u0.
InverseEntry inverse_entry(const FockModel& model, int b, int w, Complex u0, std::optional<double> u_c = std::nullopt,
                           double abs_tol = 1e-9);

struct FacePhase {
  int face = -1;
  int degree = 0;
  double phase = 0.0;            ///< argument of the alternating product
  double reference_phase = 0.0;  ///< same for genus-0 weights beta - alpha
  bool matches_reference = false;
  bool absolute = false;  ///< phase equals (k-1) pi for a face of degree 2k
};

struct KasteleynReport {
  bool pass = true;
  std::vector<FacePhase> faces;
};

/// Alternating weight products around interior faces.
KasteleynReport kasteleyn_phase_check(const MinimalGraphPatch& patch, const AngleMap& angles,
                                      const std::vector<Complex>& weights, double tol = 1e-6);

/// Edges of G around an interior face, in boundary order.
std::vector<int> face_cycle(const MinimalGraphPatch& patch, int face);

}  // namespace fockdimer
