#include "fockdimer/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fockdimer/errors.hpp"
#include "fockdimer/parallel.hpp"

namespace fockdimer {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleGuard = 1e-9;
constexpr double kPathGuard = 1e-6;

double wrap_pi(double x) {
  double r = std::fmod(x + kPi, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  return r - kPi;
}

double circle_coordinate(const Point& x) { return x.is_infinite() ? kPi : 2.0 * std::atan(x.raw().real()); }

// Genus-0 weight with the chart -1/z at infinity.
Complex genus0_weight(const Point& alpha, const Point& beta) {
  if (beta.is_infinite()) return 1.0;
  if (alpha.is_infinite()) return -1.0;
  return beta.raw() - alpha.raw();
}

int quad_edge_between(const MinimalGraphPatch& patch, int x, int y) {
  for (int q : patch.incident(x)) {
    if (patch.other_end(q, x) == y) return q;
  }
  throw DomainError("vertices " + patch.label(x) + " and " + patch.label(y) + " are not adjacent in the quad-graph");
}

// Signed count of 1/P(u, angle_T) factors per track along a path (negative: pole).
std::map<int, int> net_exponents(const MinimalGraphPatch& patch, const std::vector<int>& path) {
  std::map<int, int> ex;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const int x = path[k], y = path[k + 1];
    const int track = patch.quad_edges()[static_cast<std::size_t>(quad_edge_between(patch, x, y))].track;
    const bool pole = patch.kind(x) == VertexKind::Black || patch.kind(y) == VertexKind::White;
    ex[track] += pole ? -1 : 1;
  }
  return ex;
}

double segment_distance(Complex c, Complex a, Complex b) {
  const Complex d = b - a;
  double s = std::real(std::conj(d) * (c - a)) / std::norm(d);
  s = std::clamp(s, 0.0, 1.0);
  return std::abs(c - (a + s * d));
}

}  // namespace

Curve::Curve(SchottkyGroupPtr g, double theta_eps)
    : group(std::move(g)), periods(period_matrix(*group)), theta(periods, theta_eps) {}

CurvePtr Curve::make(const SchottkyData& data, double theta_eps) {
  return std::make_shared<const Curve>(make_group(data), theta_eps);
}

FockModel::FockModel(CurvePtr curve, AngledPatch patch, Eigen::VectorXd t, int base_face)
    : curve_(std::move(curve)), patch_(std::move(patch)), t_(std::move(t)) {
  if (t_.size() != curve_->genus()) {
    throw DomainError("t has length " + std::to_string(t_.size()) + ", genus is " + std::to_string(curve_->genus()));
  }
  abel_ = discrete_abel(patch_.patch, patch_.angles, base_face, curve_->group.get());
  const int g = curve_->genus();
  std::vector<Eigen::VectorXcd> track_abel;
  for (const Point& a : patch_.angles.angle) track_abel.push_back(abel_difference(*curve_->group, a, Point(0.0)));
  for (const TrackDivisor& d : abel_.divisor) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(g);
    for (const auto& [track, n] : d) v += static_cast<double>(n) * track_abel[static_cast<std::size_t>(track)];
    vertex_abel_.push_back(v);
  }
}

Eigen::VectorXcd FockModel::abel_of(const Point& u) const { return abel_difference(*curve_->group, u, Point(0.0)); }

Complex fock_weight(const FockModel& model, int edge) {
  const MinimalGraphPatch& patch = model.patch();
  if (edge < 0 || edge >= static_cast<int>(patch.edges().size())) throw DomainError("edge index out of range");
  const PatchEdge& e = patch.edges()[static_cast<std::size_t>(edge)];
  const Point& alpha = model.angle(e.alpha);
  const Point& beta = model.angle(e.beta);
  if (alpha == beta) throw DegenerateError("edge " + patch.label(e.w) + patch.label(e.b) + " has coincident angles");
  const Curve& c = model.curve();
  const auto& fa = model.abel().face_abel;
  const int f = e.f - patch.face(0), fp = e.f_prime - patch.face(0);
  const Complex th_f = c.theta.theta((model.t() + fa[static_cast<std::size_t>(f)]).cast<Complex>());
  const Complex th_fp = c.theta.theta((model.t() + fa[static_cast<std::size_t>(fp)]).cast<Complex>());
  if (std::abs(th_f) < 1e-12 || std::abs(th_fp) < 1e-12) throw DegenerateError("theta vanishes at a face of the edge");
  return prime_p(*c.group, beta, alpha) / (th_f * th_fp);
}

FockWeights fock_weights(const FockModel& model, int threads) {
  FockWeights out;
  out.t = model.t();
  out.value.assign(model.patch().edges().size(), 0.0);
  parallel_for(out.value.size(), threads, [&](std::size_t k) { out.value[k] = fock_weight(model, static_cast<int>(k)); });
  return out;
}

KernelEvaluator::KernelEvaluator(const FockModel& model, const Point& u) : model_(model), u_(u) {
  if (u.is_infinite()) throw DomainError("kernel forms are evaluated at finite u");
  abel_u_ = model.abel_of(u);
}

Complex KernelEvaluator::prime(int track) {
  auto it = prime_.find(track);
  if (it != prime_.end()) return it->second;
  const Point& a = model_.angle(track);
  if (a.is_finite() && std::abs(u_.raw() - a.raw()) < kAngleGuard) {
    throw PoleError("u lies on the angle of track " + model_.patch().tracks()[static_cast<std::size_t>(track)].label);
  }
  const Complex p = prime_p(*model_.curve().group, u_, a);
  prime_.emplace(track, p);
  return p;
}

Complex KernelEvaluator::theta_white(int w) {
  auto it = theta_w_.find(w);
  if (it != theta_w_.end()) return it->second;
  const Eigen::VectorXcd z = model_.t().cast<Complex>() + abel_u_ + model_.vertex_abel(w);
  const Complex v = model_.curve().theta.theta(z);
  theta_w_.emplace(w, v);
  return v;
}

Complex KernelEvaluator::theta_black(int b) {
  auto it = theta_b_.find(b);
  if (it != theta_b_.end()) return it->second;
  const Eigen::VectorXcd z = -model_.t().cast<Complex>() + abel_u_ - model_.vertex_abel(b);
  const Complex v = model_.curve().theta.theta(z);
  theta_b_.emplace(b, v);
  return v;
}

KernelValue KernelEvaluator::step(int x, int y) {
  const MinimalGraphPatch& patch = model_.patch();
  const int track = patch.quad_edges()[static_cast<std::size_t>(quad_edge_between(patch, x, y))].track;
  const VertexKind kx = patch.kind(x), ky = patch.kind(y);
  if (kx == VertexKind::Face && ky == VertexKind::White) return {theta_white(y) / prime(track), 1};
  if (kx == VertexKind::White && ky == VertexKind::Face) return {prime(track) / theta_white(x), -1};
  if (kx == VertexKind::Black && ky == VertexKind::Face) return {theta_black(x) / prime(track), 1};
  return {prime(track) / theta_black(y), -1};  // face -> black
}

KernelValue KernelEvaluator::along(const std::vector<int>& path) {
  KernelValue out{1.0, 0};
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const KernelValue s = step(path[k], path[k + 1]);
    out.value *= s.value;
    out.half_degree += s.half_degree;
  }
  return out;
}

KernelValue kernel_form(const FockModel& model, int x, int y, const Point& u, const std::optional<std::vector<int>>& path) {
  const std::vector<int> p = path ? *path : model.patch().shortest_path(x, y);
  if (p.empty() || p.front() != x || p.back() != y) throw DomainError("path does not join the requested vertices");
  KernelEvaluator ev(model, u);
  return ev.along(p);
}

KernelResidual check_kernel(const FockModel& model, const Point& u, int x) {
  const MinimalGraphPatch& patch = model.patch();
  const FockWeights K = fock_weights(model);
  KernelEvaluator ev(model, u);
  std::map<int, Complex> g_to_x, g_from_x;
  auto to_x = [&](int b) {
    auto it = g_to_x.find(b);
    if (it == g_to_x.end()) it = g_to_x.emplace(b, ev.along(patch.shortest_path(b, x)).value).first;
    return it->second;
  };
  auto from_x = [&](int w) {
    auto it = g_from_x.find(w);
    if (it == g_from_x.end()) it = g_from_x.emplace(w, ev.along(patch.shortest_path(x, w)).value).first;
    return it->second;
  };
  KernelResidual r;
  for (int i = 0; i < patch.num_white(); ++i) {
    const int w = patch.white(i);
    if (!patch.interior(w)) continue;
    Complex sum = 0.0;
    double largest = 0.0;
    for (int k : patch.edges_at(w)) {
      const Complex term = K.value[static_cast<std::size_t>(k)] * to_x(patch.edges()[static_cast<std::size_t>(k)].b);
      sum += term;
      largest = std::max(largest, std::abs(term));
    }
    r.right = std::max(r.right, std::abs(sum) / largest);
    ++r.rows;
  }
  for (int i = 0; i < patch.num_black(); ++i) {
    const int b = patch.black(i);
    if (!patch.interior(b)) continue;
    Complex sum = 0.0;
    double largest = 0.0;
    for (int k : patch.edges_at(b)) {
      const Complex term = from_x(patch.edges()[static_cast<std::size_t>(k)].w) * K.value[static_cast<std::size_t>(k)];
      sum += term;
      largest = std::max(largest, std::abs(term));
    }
    r.left = std::max(r.left, std::abs(sum) / largest);
    ++r.columns;
  }
  return r;
}

Identity35 identity_35(const FockModel& model, int edge, const Point& u) {
  const MinimalGraphPatch& patch = model.patch();
  const PatchEdge& e = patch.edges().at(static_cast<std::size_t>(edge));
  const Curve& c = model.curve();
  KernelEvaluator ev(model, u);
  Identity35 out;
  out.lhs = fock_weight(model, edge) * ev.along({e.b, e.f, e.w}).value;
  out.rhs = omega_third_kind(*c.group, model.angle(e.beta), model.angle(e.alpha), u);
  if (c.genus() > 0) {
    const auto& fa = model.abel().face_abel;
    const Eigen::VectorXcd zf = (model.t() + fa[static_cast<std::size_t>(e.f - patch.face(0))]).cast<Complex>();
    const Eigen::VectorXcd zfp = (model.t() + fa[static_cast<std::size_t>(e.f_prime - patch.face(0))]).cast<Complex>();
    const Eigen::VectorXcd diff = c.theta.dlog_theta(zf) - c.theta.dlog_theta(zfp);
    out.rhs += (diff.array() * omega_first_kind_all(*c.group, u).array()).sum();
  }
  out.residual = std::abs(out.lhs - out.rhs) / std::max(std::abs(out.lhs), std::abs(out.rhs));
  return out;
}

double default_crossing(const FockModel& model, int b, int w) {
  const MinimalGraphPatch& patch = model.patch();
  const std::map<int, int> ex = net_exponents(patch, patch.shortest_path(b, w));
  std::vector<double> dirs;
  for (const auto& [track, n] : ex) {
    if (n == 0) continue;
    const double phi = circle_coordinate(model.angle(track)) + (n > 0 ? kPi : 0.0);
    dirs.push_back(wrap_pi(phi) + kPi);  // in [0, 2 pi)
  }
  if (dirs.empty()) throw DomainError("g_{b,w} has no poles on the real line");
  std::sort(dirs.begin(), dirs.end());
  double start = dirs.back(), gap = dirs.front() + 2.0 * kPi - dirs.back();
  for (std::size_t k = 0; k + 1 < dirs.size(); ++k) {
    if (dirs[k + 1] - dirs[k] > gap) {
      gap = dirs[k + 1] - dirs[k];
      start = dirs[k];
    }
  }
  // shifted coordinate back to the angle on the circle: phi = dir - pi
  std::vector<double> avoid;
  for (const Point& a : model.angles().angle) avoid.push_back(circle_coordinate(a));
  double best_phi = 0.0, best = HUGE_VAL;
  for (int k = 0; k <= 200; ++k) {
    const double phi = wrap_pi(start + gap * (0.25 + 0.5 * k / 200.0) - kPi);
    const bool clear = std::none_of(avoid.begin(), avoid.end(), [&](double a) { return std::abs(wrap_pi(phi - a)) < 1e-3; });
    if (!clear) continue;
    const double cost = std::abs(std::tan(phi / 2.0));
    if (cost < best) {
      best = cost;
      best_phi = phi;
    }
  }
  if (!std::isfinite(best)) throw DomainError("no admissible crossing point for this pair");
  return std::tan(best_phi / 2.0);
}

InverseEntry inverse_entry(const FockModel& model, int b, int w, Complex u0, std::optional<double> u_c, double abs_tol) {
  const MinimalGraphPatch& patch = model.patch();
  if (patch.kind(b) != VertexKind::Black || patch.kind(w) != VertexKind::White) {
    throw DomainError("inverse entries are indexed by a black and a white vertex");
  }
  if (!(u0.imag() > 0.0)) throw DomainError("base point u0 must lie in the upper half-plane");
  const SchottkyGroup& group = *model.curve().group;
  if (!group.in_fundamental_domain(Point(u0))) throw DomainError("base point u0 lies in an isometric disc");
  InverseEntry out;
  out.u0 = u0;
  out.u_c = u_c ? *u_c : default_crossing(model, b, w);
  if (!std::isfinite(out.u_c)) throw DomainError("crossing point must be finite");
  for (int t = 0; t < patch.num_tracks(); ++t) {
    const Point& a = model.angle(t);
    if (a.is_finite() && std::abs(a.raw().real() - out.u_c) < kPathGuard) {
      throw PoleError("crossing point " + std::to_string(out.u_c) + " lies on the angle " +
                      std::to_string(a.raw().real()) + " of track " + patch.tracks()[static_cast<std::size_t>(t)].label);
    }
  }
  const Complex uc(out.u_c, 0.0);
  const Complex ends[3] = {std::conj(u0), uc, u0};
  for (const IsometricCircle& circle : group.circles()) {
    for (int s = 0; s < 2; ++s) {
      if (segment_distance(circle.center, ends[s], ends[s + 1]) < circle.radius + kPathGuard) {
        throw PoleError("integration path enters the isometric disc centred at " + std::to_string(circle.center.real()) +
                        (circle.center.imag() < 0 ? "" : "+") + std::to_string(circle.center.imag()) + "i");
      }
    }
  }
  const std::vector<int> path = patch.shortest_path(b, w);
  Complex total = 0.0;
  for (int s = 0; s < 2; ++s) {
    const Complex a = ends[s], d = ends[s + 1] - ends[s];
    const QuadratureResult q = integrate(
        [&](double tau) {
          KernelEvaluator ev(model, Point(a + tau * d));
          return ev.along(path).value * d;
        },
        0.0, 1.0, 0.5 * abs_tol);
    total += q.value;
    out.quadrature.error += q.error;
    out.quadrature.evaluations += q.evaluations;
    out.quadrature.intervals += q.intervals;
    out.quadrature.max_depth = std::max(out.quadrature.max_depth, q.max_depth);
  }
  out.value = total / Complex(0.0, 2.0 * kPi);
  out.quadrature.value = total;
  return out;
}

std::vector<int> face_cycle(const MinimalGraphPatch& patch, int face) {
  if (patch.kind(face) != VertexKind::Face || !patch.interior(face)) throw DomainError("face_cycle needs an interior face");
  std::vector<int> around;
  for (std::size_t k = 0; k < patch.edges().size(); ++k) {
    const PatchEdge& e = patch.edges()[k];
    if (e.f == face || e.f_prime == face) around.push_back(static_cast<int>(k));
  }
  int start = -1;
  for (int k : around) {
    if (patch.edges()[static_cast<std::size_t>(k)].f == face) {
      start = k;
      break;
    }
  }
  if (start < 0) throw DomainError("face has no edge on its left");
  std::vector<int> cycle{start};
  int v = patch.edges()[static_cast<std::size_t>(start)].w;
  int current = start;
  while (true) {
    int next = -1;
    for (int k : around) {
      const PatchEdge& e = patch.edges()[static_cast<std::size_t>(k)];
      if (k != current && (e.w == v || e.b == v)) next = k;
    }
    if (next < 0) throw DomainError("face boundary is not a cycle");
    if (next == start) break;
    cycle.push_back(next);
    if (cycle.size() > around.size()) throw DomainError("face boundary is not a cycle");
    const PatchEdge& e = patch.edges()[static_cast<std::size_t>(next)];
    v = e.w == v ? e.b : e.w;
    current = next;
  }
  if (cycle.size() != around.size() || cycle.size() % 2 != 0) throw DomainError("face boundary is not a simple even cycle");
  return cycle;
}

KasteleynReport kasteleyn_phase_check(const MinimalGraphPatch& patch, const AngleMap& angles,
                                      const std::vector<Complex>& weights, double tol) {
  if (weights.size() != patch.edges().size()) throw DomainError("one weight per edge expected");
  KasteleynReport report;
  for (int i = 0; i < patch.num_faces(); ++i) {
    const int f = patch.face(i);
    if (!patch.interior(f)) continue;
    const std::vector<int> cycle = face_cycle(patch, f);
    Complex prod = 1.0, ref = 1.0;
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const PatchEdge& e = patch.edges()[static_cast<std::size_t>(cycle[k])];
      const Complex k0 = genus0_weight(angles.angle[static_cast<std::size_t>(e.alpha)], angles.angle[static_cast<std::size_t>(e.beta)]);
      const Complex kw = weights[static_cast<std::size_t>(cycle[k])];
      if (k % 2 == 0) {
        prod *= kw;
        ref *= k0;
      } else {
        prod /= kw;
        ref /= k0;
      }
    }
    FacePhase fp;
    fp.face = f;
    fp.degree = static_cast<int>(cycle.size());
    fp.phase = std::arg(prod);
    fp.reference_phase = std::arg(ref);
    fp.matches_reference = std::abs(wrap_pi(fp.phase - fp.reference_phase)) < tol;
    fp.absolute = std::abs(wrap_pi(fp.phase - (fp.degree / 2 - 1) * kPi)) < tol;
    report.pass = report.pass && fp.matches_reference;
    report.faces.push_back(fp);
  }
  return report;
}

}  // namespace fockdimer
