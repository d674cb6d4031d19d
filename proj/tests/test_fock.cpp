#include <doctest.h>

#include <cmath>
#include <map>

#include "fockdimer/errors.hpp"
#include "fockdimer/experiments.hpp"
#include "fockdimer/fock.hpp"
#include "fockdimer/quadrature.hpp"
#include "oracles.hpp"

using namespace fockdimer;

namespace {

std::vector<Point> pts(std::initializer_list<double> xs) {
  std::vector<Point> out;
  for (double x : xs) out.emplace_back(x);
  return out;
}

AngledPatch square6() {
  return build_square_patch(6, 6, pts({0, 1, 2, 3, 4, 5}), pts({10, 11, 12, 13, 14, 15}));
}

FockModel model(int genus) {
  SchottkyData d;
  Eigen::VectorXd t(genus);
  if (genus == 1) {
    d.centers = {Complex(0, 3)};
    d.multipliers = {0.05};
    t << 0.17;
  } else if (genus == 2) {
    d.centers = {Complex(-5, 2), Complex(5, 2)};
    d.multipliers = {0.05, 0.02};
    t << 0.17, 0.4;
  }
  AngledPatch ap = square6();
  const int f0 = ap.patch.find_vertex("f(3,2)");
  return FockModel(Curve::make(d), std::move(ap), t, f0);
}

/// Kenyon's critical weight with the conventions at infinity.
Complex kenyon(const Point& alpha, const Point& beta) {
  if (beta.is_infinite()) return 1.0;
  if (alpha.is_infinite()) return -1.0;
  return beta.value() - alpha.value();
}

double kasteleyn_residual(const FockModel& m, const std::map<int, Complex>& column, int w) {
  const MinimalGraphPatch& p = m.patch();
  const FockWeights K = fock_weights(m);
  double worst = 0.0;
  for (int i = 0; i < p.num_white(); ++i) {
    const int wp = p.white(i);
    if (!p.interior(wp)) continue;
    Complex s = 0.0;
    for (int e : p.edges_at(wp)) s += K.value[static_cast<std::size_t>(e)] * column.at(p.edges()[static_cast<std::size_t>(e)].b);
    worst = std::max(worst, std::abs(s - (wp == w ? 1.0 : 0.0)));
  }
  return worst;
}

}  // namespace

TEST_CASE("quadrature") {
  const QuadratureResult r = integrate([](double x) { return Complex(std::pow(x, 5), std::cos(x)); }, 0.0, 1.0);
  CHECK(std::abs(r.value - Complex(1.0 / 6.0, std::sin(1.0))) < 1e-13);
  const QuadratureResult peak = integrate([](double x) { return Complex(1e-3 / (x * x + 1e-6)); }, -1.0, 1.0, 1e-10);
  CHECK(std::abs(peak.value.real() - 2.0 * std::atan(1e3)) < 1e-9);
  CHECK(peak.max_depth > 3);
  CHECK_THROWS_AS(integrate([](double x) { return Complex(1.0 / std::sqrt(std::abs(x))); }, -1.0, 1.0, 1e-12, 8),
                  ConvergenceError);
}

TEST_CASE("genus 0 weights are Kenyon's critical weights") {
  const FockModel m = model(0);
  const FockWeights w = fock_weights(m);
  for (std::size_t k = 0; k < m.patch().edges().size(); ++k) {
    const PatchEdge& e = m.patch().edges()[k];
    CHECK(w.value[k] == kenyon(m.angle(e.alpha), m.angle(e.beta)));
  }
  // Also with an infinite angle (V1 receives the antipode of 0).
  AngledPatch ap = build_square_patch(4, 4, pts({0.5, 0}), pts({3, 4}));
  const int f0 = resolve_base_face(ap.patch, "");
  const FockModel mi(Curve::make(SchottkyData{}), ap, Eigen::VectorXd(0), f0);
  bool saw_infinity = false;
  for (std::size_t k = 0; k < mi.patch().edges().size(); ++k) {
    const PatchEdge& e = mi.patch().edges()[k];
    saw_infinity = saw_infinity || mi.angle(e.alpha).is_infinite() || mi.angle(e.beta).is_infinite();
    CHECK(fock_weight(mi, static_cast<int>(k)) == kenyon(mi.angle(e.alpha), mi.angle(e.beta)));
  }
  CHECK(saw_infinity);
}

TEST_CASE("weights do not depend on the thread count") {
  const FockModel m = model(2);
  const FockWeights a = fock_weights(m, 1), b = fock_weights(m, 4);
  CHECK(a.value == b.value);
}

TEST_CASE("integer shifts of t and of angle lifts leave the weights unchanged") {
  const FockModel m = model(2);
  const FockWeights base = fock_weights(m);
  AngledPatch ap = square6();
  const int f0 = ap.patch.find_vertex("f(3,2)");
  const FockModel shifted_t(m.curve_ptr(), ap, m.t() + Eigen::Vector2d(1.0, -2.0), f0);
  for (std::size_t t = 0; t < ap.angles.lifted.size(); t += 3) ap.angles.lifted[t] += (t % 2 == 0 ? 1.0 : -1.0);
  const FockModel shifted_lift(m.curve_ptr(), ap, m.t(), f0);
  const FockWeights a = fock_weights(shifted_t), b = fock_weights(shifted_lift);
  double worst = 0.0;
  for (std::size_t e = 0; e < base.value.size(); ++e) {
    worst = std::max({worst, std::abs(a.value[e] - base.value[e]) / std::abs(base.value[e]),
                      std::abs(b.value[e] - base.value[e]) / std::abs(base.value[e])});
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("Kasteleyn phases") {
  for (int g : {0, 1, 2}) {
    const FockModel m = model(g);
    const KasteleynReport r = kasteleyn_phase_check(m.patch(), m.angles(), fock_weights(m).value);
    CHECK(r.pass);
    CHECK(r.faces.size() == 12);
    for (const FacePhase& f : r.faces) {
      CHECK(f.degree == 4);
      CHECK(f.absolute);
    }
  }
}

TEST_CASE("genus 0 kernel steps") {
  const FockModel m = model(0);
  const Complex u(0.7, 0.6);
  for (const PatchEdge& e : m.patch().edges()) {
    const KernelValue fw = kernel_form(m, e.f, e.w, u, std::vector<int>{e.f, e.w});
    CHECK(fw.half_degree == 1);
    CHECK(std::abs(fw.value - 1.0 / (u - m.angle(e.beta).raw())) < 1e-14);
    const KernelValue bw = kernel_form(m, e.b, e.w, u, std::vector<int>{e.b, e.f, e.w});
    CHECK(bw.is_one_form());
  }
}

TEST_CASE("kernel identities") {
  const Point u(Complex(0.37, 0.42));
  for (int g : {0, 1, 2}) {
    const FockModel m = model(g);
    const int x = m.patch().find_vertex("f(3,4)");
    const KernelResidual r = check_kernel(m, u, x);
    CHECK(r.rows > 0);
    CHECK(r.columns > 0);
    const double tol = g == 0 ? 1e-13 : 1e-7;
    CHECK(r.right < tol);
    CHECK(r.left < tol);
  }
}

TEST_CASE("identity 3.5 in genus 0 is the third-kind differential") {
  const FockModel m = model(0);
  const Complex u(-0.4, 0.8);
  for (std::size_t k = 0; k < m.patch().edges().size(); ++k) {
    const PatchEdge& e = m.patch().edges()[k];
    const Identity35 id = identity_35(m, static_cast<int>(k), u);
    const Complex a = m.angle(e.alpha).raw(), b = m.angle(e.beta).raw();
    Complex expected;
    if (m.angle(e.beta).is_infinite()) expected = -1.0 / (u - a);
    else if (m.angle(e.alpha).is_infinite()) expected = 1.0 / (u - b);
    else expected = 1.0 / (u - b) - 1.0 / (u - a);
    CHECK(std::abs(id.lhs - expected) < 1e-13 * std::abs(expected));
    CHECK(id.residual < 1e-13);
  }
}

TEST_CASE("identity 3.5 in higher genus") {
  for (int g : {1, 2}) {
    const FockModel m = model(g);
    for (int e : {0, 7, 19, 33}) {
      CHECK(identity_35(m, e, Complex(0.3, 0.5)).residual < 1e-6);
    }
  }
}

TEST_CASE("poles at the track angles") {
  const FockModel m = model(1);
  const int b = m.patch().find_vertex("b(0,0)"), w = m.patch().find_vertex("w(5,5)");
  CHECK_THROWS_AS(kernel_form(m, b, w, Point(2.0)), PoleError);
  CHECK_NOTHROW(kernel_form(m, b, w, Point(Complex(2.0, 0.1))));
}

TEST_CASE("inverse from the contour integral") {
  for (int g : {0, 1}) {
    const FockModel m = model(g);
    const MinimalGraphPatch& p = m.patch();
    const int w = p.find_vertex("w(3,3)");
    std::map<int, Complex> column;
    for (int i = 0; i < p.num_black(); ++i) {
      const int b = p.black(i);
      const double uc = default_crossing(m, b, w);
      for (const Point& a : m.angles().angle) {
        if (a.is_finite()) CHECK(std::abs(uc - a.raw().real()) > 1e-3);
      }
      column[b] = inverse_entry(m, b, w, Complex(0.3, 0.5)).value;
    }
    CHECK(kasteleyn_residual(m, column, w) < (g == 0 ? 1e-8 : 1e-5));
  }
}

TEST_CASE("moving u0 changes entries but not the inverse property") {
  const FockModel m = model(0);
  const MinimalGraphPatch& p = m.patch();
  const int w = p.find_vertex("w(3,3)");
  std::map<int, Complex> a, c;
  for (int i = 0; i < p.num_black(); ++i) {
    const int b = p.black(i);
    a[b] = inverse_entry(m, b, w, Complex(0.3, 0.5)).value;
    c[b] = inverse_entry(m, b, w, Complex(-0.2, 1.5)).value;
  }
  CHECK(kasteleyn_residual(m, a, w) < 1e-8);
  CHECK(kasteleyn_residual(m, c, w) < 1e-8);
  double moved = 0.0;
  for (const auto& [b, v] : a) moved = std::max(moved, std::abs(v - c.at(b)));
  MESSAGE("largest entry change when moving u0: " << moved);
}

TEST_CASE("crossing point on an angle is refused with the angle named") {
  const FockModel m = model(0);
  const MinimalGraphPatch& p = m.patch();
  const int w = p.find_vertex("w(3,3)"), b = p.find_vertex("b(2,2)");
  try {
    inverse_entry(m, b, w, Complex(0.3, 0.5), 2.0);
    FAIL("expected a pole error");
  } catch (const PoleError& e) {
    CHECK(std::string(e.what()).find("angle") != std::string::npos);
  }
}

TEST_CASE("face cycles alternate colours") {
  const FockModel m = model(0);
  const MinimalGraphPatch& p = m.patch();
  for (int i = 0; i < p.num_faces(); ++i) {
    const int f = p.face(i);
    if (!p.interior(f)) continue;
    const std::vector<int> cyc = face_cycle(p, f);
    CHECK(cyc.size() == 4);
    for (std::size_t k = 0; k < cyc.size(); ++k) {
      const PatchEdge& a = p.edges()[static_cast<std::size_t>(cyc[k])];
      const PatchEdge& b = p.edges()[static_cast<std::size_t>(cyc[(k + 1) % cyc.size()])];
      CHECK((a.w == b.w || a.b == b.b));
      CHECK((a.f == f || a.f_prime == f));
    }
  }
}
