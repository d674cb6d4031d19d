#include "fockdimer/quadrature.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "fockdimer/errors.hpp"

namespace fockdimer {

namespace {

constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for nodes 1, 3, 5 and the centre.
constexpr std::array<double, 4> kGauss = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  int depth;
};

}  // namespace

QuadratureResult integrate(const std::function<Complex(double)>& f, double a, double b, double abs_tol,
                           int max_depth) {
  if (!(abs_tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
  QuadratureResult out;
  out.value = 0.0;
  if (a == b) return out;
  const double total = std::abs(b - a);
  std::vector<Panel> stack{{a, b, 0}};
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double c = 0.5 * (p.a + p.b), h = 0.5 * (p.b - p.a);
    const Complex fc = f(c);
    Complex kron = kKronrod[7] * fc, gauss = kGauss[3] * fc;
    for (int k = 0; k < 7; ++k) {
      const Complex s = f(c - h * kNodes[static_cast<std::size_t>(k)]) + f(c + h * kNodes[static_cast<std::size_t>(k)]);
      kron += kKronrod[static_cast<std::size_t>(k)] * s;
      if (k % 2 == 1) gauss += kGauss[static_cast<std::size_t>(k / 2)] * s;
    }
    out.evaluations += 15;
    kron *= h;
    gauss *= h;
    const double err = std::abs(kron - gauss);
    if (!std::isfinite(err)) throw ConvergenceError("quadrature: integrand not finite");
    out.max_depth = std::max(out.max_depth, p.depth);
    if (err <= abs_tol * std::abs(p.b - p.a) / total) {
      out.value += kron;
      out.error += err;
      ++out.intervals;
    } else if (p.depth >= max_depth) {
      throw ConvergenceError("quadrature: no convergence at subdivision depth " + std::to_string(max_depth));
    } else {
      // right half first so the left half is processed next (fixed summation order)
      stack.push_back({c, p.b, p.depth + 1});
      stack.push_back({p.a, c, p.depth + 1});
    }
  }
  return out;
}

}  // namespace fockdimer
