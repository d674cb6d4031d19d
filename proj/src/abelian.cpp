#include "fockdimer/abelian.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fockdimer/errors.hpp"

namespace fockdimer {

namespace {

constexpr Complex kTwoPiI{0.0, 2.0 * std::numbers::pi};

void check_index(const SchottkyGroup& group, int i) {
  if (group.genus() == 0) throw DomainError("genus 0 has no first-kind differentials");
  if (i < 1 || i > group.genus()) {
    throw DomainError("differential index " + std::to_string(i) + " out of range 1.." +
                      std::to_string(group.genus()));
  }
}

// 1/(z - p) with the pole guard; zero when p is at infinity.
Complex simple_pole(const Complex& z, const Point& p) {
  if (p.is_infinite()) return 0.0;
  const Complex d = z - p.raw();
  if (std::abs(d) < kPoleGuard) {
    throw PoleError("evaluation point within 1e-9 of a pole of the differential");
  }
  return 1.0 / d;
}

}  // namespace

Truncated<Complex> omega_first_kind_truncated(const SchottkyGroup& group, int i, const Point& z) {
  check_index(group, i);
  if (z.is_infinite()) return {0.0, 0.0};
  const WordSelection& sel = group.selection(EnumerationMode::coset(i));
  Complex shorter = 0.0, longer = 0.0;
  for (std::size_t n = 0; n < sel.indices.size(); ++n) {
    const std::size_t k = sel.indices[n];
    const Complex term = simple_pole(z.raw(), group.image_of_center(k, i)) -
                         simple_pole(z.raw(), group.image_of_conjugate_center(k, i));
    (n < sel.shorter_count ? shorter : longer) += term;
  }
  return {(shorter + longer) / kTwoPiI, shorter / kTwoPiI};
}

Complex omega_first_kind(const SchottkyGroup& group, int i, const Point& z) {
  return omega_first_kind_truncated(group, i, z).value;
}

Eigen::VectorXcd omega_first_kind_all(const SchottkyGroup& group, const Point& z) {
  Eigen::VectorXcd out(group.genus());
  for (int i = 1; i <= group.genus(); ++i) out(i - 1) = omega_first_kind(group, i, z);
  return out;
}

Truncated<Complex> omega_third_kind_truncated(const SchottkyGroup& group, const Point& x,
                                              const Point& y, const Point& z) {
  if (x == y) throw DegenerateError("third-kind differential needs distinct poles");
  if (z.is_infinite()) return {0.0, 0.0};
  const WordSelection& sel = group.selection(EnumerationMode::all());
  Complex shorter = 0.0, longer = 0.0;
  for (std::size_t n = 0; n < sel.indices.size(); ++n) {
    const Moebius& m = group.element(sel.indices[n]).map;
    const Complex term = simple_pole(z.raw(), m(x)) - simple_pole(z.raw(), m(y));
    (n < sel.shorter_count ? shorter : longer) += term;
  }
  return {shorter + longer, shorter};
}

Complex omega_third_kind(const SchottkyGroup& group, const Point& x, const Point& y, const Point& z) {
  return omega_third_kind_truncated(group, x, y, z).value;
}

double PeriodData::max_asymmetry() const {
  return q.size() ? (q - q.transpose()).cwiseAbs().maxCoeff() : 0.0;
}

double PeriodData::max_imag_q() const { return q.size() ? q.imag().cwiseAbs().maxCoeff() : 0.0; }

double PeriodData::max_real_omega() const {
  return omega.size() ? omega.real().cwiseAbs().maxCoeff() : 0.0;
}

void PeriodData::validate(double tol) const {
  if (max_asymmetry() > tol) throw DomainError("period data: q is not symmetric");
  if (max_imag_q() > tol) throw DomainError("period data: q is not real");
  for (int i = 0; i < genus(); ++i) {
    const double qii = q(i, i).real();
    if (!(qii > 0.0 && qii < 1.0)) throw DomainError("period data: q_ii outside (0, 1)");
  }
}

PeriodData period_matrix(const SchottkyGroup& group) {
  const int g = group.genus();
  PeriodData out;
  out.q = Eigen::MatrixXcd::Ones(g, g);
  out.q_previous = Eigen::MatrixXcd::Ones(g, g);
  for (int i = 1; i <= g; ++i) {
    const Point ai(group.center(i));
    const Point ai_bar(std::conj(group.center(i)));
    for (int j = 1; j <= g; ++j) {
      const WordSelection& sel = group.selection(EnumerationMode::double_coset(i, j));
      Complex shorter = 1.0, longer = 1.0;
      for (std::size_t n = 0; n < sel.indices.size(); ++n) {
        const std::size_t k = sel.indices[n];
        Complex psi;
        if (group.element(k).word.empty() && i == j) {
          psi = group.multiplier(i);
        } else {
          psi = cross_ratio(ai, ai_bar, group.image_of_center(k, j), group.image_of_conjugate_center(k, j));
        }
        (n < sel.shorter_count ? shorter : longer) *= psi;
      }
      out.q(i - 1, j - 1) = shorter * longer;
      out.q_previous(i - 1, j - 1) = shorter;
    }
  }
  out.omega = out.q.unaryExpr([](const Complex& v) { return std::log(v) / kTwoPiI; });
  if (group.max_word_length() > 0 && out.tail() > group.data().tail_tolerance) {
    throw ConvergenceError("period matrix: |q(L) - q(L-1)| = " + std::to_string(out.tail()) +
                           " exceeds tail tolerance");
  }
  return out;
}

int Divisor::degree() const {
  int d = 0;
  for (const auto& t : terms) d += t.second;
  return d;
}

Divisor& Divisor::add(const Point& p, int multiplicity) {
  if (multiplicity == 0) return *this;
  for (auto& t : terms) {
    if (t.first == p) {
      t.second += multiplicity;
      return *this;
    }
  }
  terms.emplace_back(p, multiplicity);
  return *this;
}

Eigen::VectorXd AbelVector::reduced() const {
  return lifted.unaryExpr([](double v) {
    double r = v - std::floor(v);
    return r >= 1.0 ? 0.0 : r;
  });
}

namespace {

// Splits a degree-0 divisor into pairs (y_k, x_k) with D = sum (y_k) - (x_k).
std::vector<std::pair<Point, Point>> pair_up(const Divisor& divisor) {
  std::vector<Point> plus, minus;
  for (const auto& [p, n] : divisor.terms) {
    for (int c = 0; c < std::abs(n); ++c) (n > 0 ? plus : minus).push_back(p);
  }
  std::vector<std::pair<Point, Point>> out;
  for (std::size_t k = 0; k < plus.size(); ++k) out.emplace_back(plus[k], minus[k]);
  return out;
}

}  // namespace

AbelVector abel_map(const SchottkyGroup& group, const Divisor& divisor) {
  if (divisor.degree() != 0) {
    throw DomainError("Abel map needs a degree-0 divisor (degree " + std::to_string(divisor.degree()) + ")");
  }
  for (const auto& [p, n] : divisor.terms) {
    if (!p.is_real()) throw DomainError("Abel map: divisor points must be real");
    if (!group.in_fundamental_domain(p)) throw DomainError("Abel map: point inside an isometric disc");
  }
  const int g = group.genus();
  AbelVector out{Eigen::VectorXd::Zero(g)};
  const auto pairs = pair_up(divisor);
  for (int i = 1; i <= g; ++i) {
    const WordSelection& sel = group.selection(EnumerationMode::coset(i));
    double total = 0.0;
    for (const auto& [y, x] : pairs) {
      if (y == x) continue;
      for (std::size_t k : sel.indices) {
        const std::size_t partner = group.find(conjugate_word(group.element(k).word));
        if (partner < k) continue;
        Complex factor = cross_ratio(y, x, group.image_of_center(k, i), group.image_of_conjugate_center(k, i));
        if (partner != k) {
          factor *= cross_ratio(y, x, group.image_of_center(partner, i),
                                group.image_of_conjugate_center(partner, i));
        }
        if (std::abs(std::abs(factor) - 1.0) > 1e-10) {
          throw DomainError("Abel map: factor modulus " + std::to_string(std::abs(factor)) + " differs from 1");
        }
        total += std::arg(factor);
      }
    }
    out.lifted(i - 1) = total / (2.0 * std::numbers::pi);
  }
  return out;
}

Eigen::VectorXcd abel_difference(const SchottkyGroup& group, const Point& y, const Point& x) {
  const int g = group.genus();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(g);
  if (x == y) return out;
  for (int i = 1; i <= g; ++i) {
    Complex total = 0.0;
    for (std::size_t k : group.selection(EnumerationMode::coset(i)).indices) {
      const Complex cr = cross_ratio(y, x, group.image_of_center(k, i), group.image_of_conjugate_center(k, i));
      if (cr == Complex(0.0) || !std::isfinite(std::abs(cr))) {
        throw PoleError("Abel map evaluated at a limit point");
      }
      total += std::log(cr);
    }
    out(i - 1) = total / kTwoPiI;
  }
  return out;
}

Eigen::VectorXcd abel_exponential_leading(const std::vector<Complex>& centers, const Divisor& divisor) {
  if (divisor.degree() != 0) throw DomainError("leading Abel map needs a degree-0 divisor");
  Eigen::VectorXcd out = Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(centers.size()));
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (const auto& [p, n] : divisor.terms) {
      if (p.is_infinite()) continue;  // xi_i(inf) = 1
      const Complex xi = (p.raw() - centers[i]) / (p.raw() - std::conj(centers[i]));
      out(static_cast<Eigen::Index>(i)) *= std::pow(xi, n);
    }
  }
  return out;
}

Truncated<Complex> prime_p_truncated(const SchottkyGroup& group, const Point& a, const Point& b) {
  if (a == b) throw DegenerateError("prime form at coincident points");
  Complex lead;
  if (a.is_infinite()) {
    lead = 1.0;
  } else if (b.is_infinite()) {
    lead = -1.0;
  } else {
    lead = a.raw() - b.raw();
  }
  const WordSelection& sel = group.selection(EnumerationMode::star());
  Complex shorter = lead, longer = 1.0;
  for (std::size_t n = 0; n < sel.indices.size(); ++n) {
    const Moebius& m = group.element(sel.indices[n]).map;
    const Point gb = m(b), ga = m(a);
    if (chordal_distance(a, gb) < kPoleGuard || chordal_distance(b, ga) < kPoleGuard) {
      throw PoleError("prime form: argument collides with a group translate of the other");
    }
    (n < sel.shorter_count ? shorter : longer) *= cross_ratio(a, b, gb, ga);
  }
  return {shorter * longer, shorter};
}

Complex prime_p(const SchottkyGroup& group, const Point& a, const Point& b) {
  return prime_p_truncated(group, a, b).value;
}

}  // namespace fockdimer
