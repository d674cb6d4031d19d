#include "fockdimer/degeneration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "fockdimer/errors.hpp"
#include "fockdimer/parallel.hpp"

namespace fockdimer {

namespace {

constexpr Complex kTwoPiI{0.0, 2.0 * std::numbers::pi};

Complex genus0_prime(const Point& a, const Point& b) {
  if (a == b) throw DegenerateError("prime form at coincident points");
  if (a.is_infinite()) return 1.0;
  if (b.is_infinite()) return -1.0;
  return a.raw() - b.raw();
}

Complex xi(const Point& p, Complex center) {
  if (p.is_infinite()) return 1.0;
  return (p.raw() - center) / (p.raw() - std::conj(center));
}

}  // namespace

std::vector<int> kept_indices(int genus, const std::vector<int>& I) {
  std::set<int> drop;
  for (int i : I) {
    if (i < 1 || i > genus) throw DomainError("degeneration index " + std::to_string(i) + " out of range");
    if (!drop.insert(i).second) throw DomainError("degeneration index " + std::to_string(i) + " repeated");
  }
  std::vector<int> out;
  for (int i = 1; i <= genus; ++i) {
    if (!drop.count(i)) out.push_back(i);
  }
  return out;
}

SchottkyData subgroup_reference(const SchottkyData& data, const std::vector<int>& I) {
  SchottkyData out = data;
  out.centers.clear();
  out.multipliers.clear();
  for (int i : kept_indices(data.genus(), I)) {
    out.centers.push_back(data.centers[static_cast<std::size_t>(i - 1)]);
    out.multipliers.push_back(data.multipliers[static_cast<std::size_t>(i - 1)]);
  }
  return out;
}

Complex SeriesExpansion::evaluate(const std::vector<double>& s) const {
  if (s.size() != first.size()) throw DomainError("series: wrong number of multipliers");
  Complex out = constant;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0.0) throw DomainError("series: negative multiplier");
    out += first[i] * std::sqrt(s[i]);
  }
  for (const auto& [ij, c] : second) {
    out += c * std::sqrt(s.at(static_cast<std::size_t>(ij.first))) * std::sqrt(s.at(static_cast<std::size_t>(ij.second)));
  }
  return out;
}

SeriesExpansion theta_expansion(const Eigen::VectorXcd& z) {
  SeriesExpansion out{"theta", 1.0, {}, {}};
  for (Eigen::Index i = 0; i < z.size(); ++i) out.first.push_back(std::exp(kTwoPiI * z(i)) + std::exp(-kTwoPiI * z(i)));
  return out;
}

SeriesExpansion prime_expansion(const std::vector<Complex>& centers, const Point& a, const Point& b) {
  SeriesExpansion out{"prime-form", genus0_prime(a, b), std::vector<Complex>(centers.size(), 0.0), {}};
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const Complex r = xi(a, centers[i]) / xi(b, centers[i]);
    out.second[{static_cast<int>(i), static_cast<int>(i)}] = out.constant * (2.0 - r - 1.0 / r);
  }
  return out;
}

SeriesExpansion weight_order1(const FockModel& model, int edge) {
  const MinimalGraphPatch& patch = model.patch();
  const PatchEdge& e = patch.edges().at(static_cast<std::size_t>(edge));
  const std::vector<Complex>& centers = model.curve().group->data().centers;
  SeriesExpansion out{"weight", genus0_prime(model.angle(e.beta), model.angle(e.alpha)), {}, {}};
  const auto& d = model.abel().divisor;
  const Eigen::VectorXcd xf =
      abel_exponential_leading(centers, DiscreteAbelMap::to_divisor(d[static_cast<std::size_t>(e.f)], model.angles()));
  const Eigen::VectorXcd xfp =
      abel_exponential_leading(centers, DiscreteAbelMap::to_divisor(d[static_cast<std::size_t>(e.f_prime)], model.angles()));
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const Complex E = std::exp(kTwoPiI * model.t()(static_cast<Eigen::Index>(i)));
    const Complex a = E * xf(static_cast<Eigen::Index>(i)), b = E * xfp(static_cast<Eigen::Index>(i));
    out.first.push_back(-out.constant * (a + 1.0 / a + b + 1.0 / b));
  }
  return out;
}

SeriesExpansion kernel_order1(const FockModel& model, int f, int w, const Point& u) {
  const MinimalGraphPatch& patch = model.patch();
  if (patch.kind(f) != VertexKind::Face || patch.kind(w) != VertexKind::White) {
    throw DomainError("kernel_order1 expects a face and a white vertex");
  }
  int track = -1;
  for (int q : patch.incident(f)) {
    if (patch.other_end(q, f) == w) track = patch.quad_edges()[static_cast<std::size_t>(q)].track;
  }
  if (track < 0) throw DomainError("kernel_order1: face and white vertex are not adjacent");
  const std::vector<Complex>& centers = model.curve().group->data().centers;
  SeriesExpansion out{"kernel", 1.0 / genus0_prime(u, model.angle(track)), {}, {}};
  Divisor div = DiscreteAbelMap::to_divisor(model.abel().divisor[static_cast<std::size_t>(w)], model.angles());
  div.add(u, 1);
  const Eigen::VectorXcd pi = abel_exponential_leading(centers, div);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const Complex E = std::exp(kTwoPiI * model.t()(static_cast<Eigen::Index>(i)));
    const Complex p = pi(static_cast<Eigen::Index>(i));
    out.first.push_back(out.constant * (E * p + 1.0 / (E * p)));
  }
  return out;
}

std::pair<double, double> fit_order(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("order fit needs at least two points");
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) return {std::nan(""), HUGE_VAL};
    lx[k] = std::log(x[k]);
    ly[k] = std::log(y[k]);
    mx += lx[k];
    my += ly[k];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < n; ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  const double slope = sxy / sxx;
  double rss = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double r = ly[k] - (my + slope * (lx[k] - mx));
    rss += r * r;
  }
  return {slope, std::sqrt(rss / static_cast<double>(n))};
}

LimitScan limit_scan(const ScanQuantity& quantity, const SchottkyData& data, const std::vector<int>& I, double s0,
                     int steps, int threads) {
  const std::vector<int> kept = kept_indices(data.genus(), I);
  std::vector<int> all(static_cast<std::size_t>(data.genus()));
  for (int i = 0; i < data.genus(); ++i) all[static_cast<std::size_t>(i)] = i + 1;
  LimitScan scan;
  if (I.empty()) {
    scan.reference = quantity(data, all, all);
    scan.s.push_back(s0);
    scan.values.push_back(scan.reference);
    scan.diff.push_back(0.0);
    scan.worst.push_back(0);
    scan.order = std::nan("");
    return scan;
  }
  if (steps < 4) throw DomainError("limit scan needs at least 4 steps for an order fit");
  if (!(s0 > 0.0 && s0 < 1.0)) throw DomainError("limit scan: s0 must lie in (0, 1)");
  scan.reference = quantity(subgroup_reference(data, I), kept, kept);
  scan.s.resize(static_cast<std::size_t>(steps));
  scan.values.resize(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) scan.s[static_cast<std::size_t>(k)] = s0 * std::ldexp(1.0, -k);
  parallel_for(static_cast<std::size_t>(steps), threads, [&](std::size_t k) {
    SchottkyData d = data;
    for (int i : I) d.multipliers[static_cast<std::size_t>(i - 1)] = scan.s[k];
    scan.values[k] = quantity(d, all, kept);
  });
  for (const Eigen::VectorXcd& v : scan.values) {
    if (v.size() != scan.reference.size()) throw DomainError("limit scan: quantity changes size with s");
    Eigen::Index at = 0;
    const double m = v.size() ? (v - scan.reference).cwiseAbs().maxCoeff(&at) : 0.0;
    scan.diff.push_back(m);
    scan.worst.push_back(at);
  }
  const auto [order, residual] = fit_order(scan.s, scan.diff);
  scan.order = order;
  scan.fit_residual = residual;
  scan.conclusive = std::isfinite(order) && residual <= 0.1;
  return scan;
}

}  // namespace fockdimer
