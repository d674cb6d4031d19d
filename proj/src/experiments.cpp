#include "fockdimer/experiments.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>

#include "fockdimer/errors.hpp"
#include "fockdimer/parallel.hpp"

namespace fockdimer {

using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kReportSchema = "fockdimer-report v1";

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string ext(const Point& p) { return p.is_infinite() ? "inf" : num(p.raw().real()); }

/// RFC 4180 quoting for fields holding commas or quotes.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Json cjson(Complex z) { return Json::array({z.real(), z.imag()}); }

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json vec_json(const Eigen::VectorXcd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(cjson(v(i)));
  return a;
}

Json point_json(const Point& p) { return p.is_infinite() ? Json("inf") : cjson(p.raw()); }

double tolerance_of(const RunConfig& cfg, const std::string& suite) {
  return cfg.tolerance ? *cfg.tolerance : default_tolerance(suite);
}

Json header(const RunConfig& cfg, const std::string& command) {
  Json j;
  j["schema"] = kReportSchema;
  j["command"] = command;
  j["genus"] = cfg.curve.genus();
  Json centers = Json::array();
  for (Complex c : cfg.curve.centers) centers.push_back(cjson(c));
  j["centers"] = centers;
  j["multipliers"] = cfg.curve.multipliers;
  j["t"] = std::vector<double>(cfg.t.data(), cfg.t.data() + cfg.t.size());
  j["truncation"] = {{"word_length", cfg.curve.max_word_length},
                     {"tail_tolerance", cfg.curve.tail_tolerance},
                     {"theta_eps", cfg.theta_eps},
                     {"quadrature_tol", cfg.quadrature_tol}};
  j["seed"] = cfg.seed;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// t restricted to the generators listed in `present` (1-based).
Eigen::VectorXd restrict_t(const Eigen::VectorXd& t, const std::vector<int>& present) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(present.size()));
  for (std::size_t k = 0; k < present.size(); ++k) out(static_cast<Eigen::Index>(k)) = t(present[k] - 1);
  return out;
}

Eigen::VectorXcd restrict_z(const Eigen::VectorXcd& z, const std::vector<int>& present) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(present.size()));
  for (std::size_t k = 0; k < present.size(); ++k) out(static_cast<Eigen::Index>(k)) = z(present[k] - 1);
  return out;
}

Eigen::VectorXcd to_vector(const std::vector<Complex>& v) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) out(static_cast<Eigen::Index>(k)) = v[k];
  return out;
}

double relative(Complex a, Complex b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::vector<Eigen::VectorXcd> theta_points(const RunConfig& cfg) {
  if (!cfg.z.empty()) return cfg.z;
  return {cfg.t.cast<Complex>()};
}

int reference_vertex(const RunConfig& cfg, const MinimalGraphPatch& patch, VertexKind kind) {
  if (!cfg.reference.empty()) {
    const int v = patch.find_vertex(cfg.reference);
    if (v < 0) throw ConfigError(cfg.source + ": reference vertex '" + cfg.reference + "' is not in the patch");
    if (patch.kind(v) == kind) return v;
  }
  return central_vertex(patch, kind);
}

// ---- verify suites ----

RunOutput verify_kernel(const RunConfig& cfg, const FockModel& model, double tol) {
  const MinimalGraphPatch& patch = model.patch();
  const int x = reference_vertex(cfg, patch, VertexKind::Face);
  PortableRng rng(cfg.seed);
  std::vector<Point> us;
  for (int k = 0; k < cfg.test_points; ++k) us.push_back(random_test_point(rng));
  struct Triple {
    int a, m, b;
  };
  std::vector<Triple> pairs;
  const int n = patch.num_vertices();
  for (int k = 0; k < cfg.test_points; ++k) {
    int a = rng.index(n), b = rng.index(n);
    while (b == a) b = rng.index(n);
    int m = rng.index(n);
    while (m == a || m == b) m = rng.index(n);
    pairs.push_back({a, m, b});
  }

  std::vector<KernelResidual> res(us.size());
  std::vector<double> path_dev(us.size());
  parallel_for(us.size(), cfg.threads, [&](std::size_t k) {
    res[k] = check_kernel(model, us[k], x);
    KernelEvaluator ev(model, us[k]);
    const Triple& p = pairs[k];
    const KernelValue direct = ev.along(patch.shortest_path(p.a, p.b));
    std::vector<int> via = patch.shortest_path(p.a, p.m);
    const std::vector<int> rest = patch.shortest_path(p.m, p.b);
    via.insert(via.end(), rest.begin() + 1, rest.end());
    const KernelValue detour = ev.along(via);
    path_dev[k] = direct.half_degree == detour.half_degree ? relative(direct.value, detour.value)
                                                             : std::numeric_limits<double>::infinity();
  });

  Json points = Json::array();
  double right = 0.0, left = 0.0, path = 0.0;
  for (std::size_t k = 0; k < us.size(); ++k) {
    right = std::max(right, res[k].right);
    left = std::max(left, res[k].left);
    path = std::max(path, path_dev[k]);
    points.push_back({{"u", point_json(us[k])},
                      {"right", res[k].right},
                      {"left", res[k].left},
                      {"path_pair", {patch.label(pairs[k].a), patch.label(pairs[k].b)}},
                      {"path_via", patch.label(pairs[k].m)},
                      {"path_deviation", finite_or_null(path_dev[k])}});
  }
  const double path_tol = 1e-8;
  Json j = header(cfg, "verify");
  j["suite"] = "kernel";
  j["reference"] = patch.label(x);
  j["rows"] = res.empty() ? 0 : res[0].rows;
  j["columns"] = res.empty() ? 0 : res[0].columns;
  j["tolerance"] = tol;
  j["path_tolerance"] = path_tol;
  j["max_right"] = right;
  j["max_left"] = left;
  j["max_path_deviation"] = finite_or_null(path);
  j["points"] = points;
  const bool pass = right <= tol && left <= tol && path <= path_tol;
  j["pass"] = pass;
  return {{{"verify-kernel.json", dump(j)}}, pass};
}

RunOutput verify_kasteleyn(const RunConfig& cfg, const FockModel& model, double tol) {
  const FockWeights w = fock_weights(model, cfg.threads);
  const KasteleynReport rep = kasteleyn_phase_check(model.patch(), model.angles(), w.value, tol);
  Json faces = Json::array();
  int absolute = 0;
  for (const FacePhase& f : rep.faces) {
    absolute += f.absolute;
    faces.push_back({{"face", model.patch().label(f.face)},
                     {"degree", f.degree},
                     {"phase", f.phase},
                     {"reference_phase", f.reference_phase},
                     {"matches_reference", f.matches_reference},
                     {"absolute", f.absolute}});
  }
  Json j = header(cfg, "verify");
  j["suite"] = "kasteleyn";
  j["tolerance"] = tol;
  j["faces_checked"] = rep.faces.size();
  j["faces_matching_absolute"] = absolute;
  j["faces"] = faces;
  j["pass"] = rep.pass;
  return {{{"verify-kasteleyn.json", dump(j)}}, rep.pass};
}

RunOutput verify_identity35(const RunConfig& cfg, const FockModel& model, double tol) {
  const MinimalGraphPatch& patch = model.patch();
  PortableRng rng(cfg.seed);
  std::vector<std::pair<int, Point>> cases;
  for (int k = 0; k < cfg.test_points; ++k) {
    const int e = rng.index(static_cast<int>(patch.edges().size()));
    cases.emplace_back(e, random_test_point(rng));
  }
  std::vector<Identity35> out(cases.size());
  parallel_for(cases.size(), cfg.threads,
               [&](std::size_t k) { out[k] = identity_35(model, cases[k].first, cases[k].second); });
  Json rows = Json::array();
  double worst = 0.0;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const PatchEdge& e = patch.edges()[static_cast<std::size_t>(cases[k].first)];
    worst = std::max(worst, out[k].residual);
    rows.push_back({{"edge", {patch.label(e.w), patch.label(e.b)}},
                    {"u", point_json(cases[k].second)},
                    {"lhs", cjson(out[k].lhs)},
                    {"rhs", cjson(out[k].rhs)},
                    {"residual", out[k].residual}});
  }
  Json j = header(cfg, "verify");
  j["suite"] = "identity35";
  j["tolerance"] = tol;
  j["max_residual"] = worst;
  j["cases"] = rows;
  j["pass"] = worst <= tol;
  return {{{"verify-identity35.json", dump(j)}}, worst <= tol};
}

RunOutput verify_inverse(const RunConfig& cfg, const FockModel& model, double tol) {
  const MinimalGraphPatch& patch = model.patch();
  std::vector<int> columns;
  if (!cfg.reference.empty()) {
    columns.push_back(reference_vertex(cfg, patch, VertexKind::White));
  } else {
    for (int i = 0; i < patch.num_white(); ++i) {
      if (patch.interior(patch.white(i))) columns.push_back(patch.white(i));
    }
  }
  if (columns.empty()) throw DomainError("inverse: the patch has no interior white vertex");
  const int nb = patch.num_black();
  std::vector<InverseEntry> entries(columns.size() * static_cast<std::size_t>(nb));
  parallel_for(entries.size(), cfg.threads, [&](std::size_t k) {
    const int w = columns[k / static_cast<std::size_t>(nb)];
    const int b = patch.black(static_cast<int>(k % static_cast<std::size_t>(nb)));
    entries[k] = inverse_entry(model, b, w, cfg.u0, cfg.crossing, cfg.quadrature_tol);
  });
  const FockWeights K = fock_weights(model, cfg.threads);

  Json cols = Json::array();
  double worst = 0.0, quad_error = 0.0;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const int w = columns[c];
    double col_worst = 0.0;
    for (int i = 0; i < patch.num_white(); ++i) {
      const int wp = patch.white(i);
      if (!patch.interior(wp)) continue;
      Complex sum = 0.0;
      for (int e : patch.edges_at(wp)) {
        const int b = patch.edges()[static_cast<std::size_t>(e)].b;
        sum += K.value[static_cast<std::size_t>(e)] * entries[c * static_cast<std::size_t>(nb) + static_cast<std::size_t>(b)].value;
      }
      col_worst = std::max(col_worst, std::abs(sum - (wp == w ? 1.0 : 0.0)));
    }
    Json crossings = Json::array();
    for (int b = 0; b < nb; ++b) {
      const InverseEntry& ie = entries[c * static_cast<std::size_t>(nb) + static_cast<std::size_t>(b)];
      quad_error = std::max(quad_error, ie.quadrature.error);
      crossings.push_back({{"b", patch.label(patch.black(b))}, {"u_c", ie.u_c}, {"value", cjson(ie.value)}});
    }
    worst = std::max(worst, col_worst);
    cols.push_back({{"w", patch.label(w)}, {"residual", col_worst}, {"entries", crossings}});
  }
  Json j = header(cfg, "verify");
  j["suite"] = "inverse";
  j["u0"] = cjson(cfg.u0);
  j["crossing"] = cfg.crossing ? Json(*cfg.crossing) : Json("default");
  j["tolerance"] = tol;
  j["max_residual"] = worst;
  j["max_quadrature_error"] = quad_error;
  j["columns"] = cols;
  j["pass"] = worst <= tol;
  return {{{"verify-inverse.json", dump(j)}}, worst <= tol};
}

RunOutput verify_periods(const RunConfig& cfg, double tol) {
  const CurvePtr curve = Curve::make(cfg.curve, cfg.theta_eps);
  const PeriodData& p = curve->periods;
  const int g = curve->genus();
  Json q = Json::array(), omega = Json::array();
  for (int i = 0; i < g; ++i) {
    Json qr = Json::array(), orow = Json::array();
    for (int k = 0; k < g; ++k) {
      qr.push_back(cjson(p.q(i, k)));
      orow.push_back(cjson(p.omega(i, k)));
    }
    q.push_back(qr);
    omega.push_back(orow);
  }
  const double genus1_tol = 1e-12;
  const double genus1_dev = g == 1 ? std::abs(p.q(0, 0) - cfg.curve.multipliers[0]) : 0.0;
  bool diag_ok = true;
  for (int i = 0; i < g; ++i) diag_ok = diag_ok && p.q(i, i).real() > 0.0 && p.q(i, i).real() < 1.0;
  const bool pass = p.max_asymmetry() <= tol && p.max_imag_q() <= tol && p.max_real_omega() <= tol &&
                    p.tail() <= cfg.curve.tail_tolerance && genus1_dev <= genus1_tol && diag_ok;
  Json j = header(cfg, "verify");
  j["suite"] = "periods";
  j["tolerance"] = tol;
  j["q"] = q;
  j["omega"] = omega;
  j["max_asymmetry"] = p.max_asymmetry();
  j["max_imag_q"] = p.max_imag_q();
  j["max_real_omega"] = p.max_real_omega();
  j["tail"] = p.tail();
  if (g == 1) j["genus1_q_minus_s"] = genus1_dev;
  j["diagonal_in_unit_interval"] = diag_ok;
  j["pass"] = pass;
  return {{{"verify-periods.json", dump(j)}}, pass};
}

RunOutput verify_theta(const RunConfig& cfg, double tol) {
  const CurvePtr curve = Curve::make(cfg.curve, cfg.theta_eps);
  const ThetaEvaluator& th = curve->theta;
  const int g = curve->genus();
  PortableRng rng(cfg.seed);
  std::vector<Eigen::VectorXd> zs;
  for (int k = 0; k < cfg.test_points; ++k) {
    Eigen::VectorXd z(g);
    for (int i = 0; i < g; ++i) z(i) = rng.uniform(-1.0, 1.0);
    zs.push_back(z);
  }
  struct Row {
    Complex value;
    double period = 0.0, quasi = 0.0, fd = 0.0;
  };
  const double h = 1e-5;
  std::vector<Row> rows(zs.size());
  parallel_for(zs.size(), cfg.threads, [&](std::size_t k) {
    const Eigen::VectorXcd z = zs[k].cast<Complex>();
    Row& r = rows[k];
    r.value = th.theta(z);
    const Eigen::VectorXcd grad = g ? th.dlog_theta(z) : Eigen::VectorXcd();
    for (int j = 0; j < g; ++j) {
      Eigen::VectorXcd zp = z;
      zp(j) += 1.0;
      r.period = std::max(r.period, relative(th.theta(zp), r.value));
      Eigen::VectorXcd zq = z + th.omega().col(j);
      const Complex factor = std::exp(Complex(0.0, -M_PI) * th.omega()(j, j) - Complex(0.0, 2.0 * M_PI) * z(j));
      r.quasi = std::max(r.quasi, relative(th.theta(zq), factor * r.value));
      Eigen::VectorXcd a = z, b = z;
      a(j) += h;
      b(j) -= h;
      const Complex fd = (std::log(th.theta(a)) - std::log(th.theta(b))) / (2.0 * h);
      r.fd = std::max(r.fd, std::abs(fd - grad(j)) / std::max(1.0, std::abs(grad(j))));
    }
  });
  const double period_tol = 1e-10, quasi_tol = 1e-8, fd_tol = 1e-6;
  double period = 0.0, quasi = 0.0, fd = 0.0, imag = 0.0, min_re = std::numeric_limits<double>::infinity();
  Json pts = Json::array();
  for (std::size_t k = 0; k < zs.size(); ++k) {
    period = std::max(period, rows[k].period);
    quasi = std::max(quasi, rows[k].quasi);
    fd = std::max(fd, rows[k].fd);
    imag = std::max(imag, std::abs(rows[k].value.imag()) / std::abs(rows[k].value));
    min_re = std::min(min_re, rows[k].value.real());
    pts.push_back({{"z", std::vector<double>(zs[k].data(), zs[k].data() + g)}, {"theta", cjson(rows[k].value)}});
  }
  const bool pass = period <= period_tol && quasi <= quasi_tol && fd <= fd_tol && imag <= tol && min_re > 0.0;
  Json j = header(cfg, "verify");
  j["suite"] = "theta";
  j["lattice_radius"] = th.radius();
  j["tolerance"] = tol;
  j["max_periodicity_deviation"] = period;
  j["max_quasi_periodicity_deviation"] = quasi;
  j["max_gradient_deviation"] = fd;
  j["max_relative_imaginary_part"] = imag;
  j["min_real_part"] = finite_or_null(min_re);
  j["points"] = pts;
  j["pass"] = pass;
  return {{{"verify-theta.json", dump(j)}}, pass};
}

}  // namespace

// ---- setup ----

Point random_test_point(PortableRng& rng) {
  const double re = rng.uniform(-2.0, 2.0);
  const double im = rng.uniform(0.1, 1.0);
  return Point(Complex(re, im));
}

AngledPatch build_patch(const GraphConfig& graph) {
  if (graph.type == "square") return build_square_patch(graph.width, graph.height, graph.vertical, graph.horizontal);
  if (graph.type == "honeycomb") return build_honeycomb_patch(graph.rows, graph.cols, graph.families);
  if (graph.type == "file") {
    AngledPatch ap = read_patch_file(graph.file);
    const AngleCheckReport check = check_angle_map(ap.patch, ap.angles);
    if (!check.pass) {
      throw DomainError(graph.file + ": angle map violates the cyclic order on " +
                        std::to_string(check.violating_triples.size() + check.equal_pairs.size()) + " triples or pairs");
    }
    return ap;
  }
  throw ConfigError("unknown graph type '" + graph.type + "'");
}

int resolve_base_face(const MinimalGraphPatch& patch, const std::string& label) {
  if (!label.empty()) {
    const int v = patch.find_vertex(label);
    if (v < 0 || patch.kind(v) != VertexKind::Face) throw ConfigError("base_face '" + label + "' is not a face of the patch");
    return v;
  }
  for (int i = 0; i < patch.num_faces(); ++i) {
    if (patch.interior(patch.face(i))) return patch.face(i);
  }
  if (patch.num_faces() == 0) throw DomainError("patch has no faces");
  return patch.face(0);
}

int central_vertex(const MinimalGraphPatch& patch, VertexKind kind) {
  std::vector<int> candidates;
  for (int v = 0; v < patch.num_vertices(); ++v) {
    if (patch.kind(v) == kind && patch.interior(v)) candidates.push_back(v);
  }
  if (candidates.empty()) {
    for (int v = 0; v < patch.num_vertices(); ++v) {
      if (patch.kind(v) == kind) candidates.push_back(v);
    }
  }
  if (candidates.empty()) throw DomainError("patch has no vertex of the requested kind");
  if (!patch.has_geometry()) return candidates.front();
  Eigen::Vector2d centre = Eigen::Vector2d::Zero();
  for (int v = 0; v < patch.num_vertices(); ++v) centre += patch.position(v);
  centre /= patch.num_vertices();
  int best = candidates.front();
  for (int v : candidates) {
    if ((patch.position(v) - centre).norm() < (patch.position(best) - centre).norm() - 1e-12) best = v;
  }
  return best;
}

FockModel build_model(const RunConfig& cfg) {
  AngledPatch patch = build_patch(cfg.graph);
  const int base = resolve_base_face(patch.patch, cfg.graph.base_face);
  return FockModel(Curve::make(cfg.curve, cfg.theta_eps), std::move(patch), cfg.t, base);
}

double default_tolerance(const std::string& suite) {
  if (suite == "inverse") return 1e-5;
  if (suite == "periods") return 1e-8;
  if (suite == "theta") return 1e-12;
  return 1e-6;
}

void write_outputs(const RunOutput& out, const std::string& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  std::vector<std::pair<fs::path, fs::path>> staged;
  try {
    for (const auto& [name, content] : out.files) {
      const fs::path target = fs::path(directory) / name;
      const fs::path tmp = fs::path(directory) / ("." + name + ".tmp");
      std::ofstream f(tmp, std::ios::binary);
      f << content;
      f.close();
      if (!f) throw std::runtime_error("cannot write " + tmp.string());
      staged.emplace_back(tmp, target);
    }
    for (const auto& [tmp, target] : staged) fs::rename(tmp, target);
  } catch (...) {
    std::error_code ec;
    for (const auto& [tmp, target] : staged) fs::remove(tmp, ec);
    throw;
  }
}

// ---- commands ----

RunOutput run_weights(const RunConfig& cfg) {
  const FockModel model = build_model(cfg);
  const FockWeights w = fock_weights(model, cfg.threads);
  const MinimalGraphPatch& patch = model.patch();
  std::string csv = "w_id,b_id,re,im,alpha,beta,face,face_prime\n";
  for (std::size_t k = 0; k < patch.edges().size(); ++k) {
    const PatchEdge& e = patch.edges()[k];
    csv += csv_field(patch.label(e.w)) + "," + csv_field(patch.label(e.b)) + "," + num(w.value[k].real()) + "," +
           num(w.value[k].imag()) + "," + ext(model.angle(e.alpha)) + "," + ext(model.angle(e.beta)) + "," +
           csv_field(patch.label(e.f)) + "," + csv_field(patch.label(e.f_prime)) + "\n";
  }
  return {{{"weights.csv", csv}}, true};
}

RunOutput run_verify(const RunConfig& cfg, const std::string& suite) {
  const double tol = tolerance_of(cfg, suite);
  if (suite == "periods") return verify_periods(cfg, tol);
  if (suite == "theta") return verify_theta(cfg, tol);
  const FockModel model = build_model(cfg);
  if (suite == "kernel") return verify_kernel(cfg, model, tol);
  if (suite == "kasteleyn") return verify_kasteleyn(cfg, model, tol);
  if (suite == "identity35") return verify_identity35(cfg, model, tol);
  if (suite == "inverse") return verify_inverse(cfg, model, tol);
  throw ConfigError("unknown suite '" + suite + "'");
}

ScanQuantity scan_quantity(const RunConfig& cfg, const AngledPatch& patch) {
  const std::string q = cfg.quantity;
  const int base = resolve_base_face(patch.patch, cfg.graph.base_face);
  const double eps = cfg.theta_eps;
  const Eigen::VectorXd t = cfg.t;
  auto model = [=](const SchottkyData& d, const std::vector<int>& present) {
    return FockModel(Curve::make(d, eps), patch, restrict_t(t, present), base);
  };
  if (q == "weights") {
    return [=](const SchottkyData& d, const std::vector<int>& present, const std::vector<int>&) {
      return to_vector(fock_weights(model(d, present)).value);
    };
  }
  if (q == "theta") {
    const std::vector<Eigen::VectorXcd> zs = theta_points(cfg);
    return [=](const SchottkyData& d, const std::vector<int>& present, const std::vector<int>&) {
      const CurvePtr c = Curve::make(d, eps);
      Eigen::VectorXcd out(static_cast<Eigen::Index>(zs.size()));
      for (std::size_t k = 0; k < zs.size(); ++k) out(static_cast<Eigen::Index>(k)) = c->theta.theta(restrict_z(zs[k], present));
      return out;
    };
  }
  if (q == "prime") {
    const Point a(cfg.point_a), b(cfg.point_b);
    return [=](const SchottkyData& d, const std::vector<int>&, const std::vector<int>&) {
      Eigen::VectorXcd out(1);
      out(0) = prime_p(*make_group(d), a, b);
      return out;
    };
  }
  if (q == "period") {
    return [=](const SchottkyData& d, const std::vector<int>& present, const std::vector<int>& target) {
      const PeriodData p = period_matrix(*make_group(d));
      std::vector<Eigen::Index> pos;
      for (int i : target) {
        pos.push_back(static_cast<Eigen::Index>(std::find(present.begin(), present.end(), i) - present.begin()));
      }
      Eigen::VectorXcd out(static_cast<Eigen::Index>(pos.size() * pos.size()));
      Eigen::Index n = 0;
      for (Eigen::Index i : pos) {
        for (Eigen::Index k : pos) out(n++) = p.q(i, k);
      }
      return out;
    };
  }
  if (q == "kernel") {
    RunConfig probe = cfg;
    const int w = reference_vertex(probe, patch.patch, VertexKind::White);
    const Point u(cfg.u);
    return [=](const SchottkyData& d, const std::vector<int>& present, const std::vector<int>&) {
      Eigen::VectorXcd out(1);
      out(0) = kernel_form(model(d, present), base, w, u).value;
      return out;
    };
  }
  throw ConfigError("unknown quantity '" + q + "'");
}

RunOutput run_degenerate(const RunConfig& cfg) {
  const AngledPatch patch = build_patch(cfg.graph);
  const LimitScan scan =
      limit_scan(scan_quantity(cfg, patch), cfg.curve, cfg.degenerate, cfg.s0, cfg.steps, cfg.threads);
  const Eigen::Index comp = scan.worst.front();
  std::string csv = "s,quantity_re,quantity_im,abs_diff,fitted_order\n";
  for (std::size_t k = 0; k < scan.s.size(); ++k) {
    const Complex v = scan.values[k].size() ? scan.values[k](comp) : Complex(0.0);
    csv += num(scan.s[k]) + "," + num(v.real()) + "," + num(v.imag()) + "," + num(scan.diff[k]) + "," +
           num(scan.order) + "\n";
  }
  const bool pass = cfg.degenerate.empty() || scan.conclusive;
  Json j = header(cfg, "degenerate");
  j["quantity"] = cfg.quantity;
  j["degenerate"] = cfg.degenerate;
  j["s0"] = cfg.s0;
  j["steps"] = cfg.steps;
  j["component"] = comp;
  j["reference"] = scan.reference.size() ? cjson(scan.reference(comp)) : Json(nullptr);
  j["abs_diff"] = scan.diff;
  j["fitted_order"] = finite_or_null(scan.order);
  j["fit_residual"] = scan.fit_residual;
  j["conclusive"] = scan.conclusive;
  j["pass"] = pass;
  const std::string stem = "degenerate-" + cfg.quantity;
  return {{{stem + ".csv", csv}, {stem + ".json", dump(j)}}, pass};
}

RunOutput run_series(const RunConfig& cfg) {
  const FockModel model = build_model(cfg);
  const MinimalGraphPatch& patch = model.patch();
  const std::vector<double>& s = cfg.curve.multipliers;
  auto entry = [&](const std::string& item, const SeriesExpansion& e, Complex actual) {
    Json first = Json::array();
    for (Complex c : e.first) first.push_back(cjson(c));
    const Complex approx = e.evaluate(s);
    return Json{{"domain", e.domain},
                {"item", item},
                {"constant", cjson(e.constant)},
                {"first", first},
                {"order1_value", cjson(approx)},
                {"value", cjson(actual)},
                {"abs_remainder", std::abs(actual - approx)}};
  };
  Json rows = Json::array();
  for (const Eigen::VectorXcd& z : theta_points(cfg)) {
    std::string item = "z=";
    for (Eigen::Index i = 0; i < z.size(); ++i) item += (i ? ";" : "") + num(z(i).real());
    rows.push_back(entry(item, theta_expansion(z), model.curve().theta.theta(z)));
  }
  const Point a(cfg.point_a), b(cfg.point_b);
  rows.push_back(entry("a,b", prime_expansion(cfg.curve.centers, a, b), prime_p(*model.curve().group, a, b)));
  for (std::size_t k = 0; k < patch.edges().size(); ++k) {
    const PatchEdge& e = patch.edges()[k];
    rows.push_back(entry(patch.label(e.w) + "-" + patch.label(e.b), weight_order1(model, static_cast<int>(k)),
                         fock_weight(model, static_cast<int>(k))));
  }
  RunConfig probe = cfg;
  const int w = reference_vertex(probe, patch, VertexKind::White);
  const int f = model.abel().base_face;
  const Point u(cfg.u);
  rows.push_back(entry(patch.label(f) + "-" + patch.label(w), kernel_order1(model, f, w, u),
                       kernel_form(model, f, w, u).value));
  Json j = header(cfg, "series");
  j["expansions"] = rows;
  j["pass"] = true;
  return {{{"series.json", dump(j)}}, true};
}

RunOutput run_theta_eval(const RunConfig& cfg) {
  const CurvePtr curve = Curve::make(cfg.curve, cfg.theta_eps);
  Json pts = Json::array();
  for (const Eigen::VectorXcd& z : theta_points(cfg)) {
    Json p = {{"z", vec_json(z)}, {"theta", cjson(curve->theta.theta(z))}};
    p["dlog_theta"] = curve->genus() ? vec_json(curve->theta.dlog_theta(z)) : Json::array();
    pts.push_back(p);
  }
  Json j = header(cfg, "theta-eval");
  j["lattice_radius"] = curve->theta.radius();
  j["points"] = pts;
  j["pass"] = true;
  return {{{"theta-eval.json", dump(j)}}, true};
}

RunOutput run_abel_eval(const RunConfig& cfg) {
  const SchottkyGroupPtr group = make_group(cfg.curve);
  const Point a(cfg.point_a), b(cfg.point_b), u(cfg.u);
  Json j = header(cfg, "abel-eval");
  j["a"] = point_json(a);
  j["b"] = point_json(b);
  j["u"] = point_json(u);
  j["abel_difference_b_minus_a"] = vec_json(abel_difference(*group, b, a));
  if (a.is_real() && b.is_real()) {
    Divisor d;
    d.add(b, 1).add(a, -1);
    const AbelVector v = abel_map(*group, d);
    const Eigen::VectorXd r = v.reduced();
    j["abel_map_lifted"] = std::vector<double>(v.lifted.data(), v.lifted.data() + v.lifted.size());
    j["abel_map_reduced"] = std::vector<double>(r.data(), r.data() + r.size());
  }
  j["prime_form_a_b"] = cjson(prime_p(*group, a, b));
  j["omega_at_u"] = vec_json(omega_first_kind_all(*group, u));
  if (a.is_finite() && b.is_finite()) j["omega_third_kind_b_a_at_u"] = cjson(omega_third_kind(*group, b, a, u));
  j["pass"] = true;
  return {{{"abel-eval.json", dump(j)}}, true};
}

}  // namespace fockdimer
