#include "fockdimer/minimal_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "fockdimer/errors.hpp"

namespace fockdimer {

namespace {

constexpr double kPi = std::numbers::pi;

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

// Classes of a union-find numbered by first appearance.
std::vector<int> number_classes(UnionFind& uf, std::size_t n, int& count) {
  std::map<int, int> id;
  std::vector<int> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const int root = uf.find(static_cast<int>(k));
    auto it = id.find(root);
    if (it == id.end()) it = id.emplace(root, static_cast<int>(id.size())).first;
    out[k] = it->second;
  }
  count = static_cast<int>(id.size());
  return out;
}

double wrap(double x) {
  double r = std::fmod(x, 2.0 * kPi);
  return r < 0.0 ? r + 2.0 * kPi : r;
}

// Position of an extended real on the circle R u {inf}, increasing with x.
double circle_coordinate(const Point& x) {
  return x.is_infinite() ? kPi : 2.0 * std::atan(x.raw().real());
}

bool ccw(double a, double b, double c) { return wrap(b - a) < wrap(c - a); }

Eigen::Vector2d rot90(const Eigen::Vector2d& v) { return {-v.y(), v.x()}; }

Point antipode(const Point& x) {
  if (x.is_infinite()) return Point(0.0);
  if (x.raw() == Complex(0.0)) return Point::infinity();
  return Point(-1.0 / x.raw());
}

// Extended reals on the line, inf above everything.
bool strictly_monotone(const std::vector<Point>& xs) {
  auto key = [](const Point& p) { return p.is_infinite() ? HUGE_VAL : p.raw().real(); };
  bool up = true, down = true;
  for (std::size_t k = 1; k < xs.size(); ++k) {
    up = up && key(xs[k - 1]) < key(xs[k]);
    down = down && key(xs[k - 1]) > key(xs[k]);
  }
  return up || down;
}

void check_list(const std::vector<Point>& xs, const std::string& what) {
  if (xs.empty()) throw DomainError(what + ": empty angle list");
  for (const Point& p : xs) {
    if (!p.is_real()) throw DomainError(what + ": angles must be real or inf");
  }
  if (!strictly_monotone(xs)) throw DomainError(what + ": angle list is not strictly monotone");
}

void require_check(const MinimalGraphPatch& patch, const AngleMap& angles) {
  const AngleCheckReport report = check_angle_map(patch, angles);
  if (report.pass) return;
  std::ostringstream msg;
  msg << "angle map violates the cyclic order:";
  for (const auto& [a, b] : report.equal_pairs) {
    msg << " equal angles on " << patch.tracks()[static_cast<std::size_t>(a)].label << ","
        << patch.tracks()[static_cast<std::size_t>(b)].label << ";";
  }
  for (std::size_t k = 0; k < report.violating_triples.size() && k < 5; ++k) {
    const auto& t = report.violating_triples[k];
    msg << " triple " << patch.tracks()[static_cast<std::size_t>(t[0])].label << ","
        << patch.tracks()[static_cast<std::size_t>(t[1])].label << ","
        << patch.tracks()[static_cast<std::size_t>(t[2])].label << ";";
  }
  if (report.violating_triples.size() > 5) msg << " (" << report.violating_triples.size() << " triples in total)";
  throw DomainError(msg.str());
}

}  // namespace

MinimalGraphPatch::MinimalGraphPatch(PatchSpec spec)
    : nb_(static_cast<int>(spec.black_labels.size())), nw_(static_cast<int>(spec.white_labels.size())) {
  const std::size_t ne = spec.edges.size();
  if (ne == 0) throw DomainError("patch has no edges");
  for (const PatchEdge& e : spec.edges) {
    if (e.w < 0 || e.w >= nw_ || e.b < 0 || e.b >= nb_) throw DomainError("edge endpoint out of range");
  }
  {
    std::set<std::pair<int, int>> seen;
    for (const PatchEdge& e : spec.edges) {
      if (!seen.insert({e.w, e.b}).second) throw DomainError("repeated edge between the same vertices");
    }
  }
  const bool faces_given = std::all_of(spec.edges.begin(), spec.edges.end(),
                                       [](const PatchEdge& e) { return e.f >= 0 && e.f_prime >= 0; });
  const bool tracks_given = std::all_of(spec.edges.begin(), spec.edges.end(),
                                        [](const PatchEdge& e) { return e.alpha >= 0 && e.beta >= 0; });
  if (!faces_given && !tracks_given) throw DomainError("patch needs either faces or tracks on every edge");

  if (!faces_given) {
    // Rotation from track labels: ccw successor at w shares beta_e as its alpha,
    // clockwise successor at b shares alpha_e as its beta.
    std::map<std::pair<int, int>, int> by_w_alpha, by_b_beta;
    for (std::size_t k = 0; k < ne; ++k) {
      const PatchEdge& e = spec.edges[k];
      if (!by_w_alpha.emplace(std::pair{e.w, e.alpha}, static_cast<int>(k)).second ||
          !by_b_beta.emplace(std::pair{e.b, e.beta}, static_cast<int>(k)).second) {
        throw DomainError("a track passes the same vertex twice");
      }
    }
    UnionFind uf(2 * ne);  // slot 2k: left face of edge k, 2k+1: right face
    for (std::size_t k = 0; k < ne; ++k) {
      const PatchEdge& e = spec.edges[k];
      if (auto it = by_w_alpha.find({e.w, e.beta}); it != by_w_alpha.end()) {
        uf.unite(static_cast<int>(2 * k), 2 * it->second + 1);
      }
      if (auto it = by_b_beta.find({e.b, e.alpha}); it != by_b_beta.end()) {
        uf.unite(static_cast<int>(2 * k), 2 * it->second + 1);
      }
    }
    int count = 0;
    const std::vector<int> cls = number_classes(uf, 2 * ne, count);
    spec.face_labels.clear();
    for (int c = 0; c < count; ++c) spec.face_labels.push_back("F" + std::to_string(c));
    for (std::size_t k = 0; k < ne; ++k) {
      spec.edges[k].f = cls[2 * k];
      spec.edges[k].f_prime = cls[2 * k + 1];
    }
  }
  nf_ = static_cast<int>(spec.face_labels.size());
  for (const PatchEdge& e : spec.edges) {
    if (e.f < 0 || e.f >= nf_ || e.f_prime < 0 || e.f_prime >= nf_) throw DomainError("edge face out of range");
    if (e.f == e.f_prime) throw DomainError("both sides of an edge lie in the same face");
  }

  // Edges in quad-graph ids.
  edges_ = spec.edges;
  for (PatchEdge& e : edges_) {
    e.w = white(e.w);
    e.b = black(e.b);
    e.f = face(e.f);
    e.f_prime = face(e.f_prime);
  }

  // Quad-graph edges: alpha crosses (b,f) and (w,f'), beta crosses (w,f) and (b,f').
  std::map<std::pair<int, int>, std::vector<int>> slots_at;  // (vertex, face) -> slots
  for (std::size_t k = 0; k < ne; ++k) {
    const PatchEdge& e = edges_[k];
    const int a = static_cast<int>(2 * k), bt = static_cast<int>(2 * k + 1);
    slots_at[{e.b, e.f}].push_back(a);
    slots_at[{e.w, e.f_prime}].push_back(a);
    slots_at[{e.w, e.f}].push_back(bt);
    slots_at[{e.b, e.f_prime}].push_back(bt);
  }
  for (const auto& [key, slots] : slots_at) {
    if (slots.size() > 2) throw DomainError("quad-graph edge shared by more than two quadrilaterals");
  }

  if (!tracks_given) {
    UnionFind uf(2 * ne);
    for (const auto& [key, slots] : slots_at) {
      if (slots.size() == 2) uf.unite(slots[0], slots[1]);
    }
    int count = 0;
    const std::vector<int> cls = number_classes(uf, 2 * ne, count);
    spec.track_labels.clear();
    for (int c = 0; c < count; ++c) spec.track_labels.push_back("T" + std::to_string(c));
    for (std::size_t k = 0; k < ne; ++k) {
      edges_[k].alpha = cls[2 * k];
      edges_[k].beta = cls[2 * k + 1];
    }
  }
  const int nt = static_cast<int>(spec.track_labels.size());
  tracks_.resize(static_cast<std::size_t>(nt));
  for (int t = 0; t < nt; ++t) tracks_[static_cast<std::size_t>(t)].label = spec.track_labels[static_cast<std::size_t>(t)];

  std::set<std::pair<int, int>> crossing_pairs;
  for (std::size_t k = 0; k < ne; ++k) {
    const PatchEdge& e = edges_[k];
    if (e.alpha < 0 || e.alpha >= nt || e.beta < 0 || e.beta >= nt) throw DomainError("edge track out of range");
    if (e.alpha == e.beta) throw DomainError("track " + tracks_[static_cast<std::size_t>(e.alpha)].label + " intersects itself");
    if (!crossing_pairs.insert({e.alpha, e.beta}).second) {
      throw DomainError("tracks " + tracks_[static_cast<std::size_t>(e.alpha)].label + " and " +
                        tracks_[static_cast<std::size_t>(e.beta)].label + " cross twice in the same direction");
    }
    tracks_[static_cast<std::size_t>(e.alpha)].edges.push_back(static_cast<int>(k));
    tracks_[static_cast<std::size_t>(e.beta)].edges.push_back(static_cast<int>(k));
  }

  // Labels.
  labels_.reserve(static_cast<std::size_t>(num_vertices()));
  for (const auto* list : {&spec.black_labels, &spec.white_labels, &spec.face_labels}) {
    for (const std::string& s : *list) labels_.push_back(s);
  }
  for (int v = 0; v < num_vertices(); ++v) {
    if (!label_index_.emplace(labels_[static_cast<std::size_t>(v)], v).second) {
      throw DomainError("duplicate vertex label " + labels_[static_cast<std::size_t>(v)]);
    }
  }

  // Quad edges with their multiplicity, checking the track on shared quad-graph edges.
  incident_.assign(static_cast<std::size_t>(num_vertices()), {});
  std::vector<int> multiplicity;
  std::map<std::pair<int, int>, int> qe_index;
  auto add_quad_edge = [&](int v, int f, int track) {
    auto [it, fresh] = qe_index.emplace(std::pair{v, f}, static_cast<int>(quad_edges_.size()));
    if (fresh) {
      quad_edges_.push_back({v, f, track});
      multiplicity.push_back(1);
      tracks_[static_cast<std::size_t>(track)].crossings.push_back(it->second);
    } else {
      if (quad_edges_[static_cast<std::size_t>(it->second)].track != track) {
        throw DomainError("quad-graph edge " + label(v) + "-" + label(f) + " is crossed by two different tracks");
      }
      ++multiplicity[static_cast<std::size_t>(it->second)];
    }
  };
  for (const PatchEdge& e : edges_) {
    add_quad_edge(e.b, e.f, e.alpha);
    add_quad_edge(e.w, e.f_prime, e.alpha);
    add_quad_edge(e.w, e.f, e.beta);
    add_quad_edge(e.b, e.f_prime, e.beta);
  }
  for (std::size_t q = 0; q < quad_edges_.size(); ++q) {
    incident_[static_cast<std::size_t>(quad_edges_[q].vertex)].push_back(static_cast<int>(q));
    incident_[static_cast<std::size_t>(quad_edges_[q].face)].push_back(static_cast<int>(q));
  }
  for (int v = 0; v < num_vertices(); ++v) {
    auto& list = incident_[static_cast<std::size_t>(v)];
    std::sort(list.begin(), list.end(), [&](int a, int b) { return other_end(a, v) < other_end(b, v); });
  }
  interior_.assign(static_cast<std::size_t>(num_vertices()), false);
  for (int v = 0; v < num_vertices(); ++v) {
    const auto& list = incident_[static_cast<std::size_t>(v)];
    interior_[static_cast<std::size_t>(v)] =
        !list.empty() && std::all_of(list.begin(), list.end(), [&](int q) { return multiplicity[static_cast<std::size_t>(q)] == 2; });
  }
  edges_at_.assign(static_cast<std::size_t>(num_vertices()), {});
  for (std::size_t k = 0; k < ne; ++k) {
    edges_at_[static_cast<std::size_t>(edges_[k].w)].push_back(static_cast<int>(k));
    edges_at_[static_cast<std::size_t>(edges_[k].b)].push_back(static_cast<int>(k));
  }

  // Geometry and track directions. In a rhombic embedding b - f is constant along alpha and
  // f - w along beta; the direction of travel is that vector turned by +90 degrees.
  const bool geometry = spec.black_positions.size() == spec.black_labels.size() &&
                        spec.white_positions.size() == spec.white_labels.size() &&
                        spec.face_positions.size() == spec.face_labels.size() && !spec.black_positions.empty();
  if (geometry) {
    for (const auto* list : {&spec.black_positions, &spec.white_positions, &spec.face_positions}) {
      for (const auto& p : *list) positions_.push_back(p);
    }
    std::vector<std::optional<double>> dir(static_cast<std::size_t>(nt));
    bool rhombic = true;
    auto record = [&](int track, const Eigen::Vector2d& v) {
      const Eigen::Vector2d d = rot90(v);
      const double angle = wrap(std::atan2(d.y(), d.x()));
      auto& slot = dir[static_cast<std::size_t>(track)];
      if (!slot) {
        slot = angle;
      } else {
        const double diff = std::abs(wrap(*slot - angle + kPi) - kPi);
        if (diff > 1e-6) rhombic = false;
      }
    };
    for (const PatchEdge& e : edges_) {
      record(e.alpha, position(e.b) - position(e.f));
      record(e.beta, position(e.f) - position(e.w));
    }
    if (rhombic) {
      std::vector<double> classes;
      for (int t = 0; t < nt; ++t) {
        Track& tr = tracks_[static_cast<std::size_t>(t)];
        tr.direction = *dir[static_cast<std::size_t>(t)];
        auto it = std::find_if(classes.begin(), classes.end(), [&](double c) {
          return std::abs(wrap(c - tr.direction + kPi) - kPi) < 1e-6;
        });
        if (it == classes.end()) {
          tr.direction_class = static_cast<int>(classes.size());
          classes.push_back(tr.direction);
        } else {
          tr.direction_class = static_cast<int>(it - classes.begin());
        }
      }
    }
  }
}

VertexKind MinimalGraphPatch::kind(int v) const {
  if (v < 0 || v >= num_vertices()) throw DomainError("quad-graph vertex out of range");
  if (v < nb_) return VertexKind::Black;
  if (v < nb_ + nw_) return VertexKind::White;
  return VertexKind::Face;
}

int MinimalGraphPatch::find_vertex(const std::string& label) const {
  auto it = label_index_.find(label);
  return it == label_index_.end() ? -1 : it->second;
}

int MinimalGraphPatch::find_track(const std::string& label) const {
  for (int t = 0; t < num_tracks(); ++t) {
    if (tracks_[static_cast<std::size_t>(t)].label == label) return t;
  }
  return -1;
}

int MinimalGraphPatch::find_edge(int w, int b) const {
  for (int k : edges_at(w)) {
    if (edges_[static_cast<std::size_t>(k)].b == b) return k;
  }
  return -1;
}

int MinimalGraphPatch::other_end(int quad_edge, int v) const {
  const QuadEdge& q = quad_edges_[static_cast<std::size_t>(quad_edge)];
  return q.vertex == v ? q.face : q.vertex;
}

std::vector<int> MinimalGraphPatch::shortest_path(int x, int y) const {
  kind(x);
  kind(y);
  std::vector<int> prev(static_cast<std::size_t>(num_vertices()), -2);
  std::queue<int> todo;
  prev[static_cast<std::size_t>(x)] = -1;
  todo.push(x);
  while (!todo.empty() && prev[static_cast<std::size_t>(y)] == -2) {
    const int v = todo.front();
    todo.pop();
    for (int q : incident(v)) {
      const int u = other_end(q, v);
      if (prev[static_cast<std::size_t>(u)] != -2) continue;
      prev[static_cast<std::size_t>(u)] = v;
      todo.push(u);
    }
  }
  if (prev[static_cast<std::size_t>(y)] == -2) throw DomainError("no quad-graph path between the vertices");
  std::vector<int> path;
  for (int v = y; v != -1; v = prev[static_cast<std::size_t>(v)]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

double AngleMap::default_lift(const Point& x) {
  if (x.is_infinite()) return 1.0;
  return std::atan(x.raw().real()) / kPi + 0.5;
}

AngleMap AngleMap::with_default_lifts(std::vector<Point> angles) {
  AngleMap out;
  out.lifted.reserve(angles.size());
  for (const Point& p : angles) out.lifted.push_back(default_lift(p));
  out.angle = std::move(angles);
  return out;
}

void AngleMap::validate(const MinimalGraphPatch& patch) const {
  if (angle.size() != static_cast<std::size_t>(patch.num_tracks()) || lifted.size() != angle.size()) {
    throw DomainError("angle map size does not match the number of tracks");
  }
  for (std::size_t t = 0; t < angle.size(); ++t) {
    if (!angle[t].is_real()) throw DomainError("angle of track " + patch.tracks()[t].label + " is not real");
    if (!std::isfinite(lifted[t])) throw DomainError("lift of track " + patch.tracks()[t].label + " is not finite");
    const double diff = lifted[t] - default_lift(angle[t]);
    if (std::abs(diff - std::round(diff)) > 1e-9) {
      throw DomainError("lift of track " + patch.tracks()[t].label + " is not congruent to its angle mod 1");
    }
  }
}

AngledPatch build_square_patch(int width, int height, const std::vector<Point>& vertical,
                               const std::vector<Point>& horizontal) {
  if (width < 1 || height < 1) throw DomainError("square patch needs positive width and height");
  check_list(vertical, "vertical tracks");
  check_list(horizontal, "horizontal tracks");

  PatchSpec spec;
  std::map<std::pair<int, int>, int> index;  // grid point -> index within its kind
  for (int j = 0; j <= height; ++j) {
    for (int i = 0; i <= width; ++i) {
      const std::string ij = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      const Eigen::Vector2d pos(i, j);
      if ((i + j) % 2 == 1) {
        index[{i, j}] = static_cast<int>(spec.face_labels.size());
        spec.face_labels.push_back("f" + ij);
        spec.face_positions.push_back(pos);
      } else if (i % 2 == 0) {
        index[{i, j}] = static_cast<int>(spec.black_labels.size());
        spec.black_labels.push_back("b" + ij);
        spec.black_positions.push_back(pos);
      } else {
        index[{i, j}] = static_cast<int>(spec.white_labels.size());
        spec.white_labels.push_back("w" + ij);
        spec.white_positions.push_back(pos);
      }
    }
  }
  for (int i = 0; i < width; ++i) spec.track_labels.push_back("V" + std::to_string(i));
  for (int j = 0; j < height; ++j) spec.track_labels.push_back("H" + std::to_string(j));
  // Track crossed between two grid points that differ in one coordinate.
  auto track_between = [&](std::pair<int, int> p, std::pair<int, int> q) {
    return p.second == q.second ? std::min(p.first, q.first) : width + std::min(p.second, q.second);
  };
  for (int j = 0; j < height; ++j) {
    for (int i = 0; i < width; ++i) {
      std::pair<int, int> w, b, f1, f2;
      const std::pair<int, int> corners[4] = {{i, j}, {i + 1, j}, {i + 1, j + 1}, {i, j + 1}};
      const int g0 = (i + j) % 2 == 0 ? 0 : 1;  // corners g0, g0+2 are vertices of G
      const auto& p = corners[g0];
      const auto& r = corners[g0 + 2];
      (p.first % 2 == 0 ? b : w) = p;
      (p.first % 2 == 0 ? w : b) = r;
      f1 = corners[g0 + 1];
      f2 = corners[(g0 + 3) % 4];
      // f is left of w -> b
      const double cross = (b.first - w.first) * (f1.second - w.second) - (b.second - w.second) * (f1.first - w.first);
      if (cross < 0) std::swap(f1, f2);
      PatchEdge e;
      e.w = index[w];
      e.b = index[b];
      e.f = index[f1];
      e.f_prime = index[f2];
      e.alpha = track_between(f1, b);
      e.beta = track_between(f1, w);
      spec.edges.push_back(e);
    }
  }
  MinimalGraphPatch patch(std::move(spec));

  std::vector<Point> angles;
  for (int i = 0; i < width; ++i) {
    const Point& x = vertical[static_cast<std::size_t>(i) % vertical.size()];
    angles.push_back(i % 2 == 0 ? x : antipode(x));
  }
  for (int j = 0; j < height; ++j) {
    const Point& x = horizontal[static_cast<std::size_t>(j) % horizontal.size()];
    angles.push_back(j % 2 == 0 ? x : antipode(x));
  }
  AngleMap map = AngleMap::with_default_lifts(std::move(angles));
  require_check(patch, map);
  return {std::move(patch), std::move(map)};
}

AngledPatch build_honeycomb_patch(int rows, int cols, const std::array<std::vector<Point>, 3>& lists) {
  if (rows < 1 || cols < 1) throw DomainError("honeycomb patch needs positive rows and columns");
  for (int k = 0; k < 3; ++k) check_list(lists[static_cast<std::size_t>(k)], "honeycomb family " + std::to_string(k));

  const double r3 = std::sqrt(3.0);
  const Eigen::Vector2d a1(r3, 0.0), a2(r3 / 2.0, 1.5);
  auto key = [](const Eigen::Vector2d& p) {
    return std::pair<long long, long long>{std::llround(p.x() * 1e6), std::llround(p.y() * 1e6)};
  };
  PatchSpec spec;
  std::map<std::pair<long long, long long>, int> blacks, whites;
  std::map<std::pair<int, int>, int> faces;
  auto vertex = [&](const Eigen::Vector2d& p, bool black) {
    auto& table = black ? blacks : whites;
    auto [it, fresh] = table.emplace(key(p), static_cast<int>(table.size()));
    if (fresh) {
      (black ? spec.black_labels : spec.white_labels).push_back((black ? "b" : "w") + std::to_string(it->second));
      (black ? spec.black_positions : spec.white_positions).push_back(p);
    }
    return it->second;
  };
  auto face_at = [&](const Eigen::Vector2d& c) {
    const int n = static_cast<int>(std::lround(c.y() / 1.5));
    const int m = static_cast<int>(std::lround((c.x() - n * r3 / 2.0) / r3));
    auto [it, fresh] = faces.emplace(std::pair{m, n}, static_cast<int>(faces.size()));
    if (fresh) {
      spec.face_labels.push_back("f(" + std::to_string(m) + "," + std::to_string(n) + ")");
      spec.face_positions.push_back(m * a1 + n * a2);
    }
    return it->second;
  };
  std::set<std::pair<int, int>> seen;
  for (int n = 0; n < rows; ++n) {
    for (int m = 0; m < cols; ++m) {
      const Eigen::Vector2d c = m * a1 + n * a2;
      face_at(c);
      for (int k = 0; k < 6; ++k) {
        // corners at 90 + 60k degrees; even k black
        const double t0 = kPi / 2.0 + k * kPi / 3.0, t1 = t0 + kPi / 3.0;
        const Eigen::Vector2d p0 = c + Eigen::Vector2d(std::cos(t0), std::sin(t0));
        const Eigen::Vector2d p1 = c + Eigen::Vector2d(std::cos(t1), std::sin(t1));
        const bool first_black = k % 2 == 0;
        const int b = vertex(first_black ? p0 : p1, true);
        const int w = vertex(first_black ? p1 : p0, false);
        if (!seen.insert({w, b}).second) continue;
        const Eigen::Vector2d pw = spec.white_positions[static_cast<std::size_t>(w)];
        const Eigen::Vector2d pb = spec.black_positions[static_cast<std::size_t>(b)];
        const Eigen::Vector2d mid = 0.5 * (pw + pb), left = rot90(pb - pw) * (r3 / 2.0);
        PatchEdge e;
        e.w = w;
        e.b = b;
        e.f = face_at(mid + left);
        e.f_prime = face_at(mid - left);
        spec.edges.push_back(e);
      }
    }
  }
  MinimalGraphPatch patch(std::move(spec));

  // Families by direction; within a family by offset across the direction.
  std::map<int, double> class_dir;
  for (const Track& t : patch.tracks()) class_dir[t.direction_class] = t.direction;
  if (class_dir.size() != 3 || class_dir.count(-1)) throw DomainError("honeycomb tracks do not form three families");
  std::vector<std::pair<double, int>> order;
  for (const auto& [c, d] : class_dir) order.emplace_back(d, c);
  std::sort(order.begin(), order.end());
  std::vector<Point> angles(static_cast<std::size_t>(patch.num_tracks()));
  for (int fam = 0; fam < 3; ++fam) {
    const int cls = order[static_cast<std::size_t>(fam)].second;
    const double d = order[static_cast<std::size_t>(fam)].first;
    const Eigen::Vector2d normal(-std::sin(d), std::cos(d));
    std::vector<std::pair<double, int>> members;
    for (int t = 0; t < patch.num_tracks(); ++t) {
      const Track& tr = patch.tracks()[static_cast<std::size_t>(t)];
      if (tr.direction_class != cls) continue;
      Eigen::Vector2d mean = Eigen::Vector2d::Zero();
      for (int q : tr.crossings) {
        const QuadEdge& qe = patch.quad_edges()[static_cast<std::size_t>(q)];
        mean += 0.5 * (patch.position(qe.vertex) + patch.position(qe.face));
      }
      mean /= static_cast<double>(tr.crossings.size());
      members.emplace_back(std::round(normal.dot(mean) * 1e6) / 1e6, t);
    }
    std::sort(members.begin(), members.end());
    const auto& list = lists[static_cast<std::size_t>(fam)];
    for (std::size_t k = 0; k < members.size(); ++k) {
      angles[static_cast<std::size_t>(members[k].second)] = list[k % list.size()];
    }
  }
  AngleMap map = AngleMap::with_default_lifts(std::move(angles));
  require_check(patch, map);
  return {std::move(patch), std::move(map)};
}

int DiscreteAbelMap::degree(const TrackDivisor& d) {
  int n = 0;
  for (const auto& [t, m] : d) n += m;
  return n;
}

double DiscreteAbelMap::lifted_sum(const TrackDivisor& d, const AngleMap& angles) {
  double s = 0.0;
  for (const auto& [t, m] : d) s += m * angles.lifted[static_cast<std::size_t>(t)];
  return s;
}

Divisor DiscreteAbelMap::to_divisor(const TrackDivisor& d, const AngleMap& angles) {
  Divisor out;
  for (const auto& [t, m] : d) out.add(angles.angle[static_cast<std::size_t>(t)], m);
  return out;
}

DiscreteAbelMap discrete_abel(const MinimalGraphPatch& patch, const AngleMap& angles, int base_face,
                              const SchottkyGroup* group) {
  if (patch.kind(base_face) != VertexKind::Face) throw DomainError("discrete Abel map must be based at a face");
  angles.validate(patch);
  DiscreteAbelMap out;
  out.base_face = base_face;
  std::vector<std::optional<TrackDivisor>> value(static_cast<std::size_t>(patch.num_vertices()));
  value[static_cast<std::size_t>(base_face)] = TrackDivisor{};
  std::queue<int> todo;
  todo.push(base_face);
  while (!todo.empty()) {
    const int p = todo.front();
    todo.pop();
    for (int q : patch.incident(p)) {
      const int r = patch.other_end(q, p);
      const int track = patch.quad_edges()[static_cast<std::size_t>(q)].track;
      const int sign = (patch.kind(r) == VertexKind::Black || patch.kind(p) == VertexKind::White) ? 1 : -1;
      TrackDivisor next = *value[static_cast<std::size_t>(p)];
      if ((next[track] += sign) == 0) next.erase(track);
      auto& slot = value[static_cast<std::size_t>(r)];
      if (!slot) {
        slot = std::move(next);
        todo.push(r);
      } else if (*slot != next) {
        throw DegenerateError("discrete Abel map is inconsistent at " + patch.label(r));
      }
    }
  }
  for (int v = 0; v < patch.num_vertices(); ++v) {
    if (!value[static_cast<std::size_t>(v)]) throw DomainError("patch is not connected (" + patch.label(v) + ")");
    out.divisor.push_back(*value[static_cast<std::size_t>(v)]);
  }
  if (group) {
    for (int f = 0; f < patch.num_faces(); ++f) {
      const TrackDivisor& d = out.divisor[static_cast<std::size_t>(patch.face(f))];
      out.face_abel.push_back(abel_map(*group, DiscreteAbelMap::to_divisor(d, angles)).lifted);
    }
  }
  return out;
}

AngleCheckReport check_angle_map(const MinimalGraphPatch& patch, const AngleMap& angles) {
  const int nt = patch.num_tracks();
  if (static_cast<int>(angles.angle.size()) != nt) throw DomainError("angle map size does not match the number of tracks");
  AngleCheckReport report;
  const auto& tracks = patch.tracks();
  const bool directions = std::all_of(tracks.begin(), tracks.end(), [](const Track& t) { return t.direction_class >= 0; });
  report.method = directions ? "directions" : "crossings";

  std::map<std::pair<int, int>, int> sign;  // +1 when the second track crosses from ... as in (alpha, beta)
  for (const PatchEdge& e : patch.edges()) {
    auto put = [&](int a, int b, int s) {
      auto [it, fresh] = sign.emplace(std::pair{a, b}, s);
      if (!fresh && it->second != s) it->second = 0;  // crossings in both directions
    };
    put(e.alpha, e.beta, 1);
    put(e.beta, e.alpha, -1);
  }
  auto related = [&](int a, int b) {
    if (directions) return tracks[static_cast<std::size_t>(a)].direction_class != tracks[static_cast<std::size_t>(b)].direction_class;
    return sign.count({a, b}) > 0;
  };
  std::vector<double> phi(static_cast<std::size_t>(nt));
  for (int t = 0; t < nt; ++t) phi[static_cast<std::size_t>(t)] = circle_coordinate(angles.angle[static_cast<std::size_t>(t)]);
  auto same = [&](int a, int b) { return angles.angle[static_cast<std::size_t>(a)] == angles.angle[static_cast<std::size_t>(b)]; };

  for (int a = 0; a < nt; ++a) {
    for (int b = a + 1; b < nt; ++b) {
      if (related(a, b) && same(a, b)) report.equal_pairs.emplace_back(a, b);
    }
  }
  for (int a = 0; a < nt; ++a) {
    for (int b = a + 1; b < nt; ++b) {
      if (!related(a, b)) continue;
      for (int c = b + 1; c < nt; ++c) {
        if (!related(a, c) || !related(b, c)) continue;
        if (same(a, b) || same(b, c) || same(a, c)) continue;
        bool expected;
        if (directions) {
          expected = ccw(tracks[static_cast<std::size_t>(a)].direction, tracks[static_cast<std::size_t>(b)].direction,
                         tracks[static_cast<std::size_t>(c)].direction);
        } else {
          const int s = sign.at({a, b}) + sign.at({b, c}) + sign.at({c, a});
          const bool clean = sign.at({a, b}) != 0 && sign.at({b, c}) != 0 && sign.at({c, a}) != 0;
          if (!clean) {
            ++report.indeterminate;
            continue;
          }
          expected = s > 0;
        }
        ++report.triples_checked;
        const bool observed = ccw(phi[static_cast<std::size_t>(a)], phi[static_cast<std::size_t>(b)], phi[static_cast<std::size_t>(c)]);
        if (observed != expected) report.violating_triples.push_back({a, b, c});
      }
    }
  }
  if (!directions) {
    // triples with a non-crossing pair
    std::size_t total = 0;
    for (int a = 0; a < nt; ++a)
      for (int b = a + 1; b < nt; ++b)
        for (int c = b + 1; c < nt; ++c) ++total;
    report.indeterminate = total - report.triples_checked;
  }
  report.pass = report.equal_pairs.empty() && report.violating_triples.empty();
  return report;
}

}  // namespace fockdimer
