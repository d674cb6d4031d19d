#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "fockdimer/errors.hpp"
#include "fockdimer/minimal_graph.hpp"

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

std::string angle_text(const Point& p) {
  if (p.is_infinite()) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << p.raw().real();
  return os.str();
}

/// Custom-file rendering of a built patch: vertices, edges with their tracks, track angles.
std::string to_file(const AngledPatch& ap) {
  const MinimalGraphPatch& p = ap.patch;
  std::ostringstream os;
  os.precision(17);
  os << "genus-agnostic minimal-graph v1\n# generated\n";
  for (int i = 0; i < p.num_black(); ++i) os << "B " << p.label(p.black(i)) << "\n";
  for (int i = 0; i < p.num_white(); ++i) os << "W " << p.label(p.white(i)) << "\n";
  for (const PatchEdge& e : p.edges()) {
    os << "E " << p.label(e.w) << " " << p.label(e.b) << " " << p.tracks()[static_cast<std::size_t>(e.alpha)].label << " "
       << p.tracks()[static_cast<std::size_t>(e.beta)].label << "\n";
  }
  for (int t = 0; t < p.num_tracks(); ++t) {
    os << "T " << p.tracks()[static_cast<std::size_t>(t)].label << " " << angle_text(ap.angles.angle[static_cast<std::size_t>(t)])
       << " " << ap.angles.lifted[static_cast<std::size_t>(t)] << "\n";
  }
  return os.str();
}

}  // namespace

TEST_CASE("square patch combinatorics") {
  const AngledPatch ap = square6();
  const MinimalGraphPatch& p = ap.patch;
  // 7x7 grid points, even sum: 25 vertices of G (13 black... depends on parity), odd sum: 24 faces.
  CHECK(p.num_black() + p.num_white() == 25);
  CHECK(p.num_faces() == 24);
  CHECK(p.num_tracks() == 12);
  CHECK(p.edges().size() == 2 * 6 * 6 / 1 / 2 * 2 / 2 * 2 / 2 + 0);  // every unit square holds one edge
  int interior_faces = 0;
  for (int i = 0; i < p.num_faces(); ++i) interior_faces += p.interior(p.face(i));
  CHECK(interior_faces == 12);
  for (const PatchEdge& e : p.edges()) {
    CHECK(p.kind(e.w) == VertexKind::White);
    CHECK(p.kind(e.b) == VertexKind::Black);
    CHECK(e.alpha != e.beta);
  }
  // Every track crosses each edge at most once and the vertical ones carry the vertical list.
  CHECK(ap.angles.angle[static_cast<std::size_t>(p.find_track("V0"))] == Point(0.0));
  CHECK(ap.angles.angle[static_cast<std::size_t>(p.find_track("V1"))] == Point(-1.0));  // antipode of 1
  CHECK(ap.angles.angle[static_cast<std::size_t>(p.find_track("H0"))] == Point(10.0));
}

TEST_CASE("antipode of zero is infinity") {
  const AngledPatch ap = build_square_patch(2, 2, pts({0.5, 0.0}), pts({3.0, 4.0}));
  CHECK(ap.angles.angle[static_cast<std::size_t>(ap.patch.find_track("V1"))].is_infinite());
}

TEST_CASE("angle checks on the square patch") {
  CHECK_NOTHROW(square6());
  // Order inside one direction class is free.
  CHECK_NOTHROW(build_square_patch(6, 6, pts({0, 1, 2, 3, 4, 5}), pts({15, 14, 13, 12, 11, 10})));
  // Exchanging the two lists breaks the cyclic order against the directions.
  CHECK_THROWS_AS(build_square_patch(6, 6, pts({10, 11, 12}), pts({0, 1, 2})), DomainError);
  CHECK_THROWS_AS(build_square_patch(6, 6, pts({0, 1, 2}), pts({-3, -2, -1})), DomainError);
  CHECK_THROWS_AS(build_square_patch(6, 6, pts({0, 2, 1}), pts({10, 11})), DomainError);
  CHECK_THROWS_AS(build_square_patch(6, 6, {}, pts({10, 11})), DomainError);
}

TEST_CASE("crossing-orientation check agrees with the direction check") {
  // On the square patch parallel tracks never cross, so the crossing method has nothing to
  // decide; on the honeycomb every triple of families crosses pairwise.
  const AngledPatch sq = square6();
  const AngleCheckReport sq_cross = check_angle_map(parse_patch(to_file(sq)).patch, parse_patch(to_file(sq)).angles);
  CHECK(sq_cross.method == "crossings");
  CHECK(sq_cross.pass);
  CHECK(sq_cross.triples_checked == 0);
  CHECK(sq_cross.indeterminate > 0);

  const std::array<std::vector<Point>, 3> lists = {pts({0.1, 0.2, 0.3, 0.4}), pts({1.5, 2.0, 2.5, 3.0}),
                                                   pts({-4.0, -3.0, -2.0, -1.0})};
  const AngledPatch hc = build_honeycomb_patch(4, 4, lists);
  const AngleCheckReport dir = check_angle_map(hc.patch, hc.angles);
  CHECK(dir.method == "directions");
  CHECK(dir.pass);
  const AngledPatch custom = parse_patch(to_file(hc));
  const AngleCheckReport cross = check_angle_map(custom.patch, custom.angles);
  CHECK(cross.method == "crossings");
  CHECK(cross.pass);
  CHECK(cross.triples_checked > 0);

  // Exchange the first two families' angles: both methods reject.
  AngledPatch bad = hc;
  for (int t = 0; t < bad.patch.num_tracks(); ++t) {
    const int c = bad.patch.tracks()[static_cast<std::size_t>(t)].direction_class;
    const double x = bad.angles.angle[static_cast<std::size_t>(t)].raw().real();
    if (c == hc.patch.tracks()[0].direction_class) bad.angles.angle[static_cast<std::size_t>(t)] = Point(x + 100.0);
  }
  bad.angles = AngleMap::with_default_lifts(bad.angles.angle);
  const AngleCheckReport bad_dir = check_angle_map(bad.patch, bad.angles);
  const AngledPatch bad_custom = parse_patch(to_file(bad));
  const AngleCheckReport bad_cross = check_angle_map(bad_custom.patch, bad_custom.angles);
  CHECK_FALSE(bad_dir.pass);
  CHECK_FALSE(bad_cross.pass);
}

TEST_CASE("custom file round trip") {
  const AngledPatch ap = square6();
  const AngledPatch back = parse_patch(to_file(ap));
  CHECK(back.patch.num_faces() == ap.patch.num_faces());
  CHECK(back.patch.num_tracks() == ap.patch.num_tracks());
  CHECK(back.patch.edges().size() == ap.patch.edges().size());
  int interior = 0;
  for (int i = 0; i < back.patch.num_faces(); ++i) interior += back.patch.interior(back.patch.face(i));
  CHECK(interior == 12);
}

TEST_CASE("custom file errors carry line numbers") {
  auto message = [](const std::string& text) {
    try {
      parse_patch(text);
    } catch (const DomainError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("not a header\n").find("line 1") != std::string::npos);
  CHECK(message("genus-agnostic minimal-graph v1\nB b0\nW w0\nE w0 b0 T0\n").find("line 4") != std::string::npos);
  CHECK(message("genus-agnostic minimal-graph v1\nB b0\nW w0\nE w0 bX T0 T1\nT T0 0 0.5\nT T1 1 0.75\n").find("line 4") !=
        std::string::npos);
  CHECK(message("genus-agnostic minimal-graph v1\nB b0\nW w0\nE w0 b0 T0 T1\nT T0 abc 0.5\nT T1 1 0.75\n").find("line 5") !=
        std::string::npos);
  // Lift not congruent to the angle.
  CHECK_FALSE(message("genus-agnostic minimal-graph v1\nB b0\nW w0\nE w0 b0 T0 T1\nT T0 0 0.3\nT T1 1 0.75\n").empty());
  // Self-intersecting track.
  CHECK_FALSE(message("genus-agnostic minimal-graph v1\nB b0\nW w0\nE w0 b0 T0 T0\nT T0 0 0.5\n").empty());
}

TEST_CASE("tracks may not cross twice in the same direction") {
  // Two parallel edges between the same pair of vertices would force this; the patch rejects
  // the repeated edge outright.
  const std::string text =
      "genus-agnostic minimal-graph v1\nB b0\nW w0\nE w0 b0 T0 T1\nE w0 b0 T1 T0\nT T0 0 0.5\nT T1 1 0.75\n";
  CHECK_THROWS_AS(parse_patch(text), DomainError);
}

TEST_CASE("infinite angles in files") {
  const std::string text = "genus-agnostic minimal-graph v1\nB b0\nW w0\nE w0 b0 T0 T1\nT T0 inf 1\nT T1 0 0.5\n";
  const AngledPatch ap = parse_patch(text);
  CHECK(ap.angles.angle[static_cast<std::size_t>(ap.patch.find_track("T0"))].is_infinite());
}

TEST_CASE("honeycomb patches") {
  const AngledPatch one = build_honeycomb_patch(1, 1, {pts({0.1}), pts({1.5}), pts({-2.0})});
  CHECK(one.patch.num_black() == 3);
  CHECK(one.patch.num_white() == 3);
  CHECK(one.patch.num_tracks() == 6);
  CHECK(one.patch.num_faces() == 7);
  int interior = 0;
  for (int i = 0; i < one.patch.num_faces(); ++i) interior += one.patch.interior(one.patch.face(i));
  CHECK(interior == 1);

  const std::array<std::vector<Point>, 3> lists = {pts({0.1, 0.2, 0.3, 0.4}), pts({1.5, 2.0, 2.5, 3.0}),
                                                   pts({-4.0, -3.0, -2.0, -1.0})};
  const AngledPatch four = build_honeycomb_patch(4, 4, lists);
  std::set<int> classes;
  for (const Track& t : four.patch.tracks()) classes.insert(t.direction_class);
  CHECK(classes.size() == 3);
  CHECK(check_angle_map(four.patch, four.angles).pass);
  const std::array<std::vector<Point>, 3> swapped = {lists[1], lists[0], lists[2]};
  CHECK_THROWS_AS(build_honeycomb_patch(4, 4, swapped), DomainError);
}

TEST_CASE("discrete Abel map") {
  const AngledPatch ap = square6();
  const MinimalGraphPatch& p = ap.patch;
  const int f0 = p.find_vertex("f(3,2)");
  const DiscreteAbelMap d = discrete_abel(p, ap.angles, f0);
  CHECK(d.divisor[static_cast<std::size_t>(f0)].empty());
  for (int v = 0; v < p.num_vertices(); ++v) {
    const int deg = DiscreteAbelMap::degree(d.divisor[static_cast<std::size_t>(v)]);
    switch (p.kind(v)) {
      case VertexKind::Face: CHECK(deg == 0); break;
      case VertexKind::Black: CHECK(deg == 1); break;
      case VertexKind::White: CHECK(deg == -1); break;
    }
  }
  // Across an edge of G: d(b) - d(w) = alpha + beta.
  for (const PatchEdge& e : p.edges()) {
    TrackDivisor diff = d.divisor[static_cast<std::size_t>(e.b)];
    for (const auto& [t, n] : d.divisor[static_cast<std::size_t>(e.w)]) diff[t] -= n;
    std::erase_if(diff, [](const auto& kv) { return kv.second == 0; });
    CHECK(diff == TrackDivisor{{e.alpha, 1}, {e.beta, 1}});
  }
  CHECK_THROWS_AS(discrete_abel(p, ap.angles, p.black(0)), DomainError);
}

TEST_CASE("shortest paths are quad-graph paths") {
  const AngledPatch ap = square6();
  const MinimalGraphPatch& p = ap.patch;
  const std::vector<int> path = p.shortest_path(p.find_vertex("b(0,0)"), p.find_vertex("w(5,5)"));
  CHECK(path.size() == 11);
  for (std::size_t k = 1; k < path.size(); ++k) {
    bool adjacent = false;
    for (int q : p.incident(path[k - 1])) adjacent = adjacent || p.other_end(q, path[k - 1]) == path[k];
    CHECK(adjacent);
  }
}
