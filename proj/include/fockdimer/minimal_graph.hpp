#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fockdimer/abelian.hpp"
#include "fockdimer/moebius.hpp"
#include "fockdimer/schottky.hpp"

namespace fockdimer {

enum class VertexKind { Black, White, Face };

/// Edge wb of G together with its quadrilateral of the quad-graph.
///
/// f is the face on the left when walking from w to b, f_prime the one on the right.
/// alpha is the track separating f from b (and w from f_prime), beta the track separating
/// f from w (and b from f_prime). All fields are quad-graph vertex ids or track indices.
struct PatchEdge {
  int w = -1;
  int b = -1;
  int f = -1;
  int f_prime = -1;
  int alpha = -1;
  int beta = -1;
};

/// Edge of the quad-graph between a vertex of G and a face, crossed by exactly one track.
struct QuadEdge {
  int vertex;
  int face;
  int track;
};

struct Track {
  std::string label;
  std::vector<int> crossings;  ///< quad-edge ids, in no particular order
  std::vector<int> edges;      ///< edges of G whose quadrilateral the track passes
  /// Direction of travel (radians) when the patch carries an embedding; parallel tracks
  /// share a class id. -1 when unknown (custom patches).
  int direction_class = -1;
  double direction = 0.0;
};

/// Raw description handed to the patch constructor. Either faces or tracks of the edges may
/// be left at -1; the missing part is derived from the other one.
struct PatchSpec {
  std::vector<std::string> black_labels;
  std::vector<std::string> white_labels;
  std::vector<std::string> face_labels;  ///< may be empty when faces are derived
  std::vector<std::string> track_labels; ///< may be empty when tracks are derived
  /// Edges with w, b as indices into the label lists (not quad-graph ids yet).
  std::vector<PatchEdge> edges;
  /// Optional planar positions, indexed like the labels: blacks, whites, faces.
  std::vector<Eigen::Vector2d> black_positions, white_positions, face_positions;
};

/// Finite patch of a bipartite minimal graph with its quad-graph and train tracks.
///
/// Quad-graph vertex ids are blacks first, then whites, then faces. Immutable once built.
class MinimalGraphPatch {
 public:
  /// Validates bipartiteness, track simplicity and the no-double-crossing rule.
  explicit MinimalGraphPatch(PatchSpec spec);

  int num_black() const { return nb_; }
  int num_white() const { return nw_; }
  int num_faces() const { return nf_; }
  int num_vertices() const { return nb_ + nw_ + nf_; }
  int num_tracks() const { return static_cast<int>(tracks_.size()); }

  VertexKind kind(int v) const;
  int black(int i) const { return i; }
  int white(int i) const { return nb_ + i; }
  int face(int i) const { return nb_ + nw_ + i; }
  const std::string& label(int v) const { return labels_[static_cast<std::size_t>(v)]; }
  /// Quad-graph vertex with the given label, or -1.
  int find_vertex(const std::string& label) const;
  int find_track(const std::string& label) const;

  const std::vector<PatchEdge>& edges() const { return edges_; }
  const std::vector<Track>& tracks() const { return tracks_; }
  const std::vector<QuadEdge>& quad_edges() const { return quad_edges_; }
  /// Quad-edge ids at a quad-graph vertex, sorted by the label of the other end.
  const std::vector<int>& incident(int v) const { return incident_[static_cast<std::size_t>(v)]; }
  /// Edges of G at a black or white vertex.
  const std::vector<int>& edges_at(int v) const { return edges_at_[static_cast<std::size_t>(v)]; }
  int find_edge(int w, int b) const;
  int other_end(int quad_edge, int v) const;

  /// A vertex or face is interior when each of its quad-graph edges borders two quadrilaterals.
  bool interior(int v) const { return interior_[static_cast<std::size_t>(v)]; }

  bool has_geometry() const { return !positions_.empty(); }
  const Eigen::Vector2d& position(int v) const { return positions_[static_cast<std::size_t>(v)]; }

  /// Breadth-first quad-graph path from x to y (inclusive), neighbours visited in incident() order.
  std::vector<int> shortest_path(int x, int y) const;

 private:
  int nb_ = 0, nw_ = 0, nf_ = 0;
  std::vector<std::string> labels_;
  std::map<std::string, int> label_index_;
  std::vector<PatchEdge> edges_;
  std::vector<Track> tracks_;
  std::vector<QuadEdge> quad_edges_;
  std::vector<std::vector<int>> incident_;
  std::vector<std::vector<int>> edges_at_;
  std::vector<bool> interior_;
  std::vector<Eigen::Vector2d> positions_;
};

/// Angle alpha_T on R u {inf} and its lift for every track.
struct AngleMap {
  std::vector<Point> angle;
  std::vector<double> lifted;

  /// atan(x)/pi + 1/2, with inf -> 1.
  static double default_lift(const Point& x);
  static AngleMap with_default_lifts(std::vector<Point> angles);
  /// Sizes match, angles real, and each lift is congruent to default_lift mod 1 (1e-9).
  void validate(const MinimalGraphPatch& patch) const;
};

struct AngledPatch {
  MinimalGraphPatch patch;
  AngleMap angles;
};

/// Square-lattice patch on the grid [0,width] x [0,height].
///
/// Grid point (i,j) is a face when i+j is odd, otherwise a black (i even) or white (i odd)
/// vertex. Vertical track V_i runs between columns i and i+1 (southwards for even i),
/// horizontal track H_j between rows j and j+1 (eastwards for even j). Lists are applied
/// cyclically; odd-index tracks receive the antipode -1/x of the listed value.
AngledPatch build_square_patch(int width, int height, const std::vector<Point>& vertical,
                               const std::vector<Point>& horizontal);

/// Parallelogram of rows x cols hexagons of the regular honeycomb. Tracks fall in three
/// families of parallel zigzags; family k receives lists[k] cyclically, ordered across the
/// family.
AngledPatch build_honeycomb_patch(int rows, int cols, const std::array<std::vector<Point>, 3>& lists);

/// Divisor over tracks: track index -> multiplicity.
using TrackDivisor = std::map<int, int>;

struct DiscreteAbelMap {
  int base_face = -1;  ///< quad-graph id
  std::vector<TrackDivisor> divisor;  ///< per quad-graph vertex
  /// Lifted Abel-Jacobi images of face divisors (empty without a group).
  std::vector<Eigen::VectorXd> face_abel;

  static int degree(const TrackDivisor& d);
  /// Sum of multiplicity times lifted angle.
  static double lifted_sum(const TrackDivisor& d, const AngleMap& angles);
  static Divisor to_divisor(const TrackDivisor& d, const AngleMap& angles);
};

/// d(f0) = 0; crossing track T from a face to a black vertex or from a white vertex to a face
/// adds T, the reverse steps subtract it. Throws DegenerateError if two routes disagree.
/// With a group, face divisors are also pushed through abel_map.
DiscreteAbelMap discrete_abel(const MinimalGraphPatch& patch, const AngleMap& angles, int base_face,
                              const SchottkyGroup* group = nullptr);

struct AngleCheckReport {
  bool pass = true;
  std::string method;  ///< "directions" or "crossings"
  std::vector<std::pair<int, int>> equal_pairs;
  std::vector<std::array<int, 3>> violating_triples;
  std::size_t triples_checked = 0;
  std::size_t indeterminate = 0;
};

/// Cyclic-order test of an angle map over all track triples.
///
/// With an embedding, three tracks of pairwise different direction classes must carry angles in
/// the cyclic order of their directions. Without one, only pairwise crossing triples are
/// compared, through the crossing orientations; the rest are counted as indeterminate.
AngleCheckReport check_angle_map(const MinimalGraphPatch& patch, const AngleMap& angles);

/// Reads the custom-graph text format. Throws DomainError with a line number on bad input.
AngledPatch read_patch_file(const std::string& path);
AngledPatch parse_patch(const std::string& text);

}  // namespace fockdimer
