#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fockdimer/config.hpp"
#include "fockdimer/degeneration.hpp"
#include "fockdimer/fock.hpp"

namespace fockdimer {

/// Uniform doubles from mt19937_64 with a fixed bit recipe, so draws agree across standard libraries.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  /// Integer in [0, n).
  int index(int n) { return static_cast<int>(uniform() * n); }

 private:
  std::mt19937_64 engine_;
};

/// Test point in the upper half-plane: Re in [-2, 2], Im in [0.1, 1].
Point random_test_point(PortableRng& rng);

AngledPatch build_patch(const GraphConfig& graph);
/// Face with the given label, or the first interior face (first face when none is interior).
int resolve_base_face(const MinimalGraphPatch& patch, const std::string& label);
/// Interior vertex of the given kind closest to the centroid of the embedding; without an
/// embedding the first interior one.
int central_vertex(const MinimalGraphPatch& patch, VertexKind kind);
FockModel build_model(const RunConfig& cfg);

/// Named files produced by one command; written only once everything is computed.
struct RunOutput {
  std::vector<std::pair<std::string, std::string>> files;
  bool pass = true;
};

/// Writes every file through a temporary name; nothing is left behind when a write fails.
void write_outputs(const RunOutput& out, const std::string& directory);

/// CSV `w_id,b_id,re,im,alpha,beta,face,face_prime`.
RunOutput run_weights(const RunConfig& cfg);
/// suite: kernel, kasteleyn, identity35, inverse, periods or theta. JSON report.
RunOutput run_verify(const RunConfig& cfg, const std::string& suite);
/// Convergence table for cfg.quantity under s_i -> 0, i in cfg.degenerate.
RunOutput run_degenerate(const RunConfig& cfg);
/// First-order expansions next to the values they approximate.
RunOutput run_series(const RunConfig& cfg);
/// Theta and its logarithmic gradient at cfg.z.
RunOutput run_theta_eval(const RunConfig& cfg);
/// Abel map, prime form and normalized differentials at cfg.point_a, cfg.point_b, cfg.u.
RunOutput run_abel_eval(const RunConfig& cfg);

/// Quantity evaluator used by run_degenerate; exposed for the tests.
ScanQuantity scan_quantity(const RunConfig& cfg, const AngledPatch& patch);

/// Default tolerance of a verify suite.
double default_tolerance(const std::string& suite);

}  // namespace fockdimer
