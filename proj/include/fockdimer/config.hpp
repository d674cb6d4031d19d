#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fockdimer/moebius.hpp"
#include "fockdimer/schottky.hpp"

namespace fockdimer {

inline constexpr const char* kConfigSchema = "fockdimer-config v1";

struct GraphConfig {
  std::string type = "square";  ///< square, honeycomb or file
  int width = 6;
  int height = 6;
  std::vector<Point> vertical;
  std::vector<Point> horizontal;
  int rows = 2;
  int cols = 2;
  std::array<std::vector<Point>, 3> families;
  std::string file;       ///< resolved against the config directory
  std::string base_face;  ///< label; empty picks the first interior face
};

/// Everything a CLI run needs.
///
/// Text format: `key = value` lines grouped under `[section]` headers, `#` comments, and the
/// mandatory first entry `schema = fockdimer-config v1`. Lists are comma separated; complex
/// numbers are written like `-5+2i`, angles may be `inf`.
struct RunConfig {
  std::string source = "<string>";

  // [curve]
  SchottkyData curve;
  // [parameters]
  Eigen::VectorXd t;
  // [graph]
  GraphConfig graph;
  // [truncation]
  double theta_eps = 1e-14;
  double quadrature_tol = 1e-9;
  // [experiment]
  int test_points = 20;
  Complex u0{0.3, 0.5};
  std::optional<double> crossing;
  std::string reference;  ///< vertex label for kernel checks; empty picks one near the centre
  std::vector<int> degenerate;
  int steps = 6;
  double s0 = 0.04;
  std::string quantity = "weights";  ///< weights, theta, prime, period or kernel
  std::vector<Eigen::VectorXcd> z;   ///< theta-eval points
  Complex point_a{0.5, 0.0};
  Complex point_b{2.0, 0.0};
  Complex u{0.7, 0.6};
  std::optional<double> tolerance;
  std::uint64_t seed = 1;
  int threads = 1;
  // [output]
  std::string output_dir = ".";
};

/// Throws ConfigError with "source:line:" prefixes.
RunConfig parse_config(const std::string& text, const std::string& source = "<string>");
RunConfig load_config(const std::string& path);

/// a, a+bi, a-bi, bi, i, -i.
Complex parse_complex(const std::string& token);
/// Real number or inf.
Point parse_extended_real(const std::string& token);

}  // namespace fockdimer
