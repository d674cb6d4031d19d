#include "fockdimer/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "fockdimer/errors.hpp"

namespace fockdimer {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double strict_double(const std::string& token) {
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw DomainError("not a number: '" + token + "'");
  }
  if (used != token.size()) throw DomainError("not a number: '" + token + "'");
  return v;
}

long long strict_integer(const std::string& token) {
  std::size_t used = 0;
  long long v;
  try {
    v = std::stoll(token, &used);
  } catch (const std::exception&) {
    throw DomainError("not an integer: '" + token + "'");
  }
  if (used != token.size()) throw DomainError("not an integer: '" + token + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

template <class T, class F>
std::vector<T> parse_list(const std::string& value, F&& parse) {
  std::vector<T> out;
  if (trim(value).empty()) return out;
  for (const std::string& item : split(value, ',')) {
    if (item.empty()) throw DomainError("empty list entry");
    out.push_back(parse(item));
  }
  return out;
}

}  // namespace

Complex parse_complex(const std::string& raw) {
  std::string token;
  for (char c : raw) {
    if (c != ' ' && c != '\t') token += c;
  }
  if (token.empty()) throw DomainError("empty complex number");
  if (token.back() != 'i' && token.back() != 'j') return {strict_double(token), 0.0};
  const std::string body = token.substr(0, token.size() - 1);
  std::size_t split_at = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split_at = k;
      break;
    }
  }
  auto imag_part = [](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return strict_double(s);
  };
  if (split_at == std::string::npos) return {0.0, imag_part(body)};
  return {strict_double(body.substr(0, split_at)), imag_part(body.substr(split_at))};
}

Point parse_extended_real(const std::string& raw) {
  const std::string token = trim(raw);
  if (token == "inf" || token == "+inf" || token == "-inf" || token == "infinity") return Point::infinity();
  const double v = strict_double(token);
  if (!std::isfinite(v)) return Point::infinity();
  return Point(v);
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  RunConfig cfg;
  cfg.source = source;
  int genus = -1;
  std::vector<Complex> centers;
  std::vector<double> multipliers;
  std::optional<std::vector<double>> t;
  bool schema_seen = false;
  std::string section;
  std::set<std::string> seen;
  int line_no = 0;

  const std::filesystem::path base = std::filesystem::path(source).parent_path();
  using Handler = std::function<void(const std::string&)>;
  auto angles = [](const std::string& v) { return parse_list<Point>(v, parse_extended_real); };
  auto positive_int = [](const std::string& v) {
    const long long n = strict_integer(v);
    if (n < 1 || n > 100000) throw DomainError("expected a positive integer, got " + v);
    return static_cast<int>(n);
  };
  auto positive_double = [](const std::string& v) {
    const double x = strict_double(v);
    if (!(x > 0.0)) throw DomainError("expected a positive number, got " + v);
    return x;
  };
  const std::map<std::string, Handler> handlers = {
      {"curve.genus", [&](const std::string& v) {
         const long long g = strict_integer(v);
         if (g < 0 || g > 8) throw DomainError("genus must lie in 0..8");
         genus = static_cast<int>(g);
       }},
      {"curve.centers", [&](const std::string& v) { centers = parse_list<Complex>(v, parse_complex); }},
      {"curve.multipliers", [&](const std::string& v) { multipliers = parse_list<double>(v, strict_double); }},
      {"curve.word_length", [&](const std::string& v) {
         const long long n = strict_integer(v);
         if (n < 0 || n > 12) throw DomainError("word_length must lie in 0..12");
         cfg.curve.max_word_length = static_cast<int>(n);
       }},
      {"curve.tail_tolerance", [&](const std::string& v) { cfg.curve.tail_tolerance = positive_double(v); }},
      {"parameters.t", [&](const std::string& v) { t = parse_list<double>(v, strict_double); }},
      {"graph.type", [&](const std::string& v) {
         if (v != "square" && v != "honeycomb" && v != "file") throw DomainError("graph type must be square, honeycomb or file");
         cfg.graph.type = v;
       }},
      {"graph.width", [&](const std::string& v) { cfg.graph.width = positive_int(v); }},
      {"graph.height", [&](const std::string& v) { cfg.graph.height = positive_int(v); }},
      {"graph.vertical", [&](const std::string& v) { cfg.graph.vertical = angles(v); }},
      {"graph.horizontal", [&](const std::string& v) { cfg.graph.horizontal = angles(v); }},
      {"graph.rows", [&](const std::string& v) { cfg.graph.rows = positive_int(v); }},
      {"graph.cols", [&](const std::string& v) { cfg.graph.cols = positive_int(v); }},
      {"graph.family_a", [&](const std::string& v) { cfg.graph.families[0] = angles(v); }},
      {"graph.family_b", [&](const std::string& v) { cfg.graph.families[1] = angles(v); }},
      {"graph.family_c", [&](const std::string& v) { cfg.graph.families[2] = angles(v); }},
      {"graph.file", [&](const std::string& v) { cfg.graph.file = (base / v).string(); }},
      {"graph.base_face", [&](const std::string& v) { cfg.graph.base_face = v; }},
      {"truncation.theta_eps", [&](const std::string& v) {
         cfg.theta_eps = positive_double(v);
         if (cfg.theta_eps >= 1.0) throw DomainError("theta_eps must be below 1");
       }},
      {"truncation.quadrature_tol", [&](const std::string& v) { cfg.quadrature_tol = positive_double(v); }},
      {"experiment.test_points", [&](const std::string& v) { cfg.test_points = positive_int(v); }},
      {"experiment.u0", [&](const std::string& v) { cfg.u0 = parse_complex(v); }},
      {"experiment.crossing", [&](const std::string& v) { cfg.crossing = strict_double(v); }},
      {"experiment.reference", [&](const std::string& v) { cfg.reference = v; }},
      {"experiment.degenerate", [&](const std::string& v) {
         cfg.degenerate = parse_list<int>(v, [](const std::string& s) { return static_cast<int>(strict_integer(s)); });
       }},
      {"experiment.steps", [&](const std::string& v) { cfg.steps = positive_int(v); }},
      {"experiment.s0", [&](const std::string& v) { cfg.s0 = positive_double(v); }},
      {"experiment.quantity", [&](const std::string& v) {
         if (v != "weights" && v != "theta" && v != "prime" && v != "period" && v != "kernel") {
           throw DomainError("quantity must be weights, theta, prime, period or kernel");
         }
         cfg.quantity = v;
       }},
      {"experiment.z", [&](const std::string& v) {
         cfg.z.clear();
         for (const std::string& vec : split(v, ';')) {
           const auto entries = parse_list<Complex>(vec, parse_complex);
           Eigen::VectorXcd z(static_cast<Eigen::Index>(entries.size()));
           for (std::size_t k = 0; k < entries.size(); ++k) z(static_cast<Eigen::Index>(k)) = entries[k];
           cfg.z.push_back(z);
         }
       }},
      {"experiment.a", [&](const std::string& v) { cfg.point_a = parse_complex(v); }},
      {"experiment.b", [&](const std::string& v) { cfg.point_b = parse_complex(v); }},
      {"experiment.u", [&](const std::string& v) { cfg.u = parse_complex(v); }},
      {"experiment.tolerance", [&](const std::string& v) { cfg.tolerance = positive_double(v); }},
      {"experiment.seed", [&](const std::string& v) {
         const long long s = strict_integer(v);
         if (s < 0) throw DomainError("seed must be nonnegative");
         cfg.seed = static_cast<std::uint64_t>(s);
       }},
      {"experiment.threads", [&](const std::string& v) { cfg.threads = positive_int(v); }},
      {"output.directory", [&](const std::string& v) { cfg.output_dir = v; }},
  };

  auto fail = [&](const std::string& what) -> void {
    throw ConfigError(source + ":" + std::to_string(line_no) + ": " + what);
  };
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string s = trim(raw.substr(0, raw.find('#')));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail("malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (!schema_seen) fail("the first entry must be 'schema = " + std::string(kConfigSchema) + "'");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
    if (key.empty()) fail("empty key");
    if (!schema_seen) {
      if (!section.empty() || key != "schema") fail("the first entry must be 'schema = " + std::string(kConfigSchema) + "'");
      if (value != kConfigSchema) fail("unsupported schema '" + value + "'");
      schema_seen = true;
      continue;
    }
    const std::string full = section + "." + key;
    auto it = handlers.find(full);
    if (it == handlers.end()) fail("unknown key '" + key + "' in section [" + section + "]");
    if (!seen.insert(full).second) fail("duplicate key '" + key + "'");
    try {
      it->second(value);
    } catch (const DomainError& e) {
      fail(std::string("'") + key + "': " + e.what());
    }
  }
  if (!schema_seen) {
    line_no = std::max(line_no, 1);
    fail("missing 'schema = " + std::string(kConfigSchema) + "'");
  }

  auto whole = [&](const std::string& what) { throw ConfigError(source + ": " + what); };
  if (genus < 0) genus = static_cast<int>(centers.size());
  if (static_cast<int>(centers.size()) != genus || static_cast<int>(multipliers.size()) != genus) {
    whole("curve: genus " + std::to_string(genus) + " needs as many centers and multipliers");
  }
  cfg.curve.centers = centers;
  cfg.curve.multipliers = multipliers;
  try {
    cfg.curve.validate();
  } catch (const DomainError& e) {
    whole(std::string("curve: ") + e.what());
  }
  cfg.t = Eigen::VectorXd::Zero(genus);
  if (t) {
    if (static_cast<int>(t->size()) != genus) whole("parameters: t needs one entry per generator");
    for (int i = 0; i < genus; ++i) cfg.t(i) = (*t)[static_cast<std::size_t>(i)];
  }
  for (const Eigen::VectorXcd& z : cfg.z) {
    if (z.size() != genus) whole("experiment: every z needs one entry per generator");
  }
  if (cfg.graph.type == "square") {
    if (cfg.graph.vertical.empty()) cfg.graph.vertical = {Point(0.0), Point(1.0), Point(2.0), Point(3.0), Point(4.0), Point(5.0)};
    if (cfg.graph.horizontal.empty()) {
      cfg.graph.horizontal = {Point(10.0), Point(11.0), Point(12.0), Point(13.0), Point(14.0), Point(15.0)};
    }
  } else if (cfg.graph.type == "honeycomb") {
    for (auto& fam : cfg.graph.families) {
      if (fam.empty()) whole("graph: honeycomb needs family_a, family_b and family_c");
    }
  } else if (cfg.graph.type == "file") {
    if (cfg.graph.file.empty()) whole("graph: type file needs 'file'");
    if (!std::filesystem::exists(cfg.graph.file)) whole("graph: file " + cfg.graph.file + " does not exist");
  }
  if (!(cfg.u0.imag() > 0.0)) whole("experiment: u0 must lie in the upper half-plane");
  if (cfg.s0 >= 1.0) whole("experiment: s0 must lie in (0, 1)");
  for (int i : cfg.degenerate) {
    if (i < 1 || i > genus) whole("experiment: degenerate index " + std::to_string(i) + " out of range");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace fockdimer
