#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "fockdimer/errors.hpp"
#include "fockdimer/minimal_graph.hpp"

namespace fockdimer {

namespace {

constexpr const char* kHeader = "genus-agnostic minimal-graph v1";

[[noreturn]] void fail(int line, const std::string& what) {
  throw DomainError("graph file line " + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& token, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    fail(line, "not a number: " + token);
  }
  if (used != token.size()) fail(line, "not a number: " + token);
  return v;
}

Point parse_angle(const std::string& token, int line) {
  if (token == "inf" || token == "+inf" || token == "-inf" || token == "Inf" || token == "infinity") {
    return Point::infinity();
  }
  const double v = parse_number(token, line);
  if (!std::isfinite(v)) return Point::infinity();
  return Point(v);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

AngledPatch parse_patch(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  bool header = false;
  PatchSpec spec;
  std::map<std::string, int> blacks, whites, tracks;
  struct PendingEdge {
    std::string w, b, t1, t2;
    int line;
  };
  std::vector<PendingEdge> pending;
  std::vector<Point> angle;
  std::vector<double> lifted;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw.substr(0, raw.find('#'));
    s = trim(s);
    if (s.empty()) continue;
    if (!header) {
      if (s != kHeader) fail(line, std::string("expected header '") + kHeader + "'");
      header = true;
      continue;
    }
    std::istringstream fields(s);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    const std::string& kind = tok[0];
    auto need = [&](std::size_t n) {
      if (tok.size() != n) fail(line, "'" + kind + "' record needs " + std::to_string(n - 1) + " fields");
    };
    if (kind == "B" || kind == "W") {
      need(2);
      auto& table = kind == "B" ? blacks : whites;
      if (blacks.count(tok[1]) || whites.count(tok[1])) fail(line, "duplicate vertex id " + tok[1]);
      table.emplace(tok[1], static_cast<int>(table.size()));
      (kind == "B" ? spec.black_labels : spec.white_labels).push_back(tok[1]);
    } else if (kind == "E") {
      need(5);
      pending.push_back({tok[1], tok[2], tok[3], tok[4], line});
    } else if (kind == "T") {
      need(4);
      if (tracks.count(tok[1])) fail(line, "duplicate track id " + tok[1]);
      tracks.emplace(tok[1], static_cast<int>(tracks.size()));
      spec.track_labels.push_back(tok[1]);
      angle.push_back(parse_angle(tok[2], line));
      lifted.push_back(parse_number(tok[3], line));
      if (!std::isfinite(lifted.back())) fail(line, "lifted angle must be finite");
    } else {
      fail(line, "unknown record type '" + kind + "'");
    }
  }
  if (!header) fail(line, "missing header");
  for (const PendingEdge& p : pending) {
    auto find = [&](const std::map<std::string, int>& table, const std::string& id, const char* what) {
      auto it = table.find(id);
      if (it == table.end()) fail(p.line, std::string("unknown ") + what + " " + id);
      return it->second;
    };
    PatchEdge e;
    e.w = find(whites, p.w, "white vertex");
    e.b = find(blacks, p.b, "black vertex");
    e.alpha = find(tracks, p.t1, "track");
    e.beta = find(tracks, p.t2, "track");
    spec.edges.push_back(e);
  }
  MinimalGraphPatch patch(std::move(spec));
  AngleMap map{std::move(angle), std::move(lifted)};
  map.validate(patch);
  return {std::move(patch), std::move(map)};
}

AngledPatch read_patch_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open graph file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_patch(buf.str());
}

}  // namespace fockdimer
