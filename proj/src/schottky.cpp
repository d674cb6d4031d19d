#include "fockdimer/schottky.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fockdimer/errors.hpp"

namespace fockdimer {

std::string to_string(const GroupWord& word) {
  if (word.empty()) return "e";
  std::ostringstream os;
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (k) os << ' ';
    os << word[k];
  }
  return os.str();
}

GroupWord inverse_word(const GroupWord& word) {
  GroupWord inv(word.rbegin(), word.rend());
  for (int& l : inv) l = -l;
  return inv;
}

GroupWord conjugate_word(const GroupWord& word) {
  GroupWord out(word);
  for (int& l : out) l = -l;
  return out;
}

int letter_rank(int letter) { return 2 * (std::abs(letter) - 1) + (letter < 0 ? 1 : 0); }

bool word_less(const GroupWord& a, const GroupWord& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] != b[k]) return letter_rank(a[k]) < letter_rank(b[k]);
  }
  return false;
}

void SchottkyData::validate() const {
  if (centers.size() != multipliers.size()) {
    throw DomainError("Schottky data: " + std::to_string(centers.size()) + " centers but " +
                      std::to_string(multipliers.size()) + " multipliers");
  }
  if (max_word_length < 0) throw DomainError("Schottky data: word-length cap must be >= 0");
  if (!(tail_tolerance > 0.0)) throw DomainError("Schottky data: tail tolerance must be positive");
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (!(centers[i].imag() > 0.0) || !std::isfinite(centers[i].real())) {
      throw DomainError("Schottky data: center " + std::to_string(i + 1) +
                        " must have positive imaginary part");
    }
    if (!(multipliers[i] > 0.0 && multipliers[i] < 1.0)) {
      throw DomainError("Schottky data: multiplier " + std::to_string(i + 1) +
                        " must lie in (0, 1)");
    }
  }
}

Moebius make_generator(Complex center, double multiplier) {
  if (!(center.imag() > 0.0)) throw DomainError("generator center must satisfy Im > 0");
  if (!(multiplier > 0.0 && multiplier < 1.0)) {
    throw DomainError("generator multiplier must lie in (0, 1)");
  }
  // Conjugate diag(sqrt s, 1/sqrt s) by xi(z) = (z - alpha)/(z - conj alpha).
  const Complex alpha = center;
  const Complex alpha_bar = std::conj(center);
  const Moebius xi{1.0, -alpha, 1.0, -alpha_bar};
  const double r = std::sqrt(multiplier);
  const Moebius scale{r, 0.0, 0.0, 1.0 / r};
  return (xi.inverse() * scale * xi).normalized();
}

IsometricCircle isometric_circle(const Moebius& map) {
  const Moebius n = map.normalized();
  if (std::abs(n.c) == 0.0) throw DegenerateError("map fixes infinity; no isometric circle");
  return {-n.d / n.c, 1.0 / std::abs(n.c)};
}

SchottkyGroupPtr make_group(SchottkyData data) {
  return std::make_shared<const SchottkyGroup>(std::move(data));
}

namespace {

std::string key(const GroupWord& w) { return to_string(w); }

}  // namespace

SchottkyGroup::SchottkyGroup(SchottkyData data) : data_(std::move(data)) {
  data_.validate();
  const int g = data_.genus();
  for (int i = 1; i <= g; ++i) {
    const Moebius m = make_generator(center(i), multiplier(i));
    generators_.push_back(m);
    generators_.push_back(m.inverse().normalized());
    circles_.push_back(isometric_circle(generators_.back()));
    circles_.push_back(isometric_circle(m));
  }
  for (std::size_t a = 0; a < circles_.size(); ++a) {
    for (std::size_t b = a + 1; b < circles_.size(); ++b) {
      const double gap = std::abs(circles_[a].center - circles_[b].center) - circles_[a].radius -
                         circles_[b].radius;
      if (gap <= 1e-9) {
        throw DomainError("Schottky data: isometric circles " + std::to_string(a) + " and " +
                          std::to_string(b) + " are not disjoint (not a classical Schottky group)");
      }
    }
  }

  // Breadth-first enumeration keeps elements sorted by length; letters are appended in
  // letter_rank order so each level is lexicographically sorted as well.
  std::vector<int> letters;
  for (int i = 1; i <= g; ++i) {
    letters.push_back(i);
    letters.push_back(-i);
  }
  elements_.push_back({GroupWord{}, Moebius::identity()});
  std::size_t level_begin = 0;
  for (int len = 1; len <= data_.max_word_length && g > 0; ++len) {
    const std::size_t level_end = elements_.size();
    for (std::size_t k = level_begin; k < level_end; ++k) {
      for (int l : letters) {
        const GroupWord& w = elements_[k].word;
        if (!w.empty() && w.back() == -l) continue;
        GroupWord next = w;
        next.push_back(l);
        Moebius m = elements_[k].map * generator(l);
        elements_.push_back({std::move(next), m});
      }
    }
    level_begin = level_end;
  }
  for (std::size_t k = 0; k < elements_.size(); ++k) index_.emplace(key(elements_[k].word), k);

  center_images_.reserve(elements_.size() * 2 * static_cast<std::size_t>(g));
  for (const auto& e : elements_) {
    for (int i = 1; i <= g; ++i) {
      center_images_.push_back(e.map(Point(center(i))));
      center_images_.push_back(e.map(Point(std::conj(center(i)))));
    }
  }

  all_ = build_selection(EnumerationMode::all());
  star_ = build_selection(EnumerationMode::star());
  for (int i = 1; i <= g; ++i) {
    cosets_.push_back(build_selection(EnumerationMode::coset(i)));
    for (int j = 1; j <= g; ++j) double_cosets_.push_back(build_selection(EnumerationMode::double_coset(i, j)));
  }
}

std::size_t SchottkyGroup::find(const GroupWord& word) const {
  auto it = index_.find(key(word));
  return it == index_.end() ? npos : it->second;
}

const Moebius& SchottkyGroup::generator(int letter) const {
  if (letter == 0 || std::abs(letter) > genus()) throw DomainError("no generator " + std::to_string(letter));
  return generators_[static_cast<std::size_t>(2 * (std::abs(letter) - 1) + (letter < 0 ? 1 : 0))];
}

bool SchottkyGroup::in_fundamental_domain(const Point& p, double margin) const {
  if (p.is_infinite()) return true;
  return std::all_of(circles_.begin(), circles_.end(), [&](const IsometricCircle& c) {
    return std::abs(p.raw() - c.center) > c.radius + margin;
  });
}

const Point& SchottkyGroup::image_of_center(std::size_t k, int i) const {
  return center_images_[k * 2 * static_cast<std::size_t>(genus()) + 2 * static_cast<std::size_t>(i - 1)];
}

const Point& SchottkyGroup::image_of_conjugate_center(std::size_t k, int i) const {
  return center_images_[k * 2 * static_cast<std::size_t>(genus()) + 2 * static_cast<std::size_t>(i - 1) + 1];
}

WordSelection SchottkyGroup::build_selection(const EnumerationMode& mode) const {
  const int g = genus();
  auto check_index = [&](int i) {
    if (i < 1 || i > g) throw DomainError("generator index " + std::to_string(i) + " out of range 1.." + std::to_string(g));
  };
  WordSelection sel;
  const int short_len = data_.max_word_length - 1;
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    const GroupWord& w = elements_[k].word;
    bool keep = true;
    switch (mode.kind) {
      case EnumerationKind::AllWords:
        break;
      case EnumerationKind::Coset:
        check_index(mode.i);
        keep = w.empty() || std::abs(w.back()) != mode.i;
        break;
      case EnumerationKind::DoubleCoset:
        check_index(mode.i);
        check_index(mode.j);
        keep = w.empty() || (std::abs(w.front()) != mode.i && std::abs(w.back()) != mode.j);
        break;
      case EnumerationKind::Star:
        keep = !w.empty() && word_less(w, inverse_word(w));
        break;
    }
    if (!keep) continue;
    sel.indices.push_back(k);
    if (static_cast<int>(w.size()) <= short_len) ++sel.shorter_count;
  }
  return sel;
}

const WordSelection& SchottkyGroup::selection(const EnumerationMode& mode) const {
  const int g = genus();
  switch (mode.kind) {
    case EnumerationKind::AllWords:
      return all_;
    case EnumerationKind::Star:
      return star_;
    case EnumerationKind::Coset:
      if (mode.i < 1 || mode.i > g) throw DomainError("coset index out of range");
      return cosets_[static_cast<std::size_t>(mode.i - 1)];
    case EnumerationKind::DoubleCoset:
      if (mode.i < 1 || mode.i > g || mode.j < 1 || mode.j > g) {
        throw DomainError("double-coset index out of range");
      }
      return double_cosets_[static_cast<std::size_t>((mode.i - 1) * g + (mode.j - 1))];
  }
  return all_;
}

std::vector<GroupElement> enumerate(const SchottkyData& data, const EnumerationMode& mode) {
  if (data.max_word_length < 0) throw DomainError("word-length cap must be >= 0");
  const SchottkyGroup group(data);
  std::vector<GroupElement> out;
  for (std::size_t k : group.selection(mode).indices) out.push_back(group.element(k));
  return out;
}

}  // namespace fockdimer
