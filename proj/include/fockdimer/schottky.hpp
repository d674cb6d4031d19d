#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fockdimer/moebius.hpp"

namespace fockdimer {

/// Reduced word over the letters {+1..+g, -1..-g}; letter -i stands for the inverse
/// of generator i. The empty word is the identity.
using GroupWord = std::vector<int>;

std::string to_string(const GroupWord& word);
GroupWord inverse_word(const GroupWord& word);
/// Word of sigma o w o sigma for sigma(z) = conj(z): every letter is inverted in place.
GroupWord conjugate_word(const GroupWord& word);
/// Total order on letters: +1 < -1 < +2 < -2 < ...
int letter_rank(int letter);
bool word_less(const GroupWord& a, const GroupWord& b);

/// Parameters of a classical Schottky group uniformizing an M-curve.
///
/// Generator i fixes the pair (alpha_i, conj(alpha_i)) and multiplies the local coordinate
/// (z - alpha_i)/(z - conj(alpha_i)) by s_i. Genus 0 (no generators) is the Riemann sphere.
struct SchottkyData {
  std::vector<Complex> centers;
  std::vector<double> multipliers;
  int max_word_length = 6;
  /// Largest accepted |value(L) - value(L-1)| for products checked by period_matrix.
  double tail_tolerance = 1e-6;

  int genus() const { return static_cast<int>(centers.size()); }
  /// Throws DomainError unless Im alpha_i > 0, 0 < s_i < 1 and L >= 0.
  void validate() const;
};

/// z -> gamma(z) with (gamma(z) - alpha)/(gamma(z) - conj alpha) = s (z - alpha)/(z - conj alpha).
Moebius make_generator(Complex center, double multiplier);

struct IsometricCircle {
  Complex center;
  double radius;
};

/// |c z + d| = 1 of the normalized map.
IsometricCircle isometric_circle(const Moebius& map);

enum class EnumerationKind { AllWords, Coset, DoubleCoset, Star };

struct EnumerationMode {
  EnumerationKind kind = EnumerationKind::AllWords;
  int i = 0;  ///< generator index (1-based) for Coset / DoubleCoset
  int j = 0;  ///< right index for DoubleCoset

  static EnumerationMode all() { return {}; }
  static EnumerationMode coset(int i) { return {EnumerationKind::Coset, i, 0}; }
  static EnumerationMode double_coset(int i, int j) { return {EnumerationKind::DoubleCoset, i, j}; }
  static EnumerationMode star() { return {EnumerationKind::Star, 0, 0}; }
};

struct GroupElement {
  GroupWord word;
  Moebius map;
};

/// Words in a given class, as indices into SchottkyGroup::elements(), together with the
/// number of them that have length <= L-1 (the list is sorted by length).
struct WordSelection {
  std::vector<std::size_t> indices;
  std::size_t shorter_count = 0;
};

/// Enumerated Schottky group: every reduced word of length <= L with its composed map.
///
/// Elements are ordered by length, then lexicographically by letter_rank. Immutable after
/// construction and safe to share between threads.
class SchottkyGroup {
 public:
  /// Validates the data, including the classical Schottky condition (pairwise disjoint
  /// isometric circles of all generators and inverses, margin 1e-9).
  explicit SchottkyGroup(SchottkyData data);

  const SchottkyData& data() const { return data_; }
  int genus() const { return data_.genus(); }
  int max_word_length() const { return data_.max_word_length; }

  std::span<const GroupElement> elements() const { return elements_; }
  const GroupElement& element(std::size_t k) const { return elements_[k]; }
  /// Index of a reduced word, or npos when longer than L.
  std::size_t find(const GroupWord& word) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Generator for a nonzero letter (negative letters give inverses).
  const Moebius& generator(int letter) const;
  Complex center(int i) const { return data_.centers[static_cast<std::size_t>(i - 1)]; }
  double multiplier(int i) const { return data_.multipliers[static_cast<std::size_t>(i - 1)]; }

  /// Isometric circles of gamma_1^{-1}, gamma_1, gamma_2^{-1}, ... (upper one first).
  const std::vector<IsometricCircle>& circles() const { return circles_; }
  /// True when p lies outside every closed isometric disc (with the given margin).
  bool in_fundamental_domain(const Point& p, double margin = 0.0) const;

  const WordSelection& selection(const EnumerationMode& mode) const;

  /// Cached images gamma(alpha_i), gamma(conj alpha_i) for element k.
  const Point& image_of_center(std::size_t k, int i) const;
  const Point& image_of_conjugate_center(std::size_t k, int i) const;

 private:
  WordSelection build_selection(const EnumerationMode& mode) const;

  SchottkyData data_;
  std::vector<Moebius> generators_;  // letter +i at 2(i-1), -i at 2(i-1)+1
  std::vector<GroupElement> elements_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<IsometricCircle> circles_;
  std::vector<Point> center_images_;  // [k * 2g + 2(i-1) + {0,1}]
  std::vector<WordSelection> cosets_;
  std::vector<WordSelection> double_cosets_;
  WordSelection all_;
  WordSelection star_;
};

/// Shared handle; groups are expensive to enumerate and are reused across series.
using SchottkyGroupPtr = std::shared_ptr<const SchottkyGroup>;
SchottkyGroupPtr make_group(SchottkyData data);

/// Enumerated representatives for the requested class (copies of the group's elements).
std::vector<GroupElement> enumerate(const SchottkyData& data, const EnumerationMode& mode);

}  // namespace fockdimer
