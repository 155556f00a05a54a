#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qfa/errors.hpp"

namespace qfa {

/// Ordered alphabet of distinct single-character letters. The declaration
/// order is the canonical order used everywhere: subset printing, word
/// sorting, variable and state enumeration.
class Alphabet {
 public:
  static constexpr int kDefaultMaxSize = 8;

  Alphabet();
  explicit Alphabet(std::string_view letters, int max_size = kDefaultMaxSize);

  int size() const { return static_cast<int>(letters_.size()); }
  char letter(int i) const { return letters_[static_cast<size_t>(i)]; }
  const std::string& letters() const { return letters_; }

  /// Index in declaration order, or -1 when the symbol is not a letter.
  int index(char c) const { return index_[static_cast<unsigned char>(c)]; }
  bool contains(char c) const { return index(c) >= 0; }
  /// Like index() but throws InputError for foreign symbols.
  int index_checked(char c) const;

  bool operator==(const Alphabet& o) const { return letters_ == o.letters_; }

 private:
  std::string letters_;
  std::array<int16_t, 256> index_;
};

/// Subset of an alphabet, as a bitmask over letter indices.
class LetterSet {
 public:
  LetterSet() = default;
  explicit LetterSet(uint32_t bits) : bits_(bits) {}

  uint32_t bits() const { return bits_; }
  int count() const { return __builtin_popcount(bits_); }
  bool empty() const { return bits_ == 0; }
  bool test(int i) const { return (bits_ >> i) & 1u; }
  LetterSet with(int i) const { return LetterSet(bits_ | (1u << i)); }
  bool subset_of(LetterSet o) const { return (bits_ & ~o.bits_) == 0; }

  friend LetterSet operator|(LetterSet a, LetterSet b) {
    return LetterSet(a.bits_ | b.bits_);
  }
  bool operator==(const LetterSet&) const = default;

  /// Canonical order: by cardinality, then by bit pattern.
  bool operator<(const LetterSet& o) const {
    if (count() != o.count()) return count() < o.count();
    return bits_ < o.bits_;
  }

  /// "{a,c}" in alphabet order; "{}" for the empty set.
  std::string str(const Alphabet& a) const;
  static LetterSet parse(const Alphabet& a, std::string_view s);

 private:
  uint32_t bits_ = 0;
};

/// Word with no repeated letter: an element of the free left regular band.
/// Instances are only created through tau() / make_band_word(), so the
/// invariant holds by construction.
class BandWord {
 public:
  BandWord() = default;

  const std::string& str() const { return s_; }
  int size() const { return static_cast<int>(s_.size()); }
  bool empty() const { return s_.empty(); }
  char at(int i) const { return s_[static_cast<size_t>(i)]; }
  BandWord prefix(int k) const { return BandWord(s_.substr(0, static_cast<size_t>(k))); }

  bool operator==(const BandWord&) const = default;

 private:
  explicit BandWord(std::string s) : s_(std::move(s)) {}
  friend BandWord tau(const Alphabet&, std::string_view);
  friend BandWord make_band_word(const Alphabet&, std::string_view);
  friend std::vector<BandWord> enumerate_band(const Alphabet&);
  std::string s_;
};

/// Letter set of a word (the morphism omega). Throws on foreign symbols.
LetterSet omega(const Alphabet& a, std::string_view w);

/// Deletes repeated letters keeping first occurrences (the morphism tau).
BandWord tau(const Alphabet& a, std::string_view w);

/// Validating constructor: w must already be duplicate-free.
BandWord make_band_word(const Alphabet& a, std::string_view w);

/// By length, then lexicographic in alphabet order.
bool band_less(const Alphabet& a, const BandWord& x, const BandWord& y);

/// All duplicate-free words, by length then lexicographic (alphabet order).
std::vector<BandWord> enumerate_band(const Alphabet& a);

/// Number of duplicate-free words: sum over k of n!/(n-k)!.
unsigned long long band_size(int alphabet_size);

/// Each subset of the alphabet mapped to its cardinality.
std::map<LetterSet, int> semilattice_levels(const Alphabet& a);

/// Word v[1]x . v[2]x ... v[k]x where v[1]x = a1^m and for i >= 2 the block
/// v[i]x is the alphabet-sorted word over {a1..ai} with every letter repeated
/// m times, the whole block repeated l times. tau of the result is v.
std::string theta_expand(const Alphabet& a, const BandWord& v, long l, long m);

/// Language identified by a finite subset of the free left regular band;
/// membership of an arbitrary word depends only on its tau-image.
class R1Language {
 public:
  R1Language() = default;
  /// Validates entries: in-alphabet, duplicate-free, no repeated entries.
  R1Language(Alphabet alphabet, const std::vector<std::string>& accept);

  const Alphabet& alphabet() const { return alphabet_; }
  /// Canonically ordered (length, then lexicographic).
  const std::vector<BandWord>& accept() const { return accept_; }

  bool accepts_band(const BandWord& v) const;
  bool member(std::string_view word) const;

 private:
  Alphabet alphabet_;
  std::vector<BandWord> accept_;
  std::vector<std::string> accept_sorted_;  // plain string order, for lookup
};

}  // namespace qfa
