#include "qfa/words.hpp"

#include <algorithm>
#include <cctype>

#include "qfa/rational.hpp"

namespace qfa {

Alphabet::Alphabet() { index_.fill(-1); }

Alphabet::Alphabet(std::string_view letters, int max_size) {
  index_.fill(-1);
  if (static_cast<int>(letters.size()) > max_size)
    throw LimitError("alphabet has " + std::to_string(letters.size()) +
                     " letters, limit is " + std::to_string(max_size));
  for (char c : letters) {
    if (!std::isalnum(static_cast<unsigned char>(c)))
      throw InputError(std::string("letter '") + c +
                       "' is not alphanumeric ('#' and '$' are end-markers)");
    if (index_[static_cast<unsigned char>(c)] >= 0)
      throw InputError(std::string("duplicate letter '") + c + "' in alphabet");
    index_[static_cast<unsigned char>(c)] =
        static_cast<int16_t>(letters_.size());
    letters_.push_back(c);
  }
}

int Alphabet::index_checked(char c) const {
  int i = index(c);
  if (i < 0)
    throw InputError(std::string("symbol '") + c + "' is not in alphabet \"" +
                     letters_ + "\"");
  return i;
}

std::string LetterSet::str(const Alphabet& a) const {
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < a.size(); ++i) {
    if (!test(i)) continue;
    if (!first) out.push_back(',');
    out.push_back(a.letter(i));
    first = false;
  }
  out.push_back('}');
  return out;
}

LetterSet LetterSet::parse(const Alphabet& a, std::string_view s) {
  if (s.size() < 2 || s.front() != '{' || s.back() != '}')
    throw InputError("letter set must look like {a,b}: got \"" +
                     std::string(s) + "\"");
  LetterSet out;
  for (size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] == ',') continue;
    out = out.with(a.index_checked(s[i]));
  }
  return out;
}

LetterSet omega(const Alphabet& a, std::string_view w) {
  LetterSet out;
  for (char c : w) out = out.with(a.index_checked(c));
  return out;
}

BandWord tau(const Alphabet& a, std::string_view w) {
  std::string out;
  uint32_t seen = 0;
  for (char c : w) {
    uint32_t bit = 1u << a.index_checked(c);
    if (seen & bit) continue;
    seen |= bit;
    out.push_back(c);
  }
  return BandWord(std::move(out));
}

BandWord make_band_word(const Alphabet& a, std::string_view w) {
  uint32_t seen = 0;
  for (char c : w) {
    uint32_t bit = 1u << a.index_checked(c);
    if (seen & bit)
      throw InputError("word \"" + std::string(w) +
                       "\" has a repeated letter; not an element of F(A)");
    seen |= bit;
  }
  return BandWord(std::string(w));
}

bool band_less(const Alphabet& a, const BandWord& x, const BandWord& y) {
  if (x.size() != y.size()) return x.size() < y.size();
  for (int i = 0; i < x.size(); ++i) {
    int xi = a.index(x.at(i)), yi = a.index(y.at(i));
    if (xi != yi) return xi < yi;
  }
  return false;
}

std::vector<BandWord> enumerate_band(const Alphabet& a) {
  std::vector<BandWord> out;
  out.emplace_back(BandWord(std::string()));
  std::vector<std::pair<std::string, uint32_t>> layer = {{std::string(), 0u}};
  for (int len = 1; len <= a.size(); ++len) {
    std::vector<std::pair<std::string, uint32_t>> next;
    for (const auto& [w, used] : layer) {
      for (int i = 0; i < a.size(); ++i) {
        if (used & (1u << i)) continue;
        next.emplace_back(w + a.letter(i), used | (1u << i));
      }
    }
    for (auto& [w, used] : next) out.emplace_back(BandWord(std::string(w)));
    layer = std::move(next);
  }
  return out;
}

unsigned long long band_size(int n) {
  // sum_{k=0..n} n!/(n-k)!
  unsigned long long total = 0, falling = 1;
  total += falling;
  for (int k = 1; k <= n; ++k) {
    falling *= static_cast<unsigned long long>(n - k + 1);
    total += falling;
  }
  return total;
}

std::map<LetterSet, int> semilattice_levels(const Alphabet& a) {
  std::map<LetterSet, int> out;
  for (uint32_t bits = 0; bits < (1u << a.size()); ++bits) {
    LetterSet s(bits);
    out[s] = s.count();
  }
  return out;
}

std::string theta_expand(const Alphabet& a, const BandWord& v, long l, long m) {
  if (v.size() < 1) throw InputError("theta expansion needs a nonempty word");
  if (l <= 0 || m <= 0)
    throw InputError("theta expansion parameters must be positive");
  // |result| = m + sum_{i=2..k} i*m*l
  unsigned long long total = static_cast<unsigned long long>(m);
  for (int i = 2; i <= v.size(); ++i)
    total += static_cast<unsigned long long>(i) *
             static_cast<unsigned long long>(m) *
             static_cast<unsigned long long>(l);
  if (total > 100'000'000ull)
    throw LimitError("theta expansion would produce " + std::to_string(total) +
                     " letters");

  std::string out;
  out.reserve(total);
  out.append(static_cast<size_t>(m), v.at(0));
  std::string sorted;
  for (int i = 2; i <= v.size(); ++i) {
    sorted.assign(v.str().substr(0, static_cast<size_t>(i)));
    std::sort(sorted.begin(), sorted.end(), [&](char x, char y) {
      return a.index(x) < a.index(y);
    });
    std::string block;
    block.reserve(sorted.size() * static_cast<size_t>(m));
    for (char c : sorted) block.append(static_cast<size_t>(m), c);
    for (long rep = 0; rep < l; ++rep) out += block;
  }
  return out;
}

R1Language::R1Language(Alphabet alphabet, const std::vector<std::string>& accept)
    : alphabet_(std::move(alphabet)) {
  for (const std::string& w : accept) {
    BandWord v = make_band_word(alphabet_, w);
    accept_.push_back(v);
  }
  std::sort(accept_.begin(), accept_.end(),
            [&](const BandWord& x, const BandWord& y) {
              return band_less(alphabet_, x, y);
            });
  for (size_t i = 1; i < accept_.size(); ++i)
    if (accept_[i] == accept_[i - 1])
      throw InputError("accept entry \"" + accept_[i].str() + "\" repeated");
  for (const BandWord& v : accept_) accept_sorted_.push_back(v.str());
  std::sort(accept_sorted_.begin(), accept_sorted_.end());
}

bool R1Language::accepts_band(const BandWord& v) const {
  return std::binary_search(accept_sorted_.begin(), accept_sorted_.end(),
                            v.str());
}

bool R1Language::member(std::string_view word) const {
  return accepts_band(tau(alphabet_, word));
}

Rat rat_parse(std::string_view s) {
  mpq_class q;
  if (q.set_str(std::string(s), 10) != 0)
    throw InputError("bad rational \"" + std::string(s) + "\"");
  if (q.get_den() == 0)
    throw InputError("zero denominator in \"" + std::string(s) + "\"");
  q.canonicalize();
  return q;
}

Rat rat_pow(const Rat& base, unsigned long exp) {
  Rat out;
  mpz_pow_ui(out.get_num().get_mpz_t(), base.get_num().get_mpz_t(), exp);
  mpz_pow_ui(out.get_den().get_mpz_t(), base.get_den().get_mpz_t(), exp);
  out.canonicalize();
  return out;
}

}  // namespace qfa
