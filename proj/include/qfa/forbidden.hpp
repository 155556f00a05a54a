#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qfa/words.hpp"

namespace qfa {

/// Word-combinatorial witness of a forbidden construction with n+1 levels:
/// 2m duplicate-free words (first m accepted, last m rejected) factored into
/// n columns, columns k < n sharing one letter set and every column's two
/// halves being permutations of each other.
struct ForbiddenWitness {
  int n = 0, m = 0;
  std::vector<std::string> words;                 // 2m entries
  std::vector<std::vector<std::string>> factors;  // 2m rows x n columns
};

/// Exhaustive search over 2 <= n <= |A| and 1 <= m <= max_m: enumerate the
/// shared chains of column letter sets, factor candidate words along each
/// chain, then match column multisets between accepted and rejected halves.
/// Columns k < n are nonempty; the final column may be empty only when
/// allow_empty_final is set.
std::optional<ForbiddenWitness> find_forbidden(const R1Language& language,
                                               int max_m = 4,
                                               bool allow_empty_final = false);

/// Independent re-verification of every witness condition.
bool check_witness(const R1Language& language, const ForbiddenWitness& w,
                   bool allow_empty_final = false);

}  // namespace qfa
