#pragma once

#include <stdexcept>
#include <string>

namespace qfa {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed user input: words, languages, files, assignments.
struct InputError : Error {
  using Error::Error;
};

/// A guarded resource limit was exceeded (alphabet size, state count).
struct LimitError : Error {
  using Error::Error;
};

/// A numerical routine failed with diagnostics attached.
struct NumericError : Error {
  using Error::Error;
};

/// A simulation contract was violated (e.g. live mass left after $).
struct SemanticsError : Error {
  using Error::Error;
};

}  // namespace qfa
