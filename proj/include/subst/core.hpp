#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace subst {

using Bits = boost::dynamic_bitset<std::uint64_t>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input text did not match the grammar. `position` is a 0-based byte offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// A configured size cap was hit; callers usually turn this into an `unknown` verdict.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Limits shared by every module. Defaults are desk-scale.
struct Limits {
  int max_dim_ta = 6;                      // S_n enumeration bound
  int max_dim_sa = 4;                      // ^n n enumeration bound
  std::uint64_t max_points = 1u << 20;     // u^n cap for set algebras
  std::size_t max_decorated_vars = 24;     // truth-table cap
  std::size_t max_alphabet = 24;           // free algebra alphabet cap
};

inline const Limits& default_limits() {
  static const Limits limits;
  return limits;
}

inline std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

}  // namespace subst
