#pragma once

#include <functional>
#include <string>

#include "osa/repr.hpp"

// Textual oracle descriptions, used by the command line:
//
//   id                     the identity function
//   7                      a constant function
//   table:0=9,1=3,2=7      finite table (missing questions answer the
//                          default, given as default=<n>, otherwise 0)
//   expr:q*q+1             arithmetic in the question q, with + - * / %,
//                          comparisons (== != < <= > >=) and c ? a : b;
//                          subtraction and division truncate (x-y = 0 for
//                          y > x, x/0 = 0, x%0 = 0); comparisons yield 0/1.

namespace osa {

struct OracleParse {
  std::function<Nat(Nat)> fn;
  std::string error;

  bool ok() const { return static_cast<bool>(fn); }
};

OracleParse parse_nat_oracle(const std::string& text);

}  // namespace osa
