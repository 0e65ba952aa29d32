#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

// Plain-text rendering for the value sorts that appear in machine states.
// Every renderable type gets a repr() overload in this namespace; generic
// code calls repr() unqualified so user-provided overloads are found by ADL.

namespace osa {

using Nat = std::uint64_t;

// The one-point sort. Machines whose input or output carries no information
// use Unit there.
struct Unit {
  friend bool operator==(const Unit&, const Unit&) { return true; }
};

// Rendering of an empty answer cell.
inline constexpr const char* kEmptyCell = "□";  // □

inline std::string repr(Nat n) { return std::to_string(n); }
inline std::string repr(const std::string& s) { return s; }
inline std::string repr(const Unit&) { return "()"; }

template <class A, class B>
std::string repr(const std::pair<A, B>& p);
template <class... Ts>
std::string repr(const std::tuple<Ts...>& t);
template <class T>
std::string repr(const std::vector<T>& v);

template <class A, class B>
std::string repr(const std::pair<A, B>& p) {
  return "(" + repr(p.first) + "," + repr(p.second) + ")";
}

template <class... Ts>
std::string repr(const std::tuple<Ts...>& t) {
  std::string out = "(";
  bool first = true;
  std::apply(
      [&](const Ts&... xs) {
        ((out += (first ? "" : ","), out += repr(xs), first = false), ...);
      },
      t);
  out += ")";
  return out;
}

template <class T>
std::string repr(const std::vector<T>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ",";
    out += repr(v[i]);
  }
  out += "]";
  return out;
}

template <class T>
std::string repr_cell(const std::optional<T>& cell) {
  return cell ? repr(*cell) : std::string(kEmptyCell);
}

}  // namespace osa
