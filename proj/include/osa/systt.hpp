#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "osa/approx.hpp"
#include "osa/engine.hpp"

// Finite-type terms over one base sort of naturals with primitive
// recursion, plus an uninterpreted oracle symbol phi of type 0 -> 0.
// A closed term t : (0 -> 0) -> 0 -> 0 is executed as a machine: t is
// applied to phi and a numeral, reduced by leftmost-outermost steps, and
// every redex "phi applied to a numeral" is handed to the oracle, whose
// answer replaces the redex as a numeral.  The run's final pair is
// (t(f)(u), f(t(f)(u))).

namespace osa {

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  enum class Kind { Var, Lam, App, Zero, Suc, Rec, Phi };

  Kind kind = Kind::Zero;
  int index = 0;     // Var: de Bruijn index
  std::string name;  // Var and Lam: display name
  Term a, b, c;      // Lam: a = body; App: a b; Suc: a; Rec: a = count,
                     // b = base, c = step
};

Term t_var(int index, std::string name);
Term t_lam(std::string name, Term body);
Term t_app(Term f, Term x);
Term t_zero();
Term t_suc(Term t);
Term t_rec(Term count, Term base, Term step);
Term t_phi();
Term t_numeral(Nat n);

bool term_eq(const Term& a, const Term& b);

// The value of a closed numeral (iterated successor of zero), when t is one.
std::optional<Nat> numeral_value(const Term& t);

// Prefix rendering, the same syntax parse_term accepts.
std::string render_term(const Term& t);

// Simple types over the base sort of naturals.
struct TypeNode;
using Type = std::shared_ptr<const TypeNode>;

struct TypeNode {
  Type from;  // both null: the base sort
  Type to;
};

Type ty_base();
Type ty_arrow(Type from, Type to);
bool type_eq(const Type& a, const Type& b);
std::string render_type(const Type& t);

// The type of executable terms: (0 -> 0) -> 0 -> 0.
Type realizer_type();

// Parser for the prefix syntax
//   term  ::= 'lam' name+ '.' term | 'app' atom atom | 'suc' atom
//           | 'rec' atom atom atom | atom
//   atom  ::= '(' term ')' | numeral | name
// A name in term position refers to the innermost binder of that name; the
// free name 'phi' is the oracle symbol.
struct ParseOutcome {
  Term term;          // null on error
  std::string error;  // empty on success
  std::size_t offset = 0;

  bool ok() const { return term != nullptr; }
};

ParseOutcome parse_term(const std::string& text);

// Checks a closed term (phi allowed free) against an expected type;
// returns an error message, or nothing when the term checks.
std::optional<std::string> check_type(const Term& t, const Type& expected);

// One leftmost-outermost reduction step of a base-type term.  Redexes are
// beta, the two recursor unfoldings, and, only when no such redex comes
// first, "phi applied to a numeral", which is reported rather than reduced.
struct ReduceOutcome {
  enum class Tag { Reduced, OracleRedex, Normal, Ill };

  Tag tag = Tag::Ill;
  Term next;          // Reduced
  Nat question = 0;   // OracleRedex: the numeral under phi
  std::string note;   // Ill: what went wrong
};

ReduceOutcome reduce_step(const Term& t);

// Replaces the leftmost-outermost oracle redex with the numeral y; null
// when the term has none in redex position.
Term answer_oracle_redex(const Term& t, Nat y);

// Machine registers: phase "cc" reducing, "cq" waiting at a question.  The
// third component is the current question: the numeral under the pending
// phi, or the term's own value once it is a numeral.
struct TermReg {
  std::string phase;
  Term term;
  Nat x = 0;

  friend bool operator==(const TermReg& a, const TermReg& b) {
    return a.phase == b.phase && a.x == b.x && term_eq(a.term, b.term);
  }
};

std::string repr(const TermReg& r);

// The machine of a term t : (0 -> 0) -> 0 -> 0.  Throws
// std::invalid_argument when t does not check at that type.
ApproxSpec<Nat, Nat, Nat, TermReg> term_machine(const Term& t);

struct TermRun {
  RunStatus status = RunStatus::Stuck;
  std::optional<std::pair<Nat, Nat>> pair;  // (t(f)(u), f of that)
  RunOutcome<TermReg, Nat, Nat> outcome;
};

TermRun normalize_with_oracle(const Term& t,
                              const std::function<Nat(Nat)>& f, Nat u,
                              Nat fuel);

}  // namespace osa
