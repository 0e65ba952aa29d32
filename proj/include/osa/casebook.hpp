#pragma once

#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "osa/approx.hpp"
#include "osa/cfg.hpp"
#include "osa/dclift.hpp"
#include "osa/engine.hpp"

// A small casebook of concrete machines:
//
//  - euclid: the plain gcd algorithm, no oracle involved;
//  - max: queries an oracle at n, n-1, ..., 0 and returns the largest answer;
//  - least element: walks down a decidable set from a starting point,
//    following oracle-suggested smaller elements;
//  - halting realizer: two-query machine refuting or confirming a
//    self-halting witness;
//  - tape: searches a 0/1-labeled tape for a strictly increasing
//    constant-label run of positions; its dependent-choice lift builds the
//    infinite position sequence witnessing that such a run always exists.

namespace osa {

using PairReg = std::pair<Nat, Nat>;
using SymReg = std::pair<std::string, Nat>;
using HaltReg = std::tuple<std::string, Nat, Nat>;

// --- euclid ---------------------------------------------------------------

// gcd by repeated remainder: registers (a, b) with b dividing progress,
// end when b = 0, output a.
OsaSpec<std::pair<Nat, Nat>, Nat, Nat, Nat, PairReg> euclid_machine();

// --- max ------------------------------------------------------------------

// On input n, asks the oracle at n, n-1, ..., 0, keeping the running
// maximum; registers (best so far, questions left).
OsaSpec<Nat, Nat, Nat, Nat, PairReg> max_machine();

// --- least element --------------------------------------------------------

struct LeastElementContext {
  std::function<bool(Nat)> member;  // the decidable set Q
};

// From start u, repeatedly asks the oracle for a candidate and moves to it
// whenever it is a smaller member of Q; ends when the answer is no
// improvement.  Registers ("cs", current) scanning and ("ce", final) ended.
ApproxSpec<Nat, Nat, Nat, SymReg> least_element_machine(LeastElementContext);

// Acceptance predicate: if u is in Q, then the final x is in Q and the last
// answer y offers no smaller member.
PairPredicate<Nat, Nat, Nat> least_element_p(LeastElementContext);

// Progress order of the machine: questions strictly shrink.
DescentOrder<Nat> least_descent_order();

// Graph summary: cs' awaiting an answer, cs answered, ce ended.
FlowGraph least_element_graph();
std::function<Vertex(const MachineState<SymReg, Nat>&)>
least_element_projection();
std::set<Vertex> least_element_initial_atoms();
std::set<Vertex> least_element_final_atoms();
std::vector<MachineState<SymReg, Nat>> least_element_sample_states();

// --- halting realizer -----------------------------------------------------

struct HaltingContext {
  // halts(u, k): k codes a finished self-computation of program u.
  std::function<bool(Nat, Nat)> halts;
};

// Asks for a halting witness at question 0; a confirmed witness x is asked
// again at x, otherwise the machine ends with the refuting answer.
ApproxSpec<Nat, Nat, Nat, HaltReg> halting_machine(HaltingContext);

// Acceptance: the final question is a real witness or the final answer is
// not one.
PairPredicate<Nat, Nat, Nat> halting_p(HaltingContext);

std::vector<MachineState<HaltReg, Nat>> halting_sample_states();

// --- tape -----------------------------------------------------------------

enum class TapeExtend { RepeatLast, Cycle, Constant };

struct TapeContext {
  std::function<bool(Nat)> bit;  // the tape's 0/1 labels
  Nat n = 0;                     // requested run length, at least 1
};

// Builds a total label function from a finite pattern: repeat the last bit,
// cycle the pattern, or extend with zeros.
TapeContext make_tape_context(const std::vector<bool>& pattern,
                              TapeExtend extend, Nat n);

// The inner tape machine on input u (positions found so far): scans from
// the next position x and asks the oracle for a same-label successor; a
// usable answer moves the scan, otherwise the machine ends where it stands.
//   ("cs", x)  scanning at x     ("ce1", y) moved to y, asking once more
//   ("ce2", x) ended at x
ApproxSpec<std::vector<Nat>, Nat, Nat, SymReg> tape_machine(
    const TapeContext& ctx);

// Acceptance: x extends u strictly increasingly, and if x is labeled 1 with
// x <= y then y is labeled 1 too.
PairPredicate<std::vector<Nat>, Nat, Nat> tape_p(const TapeContext& ctx);

// The target property of a finite witness v: n strictly increasing
// positions with equal labels.
std::function<bool(const std::vector<Nat>&)> tape_q(const TapeContext& ctx);

// The matched oracle pair of the lift: tape_f1 picks the stage to revisit
// (first break of monotone increase or first 1-label), tape_f2 proposes the
// inner answer at that stage, tape_g reads a candidate witness off the
// approximation.
std::function<Nat(const PaddedSequence<Nat>&)> tape_f1(const TapeContext&);
std::function<Nat(const PaddedSequence<Nat>&)> tape_f2(const TapeContext&);
std::function<std::vector<Nat>(const PaddedSequence<Nat>&)> tape_g(
    const TapeContext&);
MultiOracle<Nat, Nat> tape_oracle(const TapeContext&);

// The lifted tape machine (validated on the sample states).
OmegaSpec<Nat, Nat, SymReg> tape_omega(const TapeContext&);

// Runs the lift against its matched oracles and extracts a witness v.
struct TapeWitness {
  RunStatus status = RunStatus::Stuck;
  std::vector<Nat> v;
  OmegaRunOutcome<SymReg, Nat, Nat> outcome;
};
TapeWitness tape_witness(const TapeContext& ctx, Nat fuel);

// Progress order of the machine: questions strictly grow.
DescentOrder<Nat> tape_descent_order();

// Graph summary: cs'/ce' awaiting an answer, cs/ce answered.
FlowGraph tape_graph();
std::function<Vertex(const MachineState<SymReg, Nat>&)> tape_projection();
std::set<Vertex> tape_initial_atoms();
std::set<Vertex> tape_final_atoms();
std::vector<MachineState<SymReg, Nat>> tape_sample_states();

}  // namespace osa
