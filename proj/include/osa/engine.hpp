#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "osa/repr.hpp"

// Execution engine for oracle sequential algorithms.
//
// A machine of sort U,V,X,Y computes a partial map U x (X -> Y) -> V by
// interleaving plain register transitions with questions to an oracle
// f : X -> Y.  A state ⟨r|o⟩ pairs a register r with a one-slot answer
// cell o that is either empty (□) or holds the answer to the question
// the machine asked from r.  Runs stop at the first end state; the output
// is projected from that state.

namespace osa {

template <class R, class Y>
struct MachineState {
  R reg{};
  std::optional<Y> cell{};

  friend bool operator==(const MachineState&, const MachineState&) = default;
};

template <class R, class Y>
std::string repr(const MachineState<R, Y>& s) {
  return "⟨" + repr(s.reg) + "|" + repr_cell(s.cell) + "⟩";
}

// The six components of a machine.  Conventions:
//  - query states must carry an empty cell and must not be end states;
//  - `step` is the plain transition relation, partial and deterministic:
//    an empty result on a non-query, non-end state means the machine is
//    stuck there;
//  - `xi` reads the current question off a register; on a query state the
//    oracle is asked xi(r) and the answer lands in the cell.
template <class U, class V, class X, class Y, class R>
struct OsaSpec {
  using State = MachineState<R, Y>;

  std::function<bool(const State&)> is_query;
  std::function<bool(const State&)> is_end;
  std::function<R(const U&)> rho;  // loads an input into the start register
  std::function<X(const R&)> xi;  // current question
  std::function<V(const State&)> pi;  // output projection, read at end states
  std::function<std::optional<State>(const State&)> step;
};

// An oracle wraps a function X -> Y and records every question asked during
// a run.  Re-asked questions replay the recorded answer, so a run consults
// a fixed graph of the function even if the wrapped callable is stateful.
template <class X, class Y>
class Oracle {
 public:
  Oracle() = default;
  explicit Oracle(std::function<Y(const X&)> fn) : fn_(std::move(fn)) {}

  Y answer(const X& question) {
    for (const auto& [q, a] : log_) {
      if (q == question) return a;
    }
    if (!fn_) throw std::logic_error("oracle consulted but holds no function");
    Y y = fn_(question);
    log_.emplace_back(question, y);
    return y;
  }

  const std::vector<std::pair<X, Y>>& log() const { return log_; }
  void reset() { log_.clear(); }

 private:
  std::function<Y(const X&)> fn_;
  std::vector<std::pair<X, Y>> log_;
};

enum class TransitionKind { Initial, Step, OracleQuery };

// A trace is the full state sequence of a run.  The first entry is the
// initial state; each later entry records the transition that produced it,
// and oracle entries also record the question and answer.
template <class R, class X, class Y>
struct Trace {
  struct Entry {
    MachineState<R, Y> state;
    TransitionKind kind = TransitionKind::Initial;
    std::optional<X> question;
    std::optional<Y> answer;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  std::vector<Entry> entries;
  Nat steps_used = 0;  // number of transitions taken

  friend bool operator==(const Trace&, const Trace&) = default;
};

enum class RunStatus { Terminated, FuelExhausted, Stuck };

inline std::string repr(RunStatus s) {
  switch (s) {
    case RunStatus::Terminated: return "terminated";
    case RunStatus::FuelExhausted: return "fuel-exhausted";
    case RunStatus::Stuck: return "stuck";
  }
  return "?";
}

template <class R, class X, class Y>
struct RunOutcome {
  RunStatus status = RunStatus::Stuck;
  Trace<R, X, Y> trace;

  const MachineState<R, Y>& final_state() const {
    return trace.entries.back().state;
  }
};

// Result of attempting one transition from a given state.
template <class R, class X, class Y>
struct StepResult {
  enum class Tag { Advanced, AtEnd, Stuck };

  Tag tag = Tag::Stuck;
  typename Trace<R, X, Y>::Entry entry;  // engaged when tag == Advanced
};

// Performs a single transition: answers the question on query states,
// otherwise applies the plain step.  End states do not advance.
template <class U, class V, class X, class Y, class R>
StepResult<R, X, Y> step_once(const OsaSpec<U, V, X, Y, R>& spec,
                              Oracle<X, Y>& oracle,
                              const MachineState<R, Y>& state) {
  using Result = StepResult<R, X, Y>;
  Result out;
  if (spec.is_end(state)) {
    out.tag = Result::Tag::AtEnd;
    return out;
  }
  if (spec.is_query(state)) {
    if (state.cell) {
      throw std::logic_error("query state already carries an answer");
    }
    X x = spec.xi(state.reg);
    Y y = oracle.answer(x);
    out.tag = Result::Tag::Advanced;
    out.entry = {MachineState<R, Y>{state.reg, y}, TransitionKind::OracleQuery,
                 std::move(x), std::move(y)};
    return out;
  }
  auto next = spec.step(state);
  if (!next) {
    out.tag = Result::Tag::Stuck;
    return out;
  }
  out.tag = Result::Tag::Advanced;
  out.entry = {*std::move(next), TransitionKind::Step, std::nullopt,
               std::nullopt};
  return out;
}

// Runs the machine on `input` against `oracle`, for at most `fuel`
// transitions.  The oracle's log is reset so the returned trace and the
// log describe this run alone.
template <class U, class V, class X, class Y, class R>
RunOutcome<R, X, Y> run(const OsaSpec<U, V, X, Y, R>& spec,
                        Oracle<X, Y>& oracle, const U& input, Nat fuel) {
  oracle.reset();
  RunOutcome<R, X, Y> out;
  MachineState<R, Y> state{spec.rho(input), std::nullopt};
  out.trace.entries.push_back({state, TransitionKind::Initial, std::nullopt,
                               std::nullopt});
  for (;;) {
    using Tag = typename StepResult<R, X, Y>::Tag;
    if (spec.is_end(state)) {
      out.status = RunStatus::Terminated;
      return out;
    }
    if (out.trace.steps_used == fuel) {
      out.status = RunStatus::FuelExhausted;
      return out;
    }
    auto r = step_once(spec, oracle, state);
    if (r.tag != Tag::Advanced) {
      out.status = RunStatus::Stuck;
      return out;
    }
    state = r.entry.state;
    out.trace.entries.push_back(std::move(r.entry));
    ++out.trace.steps_used;
  }
}

// Convenience for machines that never query: runs with an oracle that
// would throw if consulted.
template <class U, class V, class X, class Y, class R>
RunOutcome<R, X, Y> run(const OsaSpec<U, V, X, Y, R>& spec, const U& input,
                        Nat fuel) {
  Oracle<X, Y> none([](const X&) -> Y {
    throw std::logic_error("plain machine asked a question");
  });
  return run(spec, none, input, fuel);
}

// The induced functional: the machine's output on (input, oracle), when the
// run reaches an end state within `fuel` transitions.
template <class U, class V, class X, class Y, class R>
std::optional<V> induced(const OsaSpec<U, V, X, Y, R>& spec,
                         Oracle<X, Y>& oracle, const U& input, Nat fuel) {
  auto out = run(spec, oracle, input, fuel);
  if (out.status != RunStatus::Terminated) return std::nullopt;
  return spec.pi(out.final_state());
}

// Questions asked along a run, in order.
template <class R, class X, class Y>
std::vector<X> query_sequence(const Trace<R, X, Y>& trace) {
  std::vector<X> out;
  for (const auto& e : trace.entries) {
    if (e.kind == TransitionKind::OracleQuery) out.push_back(*e.question);
  }
  return out;
}

// Mind changes of a run: one less than the number of questions asked
// (a first question is not a change of mind), zero when nothing was asked.
template <class R, class X, class Y>
Nat mind_change_count(const Trace<R, X, Y>& trace) {
  Nat queries = 0;
  for (const auto& e : trace.entries) {
    if (e.kind == TransitionKind::OracleQuery) ++queries;
  }
  return queries == 0 ? 0 : queries - 1;
}

// Continuity check: a terminating run only ever sees the oracle's values on
// its own question sequence, so any oracle agreeing with `f` there must
// produce the identical run.  Runs the machine under `f`, then under `g`,
// and reports whether g matched f on f's questions and whether the two runs
// coincide transition by transition.
struct ContinuityVerdict {
  bool oracles_agree = false;  // g equals f on the f-run's questions
  bool runs_identical = false;
  std::string detail;  // first observed difference, when any

  bool ok() const { return oracles_agree && runs_identical; }
};

template <class U, class V, class X, class Y, class R>
ContinuityVerdict check_continuity(const OsaSpec<U, V, X, Y, R>& spec,
                                   const U& input,
                                   const std::function<Y(const X&)>& f,
                                   const std::function<Y(const X&)>& g,
                                   Nat fuel) {
  ContinuityVerdict verdict;
  Oracle<X, Y> of(f);
  auto rf = run(spec, of, input, fuel);
  verdict.oracles_agree = true;
  for (const auto& [q, a] : of.log()) {
    if (!(g(q) == a)) {
      verdict.oracles_agree = false;
      verdict.detail = "oracles differ at question " + repr(q);
      return verdict;
    }
  }
  Oracle<X, Y> og(g);
  auto rg = run(spec, og, input, fuel);
  if (rf.status != rg.status) {
    verdict.detail = "run status differs: " + repr(rf.status) + " vs " +
                     repr(rg.status);
    return verdict;
  }
  if (!(rf.trace == rg.trace)) {
    verdict.detail = "traces differ";
    return verdict;
  }
  verdict.runs_identical = true;
  return verdict;
}

}  // namespace osa
