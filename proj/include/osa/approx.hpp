#pragma once

#include <functional>
#include <string>
#include <vector>

#include "osa/engine.hpp"

// Approximation machines.
//
// An approximation machine is a machine of sort U,X,X,Y whose question is
// its output: it refines a candidate question/answer pair until the pair is
// good enough, and three structural conditions make that reading precise:
//   (i)   the output projection is the question: pi⟨r|o⟩ = xi(r);
//   (ii)  end states carry an answer in the cell;
//   (iii) a plain step that keeps an answer y in the cell changes neither
//         the answer nor the question: ⟨r|o⟩ ▷ ⟨r'|y⟩ forces o = y and
//         xi(r) = xi(r').
// Consequently a plain step never invents a cell value: from ⟨r|□⟩ it can
// only reach ⟨r'|□⟩, and from ⟨r|y⟩ it reaches ⟨r'|□⟩ (dropping y) or
// ⟨r'|y⟩ (keeping it).  Every run is then a chain of tentative pairs
// (xi(r), y) where each kept answer really is the oracle's value at the
// current question.

namespace osa {

template <class U, class X, class Y, class R>
struct ApproxSpec {
  OsaSpec<U, X, X, Y, R> osa;
};

// A candidate-correctness predicate P(u, x, y): given input u, is the pair
// (question x, answer y) acceptable?
template <class U, class X, class Y>
using PairPredicate = std::function<bool(const U&, const X&, const Y&)>;

// Structural validation on a sample of states.  Checks, on every sample:
//   - query states have empty cells and are not end states;
//   - end states carry an answer (condition (ii));
//   - pi agrees with xi (condition (i));
//   - plain steps out of answer-carrying states either clear the cell or
//     keep the same answer with the same question (condition (iii)), and
//     plain steps out of empty-cell states leave the cell empty.
struct ValidationReport {
  struct Violation {
    std::string condition;  // which requirement failed
    std::string state;      // rendered offending state
  };

  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

template <class U, class X, class Y, class R>
ValidationReport validate_approx(
    const ApproxSpec<U, X, Y, R>& spec,
    const std::vector<MachineState<R, Y>>& samples) {
  ValidationReport report;
  auto flag = [&](const char* cond, const MachineState<R, Y>& s) {
    report.violations.push_back({cond, repr(s)});
  };
  const auto& m = spec.osa;
  for (const auto& s : samples) {
    const bool query = m.is_query(s);
    const bool end = m.is_end(s);
    if (query && s.cell) flag("query state carries an answer", s);
    if (query && end) flag("query state is an end state", s);
    if (end && !s.cell) flag("end state has an empty cell", s);
    if (!(m.pi(s) == m.xi(s.reg))) flag("output differs from question", s);
    if (!query && !end) {
      auto next = m.step(s);
      if (next) {
        if (!s.cell && next->cell) {
          flag("plain step invents an answer", s);
        }
        if (s.cell && next->cell) {
          if (!(*next->cell == *s.cell)) {
            flag("plain step alters the kept answer", s);
          } else if (!(m.xi(next->reg) == m.xi(s.reg))) {
            flag("plain step keeps the answer but moves the question", s);
          }
        }
      }
    }
  }
  return report;
}

// Answer coherence: along any run, whenever the cell holds y at register r,
// y is the oracle's value at the current question xi(r).  Checks a recorded
// trace against the oracle function that produced it.
template <class U, class X, class Y, class R>
bool check_answer_coherence(const ApproxSpec<U, X, Y, R>& spec,
                            const Trace<R, X, Y>& trace,
                            const std::function<Y(const X&)>& f) {
  for (const auto& e : trace.entries) {
    if (!e.state.cell) continue;
    if (!(*e.state.cell == f(spec.osa.xi(e.state.reg)))) return false;
  }
  return true;
}

// Whether a terminated run's final pair satisfies P: the machine, run on
// (u, f), ends in ⟨r|y⟩ and P(u, xi(r), y) holds.  Together with coherence
// this is the no-counterexample reading: the machine finds a pair (x, f(x))
// that P accepts.
enum class SatisfactionStatus { Satisfied, Refuted, DidNotTerminate };

template <class X, class Y>
struct Satisfaction {
  SatisfactionStatus status = SatisfactionStatus::DidNotTerminate;
  std::optional<X> question;
  std::optional<Y> answer;
};

template <class U, class X, class Y, class R>
Satisfaction<X, Y> satisfies(const ApproxSpec<U, X, Y, R>& spec,
                             const PairPredicate<U, X, Y>& p, const U& input,
                             Oracle<X, Y>& oracle, Nat fuel) {
  Satisfaction<X, Y> out;
  auto run_out = run(spec.osa, oracle, input, fuel);
  if (run_out.status != RunStatus::Terminated) return out;
  const auto& fin = run_out.final_state();
  out.question = spec.osa.xi(fin.reg);
  out.answer = fin.cell;
  out.status = (out.answer && p(input, *out.question, *out.answer))
                   ? SatisfactionStatus::Satisfied
                   : SatisfactionStatus::Refuted;
  return out;
}

// Runs the machine and returns the realized pair (x, f(x)) from the final
// state, together with the full outcome for inspection.
template <class X, class Y, class R>
struct Realization {
  RunStatus status = RunStatus::Stuck;
  std::optional<std::pair<X, Y>> pair;
  RunOutcome<R, X, Y> outcome;
};

template <class U, class X, class Y, class R>
Realization<X, Y, R> nci_realize(const ApproxSpec<U, X, Y, R>& spec,
                                 const U& input, Oracle<X, Y>& oracle,
                                 Nat fuel) {
  Realization<X, Y, R> out;
  out.outcome = run(spec.osa, oracle, input, fuel);
  out.status = out.outcome.status;
  if (out.status == RunStatus::Terminated) {
    const auto& fin = out.outcome.final_state();
    if (fin.cell) out.pair = std::pair<X, Y>{spec.osa.xi(fin.reg), *fin.cell};
  }
  return out;
}

// Witness extraction for existence statements: given g mapping a machine
// state's question to a candidate witness, runs the machine and returns
// g applied at the final state along with the whole approximation stream
// g(xi(r_i)) over the run's states.  When the final pair satisfies the
// hand-off condition, the last stream element is the sought witness.
template <class W, class X, class Y, class R>
struct WitnessExtraction {
  RunStatus status = RunStatus::Stuck;
  std::optional<W> value;
  std::vector<W> stream;
};

template <class W, class U, class X, class Y, class R>
WitnessExtraction<W, X, Y, R> extract_witness(
    const ApproxSpec<U, X, Y, R>& spec, const std::function<W(const X&)>& g,
    const U& input, Oracle<X, Y>& oracle, Nat fuel) {
  WitnessExtraction<W, X, Y, R> out;
  auto run_out = run(spec.osa, oracle, input, fuel);
  out.status = run_out.status;
  for (const auto& e : run_out.trace.entries) {
    out.stream.push_back(g(spec.osa.xi(e.state.reg)));
  }
  if (out.status == RunStatus::Terminated && !out.stream.empty()) {
    out.value = out.stream.back();
  }
  return out;
}

}  // namespace osa
