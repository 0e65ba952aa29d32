#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "osa/approx.hpp"
#include "osa/engine.hpp"
#include "osa/repr.hpp"

// Dependent-choice lift.
//
// Given an approximation machine A whose inputs are finite sequences over X,
// the lifted machine A_ω builds an infinite sequence alpha : N -> X whose
// every prefix extends correctly: stage n feeds the first n values back into
// A to produce value n.  The lifted machine consults two oracles,
//   phi1 : X^N -> N   (which stage to inspect)
//   phi2 : X^N -> Y   (the inner machine's oracle, pointwise on sequences),
// both continuous in the sense that they read only finitely many entries of
// their argument.  Infinite sequences are represented as a finite prefix
// padded with a constant fill value.
//
// A lifted state ⟨sigma, a | o1, o2⟩ carries a stack sigma of inner
// registers (one per stage currently being refined), a buffer a of already
// finished stage values waiting to be prepended, and two answer cells.
// The stage outputs xi*(sigma) followed by the buffer a, padded with fill,
// is the machine's current approximation to alpha.

namespace osa {

// A total sequence N -> X with finite support over a constant fill.
// Equality is extensional: trailing fill values are irrelevant.
template <class X>
struct PaddedSequence {
  std::vector<X> prefix;
  X fill{};

  const X& at(std::size_t i) const {
    return i < prefix.size() ? prefix[i] : fill;
  }

  std::vector<X> first(std::size_t n) const {
    std::vector<X> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(at(i));
    return out;
  }

  // Length of the prefix with trailing fill values stripped.
  std::size_t canonical_size() const {
    std::size_t n = prefix.size();
    while (n > 0 && prefix[n - 1] == fill) --n;
    return n;
  }

  friend bool operator==(const PaddedSequence& a, const PaddedSequence& b) {
    if (!(a.fill == b.fill)) return false;
    std::size_t na = a.canonical_size();
    if (na != b.canonical_size()) return false;
    for (std::size_t i = 0; i < na; ++i) {
      if (!(a.prefix[i] == b.prefix[i])) return false;
    }
    return true;
  }
};

template <class X>
std::string repr(const PaddedSequence<X>& s) {
  return repr(s.prefix) + "::" + repr(s.fill) + "^ω";
}

// Register of the lifted machine: the stack of inner registers and the
// buffer of finished stage values.
template <class R, class X>
struct LiftedRegister {
  std::vector<R> sigma;
  std::vector<X> buffer;

  friend bool operator==(const LiftedRegister&, const LiftedRegister&) =
      default;
};

// Full lifted state: register plus the two answer cells.
template <class R, class X, class Y>
struct OmegaState {
  LiftedRegister<R, X> reg;
  std::optional<Nat> cell1;  // stage answer from phi1
  std::optional<Y> cell2;    // inner answer from phi2

  friend bool operator==(const OmegaState&, const OmegaState&) = default;
};

template <class R, class X, class Y>
std::string repr(const OmegaState<R, X, Y>& s) {
  return "⟨" + repr(s.reg.sigma) + "," + repr(s.reg.buffer) + "|" +
         repr_cell(s.cell1) + "," + repr_cell(s.cell2) + "⟩";
}

// A pair of recording oracles, one per channel, with memoized replay under
// extensional equality of padded sequences.
template <class X, class Y>
class MultiOracle {
 public:
  using Seq = PaddedSequence<X>;

  MultiOracle() = default;
  MultiOracle(std::function<Nat(const Seq&)> phi1,
              std::function<Y(const Seq&)> phi2)
      : phi1_(std::move(phi1)), phi2_(std::move(phi2)) {}

  Nat answer_first(const Seq& q) {
    for (const auto& [question, a] : log1_) {
      if (question == q) return a;
    }
    if (!phi1_) throw std::logic_error("first oracle holds no function");
    Nat a = phi1_(q);
    log1_.emplace_back(q, a);
    return a;
  }

  Y answer_second(const Seq& q) {
    for (const auto& [question, a] : log2_) {
      if (question == q) return a;
    }
    if (!phi2_) throw std::logic_error("second oracle holds no function");
    Y a = phi2_(q);
    log2_.emplace_back(q, a);
    return a;
  }

  const std::vector<std::pair<Seq, Nat>>& first_log() const { return log1_; }
  const std::vector<std::pair<Seq, Y>>& second_log() const { return log2_; }

  void reset() {
    log1_.clear();
    log2_.clear();
  }

 private:
  std::function<Nat(const Seq&)> phi1_;
  std::function<Y(const Seq&)> phi2_;
  std::vector<std::pair<Seq, Nat>> log1_;
  std::vector<std::pair<Seq, Y>> log2_;
};

// Transition kinds of the lifted machine.  Oracle1/Oracle2 answer the two
// query classes; the named rules are the plain transitions:
//   RuleA    push a fresh inner run for the next unfinished stage;
//   RuleB    pop a finished inner run, prepending its value to the buffer;
//   RuleCi   inner step on an empty cell;
//   RuleCii  inner step that drops the kept answer (a mind change at the
//            top of the stack invalidates all buffered later stages);
//   RuleCiii inner step that keeps the answer.
enum class OmegaKind {
  Initial,
  Oracle1,
  Oracle2,
  RuleA,
  RuleB,
  RuleCi,
  RuleCii,
  RuleCiii
};

inline std::string repr(OmegaKind k) {
  switch (k) {
    case OmegaKind::Initial: return "initial";
    case OmegaKind::Oracle1: return "oracle1";
    case OmegaKind::Oracle2: return "oracle2";
    case OmegaKind::RuleA: return "a";
    case OmegaKind::RuleB: return "b";
    case OmegaKind::RuleCi: return "c.i";
    case OmegaKind::RuleCii: return "c.ii";
    case OmegaKind::RuleCiii: return "c.iii";
  }
  return "?";
}

template <class R, class X, class Y>
struct OmegaTrace {
  struct Entry {
    OmegaState<R, X, Y> state;
    OmegaKind kind = OmegaKind::Initial;
    std::optional<PaddedSequence<X>> question;
    std::optional<Nat> answer_first;
    std::optional<Y> answer_second;
  };

  std::vector<Entry> entries;
  Nat steps_used = 0;
};

template <class R, class X, class Y>
struct OmegaRunOutcome {
  RunStatus status = RunStatus::Stuck;
  OmegaTrace<R, X, Y> trace;

  const OmegaState<R, X, Y>& final_state() const {
    return trace.entries.back().state;
  }
};

// The lifted machine: the inner approximation machine together with the
// fill value used to pad stage outputs into total sequences.
template <class X, class Y, class R>
struct OmegaSpec {
  ApproxSpec<std::vector<X>, X, Y, R> inner;
  X fill{};
};

// Stage outputs of the stack: the inner question of each stacked register,
// bottom to top.
template <class X, class Y, class R>
std::vector<X> xi_star(const OmegaSpec<X, Y, R>& spec,
                       const std::vector<R>& sigma) {
  std::vector<X> out;
  out.reserve(sigma.size());
  for (const auto& r : sigma) out.push_back(spec.inner.osa.xi(r));
  return out;
}

// Current approximation to alpha: stage outputs, then the buffer, then fill.
template <class X, class Y, class R>
PaddedSequence<X> xi_omega(const OmegaSpec<X, Y, R>& spec,
                           const LiftedRegister<R, X>& reg) {
  std::vector<X> prefix = xi_star(spec, reg.sigma);
  prefix.insert(prefix.end(), reg.buffer.begin(), reg.buffer.end());
  return PaddedSequence<X>{std::move(prefix), spec.fill};
}

// First query class: the top of the stack is an inner query state and both
// cells are empty, so the next stage to inspect must be fetched from phi1.
template <class X, class Y, class R>
bool in_first_query(const OmegaSpec<X, Y, R>& spec,
                    const OmegaState<R, X, Y>& s) {
  return s.reg.buffer.empty() && !s.cell1 && !s.cell2 &&
         !s.reg.sigma.empty() &&
         spec.inner.osa.is_query(
             MachineState<R, Y>{s.reg.sigma.back(), std::nullopt});
}

// Second query class: a stage number n below the stack height sits in the
// first cell, so the inner oracle must answer for the current approximation.
template <class X, class Y, class R>
bool in_second_query(const OmegaSpec<X, Y, R>&, const OmegaState<R, X, Y>& s) {
  return s.reg.buffer.empty() && s.cell1 && !s.cell2 &&
         *s.cell1 < s.reg.sigma.size();
}

// End states: the stack is exhausted and both cells are filled.  The buffer
// then holds the first values of alpha and (cell1, cell2) is the realized
// stage/answer pair.
template <class X, class Y, class R>
bool is_end_omega(const OmegaSpec<X, Y, R>&, const OmegaState<R, X, Y>& s) {
  return s.reg.sigma.empty() && s.cell1.has_value() && s.cell2.has_value();
}

// One plain transition of the lifted machine, or nothing if no rule applies.
// The rules are mutually exclusive by the shape of the cells; the only
// overlap that inner machines could introduce, a top register that is both
// an inner end state and steppable, is rejected loudly.
template <class X, class Y, class R>
std::optional<std::pair<OmegaState<R, X, Y>, OmegaKind>> omega_step(
    const OmegaSpec<X, Y, R>& spec, const OmegaState<R, X, Y>& s) {
  using Out = std::pair<OmegaState<R, X, Y>, OmegaKind>;
  const auto& inner = spec.inner.osa;

  if (s.cell1 && !s.cell2) {
    // Stage number on hand, no inner run finished for it yet: push a fresh
    // inner run on the current stage outputs.  Applies only above the stack
    // height (below it the state is a second query, handled by the caller).
    if (!s.reg.buffer.empty()) return std::nullopt;
    OmegaState<R, X, Y> next;
    next.reg.sigma = s.reg.sigma;
    next.reg.sigma.push_back(inner.rho(xi_star(spec, s.reg.sigma)));
    return Out{std::move(next), OmegaKind::RuleA};
  }

  if (s.cell1 && s.cell2) {
    if (s.reg.sigma.empty()) return std::nullopt;  // end state, no step
    MachineState<R, Y> top{s.reg.sigma.back(), s.cell2};
    const bool at_end = inner.is_end(top);
    auto inner_next = inner.step(top);
    if (at_end && inner_next) {
      throw std::logic_error(
          "inner machine is both final and steppable at " + repr(top));
    }
    if (at_end) {
      // Pop: the top stage is finished; its value joins the buffer and the
      // kept cells double as the answer to the query one level down.
      OmegaState<R, X, Y> next = s;
      next.reg.sigma.pop_back();
      next.reg.buffer.insert(next.reg.buffer.begin(), inner.xi(top.reg));
      return Out{std::move(next), OmegaKind::RuleB};
    }
    if (inner_next) {
      if (!inner_next->cell) {
        // Mind change: the top stage dropped its tentative answer, so all
        // buffered later stages are stale and start over.
        OmegaState<R, X, Y> next;
        next.reg.sigma = s.reg.sigma;
        next.reg.sigma.back() = inner_next->reg;
        return Out{std::move(next), OmegaKind::RuleCii};
      }
      if (*inner_next->cell == *s.cell2) {
        OmegaState<R, X, Y> next = s;
        next.reg.sigma.back() = inner_next->reg;
        return Out{std::move(next), OmegaKind::RuleCiii};
      }
      return std::nullopt;  // inner step altered the answer: no rule
    }
    return std::nullopt;
  }

  if (!s.cell1 && !s.cell2) {
    // Inner step on an empty cell (the caller already excluded the first
    // query class).
    if (!s.reg.buffer.empty() || s.reg.sigma.empty()) return std::nullopt;
    auto inner_next =
        inner.step(MachineState<R, Y>{s.reg.sigma.back(), std::nullopt});
    if (inner_next && !inner_next->cell) {
      OmegaState<R, X, Y> next;
      next.reg.sigma = s.reg.sigma;
      next.reg.sigma.back() = inner_next->reg;
      return Out{std::move(next), OmegaKind::RuleCi};
    }
    return std::nullopt;
  }

  return std::nullopt;  // second cell filled without the first: unreachable
}

// Runs the lifted machine from an arbitrary state.
template <class X, class Y, class R>
OmegaRunOutcome<R, X, Y> run_omega_from(const OmegaSpec<X, Y, R>& spec,
                                        MultiOracle<X, Y>& oracle,
                                        OmegaState<R, X, Y> state, Nat fuel) {
  OmegaRunOutcome<R, X, Y> out;
  out.trace.entries.push_back({state, OmegaKind::Initial, std::nullopt,
                               std::nullopt, std::nullopt});
  for (;;) {
    if (is_end_omega(spec, state)) {
      out.status = RunStatus::Terminated;
      return out;
    }
    if (out.trace.steps_used == fuel) {
      out.status = RunStatus::FuelExhausted;
      return out;
    }
    const bool q1 = in_first_query(spec, state);
    const bool q2 = in_second_query(spec, state);
    if (q1 && q2) throw std::logic_error("query classes overlap");
    if (q1) {
      PaddedSequence<X> q = xi_omega(spec, state.reg);
      Nat a = oracle.answer_first(q);
      state.cell1 = a;
      out.trace.entries.push_back(
          {state, OmegaKind::Oracle1, std::move(q), a, std::nullopt});
    } else if (q2) {
      PaddedSequence<X> q = xi_omega(spec, state.reg);
      Y a = oracle.answer_second(q);
      state.cell2 = a;
      out.trace.entries.push_back(
          {state, OmegaKind::Oracle2, std::move(q), std::nullopt, a});
    } else {
      auto r = omega_step(spec, state);
      if (!r) {
        out.status = RunStatus::Stuck;
        return out;
      }
      state = r->first;
      out.trace.entries.push_back(
          {state, r->second, std::nullopt, std::nullopt, std::nullopt});
    }
    ++out.trace.steps_used;
  }
}

// Runs the lifted machine from its initial state: a single fresh inner run
// on the empty input (the inner input map must accept the empty sequence).
template <class X, class Y, class R>
OmegaRunOutcome<R, X, Y> run_omega(const OmegaSpec<X, Y, R>& spec,
                                   MultiOracle<X, Y>& oracle, Nat fuel) {
  oracle.reset();
  OmegaState<R, X, Y> init;
  init.reg.sigma.push_back(spec.inner.osa.rho(std::vector<X>{}));
  return run_omega_from(spec, oracle, std::move(init), fuel);
}

// Builds the lifted machine after structurally validating the inner one on
// the given sample states.  Throws std::invalid_argument when validation
// fails: the transition rules above are exhaustive only for machines whose
// plain steps never invent answers.
template <class X, class Y, class R>
OmegaSpec<X, Y, R> lift(ApproxSpec<std::vector<X>, X, Y, R> inner, X fill,
                        const std::vector<MachineState<R, Y>>& samples = {}) {
  auto report = validate_approx(inner, samples);
  if (!report.ok()) {
    throw std::invalid_argument("inner machine failed validation: " +
                                report.violations.front().condition + " at " +
                                report.violations.front().state);
  }
  return OmegaSpec<X, Y, R>{std::move(inner), std::move(fill)};
}

// Level of a transition, judged from its source state: pushes and oracle
// answers happen at the full stack height, inner work and pops at the
// height of the stack below the top register.
template <class R, class X, class Y>
Nat transition_level(const OmegaState<R, X, Y>& source, OmegaKind kind) {
  const Nat height = static_cast<Nat>(source.reg.sigma.size());
  switch (kind) {
    case OmegaKind::Oracle1:
    case OmegaKind::Oracle2:
    case OmegaKind::RuleA:
      return height;
    case OmegaKind::RuleB:
    case OmegaKind::RuleCi:
    case OmegaKind::RuleCii:
    case OmegaKind::RuleCiii:
      return height == 0 ? 0 : height - 1;
    case OmegaKind::Initial:
      break;
  }
  throw std::invalid_argument("initial entries have no transition level");
}

// Levels of all transitions of a trace, in order (one per non-initial entry).
template <class R, class X, class Y>
std::vector<Nat> trace_levels(const OmegaTrace<R, X, Y>& trace) {
  std::vector<Nat> out;
  for (std::size_t i = 1; i < trace.entries.size(); ++i) {
    out.push_back(
        transition_level(trace.entries[i - 1].state, trace.entries[i].kind));
  }
  return out;
}

// The lifted machine's guarantee at an end state ⟨[], a | n, y⟩: with alpha
// the buffer padded by fill, the inner predicate accepts stage n, that is,
// P(first n values of alpha, alpha at n, y).
template <class X, class Y>
bool check_p_omega(const PairPredicate<std::vector<X>, X, Y>& p,
                   const PaddedSequence<X>& alpha, Nat n, const Y& y) {
  return p(alpha.first(static_cast<std::size_t>(n)),
           alpha.at(static_cast<std::size_t>(n)), y);
}

// The realized triple of a terminated lifted run: the constructed sequence
// alpha (buffer padded by fill) and the final stage/answer pair.
template <class X, class Y>
struct OmegaResult {
  PaddedSequence<X> alpha;
  Nat stage = 0;
  Y answer{};
};

template <class X, class Y, class R>
std::optional<OmegaResult<X, Y>> omega_result(
    const OmegaSpec<X, Y, R>& spec, const OmegaRunOutcome<R, X, Y>& out) {
  if (out.status != RunStatus::Terminated) return std::nullopt;
  const auto& fin = out.final_state();
  return OmegaResult<X, Y>{PaddedSequence<X>{fin.reg.buffer, spec.fill},
                           *fin.cell1, *fin.cell2};
}

// Witness extraction through the lift: runs the machine and applies g to
// the evolving approximation xi_omega at every state.  On termination the
// last stream element is g(alpha).
template <class W, class X, class Y, class R>
struct OmegaWitnessExtraction {
  RunStatus status = RunStatus::Stuck;
  std::optional<W> value;
  std::vector<W> stream;
  OmegaRunOutcome<R, X, Y> outcome;
};

template <class W, class X, class Y, class R>
OmegaWitnessExtraction<W, X, Y, R> extract_witness_omega(
    const OmegaSpec<X, Y, R>& spec,
    const std::function<W(const PaddedSequence<X>&)>& g,
    MultiOracle<X, Y>& oracle, Nat fuel) {
  OmegaWitnessExtraction<W, X, Y, R> out;
  out.outcome = run_omega(spec, oracle, fuel);
  out.status = out.outcome.status;
  for (const auto& e : out.outcome.trace.entries) {
    out.stream.push_back(g(xi_omega(spec, e.state.reg)));
  }
  if (out.status == RunStatus::Terminated && !out.stream.empty()) {
    out.value = out.stream.back();
  }
  return out;
}

// Membership probe for the class of first oracles that keep lifted runs
// finite: phi1 belongs to it when every sequence gamma admits a stage N
// with phi1(first N values of gamma, padded with gamma's fill) < N.  The
// probe searches N up to `bound` on each sample sequence.
template <class X>
struct BoundednessReport {
  struct Sample {
    PaddedSequence<X> gamma;
    std::optional<Nat> witness;  // least N with phi1(gamma_N::fill) < N
  };

  std::vector<Sample> samples;

  bool conclusive() const {
    for (const auto& s : samples) {
      if (!s.witness) return false;
    }
    return true;
  }
};

template <class X>
BoundednessReport<X> in_F1_on_samples(
    const std::function<Nat(const PaddedSequence<X>&)>& phi1,
    const std::vector<PaddedSequence<X>>& gammas, Nat bound) {
  BoundednessReport<X> report;
  for (const auto& gamma : gammas) {
    typename BoundednessReport<X>::Sample sample{gamma, std::nullopt};
    for (Nat n = 0; n <= bound; ++n) {
      PaddedSequence<X> truncated{gamma.first(static_cast<std::size_t>(n)),
                                  gamma.fill};
      if (phi1(truncated) < n) {
        sample.witness = n;
        break;
      }
    }
    report.samples.push_back(std::move(sample));
  }
  return report;
}

// Worst-case oracle-call counts for a lifted run whose stack height never
// exceeds n+1, where h(i) bounds the questions a single inner run asks on
// an input of length i:
//   first oracle:   sum over j=0..n of prod over i=0..j of h(i)
//   second oracle:  prod over i=0..n of h(i)
struct OracleCallBounds {
  Nat first_calls = 0;
  Nat second_calls = 0;
  bool overflow = false;
};

inline OracleCallBounds mind_change_bounds(const std::function<Nat(Nat)>& h,
                                           Nat n) {
  OracleCallBounds out;
  Nat sum = 0;
  Nat prod = 1;
  for (Nat j = 0; j <= n; ++j) {
    if (__builtin_mul_overflow(prod, h(j), &prod) ||
        __builtin_add_overflow(sum, prod, &sum)) {
      out.overflow = true;
      return out;
    }
  }
  out.first_calls = sum;
  out.second_calls = prod;
  return out;
}

}  // namespace osa
