#pragma once

#include <compare>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "osa/approx.hpp"
#include "osa/dclift.hpp"
#include "osa/engine.hpp"

// Control-flow graphs over machine runs.
//
// A machine is summarized by projecting each state to a vertex of a finite
// graph with two edge sorts: plain edges cover plain transitions and oracle
// edges cover query answers.  A graph is correct for a machine when every
// reachable transition projects into an edge of the matching sort; the
// checker below verifies that on recorded runs.  The lift construction
// turns a correct graph for an inner machine into one for its
// dependent-choice lift, with vertices tagged by a stack level and a
// bottom/top phase (top means a stage answer is on hand but the inner run
// for it has not produced its value yet).

namespace osa {

struct Vertex {
  enum class Kind { Atom, Leveled, Star };
  enum class Phase { Bot, Top };

  Kind kind = Kind::Atom;
  Phase phase = Phase::Bot;  // meaningful for Leveled only
  Nat level = 0;             // meaningful for Leveled only
  std::string atom;          // meaningful for Atom and Leveled

  static Vertex named(std::string name);
  static Vertex leveled(Phase phase, Nat level, std::string name);
  static Vertex star();

  std::string render() const;

  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

using Edge = std::pair<Vertex, Vertex>;

struct FlowGraph {
  std::set<Vertex> vertices;
  std::set<Edge> plain_edges;
  std::set<Edge> oracle_edges;

  FlowGraph& add_plain(const Vertex& from, const Vertex& to);
  FlowGraph& add_oracle(const Vertex& from, const Vertex& to);

  friend bool operator==(const FlowGraph&, const FlowGraph&) = default;
};

// Deterministic DOT rendering: vertices first, then plain edges, then
// oracle edges (drawn dotted), each block sorted by rendered name.
std::string emit_dot(const FlowGraph& graph, const std::string& name);

// A single projected transition of some recorded run.
struct ProjectedStep {
  Vertex from;
  Vertex to;
  bool oracle = false;
};

struct CfgVerdict {
  struct Violation {
    ProjectedStep step;
    std::string reason;
  };

  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

// Checks that every projected step follows an edge of its sort and that
// every touched vertex is declared.
CfgVerdict verify_cfg(const FlowGraph& graph,
                      const std::vector<ProjectedStep>& steps);

// Lifts a correct graph of atom vertices to the dependent-choice lift, up
// to stack level `max_level`.  `omega_i` are the atoms of initial inner
// states (targets of a push), `omega_e` the atoms of final inner states
// (sources of a pop).  Every (phase, level, atom) combination becomes a
// vertex; the star vertex absorbs level-0 pops.
FlowGraph lift_cfg(const FlowGraph& inner, const std::set<Vertex>& omega_i,
                   const std::set<Vertex>& omega_e, Nat max_level);

// Projects a run of a plain machine onto graph vertices.
template <class R, class X, class Y>
std::vector<Vertex> projected_path(
    const Trace<R, X, Y>& trace,
    const std::function<Vertex(const MachineState<R, Y>&)>& proj) {
  std::vector<Vertex> out;
  out.reserve(trace.entries.size());
  for (const auto& e : trace.entries) out.push_back(proj(e.state));
  return out;
}

template <class R, class X, class Y>
std::vector<ProjectedStep> project_steps(
    const Trace<R, X, Y>& trace,
    const std::function<Vertex(const MachineState<R, Y>&)>& proj) {
  std::vector<ProjectedStep> out;
  for (std::size_t i = 1; i < trace.entries.size(); ++i) {
    out.push_back({proj(trace.entries[i - 1].state),
                   proj(trace.entries[i].state),
                   trace.entries[i].kind == TransitionKind::OracleQuery});
  }
  return out;
}

// Projects a lifted state onto a vertex: the empty stack maps to star, and
// otherwise the top register (with the second cell) is projected by the
// inner projection, tagged with the level of the top and the phase.  The
// top phase marks states holding a stage answer but no inner answer.
template <class R, class X, class Y>
Vertex project_omega(
    const OmegaState<R, X, Y>& s,
    const std::function<Vertex(const MachineState<R, Y>&)>& inner_proj) {
  if (s.reg.sigma.empty()) return Vertex::star();
  Vertex inner =
      inner_proj(MachineState<R, Y>{s.reg.sigma.back(), s.cell2});
  const auto phase =
      (s.cell1 && !s.cell2) ? Vertex::Phase::Top : Vertex::Phase::Bot;
  return Vertex::leveled(phase,
                         static_cast<Nat>(s.reg.sigma.size()) - 1,
                         inner.atom);
}

template <class R, class X, class Y>
std::vector<Vertex> projected_omega_path(
    const OmegaTrace<R, X, Y>& trace,
    const std::function<Vertex(const MachineState<R, Y>&)>& inner_proj) {
  std::vector<Vertex> out;
  out.reserve(trace.entries.size());
  for (const auto& e : trace.entries) {
    out.push_back(project_omega(e.state, inner_proj));
  }
  return out;
}

template <class R, class X, class Y>
std::vector<ProjectedStep> project_omega_steps(
    const OmegaTrace<R, X, Y>& trace,
    const std::function<Vertex(const MachineState<R, Y>&)>& inner_proj) {
  std::vector<ProjectedStep> out;
  for (std::size_t i = 1; i < trace.entries.size(); ++i) {
    const auto kind = trace.entries[i].kind;
    out.push_back({project_omega(trace.entries[i - 1].state, inner_proj),
                   project_omega(trace.entries[i].state, inner_proj),
                   kind == OmegaKind::Oracle1 || kind == OmegaKind::Oracle2});
  }
  return out;
}

// A strict order on questions, used to show runs make progress: every plain
// transition must not increase the question.
template <class X>
struct DescentOrder {
  std::function<bool(const X&, const X&)> strict;  // strict(a,b): a above b
};

template <class X>
bool descends_or_equal(const DescentOrder<X>& order, const X& a, const X& b) {
  return a == b || order.strict(a, b);
}

struct DescentVerdict {
  struct Violation {
    std::string from;
    std::string to;
  };

  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

// Checks descent along recorded plain transitions of an approximation
// machine: oracle answers leave the register alone, so only plain steps are
// compared.
template <class U, class X, class Y, class R>
DescentVerdict check_descending(const ApproxSpec<U, X, Y, R>& spec,
                                const DescentOrder<X>& order,
                                const std::vector<Trace<R, X, Y>>& traces) {
  DescentVerdict verdict;
  for (const auto& trace : traces) {
    for (std::size_t i = 1; i < trace.entries.size(); ++i) {
      if (trace.entries[i].kind != TransitionKind::Step) continue;
      const X a = spec.osa.xi(trace.entries[i - 1].state.reg);
      const X b = spec.osa.xi(trace.entries[i].state.reg);
      if (!descends_or_equal(order, a, b)) {
        verdict.violations.push_back({repr(a), repr(b)});
      }
    }
  }
  return verdict;
}

// Same check through the lift: the evolving approximation xi_omega must not
// increase in the lifted order along any transition.
template <class X, class Y, class R>
DescentVerdict check_descending_omega(
    const OmegaSpec<X, Y, R>& spec,
    const DescentOrder<PaddedSequence<X>>& order,
    const std::vector<OmegaTrace<R, X, Y>>& traces) {
  DescentVerdict verdict;
  for (const auto& trace : traces) {
    for (std::size_t i = 1; i < trace.entries.size(); ++i) {
      const auto a = xi_omega(spec, trace.entries[i - 1].state.reg);
      const auto b = xi_omega(spec, trace.entries[i].state.reg);
      if (!descends_or_equal(order, a, b)) {
        verdict.violations.push_back({repr(a), repr(b)});
      }
    }
  }
  return verdict;
}

// Lifts a strict order on X to padded sequences.  alpha is strictly above
// beta when they differ and there is a stage i on which all earlier values
// agree and either
//   - alpha's support ends before i and beta extends it with exactly the
//     value at i (growing a finished sequence), or
//   - alpha's value at i is strictly above beta's and beta's support ends
//     by i+1 (replacing a value and discarding everything after it).
// The explicit inequality keeps the order irreflexive: extending by a fill
// value does not change the sequence.
template <class X>
DescentOrder<PaddedSequence<X>> lift_order(const DescentOrder<X>& inner,
                                           const X& fill) {
  return DescentOrder<PaddedSequence<X>>{
      [inner, fill](const PaddedSequence<X>& alpha,
                    const PaddedSequence<X>& beta) {
        if (!(alpha.fill == fill) || !(beta.fill == fill)) return false;
        if (alpha == beta) return false;
        const std::size_t na = alpha.canonical_size();
        const std::size_t nb = beta.canonical_size();
        const std::size_t limit = std::max(na, nb);
        for (std::size_t i = 0; i <= limit; ++i) {
          if (i >= na && nb == i + 1) return true;
          if (nb <= i + 1 && inner.strict(alpha.at(i), beta.at(i))) {
            return true;
          }
          if (!(alpha.at(i) == beta.at(i))) break;  // agreement ends here
        }
        return false;
      }};
}

}  // namespace osa
