#include "osa/casebook.hpp"

#include <algorithm>
#include <stdexcept>

namespace osa {

namespace {

constexpr const char* kScan = "cs";
constexpr const char* kMoved = "ce1";
constexpr const char* kStay = "ce2";
constexpr const char* kEnd = "ce";
constexpr const char* kAskWitness = "c0";
constexpr const char* kAskValue = "c1";
constexpr const char* kRefuted = "ce";

}  // namespace

// --- euclid ---------------------------------------------------------------

OsaSpec<std::pair<Nat, Nat>, Nat, Nat, Nat, PairReg> euclid_machine() {
  using State = MachineState<PairReg, Nat>;
  OsaSpec<std::pair<Nat, Nat>, Nat, Nat, Nat, PairReg> m;
  m.is_query = [](const State&) { return false; };
  m.is_end = [](const State& s) { return s.reg.second == 0; };
  m.rho = [](const std::pair<Nat, Nat>& u) {
    return PairReg{std::max(u.first, u.second), std::min(u.first, u.second)};
  };
  m.xi = [](const PairReg& r) { return r.first; };
  m.pi = [](const State& s) { return s.reg.first; };
  m.step = [](const State& s) -> std::optional<State> {
    if (s.reg.second == 0) return std::nullopt;
    return State{PairReg{s.reg.second, s.reg.first % s.reg.second},
                 std::nullopt};
  };
  return m;
}

// --- max ------------------------------------------------------------------

OsaSpec<Nat, Nat, Nat, Nat, PairReg> max_machine() {
  using State = MachineState<PairReg, Nat>;
  OsaSpec<Nat, Nat, Nat, Nat, PairReg> m;
  m.is_query = [](const State& s) { return !s.cell && s.reg.second > 0; };
  m.is_end = [](const State& s) { return !s.cell && s.reg.second == 0; };
  m.rho = [](const Nat& n) { return PairReg{0, n + 1}; };
  m.xi = [](const PairReg& r) { return r.second == 0 ? 0 : r.second - 1; };
  m.pi = [](const State& s) { return s.reg.first; };
  m.step = [](const State& s) -> std::optional<State> {
    if (!s.cell || s.reg.second == 0) return std::nullopt;
    return State{PairReg{std::max(s.reg.first, *s.cell), s.reg.second - 1},
                 std::nullopt};
  };
  return m;
}

// --- least element --------------------------------------------------------

ApproxSpec<Nat, Nat, Nat, SymReg> least_element_machine(
    LeastElementContext ctx) {
  using State = MachineState<SymReg, Nat>;
  ApproxSpec<Nat, Nat, Nat, SymReg> m;
  m.osa.is_query = [](const State& s) {
    return !s.cell && s.reg.first == kScan;
  };
  m.osa.is_end = [](const State& s) {
    return s.cell.has_value() && s.reg.first == kEnd;
  };
  m.osa.rho = [](const Nat& u) { return SymReg{kScan, u}; };
  m.osa.xi = [](const SymReg& r) { return r.second; };
  m.osa.pi = [](const State& s) { return s.reg.second; };
  m.osa.step = [member = ctx.member](const State& s) -> std::optional<State> {
    if (!s.cell || s.reg.first != kScan) return std::nullopt;
    const Nat x = s.reg.second;
    const Nat y = *s.cell;
    if (y < x && member(y)) return State{SymReg{kScan, y}, std::nullopt};
    return State{SymReg{kEnd, x}, s.cell};
  };
  return m;
}

PairPredicate<Nat, Nat, Nat> least_element_p(LeastElementContext ctx) {
  return [member = ctx.member](const Nat& u, const Nat& x, const Nat& y) {
    if (!member(u)) return true;
    return member(x) && !(y < x && member(y));
  };
}

DescentOrder<Nat> least_descent_order() {
  return DescentOrder<Nat>{[](const Nat& a, const Nat& b) { return a > b; }};
}

FlowGraph least_element_graph() {
  const Vertex scan_wait = Vertex::named("cs'");
  const Vertex scan = Vertex::named(kScan);
  const Vertex end = Vertex::named(kEnd);
  FlowGraph g;
  g.add_oracle(scan_wait, scan);
  g.add_plain(scan, scan_wait);
  g.add_plain(scan, end);
  return g;
}

std::function<Vertex(const MachineState<SymReg, Nat>&)>
least_element_projection() {
  return [](const MachineState<SymReg, Nat>& s) {
    if (s.reg.first == kScan) {
      return Vertex::named(s.cell ? kScan : "cs'");
    }
    return Vertex::named(kEnd);
  };
}

std::set<Vertex> least_element_initial_atoms() {
  return {Vertex::named("cs'")};
}

std::set<Vertex> least_element_final_atoms() {
  return {Vertex::named(kEnd)};
}

std::vector<MachineState<SymReg, Nat>> least_element_sample_states() {
  std::vector<MachineState<SymReg, Nat>> out;
  for (const char* sym : {kScan, kEnd}) {
    for (Nat x = 0; x <= 12; ++x) {
      out.push_back({SymReg{sym, x}, std::nullopt});
      for (Nat y = 0; y <= 12; ++y) out.push_back({SymReg{sym, x}, y});
    }
  }
  return out;
}

// --- halting realizer -----------------------------------------------------

ApproxSpec<Nat, Nat, Nat, HaltReg> halting_machine(HaltingContext ctx) {
  using State = MachineState<HaltReg, Nat>;
  ApproxSpec<Nat, Nat, Nat, HaltReg> m;
  m.osa.is_query = [](const State& s) {
    const auto& tag = std::get<0>(s.reg);
    return !s.cell && (tag == kAskWitness || tag == kAskValue);
  };
  m.osa.is_end = [](const State& s) {
    const auto& tag = std::get<0>(s.reg);
    return s.cell.has_value() && (tag == kRefuted || tag == kAskValue);
  };
  m.osa.rho = [](const Nat& u) { return HaltReg{kAskWitness, u, 0}; };
  m.osa.xi = [](const HaltReg& r) { return std::get<2>(r); };
  m.osa.pi = [](const State& s) { return std::get<2>(s.reg); };
  m.osa.step = [halts = ctx.halts](const State& s) -> std::optional<State> {
    if (!s.cell || std::get<0>(s.reg) != kAskWitness) return std::nullopt;
    const Nat u = std::get<1>(s.reg);
    const Nat y = *s.cell;
    if (halts(u, y)) {
      return State{HaltReg{kAskValue, u, y}, std::nullopt};
    }
    return State{HaltReg{kRefuted, u, std::get<2>(s.reg)}, s.cell};
  };
  return m;
}

PairPredicate<Nat, Nat, Nat> halting_p(HaltingContext ctx) {
  return [halts = ctx.halts](const Nat& u, const Nat& x, const Nat& y) {
    return halts(u, x) || !halts(u, y);
  };
}

std::vector<MachineState<HaltReg, Nat>> halting_sample_states() {
  std::vector<MachineState<HaltReg, Nat>> out;
  for (const char* tag : {kAskWitness, kRefuted, kAskValue}) {
    for (Nat u = 0; u <= 6; ++u) {
      for (Nat x = 0; x <= 6; ++x) {
        out.push_back({HaltReg{tag, u, x}, std::nullopt});
        for (Nat y = 0; y <= 6; ++y) out.push_back({HaltReg{tag, u, x}, y});
      }
    }
  }
  return out;
}

// --- tape -----------------------------------------------------------------

TapeContext make_tape_context(const std::vector<bool>& pattern,
                              TapeExtend extend, Nat n) {
  if (pattern.empty()) {
    throw std::invalid_argument("tape pattern must not be empty");
  }
  if (n == 0) throw std::invalid_argument("run length must be at least 1");
  TapeContext ctx;
  ctx.n = n;
  switch (extend) {
    case TapeExtend::RepeatLast:
      ctx.bit = [pattern](Nat i) {
        return i < pattern.size() ? pattern[static_cast<std::size_t>(i)]
                                  : pattern.back();
      };
      break;
    case TapeExtend::Cycle:
      ctx.bit = [pattern](Nat i) {
        return pattern[static_cast<std::size_t>(i % pattern.size())];
      };
      break;
    case TapeExtend::Constant:
      ctx.bit = [pattern](Nat i) {
        return i < pattern.size() ? pattern[static_cast<std::size_t>(i)]
                                  : false;
      };
      break;
  }
  return ctx;
}

ApproxSpec<std::vector<Nat>, Nat, Nat, SymReg> tape_machine(
    const TapeContext& ctx) {
  using State = MachineState<SymReg, Nat>;
  ApproxSpec<std::vector<Nat>, Nat, Nat, SymReg> m;
  m.osa.is_query = [](const State& s) {
    return !s.cell && (s.reg.first == kScan || s.reg.first == kMoved);
  };
  m.osa.is_end = [](const State& s) {
    return s.cell.has_value() &&
           (s.reg.first == kMoved || s.reg.first == kStay);
  };
  m.osa.rho = [](const std::vector<Nat>& u) {
    return SymReg{kScan, u.empty() ? 0 : u.back() + 1};
  };
  m.osa.xi = [](const SymReg& r) { return r.second; };
  m.osa.pi = [](const State& s) { return s.reg.second; };
  m.osa.step = [bit = ctx.bit](const State& s) -> std::optional<State> {
    if (!s.cell || s.reg.first != kScan) return std::nullopt;
    const Nat x = s.reg.second;
    const Nat y = *s.cell;
    if (bit(x) && x <= y && !bit(y)) {
      return State{SymReg{kMoved, y}, std::nullopt};
    }
    return State{SymReg{kStay, x}, s.cell};
  };
  return m;
}

PairPredicate<std::vector<Nat>, Nat, Nat> tape_p(const TapeContext& ctx) {
  return [bit = ctx.bit](const std::vector<Nat>& u, const Nat& x,
                         const Nat& y) {
    if (!u.empty() && !(u.back() < x)) return false;
    return !(bit(x) && x <= y) || bit(y);
  };
}

std::function<bool(const std::vector<Nat>&)> tape_q(const TapeContext& ctx) {
  return [bit = ctx.bit, n = ctx.n](const std::vector<Nat>& v) {
    if (v.size() != n) return false;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      if (!(v[i] < v[i + 1])) return false;
      if (bit(v[i]) != bit(v[i + 1])) return false;
    }
    return true;
  };
}

// Stage selector: the first stage whose value breaks the strict increase or
// carries a 1 label; with no such stage, the last one.
std::function<Nat(const PaddedSequence<Nat>&)> tape_f1(
    const TapeContext& ctx) {
  return [bit = ctx.bit, n = ctx.n](const PaddedSequence<Nat>& alpha) {
    for (Nat i = 0; i < n; ++i) {
      const bool broken =
          i > 0 && !(alpha.at(static_cast<std::size_t>(i - 1)) <
                     alpha.at(static_cast<std::size_t>(i)));
      if (broken || bit(alpha.at(static_cast<std::size_t>(i)))) return i;
    }
    return n - 1;
  };
}

// Inner answer at the selected stage: from a 1-labeled value, the first
// 0-labeled position within the next n slots (or the last slot if the whole
// window is 1-labeled); from a 0-labeled value, the last slot directly.
std::function<Nat(const PaddedSequence<Nat>&)> tape_f2(
    const TapeContext& ctx) {
  auto f1 = tape_f1(ctx);
  return [bit = ctx.bit, n = ctx.n, f1](const PaddedSequence<Nat>& alpha) {
    const Nat x = alpha.at(static_cast<std::size_t>(f1(alpha)));
    if (bit(x)) {
      for (Nat y = x; y < x + n; ++y) {
        if (!bit(y)) return y;
      }
    }
    return x + n - 1;
  };
}

// Candidate witness: a window of n positions from the selected stage's value
// when it is 1-labeled (hoping the window stays 1-labeled), else the first n
// stage values themselves.
std::function<std::vector<Nat>(const PaddedSequence<Nat>&)> tape_g(
    const TapeContext& ctx) {
  auto f1 = tape_f1(ctx);
  return [bit = ctx.bit, n = ctx.n, f1](const PaddedSequence<Nat>& alpha) {
    const Nat x = alpha.at(static_cast<std::size_t>(f1(alpha)));
    if (bit(x)) {
      std::vector<Nat> window;
      window.reserve(static_cast<std::size_t>(n));
      for (Nat y = x; y < x + n; ++y) window.push_back(y);
      return window;
    }
    return alpha.first(static_cast<std::size_t>(n));
  };
}

MultiOracle<Nat, Nat> tape_oracle(const TapeContext& ctx) {
  return MultiOracle<Nat, Nat>(tape_f1(ctx), tape_f2(ctx));
}

OmegaSpec<Nat, Nat, SymReg> tape_omega(const TapeContext& ctx) {
  return lift(tape_machine(ctx), Nat{0}, tape_sample_states());
}

TapeWitness tape_witness(const TapeContext& ctx, Nat fuel) {
  auto spec = tape_omega(ctx);
  auto oracle = tape_oracle(ctx);
  auto extraction = extract_witness_omega<std::vector<Nat>>(
      spec, tape_g(ctx), oracle, fuel);
  TapeWitness out;
  out.status = extraction.status;
  if (extraction.value) out.v = *extraction.value;
  out.outcome = std::move(extraction.outcome);
  return out;
}

DescentOrder<Nat> tape_descent_order() {
  return DescentOrder<Nat>{[](const Nat& a, const Nat& b) { return a < b; }};
}

FlowGraph tape_graph() {
  const Vertex scan_wait = Vertex::named("cs'");
  const Vertex scan = Vertex::named(kScan);
  const Vertex moved_wait = Vertex::named("ce'");
  const Vertex end = Vertex::named(kEnd);
  FlowGraph g;
  g.add_oracle(scan_wait, scan);
  g.add_oracle(moved_wait, end);
  g.add_plain(scan, moved_wait);
  g.add_plain(scan, end);
  return g;
}

std::function<Vertex(const MachineState<SymReg, Nat>&)> tape_projection() {
  return [](const MachineState<SymReg, Nat>& s) {
    if (s.reg.first == kScan) {
      return Vertex::named(s.cell ? kScan : "cs'");
    }
    // Both end registers answer to the same summary; an empty cell means
    // the moved register is about to ask its confirmation question.
    return Vertex::named(s.cell ? kEnd : "ce'");
  };
}

std::set<Vertex> tape_initial_atoms() { return {Vertex::named("cs'")}; }

std::set<Vertex> tape_final_atoms() { return {Vertex::named(kEnd)}; }

std::vector<MachineState<SymReg, Nat>> tape_sample_states() {
  std::vector<MachineState<SymReg, Nat>> out;
  for (const char* sym : {kScan, kMoved, kStay}) {
    for (Nat x = 0; x <= 12; ++x) {
      out.push_back({SymReg{sym, x}, std::nullopt});
      for (Nat y = 0; y <= 12; ++y) out.push_back({SymReg{sym, x}, y});
    }
  }
  return out;
}

}  // namespace osa
