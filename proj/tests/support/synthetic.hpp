#pragma once

#include <cstddef>
#include <tuple>
#include <vector>

#include "osa/approx.hpp"
#include "osa/dclift.hpp"
#include "osa/engine.hpp"

// A parametric family of small approximation machines for property tests.
// A machine probes mixed question values until the oracle's answer passes
// an acceptance test or the probe depth runs out, in which case it bails
// out through a sentinel question.  Every terminated run satisfies
// synthetic_p by construction, whatever the oracle answers.
//
// Registers are (tag, x, d): tag 0 probes question x at depth d, tag 1 is
// done at x, tag 2 asks the sentinel question once, tag 3 is done bailing.

namespace osa::testing {

using SynReg = std::tuple<Nat, Nat, Nat>;

struct SynParams {
  Nat mod = 17;   // question space is [0, mod), sentinel question is mod
  Nat depth = 2;  // probes per run, at most
  Nat mix_a = 3, mix_b = 5, mix_c = 1;        // next question mix
  Nat acc_p = 2, acc_q = 3, acc_r = 1, acc_k = 4;  // acceptance test
  Nat init_c0 = 0, init_c1 = 1, init_c2 = 1;  // initial question from input
};

inline Nat synthetic_init(const SynParams& p, const std::vector<Nat>& u) {
  const Nat last = u.empty() ? 0 : u.back();
  return (p.init_c0 + last * p.init_c1 + static_cast<Nat>(u.size()) * p.init_c2) %
         p.mod;
}

inline bool synthetic_accept(const SynParams& p, Nat x, Nat y) {
  return (x * p.acc_p + y * p.acc_q + p.acc_r) % p.acc_k == 0;
}

inline Nat synthetic_mix(const SynParams& p, Nat x, Nat y, Nat d) {
  return (p.mix_a * x + p.mix_b * y + p.mix_c + d) % p.mod;
}

inline ApproxSpec<std::vector<Nat>, Nat, Nat, SynReg> synthetic_machine(
    SynParams p) {
  using State = MachineState<SynReg, Nat>;
  ApproxSpec<std::vector<Nat>, Nat, Nat, SynReg> spec;
  spec.osa.is_query = [](const State& s) {
    const Nat tag = std::get<0>(s.reg);
    return (tag == 0 || tag == 2) && !s.cell;
  };
  spec.osa.is_end = [](const State& s) {
    const Nat tag = std::get<0>(s.reg);
    return (tag == 1 || tag == 3) && s.cell.has_value();
  };
  spec.osa.rho = [p](const std::vector<Nat>& u) {
    return SynReg{0, synthetic_init(p, u), 0};
  };
  spec.osa.xi = [](const SynReg& r) { return std::get<1>(r); };
  spec.osa.pi = [](const State& s) { return std::get<1>(s.reg); };
  spec.osa.step = [p](const State& s) -> std::optional<State> {
    const auto [tag, x, d] = s.reg;
    if (!s.cell) return std::nullopt;
    const Nat y = *s.cell;
    if (tag == 0) {
      if (synthetic_accept(p, x, y)) return State{SynReg{1, x, d}, s.cell};
      if (d < p.depth) {
        return State{SynReg{0, synthetic_mix(p, x, y, d), d + 1}, std::nullopt};
      }
      return State{SynReg{2, p.mod, 0}, std::nullopt};
    }
    if (tag == 2) return State{SynReg{3, x, d}, s.cell};
    return std::nullopt;
  };
  return spec;
}

inline PairPredicate<std::vector<Nat>, Nat, Nat> synthetic_p(SynParams p) {
  return [p](const std::vector<Nat>&, const Nat& x, const Nat& y) {
    return synthetic_accept(p, x, y) || x == p.mod;
  };
}

// States covering every tag with empty and filled cells, for validation.
inline std::vector<MachineState<SynReg, Nat>> synthetic_sample_states(
    const SynParams& p) {
  std::vector<MachineState<SynReg, Nat>> out;
  for (Nat tag : {Nat{0}, Nat{1}, Nat{2}, Nat{3}}) {
    for (Nat x = 0; x <= p.mod; ++x) {
      for (Nat d = 0; d <= p.depth; ++d) {
        out.push_back({SynReg{tag, x, d}, std::nullopt});
        for (Nat y : {Nat{0}, Nat{1}, Nat{2}, p.mod}) {
          out.push_back({SynReg{tag, x, d}, y});
        }
      }
    }
  }
  return out;
}

// Deterministic FNV-style fold, the basis of the synthetic lifted oracles.
inline Nat synthetic_hash(const std::vector<Nat>& values) {
  Nat h = 1469598103934665603ull;
  for (Nat v : values) h = (h ^ (v + 1)) * 1099511628211ull;
  return h;
}

// A bounded stage oracle (values at most `bound`, so lifted runs stay
// finite) reading only the first `window` entries of its argument.
inline std::function<Nat(const PaddedSequence<Nat>&)> synthetic_phi1(
    Nat bound, std::size_t window, Nat salt) {
  return [bound, window, salt](const PaddedSequence<Nat>& gamma) {
    auto head = gamma.first(window);
    head.push_back(salt);
    return synthetic_hash(head) % (bound + 1);
  };
}

// An inner-answer oracle reading only the first `window` entries.
inline std::function<Nat(const PaddedSequence<Nat>&)> synthetic_phi2(
    Nat mod, std::size_t window, Nat salt) {
  return [mod, window, salt](const PaddedSequence<Nat>& gamma) {
    auto head = gamma.first(window);
    head.push_back(salt + 1);
    return synthetic_hash(head) % mod;
  };
}

}  // namespace osa::testing
