#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "osa/casebook.hpp"
#include "osa/dclift.hpp"
#include "osa/trace_io.hpp"
#include "support/io.hpp"
#include "support/synthetic.hpp"

using namespace osa;

namespace {

TapeContext ctx_b011() {
  return make_tape_context({false, true, true}, TapeExtend::RepeatLast, 2);
}

TapeContext ctx_b1010() {
  return make_tape_context({true, false, true, false}, TapeExtend::RepeatLast,
                           2);
}

}  // namespace

TEST_CASE("padded sequences compare extensionally") {
  PaddedSequence<Nat> a{{0, 1, 0}, 0};
  PaddedSequence<Nat> b{{0, 1}, 0};
  CHECK(a == b);
  CHECK(a.canonical_size() == 2);
  CHECK(PaddedSequence<Nat>{{0, 0}, 0}.canonical_size() == 0);
  CHECK(!(PaddedSequence<Nat>{{0, 1}, 0} == PaddedSequence<Nat>{{0, 1}, 1}));
  CHECK(a.at(1) == 1);
  CHECK(a.at(9) == 0);
  CHECK(a.first(4) == std::vector<Nat>{0, 1, 0, 0});
  CHECK(repr(b) == "[0,1]::0^ω");
}

TEST_CASE("the multi oracle memoizes extensionally equal questions") {
  Nat calls = 0;
  MultiOracle<Nat, Nat> oracle(
      [&calls](const PaddedSequence<Nat>& q) {
        ++calls;
        return static_cast<Nat>(q.canonical_size());
      },
      [](const PaddedSequence<Nat>&) { return Nat{0}; });
  CHECK(oracle.answer_first(PaddedSequence<Nat>{{0, 1, 0}, 0}) == 2);
  CHECK(oracle.answer_first(PaddedSequence<Nat>{{0, 1}, 0}) == 2);
  CHECK(calls == 1);
  CHECK(oracle.first_log().size() == 1);
}

TEST_CASE("the stage outputs follow the stack and the buffer") {
  auto spec = tape_omega(ctx_b011());
  LiftedRegister<SymReg, Nat> reg;
  reg.sigma = {SymReg{"cs", 0}, SymReg{"ce2", 4}};
  reg.buffer = {5, 7};
  CHECK(xi_star(spec, reg.sigma) == std::vector<Nat>{0, 4});
  auto alpha = xi_omega(spec, reg);
  CHECK(alpha.prefix == std::vector<Nat>{0, 4, 5, 7});
  CHECK(alpha.fill == 0);
}

TEST_CASE("the lifted tape run reproduces both recorded traces") {
  for (const auto& [make, name] :
       {std::pair{&ctx_b011, "tape_b011_n2"},
        std::pair{&ctx_b1010, "tape_b1010_n2"}}) {
    auto ctx = make();
    auto spec = tape_omega(ctx);
    auto oracle = tape_oracle(ctx);
    auto out = run_omega(spec, oracle, 1000);
    REQUIRE(out.status == RunStatus::Terminated);
    CHECK(render_omega_trace_text(out.trace) ==
          testing::read_file(std::string(GOLDEN_DIR) + "/" + name +
                             ".trace.txt"));
  }
}

TEST_CASE("transition levels track the stack height") {
  auto ctx = ctx_b011();
  auto spec = tape_omega(ctx);
  auto oracle = tape_oracle(ctx);
  auto out = run_omega(spec, oracle, 1000);
  REQUIRE(out.status == RunStatus::Terminated);
  CHECK(trace_levels(out.trace) ==
        std::vector<Nat>{1, 1, 2, 2, 1, 1, 0, 0});
}

TEST_CASE("the realized stage pair satisfies the stage predicate") {
  for (auto make : {&ctx_b011, &ctx_b1010}) {
    auto ctx = make();
    auto spec = tape_omega(ctx);
    auto oracle = tape_oracle(ctx);
    auto out = run_omega(spec, oracle, 1000);
    REQUIRE(out.status == RunStatus::Terminated);
    auto result = omega_result(spec, out);
    REQUIRE(result.has_value());
    CHECK(check_p_omega(tape_p(ctx), result->alpha, result->stage,
                        result->answer));
  }
}

TEST_CASE("the realized triple of the first recorded run") {
  auto ctx = ctx_b011();
  auto spec = tape_omega(ctx);
  auto oracle = tape_oracle(ctx);
  auto result = omega_result(spec, run_omega(spec, oracle, 1000));
  REQUIRE(result.has_value());
  CHECK(result->alpha == PaddedSequence<Nat>{{0, 1}, 0});
  CHECK(result->stage == 1);
  CHECK(result->answer == 2);
}

TEST_CASE("witness extraction through the lift ends at the tape witness") {
  auto ctx = ctx_b011();
  auto spec = tape_omega(ctx);
  auto oracle = tape_oracle(ctx);
  auto ext = extract_witness_omega<std::vector<Nat>>(spec, tape_g(ctx), oracle,
                                                     1000);
  REQUIRE(ext.status == RunStatus::Terminated);
  CHECK(ext.value == std::vector<Nat>{1, 2});
  CHECK(ext.stream.back() == *ext.value);
  CHECK(tape_q(ctx)(*ext.value));
}

TEST_CASE("a run replayed from a recorded state continues identically") {
  auto ctx = ctx_b011();
  auto spec = tape_omega(ctx);
  auto oracle = tape_oracle(ctx);
  auto full = run_omega(spec, oracle, 1000);
  REQUIRE(full.status == RunStatus::Terminated);
  const std::size_t split = 2;  // state after the first push
  auto replay_oracle = tape_oracle(ctx);
  auto suffix = run_omega_from(spec, replay_oracle,
                               full.trace.entries[split].state, 1000);
  REQUIRE(suffix.status == RunStatus::Terminated);
  REQUIRE(suffix.trace.entries.size() ==
          full.trace.entries.size() - split);
  for (std::size_t i = 1; i < suffix.trace.entries.size(); ++i) {
    CHECK(suffix.trace.entries[i].state ==
          full.trace.entries[split + i].state);
    CHECK(suffix.trace.entries[i].kind == full.trace.entries[split + i].kind);
  }
}

TEST_CASE("query classes never overlap on the lifted tape machine") {
  auto ctx = ctx_b011();
  auto spec = tape_omega(ctx);
  auto oracle = tape_oracle(ctx);
  auto out = run_omega(spec, oracle, 1000);
  for (const auto& e : out.trace.entries) {
    CHECK(!(in_first_query(spec, e.state) && in_second_query(spec, e.state)));
  }
}

TEST_CASE("lifting rejects an inner machine that fails validation") {
  auto broken = tape_machine(ctx_b011());
  broken.osa.pi = [](const MachineState<SymReg, Nat>& s) {
    return s.reg.second + 1;
  };
  CHECK_THROWS_AS(lift(broken, Nat{0}, tape_sample_states()),
                  std::invalid_argument);
}

TEST_CASE("an inner state that is both final and steppable is rejected") {
  using State = MachineState<Nat, Nat>;
  ApproxSpec<std::vector<Nat>, Nat, Nat, Nat> inner;
  inner.osa.is_query = [](const State&) { return false; };
  inner.osa.is_end = [](const State& s) { return s.cell.has_value(); };
  inner.osa.rho = [](const std::vector<Nat>&) { return Nat{0}; };
  inner.osa.xi = [](const Nat& r) { return r; };
  inner.osa.pi = [](const State& s) { return s.reg; };
  inner.osa.step = [](const State& s) -> std::optional<State> {
    return State{s.reg + 1, s.cell};
  };
  OmegaSpec<Nat, Nat, Nat> spec{inner, 0};
  OmegaState<Nat, Nat, Nat> both;
  both.reg.sigma = {4};
  both.cell1 = 0;
  both.cell2 = 9;
  CHECK_THROWS_AS(omega_step(spec, both), std::logic_error);
}

TEST_CASE("bounded stage oracles admit a finite stage on every sample") {
  std::function<Nat(const PaddedSequence<Nat>&)> constant3 =
      [](const PaddedSequence<Nat>&) { return Nat{3}; };
  std::vector<PaddedSequence<Nat>> gammas = {
      {{}, 0}, {{5}, 0}, {{2, 4, 6}, 0}, {{9, 9, 9, 9}, 0}};
  auto report = in_F1_on_samples(constant3, gammas, 10);
  REQUIRE(report.conclusive());
  for (const auto& s : report.samples) CHECK(*s.witness == 4);

  auto tight = in_F1_on_samples(constant3, gammas, 3);
  CHECK(!tight.conclusive());

  auto phi1 = testing::synthetic_phi1(2, 3, 11);
  auto hashed = in_F1_on_samples(phi1, gammas, 3);
  CHECK(hashed.conclusive());
}

TEST_CASE("oracle call bounds match the hand-computed cases") {
  auto b1 = mind_change_bounds([](Nat) { return Nat{1}; }, 3);
  CHECK(!b1.overflow);
  CHECK(b1.first_calls == 4);
  CHECK(b1.second_calls == 1);

  auto b2 = mind_change_bounds([](Nat) { return Nat{2}; }, 2);
  CHECK(!b2.overflow);
  CHECK(b2.first_calls == 14);
  CHECK(b2.second_calls == 8);

  auto b3 = mind_change_bounds([](Nat i) { return i + 1; }, 2);
  CHECK(!b3.overflow);
  CHECK(b3.first_calls == 9);
  CHECK(b3.second_calls == 6);

  auto huge = mind_change_bounds([](Nat) { return Nat{1} << 32; }, 3);
  CHECK(huge.overflow);
}

TEST_CASE("synthetic lifts terminate and satisfy the stage predicate") {
  testing::SynParams params;
  auto inner = testing::synthetic_machine(params);
  auto spec = lift(inner, Nat{0}, testing::synthetic_sample_states(params));
  auto p = testing::synthetic_p(params);
  for (Nat salt = 0; salt < 10; ++salt) {
    MultiOracle<Nat, Nat> oracle(testing::synthetic_phi1(2, 4, salt),
                                 testing::synthetic_phi2(params.mod, 4, salt));
    auto out = run_omega(spec, oracle, 100000);
    REQUIRE(out.status == RunStatus::Terminated);
    auto result = omega_result(spec, out);
    REQUIRE(result.has_value());
    CHECK(check_p_omega(p, result->alpha, result->stage, result->answer));
  }
}
