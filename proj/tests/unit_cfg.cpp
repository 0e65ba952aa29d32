#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "osa/casebook.hpp"
#include "osa/cfg.hpp"
#include "osa/trace_io.hpp"
#include "support/io.hpp"

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

TEST_CASE("vertices render and order deterministically") {
  CHECK(Vertex::named("cs").render() == "cs");
  CHECK(Vertex::star().render() == "star");
  CHECK(Vertex::leveled(Vertex::Phase::Bot, 0, "cs'").render() ==
        "(bot 0,cs')");
  CHECK(Vertex::leveled(Vertex::Phase::Top, 2, "ce").render() ==
        "(top 2,ce)");
  CHECK(Vertex::leveled(Vertex::Phase::Bot, 1, "a") <
        Vertex::leveled(Vertex::Phase::Top, 0, "a"));
  CHECK(Vertex::leveled(Vertex::Phase::Top, 9, "z") < Vertex::star());
}

TEST_CASE("dot output is stable and sorted") {
  FlowGraph g;
  g.add_plain(Vertex::named("a"), Vertex::named("b"));
  g.add_oracle(Vertex::named("b"), Vertex::named("a"));
  CHECK(emit_dot(g, "g") ==
        "digraph g {\n"
        "  \"a\";\n"
        "  \"b\";\n"
        "  \"a\" -> \"b\";\n"
        "  \"b\" -> \"a\" [style=dotted];\n"
        "}\n");
}

TEST_CASE("inner runs follow their flow graphs") {
  auto ctx = ctx_b011();
  auto spec = tape_machine(ctx);
  for (Nat salt = 0; salt < 6; ++salt) {
    Oracle<Nat, Nat> oracle(
        [salt](const Nat& x) { return (x * 13 + salt * 7 + 1) % 9; });
    auto out = run(spec.osa, oracle, std::vector<Nat>{salt}, 100);
    REQUIRE(out.status == RunStatus::Terminated);
    auto steps = project_steps(out.trace, tape_projection());
    CHECK(verify_cfg(tape_graph(), steps).ok());
  }

  LeastElementContext even{[](Nat v) { return v % 2 == 0; }};
  auto least = least_element_machine(even);
  Oracle<Nat, Nat> down([](const Nat& x) { return x / 2; });
  auto out = run(least.osa, down, Nat{9}, 100);
  REQUIRE(out.status == RunStatus::Terminated);
  auto steps = project_steps(out.trace, least_element_projection());
  CHECK(verify_cfg(least_element_graph(), steps).ok());
}

TEST_CASE("verify_cfg reports undeclared vertices and missing edges") {
  auto graph = tape_graph();
  std::vector<ProjectedStep> bad_vertex = {
      {Vertex::named("nowhere"), Vertex::named("cs"), false}};
  auto v1 = verify_cfg(graph, bad_vertex);
  REQUIRE(!v1.ok());
  CHECK(v1.violations.front().reason == "vertex not declared");

  std::vector<ProjectedStep> bad_edge = {
      {Vertex::named("cs"), Vertex::named("cs'"), true}};
  auto v2 = verify_cfg(graph, bad_edge);
  REQUIRE(!v2.ok());
  CHECK(v2.violations.front().reason == "missing oracle edge");

  std::vector<ProjectedStep> bad_plain = {
      {Vertex::named("ce"), Vertex::named("cs"), false}};
  auto v3 = verify_cfg(graph, bad_plain);
  REQUIRE(!v3.ok());
  CHECK(v3.violations.front().reason == "missing plain edge");
}

TEST_CASE("the lifted tape graph has the expected shape") {
  auto lifted = lift_cfg(tape_graph(), tape_initial_atoms(),
                         tape_final_atoms(), 1);
  CHECK(lifted.vertices.size() == 17);
  CHECK(lifted.plain_edges.size() == 9);
  CHECK(lifted.oracle_edges.size() == 8);
  CHECK(lifted.vertices.count(Vertex::star()) == 1);
  CHECK(lifted.plain_edges.count(
            {Vertex::leveled(Vertex::Phase::Bot, 0, "ce"), Vertex::star()}) ==
        1);
}

TEST_CASE("the lifted least element graph matches the direct enumeration") {
  const Nat max_level = 2;
  auto lifted = lift_cfg(least_element_graph(), least_element_initial_atoms(),
                         least_element_final_atoms(), max_level);

  // 3 atoms at 2 phases over 3 levels, plus star.
  CHECK(lifted.vertices.size() == 2 * 3 * (max_level + 1) + 1);
  // 2 inner plain edges per level, a push and a pop per level crossing,
  // and the level-0 exit.
  CHECK(lifted.plain_edges.size() == 2 * (max_level + 1) + max_level +
                                         max_level + 1);
  // Each inner oracle edge contributes a fetch and an answer per level.
  CHECK(lifted.oracle_edges.size() == 2 * (max_level + 1));

  FlowGraph expected;
  const auto bot = Vertex::Phase::Bot;
  const auto top = Vertex::Phase::Top;
  for (Nat n = 0; n <= max_level; ++n) {
    for (const char* atom : {"cs'", "cs", "ce"}) {
      expected.vertices.insert(Vertex::leveled(bot, n, atom));
      expected.vertices.insert(Vertex::leveled(top, n, atom));
    }
    expected.plain_edges.insert(
        {Vertex::leveled(bot, n, "cs"), Vertex::leveled(bot, n, "cs'")});
    expected.plain_edges.insert(
        {Vertex::leveled(bot, n, "cs"), Vertex::leveled(bot, n, "ce")});
    expected.oracle_edges.insert(
        {Vertex::leveled(bot, n, "cs'"), Vertex::leveled(top, n, "cs'")});
    expected.oracle_edges.insert(
        {Vertex::leveled(top, n, "cs'"), Vertex::leveled(bot, n, "cs")});
    if (n < max_level) {
      expected.plain_edges.insert({Vertex::leveled(top, n, "cs'"),
                                   Vertex::leveled(bot, n + 1, "cs'")});
      expected.plain_edges.insert({Vertex::leveled(bot, n + 1, "ce"),
                                   Vertex::leveled(bot, n, "cs")});
    }
  }
  expected.vertices.insert(Vertex::star());
  expected.plain_edges.insert(
      {Vertex::leveled(bot, 0, "ce"), Vertex::star()});
  CHECK(lifted == expected);
}

TEST_CASE("lift_cfg rejects malformed inputs") {
  FlowGraph leveled;
  leveled.add_plain(Vertex::leveled(Vertex::Phase::Bot, 0, "a"),
                    Vertex::leveled(Vertex::Phase::Bot, 0, "b"));
  CHECK_THROWS_AS(lift_cfg(leveled, {}, {}, 1), std::invalid_argument);

  CHECK_THROWS_AS(lift_cfg(tape_graph(), {Vertex::named("nope")},
                           tape_final_atoms(), 1),
                  std::invalid_argument);
}

TEST_CASE("recorded lifted runs walk the lifted graph") {
  auto lifted = lift_cfg(tape_graph(), tape_initial_atoms(),
                         tape_final_atoms(), 1);
  for (auto make : {&ctx_b011, &ctx_b1010}) {
    auto ctx = make();
    auto spec = tape_omega(ctx);
    auto oracle = tape_oracle(ctx);
    auto out = run_omega(spec, oracle, 1000);
    REQUIRE(out.status == RunStatus::Terminated);
    auto steps = project_omega_steps(out.trace, tape_projection());
    CHECK(verify_cfg(lifted, steps).ok());
  }
}

TEST_CASE("projected lifted runs match the recorded paths") {
  for (const auto& [make, name] :
       {std::pair{&ctx_b011, "tape_b011_n2"},
        std::pair{&ctx_b1010, "tape_b1010_n2"}}) {
    auto ctx = make();
    auto spec = tape_omega(ctx);
    auto oracle = tape_oracle(ctx);
    auto out = run_omega(spec, oracle, 1000);
    REQUIRE(out.status == RunStatus::Terminated);
    auto path = projected_omega_path(out.trace, tape_projection());
    CHECK(render_path_text(path) ==
          testing::read_file(std::string(GOLDEN_DIR) + "/" + name +
                             ".path.txt"));
  }
}

TEST_CASE("the level one lifted tape graph matches the recorded graph") {
  auto lifted = lift_cfg(tape_graph(), tape_initial_atoms(),
                         tape_final_atoms(), 1);
  auto recorded = Json::parse(testing::read_file(
      std::string(GOLDEN_DIR) + "/tape_lifted_graph_level1.json"));
  CHECK(graph_to_json(lifted) == recorded);
}

TEST_CASE("the lifted order extends and replaces stages") {
  auto order = lift_order(least_descent_order(), Nat{0});
  using Seq = PaddedSequence<Nat>;
  CHECK(order.strict(Seq{{5}, 0}, Seq{{5, 3}, 0}));
  CHECK(order.strict(Seq{{5, 3, 2}, 0}, Seq{{5, 1}, 0}));
  CHECK(!order.strict(Seq{{5}, 0}, Seq{{5}, 0}));
  CHECK(!order.strict(Seq{{5}, 0}, Seq{{5, 0}, 0}));  // an empty extension
  CHECK(!order.strict(Seq{{5, 1}, 0}, Seq{{5, 3, 2}, 0}));
  CHECK(!order.strict(Seq{{5, 3}, 0}, Seq{{5, 3}, 0}));
  CHECK(!order.strict(Seq{{5}, 0}, Seq{{5, 3, 2}, 0}));  // two stages at once
  CHECK(!order.strict(Seq{{5}, 1}, Seq{{5, 3}, 0}));     // foreign fill
}

TEST_CASE("plain transitions of the tape machine never shrink the question") {
  auto ctx = ctx_b1010();
  auto spec = tape_machine(ctx);
  std::vector<Trace<SymReg, Nat, Nat>> traces;
  for (Nat salt = 0; salt < 6; ++salt) {
    Oracle<Nat, Nat> oracle(
        [salt](const Nat& x) { return x + 1 + salt % 3; });
    auto out = run(spec.osa, oracle, std::vector<Nat>{}, 100);
    REQUIRE(out.status == RunStatus::Terminated);
    traces.push_back(out.trace);
  }
  CHECK(check_descending(spec, tape_descent_order(), traces).ok());
}

TEST_CASE("lifted tape runs descend in the lifted order") {
  auto order = lift_order(tape_descent_order(), Nat{0});
  for (auto make : {&ctx_b011, &ctx_b1010}) {
    auto ctx = make();
    auto spec = tape_omega(ctx);
    auto oracle = tape_oracle(ctx);
    auto out = run_omega(spec, oracle, 1000);
    REQUIRE(out.status == RunStatus::Terminated);
    CHECK(check_descending_omega(spec, order, {out.trace}).ok());
  }
}
